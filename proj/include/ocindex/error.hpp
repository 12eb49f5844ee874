#ifndef OCINDEX_ERROR_HPP
#define OCINDEX_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace ocindex {

enum class Errc {
    // oci_codec
    MalformedPrefix,
    AmbiguousPrefix,
    UnsupportedCharacter,
    BadLocalId,
    UnknownPrefix,
    OddLengthBody,
    UnknownCode,
    LeadingZeroBody,
    MalformedSyntax,
    // citation_model
    InvalidDate,
    MalformedDuration,
    NoEncodableIdentifier,
    NoSharedIdentifier,
    // graph_store
    InvalidTerm,
    NotFound,
    SyntaxError,
    UnboundVariable,
    // provenance
    AlreadyExists,
    NoSuchEntity,
    NonMonotonicTime,
    RemovedQuadAbsent,
    BeforeCreation,
    InvalidDelta,
    // ingestion
    ParseError,
    HeaderMismatch,
    OciMismatch,
    // api_service
    ConfigError,
    ShadowedBuiltin,
    NotAcceptable,
    BadIdentifier,
    MalformedOci,
    EmptyQuery,
    // generic I/O
    IoError,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above.
/// `line`/`column` are 1-based and 0 when not applicable.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message, std::size_t line = 0, std::size_t column = 0);

    Errc code() const noexcept { return code_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    Errc code_;
    std::size_t line_;
    std::size_t column_;
};

} // namespace ocindex

#endif // OCINDEX_ERROR_HPP
