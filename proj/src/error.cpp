#include "ocindex/error.hpp"

namespace ocindex {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
    case Errc::MalformedPrefix: return "malformed_prefix";
    case Errc::AmbiguousPrefix: return "ambiguous_prefix";
    case Errc::UnsupportedCharacter: return "unsupported_character";
    case Errc::BadLocalId: return "bad_local_id";
    case Errc::UnknownPrefix: return "unknown_prefix";
    case Errc::OddLengthBody: return "odd_length_body";
    case Errc::UnknownCode: return "unknown_code";
    case Errc::LeadingZeroBody: return "leading_zero_body";
    case Errc::MalformedSyntax: return "malformed_syntax";
    case Errc::InvalidDate: return "invalid_date";
    case Errc::MalformedDuration: return "malformed_duration";
    case Errc::NoEncodableIdentifier: return "no_encodable_identifier";
    case Errc::NoSharedIdentifier: return "no_shared_identifier";
    case Errc::InvalidTerm: return "invalid_term";
    case Errc::NotFound: return "not_found";
    case Errc::SyntaxError: return "syntax_error";
    case Errc::UnboundVariable: return "unbound_variable";
    case Errc::AlreadyExists: return "already_exists";
    case Errc::NoSuchEntity: return "no_such_entity";
    case Errc::NonMonotonicTime: return "non_monotonic_time";
    case Errc::RemovedQuadAbsent: return "removed_quad_absent";
    case Errc::BeforeCreation: return "before_creation";
    case Errc::InvalidDelta: return "invalid_delta";
    case Errc::ParseError: return "parse_error";
    case Errc::HeaderMismatch: return "header_mismatch";
    case Errc::OciMismatch: return "oci_mismatch";
    case Errc::ConfigError: return "config_error";
    case Errc::ShadowedBuiltin: return "shadowed_builtin";
    case Errc::NotAcceptable: return "not_acceptable";
    case Errc::BadIdentifier: return "bad_identifier";
    case Errc::MalformedOci: return "malformed_oci";
    case Errc::EmptyQuery: return "empty_query";
    case Errc::IoError: return "io_error";
    }
    return "unknown";
}

Error::Error(Errc code, const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(message), code_(code), line_(line), column_(column) {}

} // namespace ocindex
