#ifndef OCINDEX_OCI_HPP
#define OCINDEX_OCI_HPP

#include <array>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ocindex/identifier.hpp"

namespace ocindex {

/// Version tag of the character table below. Codes other than the digits,
/// '/' and '-' are local choices and may differ from other OCI minters.
inline constexpr std::string_view kNumeralTableVersion = "ocindex-numerals/1";

/// Bijection between identifier characters and two-digit codes.
class NumeralTable {
public:
    NumeralTable();

    static const NumeralTable& standard();

    std::optional<std::string_view> code_of(char c) const noexcept;
    std::optional<char> char_of(std::string_view code) const noexcept;

    /// Characters that have a code, in code order.
    const std::string& alphabet() const noexcept { return alphabet_; }

private:
    std::array<std::array<char, 2>, 256> codes_{};
    std::array<char, 100> chars_{};
    std::string alphabet_;
};

enum class CodecKind { PairedTable, VerbatimNumeric };

std::string_view codec_kind_name(CodecKind kind) noexcept;
std::optional<CodecKind> codec_kind_from_name(std::string_view name) noexcept;

struct SupplierEntry {
    std::string prefix;
    std::string name;
    CodecKind codec = CodecKind::PairedTable;
    IdScheme scheme = IdScheme::Doi;

    bool operator==(const SupplierEntry&) const = default;
};

/// True when `prefix` is '0' followed by groups of (nonzero-led digits, '0').
bool is_well_formed_prefix(std::string_view prefix) noexcept;

/// Prefix-free set of supplier prefixes. Starts with 020 (Crossref DOIs)
/// and 030 (OCC corpus numbers). Readers may run concurrently; registration
/// takes an exclusive lock.
class SupplierRegistry {
public:
    SupplierRegistry();
    SupplierRegistry(const SupplierRegistry& other);
    SupplierRegistry& operator=(const SupplierRegistry& other);

    SupplierEntry register_supplier(std::string prefix, std::string name, CodecKind codec, IdScheme scheme);

    /// Reads `prefix,name,codec,scheme` lines ('#' comments and blank lines skipped).
    void load_lines(std::string_view text);

    std::optional<SupplierEntry> by_prefix(std::string_view prefix) const;
    std::optional<SupplierEntry> by_name(std::string_view name) const;
    /// First registered supplier whose local ids use `scheme`.
    std::optional<SupplierEntry> for_scheme(IdScheme scheme) const;
    /// The unique registered prefix that starts `sequence`, if any.
    std::optional<SupplierEntry> match(std::string_view sequence) const;

    std::vector<SupplierEntry> entries() const;

private:
    mutable std::shared_mutex mutex_;
    std::vector<SupplierEntry> entries_;
};

/// Numeral sequence for one side of a citation: prefix + encoded local id.
std::string encode_local(const SupplierEntry& supplier, std::string_view local_id);

std::pair<SupplierEntry, std::string> decode_local(const SupplierRegistry& registry, std::string_view sequence);

struct OciSide {
    SupplierEntry supplier;
    std::string local_id;

    Identifier identifier() const { return Identifier{supplier.scheme, local_id}; }
    bool operator==(const OciSide&) const = default;
};

struct Oci {
    OciSide citing;
    OciSide cited;
    std::string text; ///< canonical "oci:<citing>-<cited>"

    /// Text without the "oci:" scheme.
    std::string_view numerals() const noexcept { return std::string_view(text).substr(4); }
    bool operator==(const Oci&) const = default;
};

Oci build_oci(const OciSide& citing, const OciSide& cited);

/// Accepts the text with or without "oci:"; decodes both sides.
Oci parse_oci(const SupplierRegistry& registry, std::string_view text);

} // namespace ocindex

#endif // OCINDEX_OCI_HPP
