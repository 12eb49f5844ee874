#ifndef OCINDEX_IDENTIFIER_HPP
#define OCINDEX_IDENTIFIER_HPP

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace ocindex {

enum class IdScheme { Doi, Occ, Orcid, Issn, Pmid, Oci, Other };

std::string_view scheme_name(IdScheme scheme) noexcept;
std::optional<IdScheme> scheme_from_name(std::string_view name) noexcept;

/// External identifier of an entity. Values are stored normalized
/// (DOIs lowercased without any "doi:" or resolver head).
struct Identifier {
    IdScheme scheme = IdScheme::Other;
    std::string value;

    auto operator<=>(const Identifier&) const = default;
};

/// Strips "doi:", "https://doi.org/" and similar heads, trims and lowercases.
/// Returns nullopt unless the result looks like "10.<registrant>/<suffix>".
std::optional<std::string> normalize_doi(std::string_view text);

/// Accepts bare or orcid.org-prefixed ORCIDs; checks the 16-digit shape.
std::optional<std::string> normalize_orcid(std::string_view text);

std::optional<std::string> normalize_issn(std::string_view text);

/// Normalizes `value` according to `scheme`; nullopt if it does not fit.
std::optional<Identifier> make_identifier(IdScheme scheme, std::string_view value);

/// "doi:10.1/x" style rendering used in CSV cells for non-DOI schemes;
/// DOIs render bare.
std::string render_identifier(const Identifier& id);

/// Inverse of render_identifier. Bare text is tried as a DOI.
std::optional<Identifier> parse_identifier(std::string_view text);

std::string to_lower(std::string_view text);
std::string trim(std::string_view text);

} // namespace ocindex

#endif // OCINDEX_IDENTIFIER_HPP
