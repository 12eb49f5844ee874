#ifndef OCINDEX_MAPPING_HPP
#define OCINDEX_MAPPING_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ocindex/model.hpp"
#include "ocindex/store.hpp"
#include "ocindex/term.hpp"

namespace ocindex {

/// Percent-encodes every byte outside the IRI-safe set (and '%').
std::string iri_escape(std::string_view text);
std::string iri_unescape(std::string_view text);

/// IRI of the thing an external identifier names, e.g. https://doi.org/10.1/x
/// for a DOI or the corpus IRI for an OCC number.
std::string identified_iri(const Identifier& id);
std::optional<Identifier> identifier_from_iri(std::string_view iri);

std::string citation_iri(const Oci& oci);
/// Numerals ("<citing>-<cited>") of a citation IRI; nullopt for other IRIs.
std::optional<std::string> oci_numerals_from_iri(std::string_view iri);

/// IRI of the identifier entity that `owner` carries.
std::string identifier_entity_iri(std::string_view owner, const Identifier& id);

Term date_literal(const PartialDate& date);

std::vector<Quad> entity_to_quads(const BibliographicResource& resource);
std::vector<Quad> entity_to_quads(const Agent& agent);
std::vector<Quad> entity_to_quads(const DiscourseElement& element);
/// Includes <citing> cito:cites <cited> alongside the citation's own properties.
std::vector<Quad> entity_to_quads(const Citation& citation);

std::optional<BibliographicResource> load_resource(const StoreReader& reader, std::string_view iri);
std::optional<Agent> load_agent(const StoreReader& reader, std::string_view iri);
std::optional<DiscourseElement> load_discourse_element(const StoreReader& reader, std::string_view iri);
std::optional<Citation> load_citation(const StoreReader& reader, const SupplierRegistry& registry, std::string_view iri);

/// Default-graph quads describing `entity`: its own statements plus those of
/// nodes minted under its IRI (identifiers, roles, references, pointers...).
std::vector<Quad> entity_closure(const StoreReader& reader, std::string_view entity);

/// True when `subject` is `entity` itself or minted under it.
bool owned_by(std::string_view entity, std::string_view subject);

} // namespace ocindex

#endif // OCINDEX_MAPPING_HPP
