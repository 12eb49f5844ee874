#ifndef OCINDEX_VOCAB_HPP
#define OCINDEX_VOCAB_HPP

#include <optional>
#include <string>
#include <string_view>

namespace ocindex::vocab {

inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kCito = "http://purl.org/spar/cito/";
inline constexpr std::string_view kFabio = "http://purl.org/spar/fabio/";
inline constexpr std::string_view kBiro = "http://purl.org/spar/biro/";
inline constexpr std::string_view kC4o = "http://purl.org/spar/c4o/";
inline constexpr std::string_view kDeo = "http://purl.org/spar/deo/";
inline constexpr std::string_view kDoco = "http://purl.org/spar/doco/";
inline constexpr std::string_view kPro = "http://purl.org/spar/pro/";
inline constexpr std::string_view kDatacite = "http://purl.org/spar/datacite/";
inline constexpr std::string_view kLiteral = "http://www.essepuntato.it/2010/06/literalreification/";
inline constexpr std::string_view kFrbr = "http://purl.org/vocab/frbr/core#";
inline constexpr std::string_view kPrism = "http://prismstandard.org/namespaces/basic/2.0/";
inline constexpr std::string_view kDcterms = "http://purl.org/dc/terms/";
inline constexpr std::string_view kFoaf = "http://xmlns.com/foaf/0.1/";
inline constexpr std::string_view kOa = "http://www.w3.org/ns/oa#";
inline constexpr std::string_view kProv = "http://www.w3.org/ns/prov#";
inline constexpr std::string_view kOco = "https://w3id.org/oc/ontology/";

/// Base for IRIs minted by this index.
inline constexpr std::string_view kBase = "https://w3id.org/oc/ocindex/";

inline std::string iri(std::string_view ns, std::string_view local) {
    std::string s(ns);
    s.append(local);
    return s;
}

/// Expands "cito:cites" style names for the namespaces above; anything else
/// is returned unchanged.
std::string expand_curie(std::string_view text);

// Frequently used IRIs.
inline const std::string kType = iri(kRdf, "type");
inline const std::string kCites = iri(kCito, "cites");
inline const std::string kCitation = iri(kCito, "Citation");
inline const std::string kHasCitingEntity = iri(kCito, "hasCitingEntity");
inline const std::string kHasCitedEntity = iri(kCito, "hasCitedEntity");
inline const std::string kHasCreationDate = iri(kCito, "hasCitationCreationDate");
inline const std::string kHasTimeSpan = iri(kCito, "hasCitationTimeSpan");
inline const std::string kAuthorSelfCitation = iri(kCito, "AuthorSelfCitation");
inline const std::string kJournalSelfCitation = iri(kCito, "JournalSelfCitation");

inline const std::string kExpression = iri(kFabio, "Expression");
inline const std::string kManifestation = iri(kFabio, "Manifestation");
inline const std::string kBibReference = iri(kBiro, "BibliographicReference");
inline const std::string kReferences = iri(kBiro, "references");
inline const std::string kInTextPointer = iri(kC4o, "InTextReferencePointer");
inline const std::string kHasContent = iri(kC4o, "hasContent");
inline const std::string kDenotes = iri(kC4o, "denotes");
inline const std::string kDiscourseElement = iri(kDeo, "DiscourseElement");
inline const std::string kAnnotation = iri(kOa, "Annotation");
inline const std::string kHasTarget = iri(kOa, "hasTarget");
inline const std::string kHasBody = iri(kOa, "hasBody");
inline const std::string kAgent = iri(kFoaf, "Agent");
inline const std::string kName = iri(kFoaf, "name");
inline const std::string kRoleInTime = iri(kPro, "RoleInTime");
inline const std::string kWithRole = iri(kPro, "withRole");
inline const std::string kIsHeldBy = iri(kPro, "isHeldBy");
inline const std::string kDocumentContextFor = iri(kPro, "isDocumentContextFor");
inline const std::string kIdentifier = iri(kDatacite, "Identifier");
inline const std::string kHasIdentifier = iri(kDatacite, "hasIdentifier");
inline const std::string kUsesScheme = iri(kDatacite, "usesIdentifierScheme");
inline const std::string kHasLiteralValue = iri(kLiteral, "hasLiteralValue");
inline const std::string kTitle = iri(kDcterms, "title");
inline const std::string kDescription = iri(kDcterms, "description");
inline const std::string kFormat = iri(kDcterms, "format");
inline const std::string kPublicationDate = iri(kPrism, "publicationDate");
inline const std::string kPageRange = iri(kPrism, "pageRange");
inline const std::string kPartOf = iri(kFrbr, "partOf");
inline const std::string kPart = iri(kFrbr, "part");
inline const std::string kEmbodiment = iri(kFrbr, "embodiment");
inline const std::string kHasPosition = iri(kOco, "hasPosition");

inline const std::string kGeneratedAtTime = iri(kProv, "generatedAtTime");
inline const std::string kInvalidatedAtTime = iri(kProv, "invalidatedAtTime");
inline const std::string kWasAttributedTo = iri(kProv, "wasAttributedTo");
inline const std::string kHadPrimarySource = iri(kProv, "hadPrimarySource");
inline const std::string kSpecializationOf = iri(kProv, "specializationOf");
inline const std::string kEntity = iri(kProv, "Entity");
inline const std::string kWasDerivedFrom = iri(kProv, "wasDerivedFrom");
inline const std::string kHasUpdateQuery = iri(kOco, "hasUpdateQuery");

inline const std::string kXsdDate = iri(kXsd, "date");
inline const std::string kXsdGYearMonth = iri(kXsd, "gYearMonth");
inline const std::string kXsdGYear = iri(kXsd, "gYear");
inline const std::string kXsdDuration = iri(kXsd, "duration");
inline const std::string kXsdDateTime = iri(kXsd, "dateTime");
inline const std::string kXsdInteger = iri(kXsd, "integer");

} // namespace ocindex::vocab

#endif // OCINDEX_VOCAB_HPP
