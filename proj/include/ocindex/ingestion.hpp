#ifndef OCINDEX_INGESTION_HPP
#define OCINDEX_INGESTION_HPP

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ocindex/dataset.hpp"
#include "ocindex/model.hpp"
#include "ocindex/provenance.hpp"

namespace ocindex {

struct Issue {
    std::size_t line = 0;
    std::string message;
    bool operator==(const Issue&) const = default;
};

struct CrossrefAuthor {
    std::string family;
    std::string given;
    std::optional<std::string> orcid;
};

struct CrossrefReference {
    std::optional<std::string> doi;
    std::string raw_text;
};

struct CrossrefWorkRecord {
    std::string doi;
    std::string title;
    std::optional<PartialDate> issued;
    std::string container_title;
    std::vector<std::string> issns;
    std::vector<CrossrefAuthor> authors;
    std::vector<CrossrefReference> references;
    std::size_t line = 0; ///< line (JSON lines) or element number (JSON array)
};

struct WorksParse {
    std::vector<CrossrefWorkRecord> records;
    std::vector<Issue> errors;
    std::size_t read = 0;
};

/// JSON lines or one JSON array of Crossref-style work objects. Malformed
/// works are reported and skipped.
WorksParse parse_crossref_dump(std::istream& in);
/// One work object, bare or wrapped in {"message": ...}. Throws ParseError.
CrossrefWorkRecord parse_crossref_work(std::string_view json_text, std::size_t line = 1);

/// One work as a resource without IRIs (identifiers, ISSNs, authors, references).
BibliographicResource to_resource(const CrossrefWorkRecord& record);

struct DerivedBatch {
    std::vector<BibliographicResource> resources; ///< merged by DOI, sorted by DOI
    std::vector<Citation> citations;              ///< deduplicated, sorted by OCI
    std::vector<Issue> errors;
    std::size_t self_citations = 0;
    std::size_t duplicates = 0;
};

/// Metadata of a DOI that is not part of the batch, when known elsewhere.
using ResourceLookup = std::function<std::optional<BibliographicResource>(const Identifier&)>;

DerivedBatch derive_citations(const std::vector<CrossrefWorkRecord>& records, const SupplierRegistry& registry,
                              const ResourceLookup& lookup = {});

inline constexpr std::string_view kCitationCsvHeader = "oci,citing,cited,creation,timespan,journal_sc,author_sc";
inline constexpr std::string_view kCrowdCsvHeader = "citing_id,cited_id";

struct CitationCsvRow {
    std::string oci;
    std::string citing;
    std::string cited;
    std::string creation;
    std::string timespan;
    std::string journal_sc;
    std::string author_sc;
};

struct CsvParse {
    std::vector<Citation> citations;
    std::vector<Issue> errors;
    std::size_t read = 0;
};

/// Validates every row against the registry; the OCI is recomputed from the
/// citing and cited identifiers. Throws HeaderMismatch.
CsvParse parse_citation_csv(std::istream& in, const SupplierRegistry& registry);
/// Row validation on its own. Throws OciMismatch, BadIdentifier, InvalidDate,
/// MalformedDuration, NoEncodableIdentifier, ParseError.
Citation citation_from_row(const CitationCsvRow& row, const SupplierRegistry& registry);

std::vector<std::string> citation_fields(const Citation& c);
std::string citation_csv_line(const Citation& c);

struct IngestOptions {
    std::string source = "unknown";
    std::string agent = "https://w3id.org/oc/ocindex/ra/curator";
    Timestamp at = now_utc();
};

struct IngestReport {
    std::size_t records_read = 0;
    std::size_t resources_created = 0;
    std::size_t resources_merged = 0;
    std::size_t resources_unchanged = 0;
    std::size_t agents_created = 0;
    std::size_t citations_created = 0;
    std::size_t citations_duplicate = 0;
    std::size_t self_citations = 0;
    std::vector<Issue> errors;

    IngestReport& operator+=(const IngestReport& other);
};

std::string report_json(const IngestReport& report);

/// Loads works metadata and the citations derived from it.
IngestReport ingest_batch(Dataset& dataset, const std::vector<CrossrefWorkRecord>& records, const IngestOptions& opts);
/// Loads bare citations; no resource metadata is created.
IngestReport ingest_batch(Dataset& dataset, const std::vector<Citation>& citations, const IngestOptions& opts);

IngestReport ingest_works(Dataset& dataset, std::istream& in, const IngestOptions& opts);
IngestReport ingest_csv(Dataset& dataset, std::istream& in, const IngestOptions& opts);

/// Header, then one row per citation sorted by OCI.
void export_citations_csv(const Dataset& dataset, std::ostream& out);

} // namespace ocindex

#endif // OCINDEX_INGESTION_HPP
