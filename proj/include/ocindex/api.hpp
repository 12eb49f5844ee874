#ifndef OCINDEX_API_HPP
#define OCINDEX_API_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ocindex/dataset.hpp"
#include "ocindex/ingestion.hpp"

namespace ocindex {

inline constexpr std::string_view kApiBase = "/index/api/v1";

enum class Format { Json, Csv, Scholix, NTriples };

std::string_view format_name(Format f) noexcept;
std::string_view media_type(Format f) noexcept;
/// "json", "csv", "scholix", "ntriples" (also "nt").
std::optional<Format> format_from_name(std::string_view name) noexcept;

/// `format=` wins, then the first supported type in Accept; nothing usable
/// but wildcards gives Json. Throws NotAcceptable.
Format negotiate_format(std::string_view accept, std::optional<std::string_view> format_param);

enum class FieldType { Str, Int, Doi, Dois, Oci };

struct Placeholder {
    std::string name;
    FieldType type = FieldType::Str;
};

enum class Builtin {
    None,
    Citations,
    References,
    CitationCount,
    ReferenceCount,
    Citation,
    Metadata,
    Search,
    Resolve,
};

struct RouteSpec {
    std::string method = "GET";
    std::string url; ///< relative to kApiBase, e.g. "/citations/{doi}"
    std::vector<Placeholder> fields;
    std::string query; ///< SELECT template with [[name]] placeholders (user routes)
    std::vector<std::string> output;
    Format default_format = Format::Json;
    Builtin builtin = Builtin::None;
    std::size_t line = 0;
};

std::vector<RouteSpec> builtin_routes();

/// Built-in routes followed by the routes of `text`:
///   #url /by-year/{y}
///   #method get
///   #field_type str(y)
///   #call SELECT ?c WHERE { ... FILTER(?d CONTAINS "[[y]]") }
///   #output c
///   #format json
/// A route starts at each #url; lines without '#' continue the previous
/// field; lines starting with "##" are comments.
/// Throws ConfigError(line), ShadowedBuiltin(line).
std::vector<RouteSpec> load_route_config(std::string_view text);

/// One row of the metadata and search operations.
struct MetadataRow {
    std::string doi;
    std::string title;
    std::string author;
    std::string pub_date;
    std::string source_title;
    std::string issn;
    std::size_t citation_count = 0;
    std::string match; ///< search only: which field matched
};

/// Source of metadata for DOIs that are not in the local store.
class MetadataClient {
public:
    virtual ~MetadataClient() = default;
    /// nullopt when the DOI is unknown; may throw on transport failure.
    virtual std::optional<CrossrefWorkRecord> fetch(const std::string& doi) = 0;
};

class FakeMetadataClient : public MetadataClient {
public:
    void add(CrossrefWorkRecord record) { records_[record.doi] = std::move(record); }
    void fail_with(std::string message) { failure_ = std::move(message); }
    std::optional<CrossrefWorkRecord> fetch(const std::string& doi) override;
    std::size_t calls() const noexcept { return calls_; }

private:
    std::map<std::string, CrossrefWorkRecord> records_;
    std::optional<std::string> failure_;
    std::size_t calls_ = 0;
};

/// GETs <base_url>/<doi> and reads a Crossref-style work (optionally wrapped
/// in {"message": ...}).
std::unique_ptr<MetadataClient> make_http_metadata_client(const std::string& base_url, int timeout_seconds = 5);

enum class SearchKind { Auto, Title, Author, Identifier };
std::optional<SearchKind> search_kind_from_name(std::string_view name) noexcept;

struct Request {
    std::string path; ///< decoded, including kApiBase
    std::multimap<std::string, std::string> params;
    std::string accept;
};

struct Response {
    int status = 200;
    std::string content_type;
    std::string body;
    std::map<std::string, std::string> headers;
};

/// Splits "path?query" and percent-decodes both parts.
Request make_request(std::string_view target, std::string accept = {});

/// Read-only operations over a dataset. Each call works on one consistent
/// store snapshot.
class Service {
public:
    explicit Service(const Dataset& dataset, std::vector<RouteSpec> routes = builtin_routes(),
                     MetadataClient* remote = nullptr);

    Response handle(const Request& request) const;
    Response get(std::string_view target, std::string accept = {}) const {
        return handle(make_request(target, std::move(accept)));
    }

    /// Throws BadIdentifier.
    std::vector<Citation> citation_list(Direction direction, std::string_view doi) const;
    std::size_t citation_count(Direction direction, std::string_view doi) const;
    /// Throws MalformedOci, NotFound.
    Citation citation_lookup(std::string_view oci) const;
    std::vector<MetadataRow> metadata(std::string_view dois) const;
    /// Throws EmptyQuery.
    std::vector<MetadataRow> search(std::string_view q, SearchKind kind) const;
    /// Body of the resolver for `format`. Throws MalformedOci, NotFound, NotAcceptable.
    std::string resolve(std::string_view oci, Format format) const;

    const std::vector<RouteSpec>& routes() const noexcept { return routes_; }

private:
    Response dispatch(const RouteSpec& route, const std::map<std::string, std::string>& values,
                      const Request& request, Format format) const;
    Response run_user_route(const RouteSpec& route, const std::map<std::string, std::string>& values,
                            Format format) const;

    const Dataset& dataset_;
    std::vector<RouteSpec> routes_;
    MetadataClient* remote_;
};

std::string render_citations(const std::vector<Citation>& citations, Format format);
std::string render_citation(const Citation& citation, Format format);
std::string scholix_json(const Citation& citation);

struct ServiceSettings {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string data;
    std::string routes;
    std::string remote_url;
};

/// Flat key=value file ('#' comments). Throws ConfigError(line).
ServiceSettings load_settings(std::string_view text, ServiceSettings defaults = {});

/// Blocks serving `service` over HTTP until the process is stopped.
/// Throws IoError when the address cannot be bound.
void serve_http(const Service& service, const std::string& host, int port);

} // namespace ocindex

#endif // OCINDEX_API_HPP
