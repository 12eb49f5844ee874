#include "ocindex/api.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ocindex/csv.hpp"
#include "ocindex/error.hpp"
#include "ocindex/mapping.hpp"
#include "ocindex/ntriples.hpp"
#include "ocindex/query.hpp"
#include "ocindex/vocab.hpp"

namespace ocindex {

namespace {

using ojson = nlohmann::ordered_json;

constexpr std::string_view kProviderName = "ocindex";

const std::vector<std::string> kMetadataColumns = {"doi", "title", "author", "pub_date",
                                                   "source_title", "issn", "citation_count"};

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = text.find(sep, start);
        out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

std::string percent_decode(std::string_view text, bool plus_is_space) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '%' && i + 2 < text.size()) {
            unsigned v = 0;
            const auto [p, ec] = std::from_chars(text.data() + i + 1, text.data() + i + 3, v, 16);
            if (ec == std::errc() && p == text.data() + i + 3) {
                out.push_back(static_cast<char>(v));
                i += 2;
                continue;
            }
        }
        out.push_back(plus_is_space && c == '+' ? ' ' : c);
    }
    return out;
}

ojson citation_object(const Citation& c) {
    static const auto columns = split(kCitationCsvHeader, ',');
    const auto fields = citation_fields(c);
    ojson j = ojson::object();
    for (std::size_t i = 0; i < columns.size(); ++i) {
        j[columns[i]] = fields[i];
    }
    return j;
}

ojson scholix_object(const Citation& c) {
    auto side = [](const OciSide& s) {
        ojson j;
        j["Identifier"] = s.local_id;
        j["IDScheme"] = std::string(scheme_name(s.supplier.scheme));
        j["Type"] = "literature";
        return j;
    };
    ojson j;
    j["LinkIdentifier"] = c.oci.text;
    j["LinkPublicationDate"] = c.creation ? c.creation->to_string() : std::string();
    j["LinkProvider"] = {{"Name", std::string(kProviderName)}};
    j["RelationshipType"] = "References";
    j["Source"] = side(c.oci.citing);
    j["Target"] = side(c.oci.cited);
    return j;
}

std::string citations_ntriples(const std::vector<Citation>& list) {
    std::vector<Quad> quads;
    for (const auto& c : list) {
        auto q = entity_to_quads(c);
        quads.insert(quads.end(), q.begin(), q.end());
    }
    return serialize_ntriples(std::move(quads));
}

std::vector<std::string> row_fields(const MetadataRow& r, bool with_match) {
    std::vector<std::string> f = {r.doi, r.title, r.author, r.pub_date, r.source_title, r.issn,
                                  std::to_string(r.citation_count)};
    if (with_match) {
        f.push_back(r.match);
    }
    return f;
}

std::string render_rows(const std::vector<MetadataRow>& rows, Format format, bool with_match) {
    auto columns = kMetadataColumns;
    if (with_match) {
        columns.push_back("match");
    }
    if (format == Format::Csv) {
        std::string out = csv::join(columns) + "\n";
        for (const auto& r : rows) {
            out += csv::join(row_fields(r, with_match)) + "\n";
        }
        return out;
    }
    ojson arr = ojson::array();
    for (const auto& r : rows) {
        const auto f = row_fields(r, with_match);
        ojson j;
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i] == "citation_count") {
                j[columns[i]] = r.citation_count;
            } else {
                j[columns[i]] = f[i];
            }
        }
        arr.push_back(std::move(j));
    }
    return dump(arr);
}

std::string join_names(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) {
            out += "; ";
        }
        out += p;
    }
    return out;
}

std::string venue_title(const StoreReader& reader, const std::string& venue) {
    QuadPattern p;
    p.subject = Term::iri(venue);
    p.predicate = Term::iri(vocab::kTitle);
    p.default_graph = true;
    const auto m = reader.match(p);
    return m.empty() ? std::string() : m.front().object.value;
}

MetadataRow resource_row(const StoreReader& reader, const BibliographicResource& r) {
    MetadataRow row;
    row.doi = r.doi().value_or("");
    row.title = r.title;
    std::vector<const RoleInTime*> authors;
    for (const auto& role : r.roles) {
        if (role.role == Role::Author) {
            authors.push_back(&role);
        }
    }
    std::stable_sort(authors.begin(), authors.end(),
                     [](const RoleInTime* a, const RoleInTime* b) { return a->order < b->order; });
    std::vector<std::string> names;
    for (const auto* a : authors) {
        std::string n = a->agent.name;
        for (const auto& id : a->agent.identifiers) {
            if (id.scheme == IdScheme::Orcid) {
                n += ", " + id.value;
            }
        }
        names.push_back(std::move(n));
    }
    row.author = join_names(names);
    row.pub_date = r.pub_date ? r.pub_date->to_string() : std::string();
    row.source_title = r.venue_iri ? venue_title(reader, *r.venue_iri) : std::string();
    row.issn = join_names(r.issns);
    if (!row.doi.empty()) {
        row.citation_count = count_citations(reader, {IdScheme::Doi, row.doi}, Direction::Incoming);
    }
    return row;
}

MetadataRow record_row(const CrossrefWorkRecord& rec) {
    MetadataRow row;
    row.doi = rec.doi;
    row.title = rec.title;
    std::vector<std::string> names;
    for (const auto& a : rec.authors) {
        std::string n = a.given.empty() ? a.family : a.family.empty() ? a.given : a.family + ", " + a.given;
        if (a.orcid) {
            n += ", " + *a.orcid;
        }
        names.push_back(std::move(n));
    }
    row.author = join_names(names);
    row.pub_date = rec.issued ? rec.issued->to_string() : std::string();
    row.source_title = rec.container_title;
    auto issns = rec.issns;
    std::sort(issns.begin(), issns.end());
    row.issn = join_names(issns);
    return row;
}

Identifier doi_id(std::string_view text) {
    const auto doi = normalize_doi(text);
    if (!doi) {
        throw Error(Errc::BadIdentifier, "'" + std::string(text) + "' is not a DOI");
    }
    return {IdScheme::Doi, *doi};
}

// ";q=0" (or 0.0, 0.00...) marks a type as unacceptable.
bool zero_quality(std::string_view params) {
    for (const auto& p : split(params, ';')) {
        const auto t = trim(p);
        if (t.size() > 2 && (t[0] == 'q' || t[0] == 'Q') && t[1] == '=') {
            const auto v = t.substr(2);
            return v.find_first_not_of("0.") == std::string::npos;
        }
    }
    return false;
}

bool wildcard_accept(std::string_view accept) {
    for (const auto& part : split(accept, ',')) {
        const auto type = trim(part.substr(0, part.find(';')));
        if (!type.empty() && type != "*/*") {
            return false;
        }
    }
    return true;
}

int status_of(Errc code) {
    switch (code) {
    case Errc::BadIdentifier:
    case Errc::MalformedOci:
    case Errc::EmptyQuery:
    case Errc::SyntaxError:
    case Errc::ParseError:
        return 400;
    case Errc::NotFound: return 404;
    case Errc::NotAcceptable: return 406;
    default: return 500;
    }
}

Response error_response(Errc code, const std::string& message) {
    Response r;
    r.status = status_of(code);
    r.content_type = "application/json";
    ojson j;
    j["error"] = std::string(to_string(code));
    j["message"] = message;
    r.body = dump(j);
    return r;
}

std::string normalized_template(std::string_view url) {
    std::string out;
    bool in = false;
    for (char c : url) {
        if (c == '{') {
            in = true;
            out += "{}";
        } else if (c == '}') {
            in = false;
        } else if (!in) {
            out += c;
        }
    }
    return out;
}

// Matches `path` (relative to the API base) against a URL template. A
// placeholder closing the template takes the rest of the path, slashes
// included, so DOIs need no escaping.
bool match_template(std::string_view tmpl, std::string_view path, std::map<std::string, std::string>& values) {
    values.clear();
    std::size_t ti = 0, pi = 0;
    while (ti < tmpl.size()) {
        if (tmpl[ti] == '{') {
            const auto close = tmpl.find('}', ti);
            const std::string name(tmpl.substr(ti + 1, close - ti - 1));
            ti = close + 1;
            std::size_t end;
            if (ti == tmpl.size()) {
                end = path.size();
            } else {
                end = path.find(tmpl[ti], pi);
                if (end == std::string_view::npos) {
                    return false;
                }
            }
            if (end == pi) {
                return false;
            }
            values[name] = std::string(path.substr(pi, end - pi));
            pi = end;
            continue;
        }
        if (pi >= path.size() || tmpl[ti] != path[pi]) {
            return false;
        }
        ++ti;
        ++pi;
    }
    return pi == path.size();
}

std::vector<std::string> template_names(std::string_view url) {
    std::vector<std::string> out;
    for (std::size_t i = url.find('{'); i != std::string_view::npos; i = url.find('{', i + 1)) {
        const auto close = url.find('}', i);
        if (close == std::string_view::npos) {
            return out;
        }
        out.emplace_back(url.substr(i + 1, close - i - 1));
    }
    return out;
}

std::vector<std::string> query_names(std::string_view q) {
    std::vector<std::string> out;
    for (std::size_t i = q.find("[["); i != std::string_view::npos; i = q.find("[[", i + 2)) {
        const auto close = q.find("]]", i);
        if (close == std::string_view::npos) {
            break;
        }
        out.emplace_back(q.substr(i + 2, close - i - 2));
    }
    return out;
}

std::string substitute(std::string text, const std::map<std::string, std::string>& values) {
    for (const auto& [name, value] : values) {
        const std::string key = "[[" + name + "]]";
        for (auto pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size())) {
            text.replace(pos, key.size(), value);
        }
    }
    return text;
}

std::optional<FieldType> field_type_from_name(std::string_view name) {
    if (name == "str") return FieldType::Str;
    if (name == "int") return FieldType::Int;
    if (name == "doi") return FieldType::Doi;
    if (name == "dois") return FieldType::Dois;
    if (name == "oci") return FieldType::Oci;
    return std::nullopt;
}

std::string placeholder_value(FieldType type, const std::string& raw) {
    switch (type) {
    case FieldType::Int: {
        long long v = 0;
        const auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
        if (raw.empty() || ec != std::errc() || p != raw.data() + raw.size()) {
            throw Error(Errc::BadIdentifier, "'" + raw + "' is not an integer");
        }
        return std::to_string(v);
    }
    case FieldType::Doi: return iri_escape(doi_id(raw).value);
    case FieldType::Dois:
    case FieldType::Oci:
    case FieldType::Str: return escape_literal(raw);
    }
    return raw;
}

} // namespace

std::string_view format_name(Format f) noexcept {
    switch (f) {
    case Format::Json: return "json";
    case Format::Csv: return "csv";
    case Format::Scholix: return "scholix";
    case Format::NTriples: return "ntriples";
    }
    return "json";
}

std::string_view media_type(Format f) noexcept {
    switch (f) {
    case Format::Json: return "application/json";
    case Format::Csv: return "text/csv";
    case Format::Scholix: return "application/scholix+json";
    case Format::NTriples: return "application/n-triples";
    }
    return "application/json";
}

std::optional<Format> format_from_name(std::string_view name) noexcept {
    if (name == "json") return Format::Json;
    if (name == "csv") return Format::Csv;
    if (name == "scholix") return Format::Scholix;
    if (name == "ntriples" || name == "nt") return Format::NTriples;
    return std::nullopt;
}

Format negotiate_format(std::string_view accept, std::optional<std::string_view> format_param) {
    if (format_param) {
        const auto f = format_from_name(to_lower(trim(*format_param)));
        if (!f) {
            throw Error(Errc::NotAcceptable, "unsupported format '" + std::string(*format_param) + "'");
        }
        return *f;
    }
    if (trim(accept).empty()) {
        return Format::Json;
    }
    for (const auto& part : split(accept, ',')) {
        const auto semi = part.find(';');
        const std::string type = to_lower(trim(std::string_view(part).substr(0, semi)));
        if (type.empty()) {
            continue;
        }
        if (semi != std::string::npos && zero_quality(std::string_view(part).substr(semi))) {
            continue;
        }
        if (type == "text/csv" || type == "text/*") return Format::Csv;
        if (type == "application/json" || type == "application/*" || type == "*/*") return Format::Json;
        if (type == "application/scholix+json") return Format::Scholix;
        if (type == "application/n-triples") return Format::NTriples;
    }
    throw Error(Errc::NotAcceptable, "none of the accepted media types is supported: " + std::string(accept));
}

std::optional<SearchKind> search_kind_from_name(std::string_view name) noexcept {
    if (name.empty() || name == "auto") return SearchKind::Auto;
    if (name == "title") return SearchKind::Title;
    if (name == "author") return SearchKind::Author;
    if (name == "identifier" || name == "id") return SearchKind::Identifier;
    return std::nullopt;
}

std::vector<RouteSpec> builtin_routes() {
    auto route = [](std::string url, std::vector<Placeholder> fields, Builtin b) {
        RouteSpec r;
        r.url = std::move(url);
        r.fields = std::move(fields);
        r.builtin = b;
        return r;
    };
    return {
        route("/citations/{doi}", {{"doi", FieldType::Doi}}, Builtin::Citations),
        route("/references/{doi}", {{"doi", FieldType::Doi}}, Builtin::References),
        route("/citation-count/{doi}", {{"doi", FieldType::Doi}}, Builtin::CitationCount),
        route("/reference-count/{doi}", {{"doi", FieldType::Doi}}, Builtin::ReferenceCount),
        route("/citation/{oci}", {{"oci", FieldType::Oci}}, Builtin::Citation),
        route("/metadata/{dois}", {{"dois", FieldType::Dois}}, Builtin::Metadata),
        route("/search", {}, Builtin::Search),
        route("/oci/{oci}", {{"oci", FieldType::Oci}}, Builtin::Resolve),
    };
}

std::vector<RouteSpec> load_route_config(std::string_view text) {
    std::vector<RouteSpec> routes = builtin_routes();
    const std::size_t n_builtin = routes.size();
    struct Draft {
        std::map<std::string, std::string> fields;
        std::map<std::string, std::size_t> lines;
        std::size_t line = 0;
    };
    std::vector<Draft> drafts;
    std::string* current = nullptr;
    std::size_t line_no = 0;
    static const std::set<std::string> kKeys = {"url", "method", "field_type", "call", "output", "format", "description"};
    for (const auto& raw : split(text, '\n')) {
        ++line_no;
        std::string line = raw;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.rfind("##", 0) == 0) {
            continue;
        }
        if (!line.empty() && line[0] == '#') {
            const auto sp = line.find_first_of(" \t");
            const std::string key = line.substr(1, sp == std::string::npos ? std::string::npos : sp - 1);
            const std::string value = sp == std::string::npos ? std::string() : trim(line.substr(sp));
            if (kKeys.count(key) == 0) {
                throw Error(Errc::ConfigError, "line " + std::to_string(line_no) + ": unknown key #" + key, line_no);
            }
            if (key == "url") {
                drafts.push_back({});
                drafts.back().line = line_no;
            } else if (drafts.empty()) {
                throw Error(Errc::ConfigError, "line " + std::to_string(line_no) + ": #" + key + " before any #url",
                            line_no);
            }
            auto& d = drafts.back();
            if (d.fields.count(key) != 0) {
                throw Error(Errc::ConfigError, "line " + std::to_string(line_no) + ": duplicate #" + key, line_no);
            }
            d.fields[key] = value;
            d.lines[key] = line_no;
            current = &d.fields[key];
            continue;
        }
        if (trim(line).empty()) {
            if (current != nullptr) {
                *current += "\n";
            }
            continue;
        }
        if (current == nullptr) {
            throw Error(Errc::ConfigError, "line " + std::to_string(line_no) + ": text outside a route", line_no);
        }
        *current += (current->empty() ? "" : "\n") + line;
    }

    for (auto& d : drafts) {
        auto fail = [&](const std::string& key, const std::string& msg) {
            const std::size_t l = d.lines.count(key) != 0 ? d.lines[key] : d.line;
            return Error(Errc::ConfigError, "line " + std::to_string(l) + ": " + msg, l);
        };
        RouteSpec r;
        r.line = d.line;
        r.url = trim(d.fields["url"]);
        if (r.url.rfind(kApiBase, 0) == 0) {
            r.url.erase(0, kApiBase.size());
        }
        if (r.url.empty() || r.url[0] != '/') {
            throw fail("url", "url must start with '/'");
        }
        const std::string method = to_lower(trim(d.fields.count("method") ? d.fields["method"] : "get"));
        if (method != "get") {
            throw fail("method", "only GET routes are supported");
        }
        r.method = "GET";
        const auto names = template_names(r.url);
        for (const auto& n : names) {
            r.fields.push_back({n, FieldType::Str});
        }
        for (const auto& spec : split(trim(d.fields["field_type"]), ' ')) {
            const auto t = trim(spec);
            if (t.empty()) {
                continue;
            }
            const auto open = t.find('(');
            if (open == std::string::npos || t.back() != ')') {
                throw fail("field_type", "field type must look like str(name)");
            }
            const auto type = field_type_from_name(t.substr(0, open));
            const auto name = t.substr(open + 1, t.size() - open - 2);
            if (!type) {
                throw fail("field_type", "unknown field type '" + t.substr(0, open) + "'");
            }
            auto it = std::find_if(r.fields.begin(), r.fields.end(), [&](const Placeholder& p) { return p.name == name; });
            if (it == r.fields.end()) {
                throw fail("field_type", "field '" + name + "' does not appear in the url");
            }
            it->type = *type;
        }
        r.query = trim(d.fields["call"]);
        if (r.query.empty()) {
            throw fail("url", "route " + r.url + " has no #call");
        }
        for (const auto& n : query_names(r.query)) {
            if (std::find(names.begin(), names.end(), n) == names.end()) {
                throw fail("call", "placeholder [[" + n + "]] does not appear in the url");
            }
        }
        std::map<std::string, std::string> dummy;
        for (const auto& f : r.fields) {
            dummy[f.name] = f.type == FieldType::Int ? "0" : "x";
        }
        Query parsed;
        try {
            parsed = parse_query(substitute(r.query, dummy));
        } catch (const Error& e) {
            throw fail("call", std::string("query does not parse: ") + e.what());
        }
        for (const auto& o : split(trim(d.fields["output"]), ',')) {
            const auto col = trim(o);
            if (col.empty()) {
                continue;
            }
            const auto v = col[0] == '?' ? col.substr(1) : col;
            if (std::find(parsed.projection.begin(), parsed.projection.end(), v) == parsed.projection.end()) {
                throw fail("output", "output column '" + v + "' is not selected by the query");
            }
            r.output.push_back(v);
        }
        if (r.output.empty()) {
            r.output = parsed.projection;
        }
        if (d.fields.count("format") != 0) {
            const auto f = format_from_name(to_lower(trim(d.fields["format"])));
            if (!f || (*f != Format::Json && *f != Format::Csv)) {
                throw fail("format", "route format must be json or csv");
            }
            r.default_format = *f;
        }
        std::map<std::string, std::string> scratch;
        for (std::size_t i = 0; i < routes.size(); ++i) {
            if (match_template(routes[i].url, r.url, scratch) ||
                normalized_template(routes[i].url) == normalized_template(r.url)) {
                if (i < n_builtin) {
                    throw Error(Errc::ShadowedBuiltin,
                                "line " + std::to_string(r.line) + ": route " + r.url + " shadows built-in " + routes[i].url,
                                r.line);
                }
                throw fail("url", "route " + r.url + " duplicates " + routes[i].url);
            }
        }
        routes.push_back(std::move(r));
    }
    return routes;
}

std::optional<CrossrefWorkRecord> FakeMetadataClient::fetch(const std::string& doi) {
    ++calls_;
    if (failure_) {
        throw Error(Errc::IoError, *failure_);
    }
    const auto it = records_.find(doi);
    if (it == records_.end()) {
        return std::nullopt;
    }
    return it->second;
}

Request make_request(std::string_view target, std::string accept) {
    Request r;
    r.accept = std::move(accept);
    const auto q = target.find('?');
    r.path = percent_decode(target.substr(0, q), false);
    if (q != std::string_view::npos) {
        for (const auto& pair : split(target.substr(q + 1), '&')) {
            if (pair.empty()) {
                continue;
            }
            const auto eq = pair.find('=');
            r.params.emplace(percent_decode(pair.substr(0, eq), true),
                             eq == std::string::npos ? std::string() : percent_decode(pair.substr(eq + 1), true));
        }
    }
    return r;
}

Service::Service(const Dataset& dataset, std::vector<RouteSpec> routes, MetadataClient* remote)
    : dataset_(dataset), routes_(std::move(routes)), remote_(remote) {}

std::vector<Citation> Service::citation_list(Direction direction, std::string_view doi) const {
    const auto id = doi_id(doi);
    auto reader = dataset_.store().read();
    return citations_for(reader, dataset_.registry(), id, direction);
}

std::size_t Service::citation_count(Direction direction, std::string_view doi) const {
    const auto id = doi_id(doi);
    auto reader = dataset_.store().read();
    return count_citations(reader, id, direction);
}

Citation Service::citation_lookup(std::string_view text) const {
    Oci oci;
    try {
        oci = parse_oci(dataset_.registry(), trim(text));
    } catch (const Error& e) {
        throw Error(Errc::MalformedOci, "'" + std::string(text) + "' is not a valid OCI: " + e.what());
    }
    auto reader = dataset_.store().read();
    if (auto c = find_citation(reader, dataset_.registry(), oci)) {
        return *c;
    }
    throw Error(Errc::NotFound, oci.text + " is valid but not in this index; it denotes " +
                                    render_identifier(oci.citing.identifier()) + " citing " +
                                    render_identifier(oci.cited.identifier()));
}

std::vector<MetadataRow> Service::metadata(std::string_view dois) const {
    std::vector<Identifier> ids;
    for (const auto& part : split(dois, ',')) {
        if (trim(part).empty()) {
            continue;
        }
        ids.push_back(doi_id(trim(part)));
    }
    if (ids.empty()) {
        throw Error(Errc::BadIdentifier, "no DOI given");
    }
    std::vector<MetadataRow> rows;
    for (const auto& id : ids) {
        {
            auto reader = dataset_.store().read();
            if (const auto iri = find_resource(reader, id)) {
                if (const auto r = load_resource(reader, *iri)) {
                    rows.push_back(resource_row(reader, *r));
                    continue;
                }
            }
        }
        MetadataRow row;
        row.doi = id.value;
        if (remote_ != nullptr) {
            try {
                if (const auto rec = remote_->fetch(id.value)) {
                    row = record_row(*rec);
                    row.doi = id.value;
                }
            } catch (const std::exception&) {
            }
        }
        auto reader = dataset_.store().read();
        row.citation_count = count_citations(reader, id, Direction::Incoming);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<MetadataRow> Service::search(std::string_view q_text, SearchKind kind) const {
    const std::string q = trim(q_text);
    if (q.empty()) {
        throw Error(Errc::EmptyQuery, "search needs a non-empty q");
    }
    auto reader = dataset_.store().read();
    std::map<std::string, std::string> hits; // resource IRI -> match field
    auto hit = [&](const std::string& iri, const char* field) { hits.try_emplace(iri, field); };
    auto resources_of_agent = [&](const std::string& agent, const char* field) {
        QuadPattern held;
        held.predicate = Term::iri(vocab::kIsHeldBy);
        held.object = Term::iri(agent);
        held.default_graph = true;
        for (const auto& role : reader.match(held)) {
            QuadPattern ctx;
            ctx.predicate = Term::iri(vocab::kDocumentContextFor);
            ctx.object = role.subject;
            ctx.default_graph = true;
            for (const auto& r : reader.match(ctx)) {
                hit(r.subject.value, field);
            }
        }
    };
    const auto doi = normalize_doi(q);
    const auto orcid = normalize_orcid(q);
    const bool by_id = kind == SearchKind::Identifier || (kind == SearchKind::Auto && (doi || orcid));
    if (by_id) {
        if (doi) {
            if (const auto iri = find_resource(reader, {IdScheme::Doi, *doi})) {
                hit(*iri, "doi");
            }
        } else if (orcid) {
            QuadPattern p;
            p.predicate = Term::iri(vocab::kHasLiteralValue);
            p.object = Term::literal(*orcid);
            p.default_graph = true;
            const std::string suffix = "/id/orcid/" + iri_escape(*orcid);
            for (const auto& m : reader.match(p)) {
                const auto& s = m.subject.value;
                if (s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
                    resources_of_agent(s.substr(0, s.size() - suffix.size()), "orcid");
                }
            }
        }
    } else {
        const std::string needle = to_lower(q);
        if (kind == SearchKind::Auto || kind == SearchKind::Title) {
            QuadPattern p;
            p.predicate = Term::iri(vocab::kTitle);
            p.default_graph = true;
            for (const auto& m : reader.match(p)) {
                if (to_lower(m.object.value).find(needle) != std::string::npos) {
                    hit(m.subject.value, "title");
                }
            }
        }
        if (kind == SearchKind::Auto || kind == SearchKind::Author) {
            QuadPattern p;
            p.predicate = Term::iri(vocab::kName);
            p.default_graph = true;
            for (const auto& m : reader.match(p)) {
                if (to_lower(m.object.value).find(needle) != std::string::npos) {
                    resources_of_agent(m.subject.value, "author");
                }
            }
        }
    }
    std::vector<MetadataRow> rows;
    for (const auto& [iri, field] : hits) {
        const auto r = load_resource(reader, iri);
        if (!r || !r->doi()) {
            continue;
        }
        MetadataRow row = resource_row(reader, *r);
        row.match = field;
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), [](const MetadataRow& a, const MetadataRow& b) {
        return std::tie(a.match, a.title, a.doi) < std::tie(b.match, b.title, b.doi);
    });
    return rows;
}

std::string render_citations(const std::vector<Citation>& list, Format format) {
    switch (format) {
    case Format::Json: {
        ojson arr = ojson::array();
        for (const auto& c : list) {
            arr.push_back(citation_object(c));
        }
        return dump(arr);
    }
    case Format::Csv: {
        std::string out(kCitationCsvHeader);
        out += '\n';
        for (const auto& c : list) {
            out += citation_csv_line(c) + "\n";
        }
        return out;
    }
    case Format::Scholix: {
        ojson arr = ojson::array();
        for (const auto& c : list) {
            arr.push_back(scholix_object(c));
        }
        return dump(arr);
    }
    case Format::NTriples: return citations_ntriples(list);
    }
    return {};
}

std::string render_citation(const Citation& c, Format format) {
    switch (format) {
    case Format::Json: return dump(citation_object(c));
    case Format::Scholix: return dump(scholix_object(c));
    case Format::Csv:
    case Format::NTriples: return render_citations({c}, format);
    }
    return {};
}

std::string scholix_json(const Citation& c) { return dump(scholix_object(c)); }

std::string Service::resolve(std::string_view oci, Format format) const {
    return render_citation(citation_lookup(oci), format);
}

Response Service::handle(const Request& request) const {
    Response response;
    try {
        std::string_view path = request.path;
        if (path.substr(0, kApiBase.size()) != kApiBase) {
            throw Error(Errc::NotFound, "no route for " + request.path);
        }
        path.remove_prefix(kApiBase.size());
        std::map<std::string, std::string> values;
        const RouteSpec* route = nullptr;
        for (const auto& r : routes_) {
            if (match_template(r.url, path, values)) {
                route = &r;
                break;
            }
        }
        if (route == nullptr) {
            throw Error(Errc::NotFound, "no route for " + request.path);
        }
        std::optional<std::string_view> param;
        if (const auto it = request.params.find("format"); it != request.params.end()) {
            param = it->second;
        }
        Format format = negotiate_format(request.accept, param);
        if (!param && wildcard_accept(request.accept)) {
            format = route->default_format;
        }
        response = dispatch(*route, values, request, format);
    } catch (const Error& e) {
        response = error_response(e.code(), e.what());
    }
    response.headers["X-Oci-Table"] = std::string(kNumeralTableVersion);
    return response;
}

Response Service::dispatch(const RouteSpec& route, const std::map<std::string, std::string>& values,
                           const Request& request, Format format) const {
    auto refuse = [&](const char* what) {
        return Error(Errc::NotAcceptable, std::string(what) + " cannot be rendered as " + std::string(format_name(format)));
    };
    Response r;
    r.content_type = std::string(media_type(format));
    auto value = [&](const char* name) {
        const auto it = values.find(name);
        return it == values.end() ? std::string() : it->second;
    };
    switch (route.builtin) {
    case Builtin::Citations:
    case Builtin::References: {
        const auto dir = route.builtin == Builtin::Citations ? Direction::Incoming : Direction::Outgoing;
        const auto list = citation_list(dir, value("doi"));
        r.body = render_citations(list, format);
        return r;
    }
    case Builtin::CitationCount:
    case Builtin::ReferenceCount: {
        const auto dir = route.builtin == Builtin::CitationCount ? Direction::Incoming : Direction::Outgoing;
        if (format != Format::Json && format != Format::Csv) {
            throw refuse("a count");
        }
        const auto n = citation_count(dir, value("doi"));
        if (format == Format::Csv) {
            r.body = "count\n" + std::to_string(n) + "\n";
        } else {
            ojson j;
            j["count"] = n;
            r.body = dump(j);
        }
        return r;
    }
    case Builtin::Citation:
    case Builtin::Resolve: r.body = resolve(value("oci"), format); return r;
    case Builtin::Metadata:
    case Builtin::Search: {
        if (format == Format::Scholix) {
            throw refuse(route.builtin == Builtin::Metadata ? "metadata" : "search results");
        }
        std::vector<MetadataRow> rows;
        if (route.builtin == Builtin::Metadata) {
            rows = metadata(value("dois"));
        } else {
            const auto q = request.params.find("q");
            const auto k = request.params.find("kind");
            const auto kind = search_kind_from_name(k == request.params.end() ? "" : k->second);
            if (!kind) {
                throw Error(Errc::BadIdentifier, "unknown search kind '" + k->second + "'");
            }
            rows = search(q == request.params.end() ? "" : q->second, *kind);
        }
        if (format == Format::NTriples) {
            auto reader = dataset_.store().read();
            std::vector<Quad> quads;
            for (const auto& row : rows) {
                if (row.doi.empty()) {
                    continue;
                }
                if (const auto iri = find_resource(reader, {IdScheme::Doi, row.doi})) {
                    auto c = entity_closure(reader, *iri);
                    quads.insert(quads.end(), c.begin(), c.end());
                }
            }
            r.body = serialize_ntriples(std::move(quads));
        } else {
            r.body = render_rows(rows, format, route.builtin == Builtin::Search);
        }
        return r;
    }
    case Builtin::None: return run_user_route(route, values, format);
    }
    return r;
}

Response Service::run_user_route(const RouteSpec& route, const std::map<std::string, std::string>& values,
                                 Format format) const {
    if (format != Format::Json && format != Format::Csv) {
        throw Error(Errc::NotAcceptable, "route " + route.url + " renders json or csv only");
    }
    std::map<std::string, std::string> bound;
    for (const auto& f : route.fields) {
        const auto it = values.find(f.name);
        bound[f.name] = placeholder_value(f.type, it == values.end() ? std::string() : it->second);
    }
    const Query query = parse_query(substitute(route.query, bound));
    BindingSet result;
    {
        auto reader = dataset_.store().read();
        result = evaluate(reader, query);
    }
    std::vector<std::size_t> cols;
    for (const auto& o : route.output) {
        cols.push_back(static_cast<std::size_t>(
            std::find(result.variables.begin(), result.variables.end(), o) - result.variables.begin()));
    }
    Response r;
    r.content_type = std::string(media_type(format));
    if (format == Format::Csv) {
        r.body = csv::join(route.output) + "\n";
        for (const auto& row : result.rows) {
            std::vector<std::string> f;
            for (auto c : cols) {
                f.push_back(row[c].value);
            }
            r.body += csv::join(f) + "\n";
        }
        return r;
    }
    ojson arr = ojson::array();
    for (const auto& row : result.rows) {
        ojson j;
        for (std::size_t i = 0; i < cols.size(); ++i) {
            j[route.output[i]] = row[cols[i]].value;
        }
        arr.push_back(std::move(j));
    }
    r.body = dump(arr);
    return r;
}

ServiceSettings load_settings(std::string_view text, ServiceSettings s) {
    std::size_t no = 0;
    for (const auto& raw : split(text, '\n')) {
        ++no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(Errc::ConfigError, "line " + std::to_string(no) + ": expected key=value", no);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "host") {
            s.host = value;
        } else if (key == "port") {
            int p = 0;
            const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), p);
            if (ec != std::errc() || ptr != value.data() + value.size() || p <= 0 || p > 65535) {
                throw Error(Errc::ConfigError, "line " + std::to_string(no) + ": bad port '" + value + "'", no);
            }
            s.port = p;
        } else if (key == "data") {
            s.data = value;
        } else if (key == "routes") {
            s.routes = value;
        } else if (key == "remote_url") {
            s.remote_url = value;
        } else {
            throw Error(Errc::ConfigError, "line " + std::to_string(no) + ": unknown setting '" + key + "'", no);
        }
    }
    return s;
}

} // namespace ocindex
