#include "ocindex/ingestion.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ocindex/csv.hpp"
#include "ocindex/error.hpp"
#include "ocindex/mapping.hpp"
#include "ocindex/vocab.hpp"

namespace ocindex {

namespace {

using nlohmann::json;

// Crossref gives most text fields as one-element arrays.
std::string first_text(const json& j) {
    if (j.is_string()) {
        return j.get<std::string>();
    }
    if (j.is_array()) {
        for (const auto& e : j) {
            if (e.is_string()) {
                return e.get<std::string>();
            }
        }
    }
    return {};
}

std::optional<PartialDate> issued_date(const json& work) {
    const auto it = work.find("issued");
    if (it == work.end() || !it->is_object()) {
        return std::nullopt;
    }
    const auto parts = it->find("date-parts");
    if (parts == it->end() || !parts->is_array() || parts->empty() || !(*parts)[0].is_array()) {
        return std::nullopt;
    }
    const auto& p = (*parts)[0];
    if (p.empty() || p[0].is_null()) {
        return std::nullopt;
    }
    PartialDate d;
    auto num = [](const json& v) -> int {
        if (v.is_number_integer()) {
            return v.get<int>();
        }
        if (v.is_string()) {
            int out = 0;
            const auto s = v.get<std::string>();
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
            if (ec == std::errc() && ptr == s.data() + s.size()) {
                return out;
            }
        }
        throw Error(Errc::InvalidDate, "non-numeric date part");
    };
    d.year = num(p[0]);
    if (p.size() > 1 && !p[1].is_null()) {
        d.month = num(p[1]);
        if (p.size() > 2 && !p[2].is_null()) {
            d.day = num(p[2]);
        }
    }
    validate(d);
    return d;
}

CrossrefWorkRecord parse_work(const json& work, std::size_t line) {
    if (!work.is_object()) {
        throw Error(Errc::ParseError, "work is not a JSON object");
    }
    CrossrefWorkRecord r;
    r.line = line;
    const auto doi = work.find("DOI");
    if (doi == work.end() || !doi->is_string()) {
        throw Error(Errc::ParseError, "work has no DOI");
    }
    const auto norm = normalize_doi(doi->get<std::string>());
    if (!norm) {
        throw Error(Errc::ParseError, "work DOI '" + doi->get<std::string>() + "' is not a DOI");
    }
    r.doi = *norm;
    if (const auto t = work.find("title"); t != work.end()) {
        r.title = trim(first_text(*t));
    }
    try {
        r.issued = issued_date(work);
    } catch (const Error& e) {
        throw Error(Errc::ParseError, std::string("bad issued date: ") + e.what());
    }
    if (const auto c = work.find("container-title"); c != work.end()) {
        r.container_title = trim(first_text(*c));
    }
    if (const auto issn = work.find("ISSN"); issn != work.end() && issn->is_array()) {
        for (const auto& v : *issn) {
            if (v.is_string()) {
                if (auto n = normalize_issn(v.get<std::string>())) {
                    r.issns.push_back(*n);
                }
            }
        }
    }
    if (const auto authors = work.find("author"); authors != work.end() && authors->is_array()) {
        for (const auto& a : *authors) {
            if (!a.is_object()) {
                continue;
            }
            CrossrefAuthor au;
            au.family = trim(a.value("family", a.value("name", std::string())));
            au.given = trim(a.value("given", std::string()));
            if (const auto o = a.find("ORCID"); o != a.end() && o->is_string()) {
                au.orcid = normalize_orcid(o->get<std::string>());
            }
            if (!au.family.empty() || !au.given.empty()) {
                r.authors.push_back(std::move(au));
            }
        }
    }
    if (const auto refs = work.find("reference"); refs != work.end() && refs->is_array()) {
        for (const auto& ref : *refs) {
            if (!ref.is_object()) {
                continue;
            }
            CrossrefReference cr;
            if (const auto d = ref.find("DOI"); d != ref.end() && d->is_string()) {
                cr.doi = normalize_doi(d->get<std::string>());
            }
            cr.raw_text = trim(ref.value("unstructured", std::string()));
            if (cr.raw_text.empty()) {
                cr.raw_text = cr.doi ? *cr.doi : trim(ref.value("key", std::string()));
            }
            if (cr.raw_text.empty()) {
                cr.raw_text = "reference " + std::to_string(r.references.size() + 1);
            }
            r.references.push_back(std::move(cr));
        }
    }
    return r;
}

std::string yes_no(bool v) { return v ? "yes" : "no"; }

bool parse_flag(const std::string& text, const char* column) {
    if (text == "yes") {
        return true;
    }
    if (text == "no" || text.empty()) {
        return false;
    }
    throw Error(Errc::ParseError, std::string(column) + " must be yes or no, got '" + text + "'");
}

// Largest k among "<owner>/<segment>/<k>" IRIs.
std::size_t max_index(const std::vector<std::string>& iris, const std::string& prefix) {
    std::size_t best = 0;
    for (const auto& iri : iris) {
        if (iri.compare(0, prefix.size(), prefix) != 0) {
            continue;
        }
        std::size_t k = 0;
        const char* b = iri.data() + prefix.size();
        const char* e = iri.data() + iri.size();
        const auto [p, ec] = std::from_chars(b, e, k);
        if (ec == std::errc() && p == e) {
            best = std::max(best, k);
        }
    }
    return best;
}

void assign_nested(BibliographicResource& r, Dataset& ds) {
    std::vector<std::string> role_iris, ref_iris, ptr_iris, man_iris;
    for (const auto& role : r.roles) {
        role_iris.push_back(role.iri);
    }
    for (const auto& ref : r.references) {
        ref_iris.push_back(ref.iri);
        for (const auto& p : ref.pointers) {
            ptr_iris.push_back(p.iri);
        }
    }
    for (const auto& m : r.manifestations) {
        man_iris.push_back(m.iri);
    }
    const std::string ar = r.iri + "/ar/", be = r.iri + "/be/", rp = r.iri + "/rp/", re = r.iri + "/re/";
    std::size_t n_ar = max_index(role_iris, ar), n_be = max_index(ref_iris, be);
    std::size_t n_rp = max_index(ptr_iris, rp), n_re = max_index(man_iris, re);
    // agents carrying an ORCID are shared across bylines
    std::map<Identifier, Agent> known;
    for (auto& role : r.roles) {
        if (role.iri.empty()) {
            role.iri = ar + std::to_string(++n_ar);
        }
        if (!role.agent.iri.empty()) {
            continue;
        }
        const auto orcid = std::find_if(role.agent.identifiers.begin(), role.agent.identifiers.end(),
                                        [](const Identifier& id) { return id.scheme == IdScheme::Orcid; });
        if (orcid == role.agent.identifiers.end()) {
            role.agent.iri = ds.mint("ra");
            continue;
        }
        if (const auto it = known.find(*orcid); it != known.end()) {
            role.agent = it->second;
            continue;
        }
        std::optional<Agent> stored;
        {
            auto reader = ds.store().read();
            if (const auto iri = find_agent(reader, *orcid)) {
                stored = load_agent(reader, *iri);
            }
        }
        const Identifier key = *orcid;
        if (stored) {
            role.agent = std::move(*stored);
        } else {
            role.agent.iri = ds.mint("ra");
        }
        known.emplace(key, role.agent);
    }
    for (auto& ref : r.references) {
        if (ref.iri.empty()) {
            ref.iri = be + std::to_string(++n_be);
        }
        for (auto& p : ref.pointers) {
            if (p.iri.empty()) {
                p.iri = rp + std::to_string(++n_rp);
            }
            if (p.annotation && p.annotation->iri.empty()) {
                p.annotation->iri = p.iri + "/an";
            }
        }
    }
    for (auto& m : r.manifestations) {
        if (m.iri.empty()) {
            m.iri = re + std::to_string(++n_re);
        }
    }
    canonicalize(r);
}

struct VenueInfo {
    std::string title;
    std::vector<std::string> issns;
};

class BatchLoader {
public:
    BatchLoader(Dataset& ds, const IngestOptions& opts, IngestReport& report)
        : ds_(ds), opts_(opts), report_(report) {}

    std::optional<std::string> venue(const VenueInfo& v) {
        if (v.title.empty() && v.issns.empty()) {
            return std::nullopt;
        }
        const std::string key = v.issns.empty() ? "t:" + to_lower(v.title) : "i:" + v.issns.front();
        if (const auto it = venues_.find(key); it != venues_.end()) {
            return it->second;
        }
        std::optional<std::string> found;
        {
            auto reader = ds_.store().read();
            for (const auto& issn : v.issns) {
                found = find_resource(reader, {IdScheme::Issn, issn});
                if (found) {
                    break;
                }
            }
            if (!found && v.issns.empty()) {
                QuadPattern p;
                p.predicate = Term::iri(vocab::kTitle);
                p.object = Term::literal(v.title);
                p.default_graph = true;
                for (const auto& q : reader.match(p)) {
                    QuadPattern part;
                    part.predicate = Term::iri(vocab::kPartOf);
                    part.object = q.subject;
                    part.default_graph = true;
                    if (!reader.match(part).empty() && (!found || q.subject.value < *found)) {
                        found = q.subject.value;
                    }
                }
            }
        }
        if (!found) {
            BibliographicResource venue;
            venue.iri = ds_.mint("br");
            venue.title = v.title;
            for (const auto& issn : v.issns) {
                venue.identifiers.push_back({IdScheme::Issn, issn});
            }
            canonicalize(venue);
            ds_.provenance().record_creation(venue.iri, entity_to_quads(venue), opts_.agent, opts_.source, opts_.at);
            ++report_.resources_created;
            found = venue.iri;
        }
        venues_[key] = *found;
        return found;
    }

    void upsert(BibliographicResource res) {
        const auto doi = res.doi();
        std::optional<BibliographicResource> existing;
        {
            auto reader = ds_.store().read();
            if (doi) {
                if (const auto iri = find_resource(reader, {IdScheme::Doi, *doi})) {
                    existing = load_resource(reader, *iri);
                }
            }
        }
        if (!existing) {
            res.iri = ds_.mint("br");
            assign_nested(res, ds_);
            validate(res);
            create(res);
            return;
        }
        res.iri.clear();
        BibliographicResource merged = merge_resources(*existing, res);
        assign_nested(merged, ds_);
        validate(merged);
        update(*existing, merged);
    }

    void citations(const std::vector<Citation>& list) {
        for (const auto& c : list) {
            if (c.citing_id == c.cited_id) {
                ++report_.self_citations;
                report_.errors.push_back({0, "self-citation " + c.oci.text + " suppressed"});
                continue;
            }
            const std::string iri = citation_iri(c.oci);
            if (ds_.provenance().contains(iri) ||
                ds_.store().contains({Term::iri(iri), Term::iri(vocab::kType), Term::iri(vocab::kCitation), std::nullopt})) {
                ++report_.citations_duplicate;
                continue;
            }
            ds_.provenance().record_creation(iri, entity_to_quads(c), opts_.agent, opts_.source, opts_.at);
            ++report_.citations_created;
        }
    }

private:
    // Agent IRI owning `subject`, or empty for the resource itself.
    static std::string owner_of(const std::set<std::string>& agents, const std::string& subject) {
        for (const auto& a : agents) {
            if (owned_by(a, subject)) {
                return a;
            }
        }
        return {};
    }

    void create(const BibliographicResource& res) {
        std::set<std::string> agents;
        for (const auto& role : res.roles) {
            agents.insert(role.agent.iri);
        }
        std::map<std::string, std::vector<Quad>> parts;
        for (auto& q : entity_to_quads(res)) {
            parts[owner_of(agents, q.subject.value)].push_back(std::move(q));
        }
        for (const auto& a : agents) {
            if (!ds_.provenance().contains(a)) {
                ds_.provenance().record_creation(a, parts[a], opts_.agent, opts_.source, opts_.at);
                ++report_.agents_created;
            }
        }
        ds_.provenance().record_creation(res.iri, parts[""], opts_.agent, opts_.source, opts_.at);
        ++report_.resources_created;
    }

    void update(const BibliographicResource& before, const BibliographicResource& after) {
        const auto old_q = entity_to_quads(before);
        const auto new_q = entity_to_quads(after);
        const std::set<Quad> olds(old_q.begin(), old_q.end());
        const std::set<Quad> news(new_q.begin(), new_q.end());
        std::set<std::string> agents;
        for (const auto* r : {&before, &after}) {
            for (const auto& role : r->roles) {
                agents.insert(role.agent.iri);
            }
        }
        std::map<std::string, Delta> deltas;
        for (const auto& q : news) {
            if (olds.count(q) == 0) {
                deltas[owner_of(agents, q.subject.value)].added.push_back(q);
            }
        }
        for (const auto& q : olds) {
            if (news.count(q) == 0) {
                deltas[owner_of(agents, q.subject.value)].removed.push_back(q);
            }
        }
        if (deltas.empty()) {
            ++report_.resources_unchanged;
            return;
        }
        for (auto& [owner, delta] : deltas) {
            if (owner.empty()) {
                continue;
            }
            if (ds_.provenance().contains(owner)) {
                ds_.provenance().record_update(owner, delta, opts_.agent, opts_.source, opts_.at);
            } else {
                ds_.provenance().record_creation(owner, delta.added, opts_.agent, opts_.source, opts_.at);
                ++report_.agents_created;
            }
        }
        if (const auto it = deltas.find(""); it != deltas.end()) {
            ds_.provenance().record_update(after.iri, it->second, opts_.agent, opts_.source, opts_.at);
        }
        ++report_.resources_merged;
    }

    Dataset& ds_;
    const IngestOptions& opts_;
    IngestReport& report_;
    std::map<std::string, std::string> venues_;
};

} // namespace

WorksParse parse_crossref_dump(std::istream& in) {
    WorksParse out;
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto first = text.find_first_not_of(" \t\r\n\xEF\xBB\xBF");
    if (first == std::string::npos) {
        return out;
    }
    auto take = [&](const json& work, std::size_t line) {
        ++out.read;
        try {
            out.records.push_back(parse_work(work, line));
        } catch (const Error& e) {
            out.errors.push_back({line, e.what()});
        }
    };
    if (text[first] == '[') {
        json arr;
        try {
            arr = json::parse(text.begin() + static_cast<std::ptrdiff_t>(first), text.end());
        } catch (const json::parse_error& e) {
            out.errors.push_back({1, std::string("malformed JSON array: ") + e.what()});
            return out;
        }
        for (std::size_t i = 0; i < arr.size(); ++i) {
            take(arr[i], i + 1);
        }
        return out;
    }
    std::istringstream lines(text);
    std::string line;
    std::size_t no = 0;
    while (std::getline(lines, line)) {
        ++no;
        if (trim(line).empty()) {
            continue;
        }
        json work;
        try {
            work = json::parse(line);
        } catch (const json::parse_error& e) {
            ++out.read;
            out.errors.push_back({no, std::string("malformed JSON: ") + e.what()});
            continue;
        }
        take(work, no);
    }
    return out;
}

CrossrefWorkRecord parse_crossref_work(std::string_view json_text, std::size_t line) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::ParseError, std::string("malformed JSON: ") + e.what(), line);
    }
    if (j.is_object() && j.contains("message") && j["message"].is_object()) {
        j = j["message"];
    }
    return parse_work(j, line);
}

BibliographicResource to_resource(const CrossrefWorkRecord& record) {
    BibliographicResource r;
    r.identifiers.push_back({IdScheme::Doi, record.doi});
    r.title = record.title;
    r.pub_date = record.issued;
    r.issns = record.issns;
    int order = 0;
    for (const auto& a : record.authors) {
        RoleInTime role;
        role.role = Role::Author;
        role.order = ++order;
        role.agent.name = a.given.empty() ? a.family : a.family.empty() ? a.given : a.family + ", " + a.given;
        if (a.orcid) {
            role.agent.identifiers.push_back({IdScheme::Orcid, *a.orcid});
        }
        r.roles.push_back(std::move(role));
    }
    std::set<std::pair<std::string, std::optional<std::string>>> seen;
    for (const auto& ref : record.references) {
        BibliographicReference br;
        br.raw_text = ref.raw_text;
        if (ref.doi) {
            br.resolved_target = identified_iri({IdScheme::Doi, *ref.doi});
        }
        if (seen.insert({br.raw_text, br.resolved_target}).second) {
            r.references.push_back(std::move(br));
        }
    }
    canonicalize(r);
    return r;
}

DerivedBatch derive_citations(const std::vector<CrossrefWorkRecord>& records, const SupplierRegistry& registry,
                              const ResourceLookup& lookup) {
    DerivedBatch out;
    std::map<std::string, BibliographicResource> by_doi;
    for (const auto& rec : records) {
        auto r = to_resource(rec);
        auto [it, fresh] = by_doi.try_emplace(rec.doi, r);
        if (!fresh) {
            it->second = merge_resources(it->second, r);
        }
    }
    std::map<std::string, std::optional<BibliographicResource>> external;
    auto cited_resource = [&](const std::string& doi) -> const BibliographicResource* {
        if (const auto it = by_doi.find(doi); it != by_doi.end()) {
            return &it->second;
        }
        auto [it, fresh] = external.try_emplace(doi);
        if (fresh && lookup) {
            it->second = lookup({IdScheme::Doi, doi});
        }
        return it->second ? &*it->second : nullptr;
    };
    const auto doi_supplier = registry.for_scheme(IdScheme::Doi);
    std::set<std::string> seen;
    for (const auto& rec : records) {
        const auto& citing = by_doi.at(rec.doi);
        for (const auto& ref : rec.references) {
            if (!ref.doi) {
                continue;
            }
            if (*ref.doi == rec.doi) {
                ++out.self_citations;
                out.errors.push_back({rec.line, "self-citation of " + rec.doi + " suppressed"});
                continue;
            }
            try {
                Citation c;
                if (const auto* cited = cited_resource(*ref.doi)) {
                    c = make_citation(citing, *cited, registry);
                } else {
                    const auto citing_side = encodable_side(registry, citing.identifiers);
                    if (!citing_side || !doi_supplier) {
                        throw Error(Errc::NoEncodableIdentifier, "no supplier encodes DOIs");
                    }
                    c = make_index_citation(*citing_side, OciSide{*doi_supplier, *ref.doi}, citing.pub_date,
                                            std::nullopt);
                }
                if (seen.insert(c.oci.text).second) {
                    out.citations.push_back(std::move(c));
                } else {
                    ++out.duplicates;
                }
            } catch (const Error& e) {
                out.errors.push_back({rec.line, "reference " + *ref.doi + ": " + e.what()});
            }
        }
    }
    std::sort(out.citations.begin(), out.citations.end(),
              [](const Citation& a, const Citation& b) { return a.oci.text < b.oci.text; });
    for (auto& [_, r] : by_doi) {
        out.resources.push_back(std::move(r));
    }
    return out;
}

Citation citation_from_row(const CitationCsvRow& row, const SupplierRegistry& registry) {
    const auto citing = parse_identifier(trim(row.citing));
    if (!citing) {
        throw Error(Errc::BadIdentifier, "citing '" + row.citing + "' is not a recognised identifier");
    }
    const auto cited = parse_identifier(trim(row.cited));
    if (!cited) {
        throw Error(Errc::BadIdentifier, "cited '" + row.cited + "' is not a recognised identifier");
    }
    const auto citing_sup = registry.for_scheme(citing->scheme);
    const auto cited_sup = registry.for_scheme(cited->scheme);
    if (!citing_sup || !cited_sup) {
        throw Error(Errc::NoEncodableIdentifier, "no supplier registered for the identifier scheme");
    }
    Citation c;
    c.oci = build_oci({*citing_sup, citing->value}, {*cited_sup, cited->value});
    c.citing_id = *citing;
    c.cited_id = *cited;
    const std::string given = trim(row.oci);
    if (!given.empty()) {
        const std::string full = given.rfind("oci:", 0) == 0 ? given : "oci:" + given;
        if (full != c.oci.text) {
            throw Error(Errc::OciMismatch, "oci " + given + " does not match citing/cited (expected " + c.oci.text + ")");
        }
    }
    if (!trim(row.creation).empty()) {
        c.creation = PartialDate::parse(trim(row.creation));
    }
    if (!trim(row.timespan).empty()) {
        c.timespan = parse_duration(trim(row.timespan));
    }
    c.journal_sc = parse_flag(trim(row.journal_sc), "journal_sc");
    c.author_sc = parse_flag(trim(row.author_sc), "author_sc");
    return c;
}

CsvParse parse_citation_csv(std::istream& in, const SupplierRegistry& registry) {
    CsvParse out;
    std::vector<std::string> fields;
    std::size_t line = 0;
    if (!csv::read_record(in, fields, line)) {
        throw Error(Errc::HeaderMismatch, "empty input: expected header '" + std::string(kCitationCsvHeader) + "'", 1);
    }
    if (!fields.empty() && fields[0].rfind("\xEF\xBB\xBF", 0) == 0) {
        fields[0].erase(0, 3);
    }
    const std::string header = csv::join(fields);
    const bool crowd = header == kCrowdCsvHeader;
    if (!crowd && header != kCitationCsvHeader) {
        throw Error(Errc::HeaderMismatch,
                    "header '" + header + "' is neither '" + std::string(kCitationCsvHeader) + "' nor '" +
                        std::string(kCrowdCsvHeader) + "'",
                    1);
    }
    const std::size_t width = crowd ? 2 : 7;
    for (;;) {
        const std::size_t start = line + 1;
        try {
            if (!csv::read_record(in, fields, line)) {
                break;
            }
        } catch (const Error& e) {
            out.errors.push_back({start, e.what()});
            ++out.read;
            break;
        }
        if (fields.size() == 1 && trim(fields[0]).empty()) {
            continue;
        }
        ++out.read;
        if (fields.size() != width) {
            out.errors.push_back({start, "expected " + std::to_string(width) + " fields, got " +
                                             std::to_string(fields.size())});
            continue;
        }
        CitationCsvRow row;
        if (crowd) {
            row.citing = fields[0];
            row.cited = fields[1];
        } else {
            row = {fields[0], fields[1], fields[2], fields[3], fields[4], fields[5], fields[6]};
        }
        try {
            out.citations.push_back(citation_from_row(row, registry));
        } catch (const Error& e) {
            out.errors.push_back({start, std::string(to_string(e.code())) + ": " + e.what()});
        }
    }
    return out;
}

std::vector<std::string> citation_fields(const Citation& c) {
    return {
        c.oci.text,
        render_identifier(c.citing_id),
        render_identifier(c.cited_id),
        c.creation ? c.creation->to_string() : std::string(),
        c.timespan ? format_duration(*c.timespan) : std::string(),
        yes_no(c.journal_sc),
        yes_no(c.author_sc),
    };
}

std::string citation_csv_line(const Citation& c) { return csv::join(citation_fields(c)); }

IngestReport& IngestReport::operator+=(const IngestReport& o) {
    records_read += o.records_read;
    resources_created += o.resources_created;
    resources_merged += o.resources_merged;
    resources_unchanged += o.resources_unchanged;
    agents_created += o.agents_created;
    citations_created += o.citations_created;
    citations_duplicate += o.citations_duplicate;
    self_citations += o.self_citations;
    errors.insert(errors.end(), o.errors.begin(), o.errors.end());
    return *this;
}

std::string report_json(const IngestReport& r) {
    nlohmann::ordered_json j;
    j["records_read"] = r.records_read;
    j["resources_created"] = r.resources_created;
    j["resources_merged"] = r.resources_merged;
    j["resources_unchanged"] = r.resources_unchanged;
    j["agents_created"] = r.agents_created;
    j["citations_created"] = r.citations_created;
    j["citations_duplicate"] = r.citations_duplicate;
    j["self_citations"] = r.self_citations;
    j["errors"] = nlohmann::ordered_json::array();
    for (const auto& e : r.errors) {
        j["errors"].push_back({{"line", e.line}, {"message", e.message}});
    }
    return j.dump(2);
}

IngestReport ingest_batch(Dataset& dataset, const std::vector<CrossrefWorkRecord>& records, const IngestOptions& opts) {
    IngestReport report;
    report.records_read = records.size();
    ResourceLookup lookup = [&](const Identifier& id) -> std::optional<BibliographicResource> {
        auto reader = dataset.store().read();
        if (const auto iri = find_resource(reader, id)) {
            return load_resource(reader, *iri);
        }
        return std::nullopt;
    };
    DerivedBatch derived = derive_citations(records, dataset.registry(), lookup);
    report.errors = derived.errors;
    report.self_citations = derived.self_citations;
    report.citations_duplicate = derived.duplicates;

    std::map<std::string, VenueInfo> venues;
    std::map<std::string, std::size_t> lines;
    for (const auto& rec : records) {
        auto& v = venues[rec.doi];
        if (v.title.empty()) {
            v.title = rec.container_title;
        }
        if (v.issns.empty()) {
            v.issns = rec.issns;
        }
        lines.try_emplace(rec.doi, rec.line);
    }
    BatchLoader loader(dataset, opts, report);
    for (auto& res : derived.resources) {
        const std::string doi = res.doi().value_or("");
        try {
            res.venue_iri = loader.venue(venues[doi]);
            loader.upsert(std::move(res));
        } catch (const Error& e) {
            report.errors.push_back({lines[doi], doi + ": " + e.what()});
        }
    }
    loader.citations(derived.citations);
    return report;
}

IngestReport ingest_batch(Dataset& dataset, const std::vector<Citation>& citations, const IngestOptions& opts) {
    IngestReport report;
    report.records_read = citations.size();
    BatchLoader loader(dataset, opts, report);
    loader.citations(citations);
    return report;
}

IngestReport ingest_works(Dataset& dataset, std::istream& in, const IngestOptions& opts) {
    WorksParse parsed = parse_crossref_dump(in);
    IngestReport report = ingest_batch(dataset, parsed.records, opts);
    report.records_read = parsed.read;
    report.errors.insert(report.errors.begin(), parsed.errors.begin(), parsed.errors.end());
    std::stable_sort(report.errors.begin(), report.errors.end(),
                     [](const Issue& a, const Issue& b) { return a.line < b.line; });
    return report;
}

IngestReport ingest_csv(Dataset& dataset, std::istream& in, const IngestOptions& opts) {
    CsvParse parsed = parse_citation_csv(in, dataset.registry());
    IngestReport report = ingest_batch(dataset, parsed.citations, opts);
    report.records_read = parsed.read;
    report.errors.insert(report.errors.begin(), parsed.errors.begin(), parsed.errors.end());
    return report;
}

void export_citations_csv(const Dataset& dataset, std::ostream& out) {
    out << kCitationCsvHeader << '\n';
    std::vector<Citation> all;
    {
        auto reader = dataset.store().read();
        all = all_citations(reader, dataset.registry());
    }
    for (const auto& c : all) {
        out << citation_csv_line(c) << '\n';
    }
}

} // namespace ocindex
