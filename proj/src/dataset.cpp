#include "ocindex/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "ocindex/error.hpp"
#include "ocindex/mapping.hpp"
#include "ocindex/ntriples.hpp"
#include "ocindex/vocab.hpp"

namespace ocindex {

namespace {

bool is_prov_quad(const Quad& q) {
    return q.graph && q.subject.is_iri() && q.subject.value.find("/prov/se/") != std::string::npos;
}

std::size_t count_type(const StoreReader& reader, const std::string& type) {
    const auto p = reader.find(Term::iri(vocab::kType));
    const auto o = reader.find(Term::iri(type));
    if (!p || !o) {
        return 0;
    }
    return reader.count({std::nullopt, *p, *o, kDefaultGraph});
}

const std::string& side_predicate(Direction d) {
    return d == Direction::Incoming ? vocab::kHasCitedEntity : vocab::kHasCitingEntity;
}

} // namespace

Dataset::Dataset(SupplierRegistry registry) : registry_(std::move(registry)), provenance_(store_) {}

std::string Dataset::mint(std::string_view kind) {
    std::lock_guard lock(mint_mutex_);
    auto it = counters_.find(kind);
    if (it == counters_.end()) {
        it = counters_.emplace(std::string(kind), 0).first;
    }
    return vocab::iri(vocab::kBase, std::string(kind) + "/" + std::to_string(++it->second));
}

void Dataset::recover_counters(const std::vector<Quad>& quads) {
    std::lock_guard lock(mint_mutex_);
    counters_.clear();
    for (const auto& q : quads) {
        std::string_view s = q.subject.value;
        if (!q.subject.is_iri() || s.substr(0, vocab::kBase.size()) != vocab::kBase) {
            continue;
        }
        s.remove_prefix(vocab::kBase.size());
        const auto slash = s.find('/');
        if (slash == std::string_view::npos) {
            continue;
        }
        const auto kind = s.substr(0, slash);
        if (kind == "ci") {
            continue;
        }
        auto rest = s.substr(slash + 1);
        rest = rest.substr(0, rest.find('/'));
        std::uint64_t n = 0;
        const auto [p, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), n);
        if (ec != std::errc() || p != rest.data() + rest.size()) {
            continue;
        }
        auto& c = counters_[std::string(kind)];
        c = std::max(c, n);
    }
}

void Dataset::load(std::istream& in) {
    std::vector<Quad> data;
    std::vector<Quad> prov;
    read_nquads(in, [&](Quad&& q) {
        if (is_prov_quad(q)) {
            prov.push_back(std::move(q));
        } else {
            data.push_back(std::move(q));
        }
    });
    store_.clear();
    provenance_.clear();
    store_.apply({}, data);
    provenance_.load_quads(prov);
    recover_counters(data);
}

void Dataset::load_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::IoError, "cannot open " + path.string());
    }
    load(in);
}

std::vector<Quad> Dataset::all_quads() const {
    std::vector<Quad> quads;
    {
        auto reader = store_.read();
        quads.reserve(reader.size());
        reader.for_each({}, [&](const IdQuad& q) { quads.push_back(reader.to_quad(q)); });
    }
    auto prov = provenance_.to_quads();
    quads.insert(quads.end(), std::make_move_iterator(prov.begin()), std::make_move_iterator(prov.end()));
    sort_canonical(quads);
    return quads;
}

void Dataset::save(std::ostream& out) const { write_nquads(out, all_quads()); }

void Dataset::save_file(const std::filesystem::path& path) const {
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(Errc::IoError, "cannot write " + tmp);
        }
        save(out);
        if (!out) {
            throw Error(Errc::IoError, "write failed for " + tmp);
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw Error(Errc::IoError, "cannot replace " + path.string() + ": " + ec.message());
    }
}

DatasetStats Dataset::stats() const {
    DatasetStats s;
    {
        auto reader = store_.read();
        s.resources = count_type(reader, vocab::kExpression);
        s.agents = count_type(reader, vocab::kAgent);
        s.citations = count_type(reader, vocab::kCitation);
        s.references = count_type(reader, vocab::kBibReference);
        s.quads = reader.size();
    }
    s.snapshots = provenance_.snapshot_count();
    return s;
}

namespace {

std::optional<std::string> find_typed(const StoreReader& reader, const Identifier& id, const std::string& type) {
    QuadPattern p;
    p.predicate = Term::iri(vocab::kHasLiteralValue);
    p.object = Term::literal(id.value);
    p.default_graph = true;
    const std::string suffix = "/id/" + std::string(scheme_name(id.scheme)) + "/" + iri_escape(id.value);
    std::optional<std::string> best;
    for (const auto& q : reader.match(p)) {
        const auto& s = q.subject.value;
        if (s.size() <= suffix.size() || s.compare(s.size() - suffix.size(), suffix.size(), suffix) != 0) {
            continue;
        }
        std::string owner = s.substr(0, s.size() - suffix.size());
        QuadPattern tp;
        tp.subject = Term::iri(owner);
        tp.predicate = Term::iri(vocab::kType);
        tp.object = Term::iri(type);
        tp.default_graph = true;
        if (!reader.match(tp).empty() && (!best || owner < *best)) {
            best = std::move(owner);
        }
    }
    return best;
}

} // namespace

std::optional<std::string> find_resource(const StoreReader& reader, const Identifier& id) {
    return find_typed(reader, id, vocab::kExpression);
}

std::optional<std::string> find_agent(const StoreReader& reader, const Identifier& id) {
    return find_typed(reader, id, vocab::kAgent);
}

std::vector<Citation> citations_for(const StoreReader& reader, const SupplierRegistry& registry,
                                    const Identifier& id, Direction direction) {
    QuadPattern p;
    p.predicate = Term::iri(side_predicate(direction));
    p.object = Term::iri(identified_iri(id));
    p.default_graph = true;
    std::vector<Citation> out;
    for (const auto& q : reader.match(p)) {
        if (auto c = load_citation(reader, registry, q.subject.value)) {
            out.push_back(std::move(*c));
        }
    }
    std::sort(out.begin(), out.end(), [](const Citation& a, const Citation& b) { return a.oci.text < b.oci.text; });
    return out;
}

std::size_t count_citations(const StoreReader& reader, const Identifier& id, Direction direction) {
    QuadPattern p;
    p.predicate = Term::iri(side_predicate(direction));
    p.object = Term::iri(identified_iri(id));
    p.default_graph = true;
    const auto ids = reader.resolve(p);
    return ids ? reader.count(*ids) : 0;
}

std::vector<Citation> all_citations(const StoreReader& reader, const SupplierRegistry& registry) {
    QuadPattern p;
    p.predicate = Term::iri(vocab::kType);
    p.object = Term::iri(vocab::kCitation);
    p.default_graph = true;
    std::vector<Citation> out;
    for (const auto& q : reader.match(p)) {
        if (auto c = load_citation(reader, registry, q.subject.value)) {
            out.push_back(std::move(*c));
        }
    }
    std::sort(out.begin(), out.end(), [](const Citation& a, const Citation& b) { return a.oci.text < b.oci.text; });
    return out;
}

std::optional<Citation> find_citation(const StoreReader& reader, const SupplierRegistry& registry, const Oci& oci) {
    return load_citation(reader, registry, citation_iri(oci));
}

} // namespace ocindex
