#include "ocindex/store.hpp"

#include <limits>
#include <mutex>

#include "ocindex/error.hpp"

namespace ocindex {

namespace {

constexpr int kS = 0;
constexpr int kP = 1;
constexpr int kO = 2;
constexpr int kG = 3;

bool matches(const IdPattern& pattern, const IdQuad& q) {
    for (int i = 0; i < 4; ++i) {
        if (pattern[i] && *pattern[i] != q[i]) {
            return false;
        }
    }
    return true;
}

} // namespace

QuadStore::QuadStore() {
    indexes_[0].order = {kS, kP, kO, kG};
    indexes_[1].order = {kP, kO, kS, kG};
    indexes_[2].order = {kO, kS, kP, kG};
}

TermId QuadStore::intern_locked(const Term& term) {
    auto [it, fresh] = ids_.try_emplace(term, static_cast<TermId>(terms_.size() + 1));
    if (fresh) {
        terms_.push_back(term);
    }
    return it->second;
}

TermId QuadStore::intern(const Term& term) {
    validate(term);
    std::unique_lock lock(mutex_);
    return intern_locked(term);
}

std::optional<TermId> QuadStore::find(const Term& term) const {
    return read().find(term);
}

Term QuadStore::lookup(TermId id) const {
    return read().lookup(id);
}

std::optional<IdQuad> QuadStore::ids_of(const Quad& quad) const {
    IdQuad q{};
    const Term* terms[3] = {&quad.subject, &quad.predicate, &quad.object};
    for (int i = 0; i < 3; ++i) {
        auto it = ids_.find(*terms[i]);
        if (it == ids_.end()) {
            return std::nullopt;
        }
        q[i] = it->second;
    }
    q[kG] = kDefaultGraph;
    if (quad.graph) {
        auto it = ids_.find(*quad.graph);
        if (it == ids_.end()) {
            return std::nullopt;
        }
        q[kG] = it->second;
    }
    return q;
}

bool QuadStore::insert_locked(const IdQuad& q) {
    if (!indexes_[0].keys.insert(indexes_[0].key_of(q)).second) {
        return false;
    }
    indexes_[1].keys.insert(indexes_[1].key_of(q));
    indexes_[2].keys.insert(indexes_[2].key_of(q));
    return true;
}

bool QuadStore::remove_locked(const IdQuad& q) {
    if (indexes_[0].keys.erase(indexes_[0].key_of(q)) == 0) {
        return false;
    }
    indexes_[1].keys.erase(indexes_[1].key_of(q));
    indexes_[2].keys.erase(indexes_[2].key_of(q));
    return true;
}

bool QuadStore::insert(const Quad& quad) {
    validate(quad);
    std::unique_lock lock(mutex_);
    IdQuad q{intern_locked(quad.subject), intern_locked(quad.predicate), intern_locked(quad.object),
             quad.graph ? intern_locked(*quad.graph) : kDefaultGraph};
    return insert_locked(q);
}

bool QuadStore::remove(const Quad& quad) {
    std::unique_lock lock(mutex_);
    const auto q = ids_of(quad);
    return q && remove_locked(*q);
}

std::size_t QuadStore::apply(const std::vector<Quad>& removed, const std::vector<Quad>& added) {
    for (const auto& q : added) {
        validate(q);
    }
    std::unique_lock lock(mutex_);
    std::size_t changed = 0;
    for (const auto& quad : removed) {
        if (const auto q = ids_of(quad); q && remove_locked(*q)) {
            ++changed;
        }
    }
    for (const auto& quad : added) {
        IdQuad q{intern_locked(quad.subject), intern_locked(quad.predicate), intern_locked(quad.object),
                 quad.graph ? intern_locked(*quad.graph) : kDefaultGraph};
        if (insert_locked(q)) {
            ++changed;
        }
    }
    return changed;
}

std::vector<Quad> QuadStore::match(const QuadPattern& pattern) const {
    return read().match(pattern);
}

bool QuadStore::contains(const Quad& quad) const {
    return read().contains(quad);
}

std::size_t QuadStore::size() const {
    return read().size();
}

void QuadStore::clear() {
    std::unique_lock lock(mutex_);
    ids_.clear();
    terms_.clear();
    for (auto& index : indexes_) {
        index.keys.clear();
    }
}

bool QuadStore::indexes_coherent() const {
    std::shared_lock lock(mutex_);
    std::set<IdQuad> reference;
    for (const auto& k : indexes_[0].keys) {
        reference.insert(indexes_[0].quad_of(k));
    }
    for (int i = 1; i < 3; ++i) {
        if (indexes_[i].keys.size() != reference.size()) {
            return false;
        }
        for (const auto& k : indexes_[i].keys) {
            if (reference.count(indexes_[i].quad_of(k)) == 0) {
                return false;
            }
        }
    }
    return true;
}

const QuadStore::Index& QuadStore::choose_index(const IdPattern& pattern, std::size_t& prefix_len) const {
    const Index* best = &indexes_[0];
    prefix_len = 0;
    for (const auto& index : indexes_) {
        std::size_t len = 0;
        while (len < 4 && pattern[index.order[len]]) {
            ++len;
        }
        if (len > prefix_len) {
            prefix_len = len;
            best = &index;
        }
    }
    return *best;
}

void QuadStore::scan(const IdPattern& pattern, const std::function<bool(const IdQuad&)>& fn) const {
    std::size_t prefix_len = 0;
    const Index& index = choose_index(pattern, prefix_len);
    IdQuad low{0, 0, 0, 0};
    IdQuad high{};
    high.fill(std::numeric_limits<TermId>::max());
    for (std::size_t i = 0; i < prefix_len; ++i) {
        low[i] = high[i] = *pattern[index.order[i]];
    }
    for (auto it = index.keys.lower_bound(low); it != index.keys.end() && !(high < *it); ++it) {
        const IdQuad q = index.quad_of(*it);
        if (matches(pattern, q) && !fn(q)) {
            return;
        }
    }
}

// ---------------------------------------------------------------------------

StoreReader::StoreReader(const QuadStore& store) : store_(&store), lock_(store.mutex_) {}

std::optional<TermId> StoreReader::find(const Term& term) const {
    auto it = store_->ids_.find(term);
    if (it == store_->ids_.end()) {
        return std::nullopt;
    }
    return it->second;
}

const Term& StoreReader::lookup(TermId id) const {
    if (id == 0 || id > store_->terms_.size()) {
        throw Error(Errc::NotFound, "no term with id " + std::to_string(id));
    }
    return store_->terms_[id - 1];
}

void StoreReader::for_each(const IdPattern& pattern, const std::function<void(const IdQuad&)>& fn) const {
    store_->scan(pattern, [&](const IdQuad& q) {
        fn(q);
        return true;
    });
}

std::size_t StoreReader::count(const IdPattern& pattern, std::size_t cap) const {
    std::size_t n = 0;
    store_->scan(pattern, [&](const IdQuad&) { return ++n < cap; });
    return n;
}

std::optional<IdPattern> StoreReader::resolve(const QuadPattern& pattern) const {
    IdPattern ids;
    const std::optional<Term>* terms[3] = {&pattern.subject, &pattern.predicate, &pattern.object};
    for (int i = 0; i < 3; ++i) {
        if (*terms[i]) {
            ids[i] = find(**terms[i]);
            if (!ids[i]) {
                return std::nullopt;
            }
        }
    }
    if (pattern.default_graph) {
        ids[kG] = kDefaultGraph;
    } else if (pattern.graph) {
        ids[kG] = find(*pattern.graph);
        if (!ids[kG]) {
            return std::nullopt;
        }
    }
    return ids;
}

Quad StoreReader::to_quad(const IdQuad& ids) const {
    Quad q{lookup(ids[kS]), lookup(ids[kP]), lookup(ids[kO]), std::nullopt};
    if (ids[kG] != kDefaultGraph) {
        q.graph = lookup(ids[kG]);
    }
    return q;
}

std::vector<Quad> StoreReader::match(const QuadPattern& pattern) const {
    std::vector<Quad> out;
    const auto ids = resolve(pattern);
    if (!ids) {
        return out;
    }
    for_each(*ids, [&](const IdQuad& q) { out.push_back(to_quad(q)); });
    return out;
}

bool StoreReader::contains(const Quad& quad) const {
    const auto ids = store_->ids_of(quad);
    return ids && store_->indexes_[0].keys.count(store_->indexes_[0].key_of(*ids)) != 0;
}

std::size_t StoreReader::size() const {
    return store_->indexes_[0].keys.size();
}

} // namespace ocindex
