#ifndef OCINDEX_STORE_HPP
#define OCINDEX_STORE_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "ocindex/term.hpp"

namespace ocindex {

/// Dataset-local handle of an interned term. 0 is reserved for the default graph.
using TermId = std::uint64_t;
inline constexpr TermId kDefaultGraph = 0;

/// Term-level pattern; unset positions are wildcards. With `default_graph`
/// set, only default-graph quads match and `graph` must be empty.
struct QuadPattern {
    std::optional<Term> subject;
    std::optional<Term> predicate;
    std::optional<Term> object;
    std::optional<Term> graph;
    bool default_graph = false;
};

/// Positions s, p, o, g; nullopt = unbound. A bound graph of kDefaultGraph
/// selects the default graph.
using IdPattern = std::array<std::optional<TermId>, 4>;
using IdQuad = std::array<TermId, 4>;

class QuadStore;

/// Consistent read view; holds the store's shared lock while alive.
class StoreReader {
public:
    StoreReader(const StoreReader&) = delete;
    StoreReader& operator=(const StoreReader&) = delete;
    StoreReader(StoreReader&&) noexcept = default;

    std::optional<TermId> find(const Term& term) const;
    /// Throws NotFound for ids that were never assigned.
    const Term& lookup(TermId id) const;

    void for_each(const IdPattern& pattern, const std::function<void(const IdQuad&)>& fn) const;
    /// Number of matches, counting no further than `cap`.
    std::size_t count(const IdPattern& pattern, std::size_t cap = SIZE_MAX) const;

    std::vector<Quad> match(const QuadPattern& pattern) const;
    bool contains(const Quad& quad) const;
    Quad to_quad(const IdQuad& ids) const;
    std::size_t size() const;

    /// Id pattern for `pattern`; nullopt when a bound term was never interned.
    std::optional<IdPattern> resolve(const QuadPattern& pattern) const;

private:
    friend class QuadStore;
    StoreReader(const QuadStore& store);

    const QuadStore* store_;
    std::shared_lock<std::shared_mutex> lock_;
};

/// Dictionary-encoded quad store with SPOG, POSG and OSPG orderings.
/// Many readers, one writer; every write is applied to all three orderings
/// under the exclusive lock, so readers never see a partial insert.
class QuadStore {
public:
    QuadStore();
    QuadStore(const QuadStore&) = delete;
    QuadStore& operator=(const QuadStore&) = delete;

    TermId intern(const Term& term);
    std::optional<TermId> find(const Term& term) const;
    Term lookup(TermId id) const;

    bool insert(const Quad& quad);
    bool remove(const Quad& quad);
    /// Removes then adds as one atomic step. Returns the number of quads that changed.
    std::size_t apply(const std::vector<Quad>& removed, const std::vector<Quad>& added);

    std::vector<Quad> match(const QuadPattern& pattern) const;
    bool contains(const Quad& quad) const;
    std::size_t size() const;
    void clear();

    StoreReader read() const { return StoreReader(*this); }

    /// True when the three orderings hold the same quad set.
    bool indexes_coherent() const;

private:
    friend class StoreReader;

    struct Index {
        std::array<int, 4> order; // key position -> quad position
        std::set<IdQuad> keys;

        IdQuad key_of(const IdQuad& q) const noexcept {
            return {q[order[0]], q[order[1]], q[order[2]], q[order[3]]};
        }
        IdQuad quad_of(const IdQuad& k) const noexcept {
            IdQuad q{};
            for (int i = 0; i < 4; ++i) {
                q[order[i]] = k[i];
            }
            return q;
        }
    };

    TermId intern_locked(const Term& term);
    std::optional<IdQuad> ids_of(const Quad& quad) const;
    bool insert_locked(const IdQuad& q);
    bool remove_locked(const IdQuad& q);
    const Index& choose_index(const IdPattern& pattern, std::size_t& prefix_len) const;
    void scan(const IdPattern& pattern, const std::function<bool(const IdQuad&)>& fn) const;

    mutable std::shared_mutex mutex_;
    std::unordered_map<Term, TermId, TermHash> ids_;
    std::vector<Term> terms_;
    std::array<Index, 3> indexes_;
};

} // namespace ocindex

#endif // OCINDEX_STORE_HPP
