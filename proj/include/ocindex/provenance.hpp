#ifndef OCINDEX_PROVENANCE_HPP
#define OCINDEX_PROVENANCE_HPP

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "ocindex/store.hpp"
#include "ocindex/term.hpp"

namespace ocindex {

/// UTC, second resolution.
using Timestamp = std::chrono::sys_seconds;

/// "2019-11-04T10:15:00Z"
std::string format_timestamp(Timestamp t);
/// Throws ParseError.
Timestamp parse_timestamp(std::string_view text);
Timestamp now_utc();

/// Quads added and removed by one curatorial change. Both lists are kept
/// sorted and duplicate-free; they never share a quad.
struct Delta {
    std::vector<Quad> added;
    std::vector<Quad> removed;

    Delta inverse() const { return {removed, added}; }
    bool empty() const noexcept { return added.empty() && removed.empty(); }
    bool operator==(const Delta&) const = default;
};

/// Sorts, deduplicates and checks disjointness (throws InvalidDelta).
void normalize(Delta& delta);

/// `DELETE DATA { ... }; INSERT DATA { ... }` with one N-Quads line per quad.
std::string serialize_delta(const Delta& delta);
/// Exact inverse of serialize_delta. Throws SyntaxError(line).
Delta parse_delta(std::string_view text);

struct Snapshot {
    std::string entity;
    std::uint64_t seq = 1;
    Timestamp generated_at{};
    std::optional<Timestamp> invalidated_at;
    std::string agent;
    std::string primary_source;
    std::string description;
    Delta delta; ///< empty for the creation snapshot

    std::string iri() const { return entity + "/prov/se/" + std::to_string(seq); }
    std::string graph() const { return entity + "/prov"; }
    bool operator==(const Snapshot&) const = default;
};

/// Per-entity snapshot history. Deltas are stored so that they can be undone
/// starting from the current store content, which keeps reads of current
/// data free of any replay.
class ProvenanceLog {
public:
    explicit ProvenanceLog(QuadStore& store) : store_(store) {}

    /// Inserts `initial_quads` and records snapshot 1. Throws AlreadyExists.
    Snapshot record_creation(const std::string& entity, const std::vector<Quad>& initial_quads,
                             const std::string& agent, const std::string& source, Timestamp time,
                             const std::string& description = {});

    /// Applies `delta` to the store and records the next snapshot. Added quads
    /// that are already present are dropped from the recorded delta.
    /// Throws NoSuchEntity, NonMonotonicTime, RemovedQuadAbsent, InvalidDelta.
    Snapshot record_update(const std::string& entity, Delta delta, const std::string& agent,
                           const std::string& source, Timestamp time, const std::string& description = {});

    /// Entity description (see entity_closure) as it was at time `t`.
    /// Throws NoSuchEntity, BeforeCreation.
    std::vector<Quad> reconstruct_at(const std::string& entity, Timestamp t) const;

    std::vector<Snapshot> history(const std::string& entity) const;
    std::optional<Snapshot> current_snapshot(const std::string& entity) const;
    bool contains(const std::string& entity) const;
    std::size_t entity_count() const;
    std::size_t snapshot_count() const;

    /// Seq gapless from 1, strictly increasing times, invalidation chain intact.
    bool integrity_ok() const;

    /// Snapshot metadata as quads, one named graph `<entity>/prov` per entity.
    std::vector<Quad> to_quads() const;
    /// Rebuilds the log from to_quads() output (store content is not touched).
    void load_quads(const std::vector<Quad>& quads);
    void clear();

private:
    QuadStore& store_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::vector<Snapshot>> logs_;
};

} // namespace ocindex

#endif // OCINDEX_PROVENANCE_HPP
