#ifndef OCINDEX_DATASET_HPP
#define OCINDEX_DATASET_HPP

#include <atomic>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ocindex/model.hpp"
#include "ocindex/oci.hpp"
#include "ocindex/provenance.hpp"
#include "ocindex/store.hpp"

namespace ocindex {

enum class Direction { Incoming, Outgoing };

struct DatasetStats {
    std::size_t resources = 0;
    std::size_t agents = 0;
    std::size_t citations = 0;
    std::size_t references = 0;
    std::size_t snapshots = 0;
    std::size_t quads = 0;
};

/// Registry, quad store and provenance log of one index, plus IRI minting.
class Dataset {
public:
    explicit Dataset(SupplierRegistry registry = {});
    Dataset(const Dataset&) = delete;
    Dataset& operator=(const Dataset&) = delete;

    SupplierRegistry& registry() noexcept { return registry_; }
    const SupplierRegistry& registry() const noexcept { return registry_; }
    QuadStore& store() noexcept { return store_; }
    const QuadStore& store() const noexcept { return store_; }
    ProvenanceLog& provenance() noexcept { return provenance_; }
    const ProvenanceLog& provenance() const noexcept { return provenance_; }

    /// Next IRI for `kind` ("br", "ra", "de"): <base><kind>/<n>.
    std::string mint(std::string_view kind);

    /// Replaces the content with an N-Quads file written by save().
    void load(std::istream& in);
    void load_file(const std::filesystem::path& path);
    /// Default graph plus the provenance graphs, canonically sorted.
    void save(std::ostream& out) const;
    void save_file(const std::filesystem::path& path) const;
    std::vector<Quad> all_quads() const;

    DatasetStats stats() const;

private:
    void recover_counters(const std::vector<Quad>& quads);

    SupplierRegistry registry_;
    QuadStore store_;
    ProvenanceLog provenance_;
    std::mutex mint_mutex_;
    std::map<std::string, std::uint64_t, std::less<>> counters_;
};

/// Resource holding `id` among its identifiers.
std::optional<std::string> find_resource(const StoreReader& reader, const Identifier& id);
/// Agent holding `id` (an ORCID, in practice).
std::optional<std::string> find_agent(const StoreReader& reader, const Identifier& id);

/// Citations whose cited (Incoming) or citing (Outgoing) side is `id`,
/// sorted by OCI text.
std::vector<Citation> citations_for(const StoreReader& reader, const SupplierRegistry& registry,
                                    const Identifier& id, Direction direction);
std::size_t count_citations(const StoreReader& reader, const Identifier& id, Direction direction);

/// Every stored citation, sorted by OCI text.
std::vector<Citation> all_citations(const StoreReader& reader, const SupplierRegistry& registry);

std::optional<Citation> find_citation(const StoreReader& reader, const SupplierRegistry& registry, const Oci& oci);

} // namespace ocindex

#endif // OCINDEX_DATASET_HPP
