#ifndef OCINDEX_TESTS_SUPPORT_HPP
#define OCINDEX_TESTS_SUPPORT_HPP

// Oracles and fixture generators shared by the unit tests and the
// acceptance binary. Nothing here calls the library code it checks.

#include <map>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ocindex/dataset.hpp"
#include "ocindex/model.hpp"
#include "ocindex/provenance.hpp"
#include "ocindex/query.hpp"
#include "ocindex/term.hpp"

namespace ocindex {

// readable gtest failure output
inline void PrintTo(const Term& t, std::ostream* os) { *os << t.to_string(); }
inline void PrintTo(const Quad& q, std::ostream* os) {
    *os << q.subject.to_string() << ' ' << q.predicate.to_string() << ' ' << q.object.to_string();
    if (q.graph) {
        *os << ' ' << q.graph->to_string();
    }
}

} // namespace ocindex

namespace ocindex::testkit {

using Rng = std::mt19937_64;

// --- codec ------------------------------------------------------------------

/// "10.<4-5 digits>/<suffix>", suffix of 1..64 characters over `alphabet`.
std::string random_doi(Rng& rng, const std::string& alphabet);

// --- dates ------------------------------------------------------------------

PartialDate random_partial_date(Rng& rng, int min_year = 1990, int max_year = 2020);

/// Steps through the calendar one month, then one day at a time.
SignedDuration oracle_timespan(const PartialDate& citing, const PartialDate& cited);

// --- query ------------------------------------------------------------------

/// Every combination of one quad per pattern, checked slot by slot.
std::vector<std::vector<Term>> oracle_evaluate(const std::vector<Quad>& quads, const Query& query);

struct RandomQueryCase {
    std::vector<Quad> quads;
    Query query;
};

/// Query text in the engine's grammar.
std::string query_text(const Query& query);

/// Small vocabulary so that joins actually hit.
RandomQueryCase random_query_case(Rng& rng, std::size_t max_quads = 100);

// --- provenance ---------------------------------------------------------------

struct HistoryStep {
    Timestamp at;
    std::vector<Quad> state; ///< full entity content after this step
    Delta delta;             ///< empty for the creation step
};

/// A creation followed by up to `max_updates` random updates of one entity.
std::vector<HistoryStep> random_history(Rng& rng, const std::string& entity, std::size_t max_updates = 20);

// --- ingestion ----------------------------------------------------------------

struct WorksFixture {
    std::string jsonl;
    std::vector<std::string> dois;
    std::set<std::pair<std::string, std::string>> edges; ///< (citing, cited) DOIs
    std::size_t unresolved = 0; ///< references without a DOI
};

/// `works` records whose DOI references form exactly `edges` distinct
/// in-corpus pairs, with no self-references.
WorksFixture make_works_fixture(std::uint64_t seed, std::size_t works = 50, std::size_t edges = 120);

/// COCI-style CSV with `n` distinct citations among `n / 4 + 2` DOIs.
std::string make_citation_csv(std::uint64_t seed, std::size_t n);

/// Small corpus around the two DOIs of the paper's OCI example:
/// A = 10.1186/1756-8722-6-59 (2013-12-05) cites B = 10.1186/1756-8722-5-31
/// (2012-11-16); C (2015-03) cites A and B; A's reference list also holds
/// an unresolved reference.
std::string paper_fixture_jsonl();

inline constexpr const char* kDoiA = "10.1186/1756-8722-6-59";
inline constexpr const char* kDoiB = "10.1186/1756-8722-5-31";
inline constexpr const char* kDoiC = "10.5555/open-citations.2015";
inline constexpr const char* kPaperOci =
    "oci:02001010806360107050663080702026306630509-02001010806360107050663080702026305630301";

Timestamp fixed_time(int offset_seconds = 0);

/// Dataset loaded with paper_fixture_jsonl() at fixed_time().
void load_paper_fixture(Dataset& ds);

} // namespace ocindex::testkit

#endif // OCINDEX_TESTS_SUPPORT_HPP
