// One line per acceptance criterion; exit status 1 if any of them fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "ocindex/api.hpp"
#include "ocindex/csv.hpp"
#include "ocindex/error.hpp"
#include "ocindex/ingestion.hpp"
#include "ocindex/oci.hpp"
#include "ocindex/query.hpp"
#include "support.hpp"

using namespace ocindex;
using nlohmann::json;
using Clock = std::chrono::steady_clock;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 1) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

Outcome oci_exactness() {
    const SupplierRegistry reg;
    const auto crossref = *reg.by_prefix("020");
    const auto occ = *reg.by_prefix("030");
    int bad = 0;
    bad += build_oci({occ, "2544384"}, {occ, "7295288"}).text != "oci:0302544384-0307295288";
    bad += build_oci({crossref, testkit::kDoiA}, {crossref, testkit::kDoiB}).text != testkit::kPaperOci;
    const Oci a = parse_oci(reg, "oci:0302544384-0307295288");
    bad += a.citing.local_id != "2544384" || a.cited.local_id != "7295288" || a.citing.supplier.prefix != "030";
    const Oci b = parse_oci(reg, testkit::kPaperOci);
    bad += b.citing.local_id != testkit::kDoiA || b.cited.local_id != testkit::kDoiB || b.cited.supplier.prefix != "020";
    return {bad == 0, std::to_string(bad) + " mismatches over 2 OCIs"};
}

Outcome codec_round_trip() {
    const SupplierRegistry reg;
    const auto crossref = *reg.by_prefix("020");
    int failures = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        testkit::Rng rng(seed);
        const std::string doi = testkit::random_doi(rng, NumeralTable::standard().alphabet());
        try {
            failures += decode_local(reg, encode_local(crossref, doi)).second != doi;
        } catch (const Error&) {
            ++failures;
        }
    }
    return {failures == 0, std::to_string(failures) + "/1000 failures"};
}

Outcome timespan_suite() {
    int bad = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        testkit::Rng rng(seed);
        const auto x = testkit::random_partial_date(rng);
        const auto y = testkit::random_partial_date(rng);
        const auto xy = compute_timespan(x, y);
        bad += compute_timespan(y, x) != xy.negated();
        bad += xy.precision != std::min(x.precision(), y.precision());
    }
    int examples = 0;
    const std::vector<std::array<const char*, 3>> worked = {
        {"2013-06-01", "2012-05-16", "P1Y0M16D"}, {"2013", "2013", "P0Y"}, {"2012-05", "2013-06", "-P1Y1M"}};
    for (const auto& [a, b, expected] : worked) {
        const auto da = PartialDate::parse(a);
        const auto db = PartialDate::parse(b);
        const auto got = compute_timespan(da, db);
        examples += got == testkit::oracle_timespan(da, db) && format_duration(got) == expected;
    }
    return {bad == 0 && examples == 3,
            std::to_string(bad) + " property violations over 500 pairs, " + std::to_string(examples) + "/3 examples"};
}

Outcome query_oracle() {
    int mismatches = 0;
    std::size_t rows = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        testkit::Rng rng(seed);
        const auto c = testkit::random_query_case(rng, 100);
        QuadStore st;
        for (const auto& q : c.quads) {
            st.insert(q);
        }
        const auto got = evaluate(st, parse_query(testkit::query_text(c.query)));
        const auto expected = testkit::oracle_evaluate(c.quads, c.query);
        mismatches += got.rows != expected;
        rows += expected.size();
    }
    return {mismatches == 0, std::to_string(mismatches) + "/200 mismatching stores, " + std::to_string(rows) + " rows"};
}

Outcome provenance_time_travel() {
    const std::string entity = "https://w3id.org/oc/ocindex/br/1";
    int mismatches = 0;
    std::size_t checks = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        testkit::Rng rng(seed);
        const auto steps = testkit::random_history(rng, entity, 20);
        QuadStore st;
        ProvenanceLog log(st);
        log.record_creation(entity, steps[0].state, "https://example.org/agent", "https://example.org/src", steps[0].at);
        for (std::size_t k = 1; k < steps.size(); ++k) {
            log.record_update(entity, steps[k].delta, "https://example.org/agent", "https://example.org/src", steps[k].at);
        }
        for (std::size_t k = 0; k < steps.size(); ++k) {
            const Timestamp next = k + 1 < steps.size() ? steps[k + 1].at : steps[k].at + std::chrono::seconds(3600);
            for (const Timestamp t : {steps[k].at, steps[k].at + (next - steps[k].at) / 2}) {
                auto got = log.reconstruct_at(entity, t);
                std::sort(got.begin(), got.end());
                mismatches += got != steps[k].state;
                ++checks;
            }
        }
    }
    return {mismatches == 0, std::to_string(mismatches) + " mismatches over " + std::to_string(checks) + " checks"};
}

Outcome end_to_end() {
    const auto fx = testkit::make_works_fixture(42, 50, 120);
    Dataset ds;
    std::istringstream in(fx.jsonl);
    IngestOptions o;
    o.at = testkit::fixed_time();
    const auto report = ingest_works(ds, in, o);

    std::ostringstream first;
    export_citations_csv(ds, first);
    std::istringstream rows(first.str());
    std::vector<std::string> rec;
    std::size_t line = 0;
    csv::read_record(rows, rec, line);
    std::set<std::pair<std::string, std::string>> edges;
    const SupplierRegistry reg;
    while (csv::read_record(rows, rec, line)) {
        const Oci oci = parse_oci(reg, rec.at(0));
        edges.emplace(oci.citing.local_id, oci.cited.local_id);
    }

    Dataset again;
    std::istringstream back(first.str());
    ingest_csv(again, back, o);
    std::ostringstream second;
    export_citations_csv(again, second);

    const bool ok = report.citations_created == 120 && edges == fx.edges && first.str() == second.str();
    return {ok, std::to_string(report.citations_created) + " citations, " + std::to_string(edges.size()) +
                    " edges decoded (network " + (edges == fx.edges ? "equal" : "DIFFERENT") + "), re-export " +
                    (first.str() == second.str() ? "byte-identical" : "DIFFERS")};
}

Outcome api_conformance() {
    Dataset ds;
    testkit::load_paper_fixture(ds);
    const Service svc(ds);
    const std::string base(kApiBase);
    const std::vector<std::pair<std::string, std::string>> routes = {
        {"citations", "/citations/10.1186/1756-8722-5-31"},
        {"references", "/references/10.5555/open-citations.2015"},
        {"citation-count", "/citation-count/10.1186/1756-8722-5-31"},
        {"reference-count", "/reference-count/10.5555/open-citations.2015"},
        {"citation", std::string("/citation/") + testkit::kPaperOci},
        {"metadata", "/metadata/10.1186/1756-8722-6-59,10.1186/1756-8722-5-31,10.1/nowhere"},
        {"search", "/search?q=citation&kind=title"},
        {"oci", std::string("/oci/") + testkit::kPaperOci},
    };
    int golden_ok = 0;
    for (const auto& [name, path] : routes) {
        for (const char* f : {"json", "csv", "scholix", "ntriples"}) {
            const std::string sep = path.find('?') == std::string::npos ? "?" : "&";
            const Response r = svc.get(base + path + sep + "format=" + f);
            const std::string got =
                "status: " + std::to_string(r.status) + "\ncontent-type: " + r.content_type + "\n\n" + r.body;
            std::ifstream in(fs::path(OCINDEX_GOLDEN_DIR) / (name + "." + f), std::ios::binary);
            std::ostringstream want;
            want << in.rdbuf();
            golden_ok += in && want.str() == got;
        }
    }

    const auto link = json::parse(svc.resolve(testkit::kPaperOci, Format::Scholix));
    const bool scholix = link["Source"]["Identifier"] == testkit::kDoiA &&
                         link["Target"]["Identifier"] == testkit::kDoiB;

    int count_mismatch = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto fx = testkit::make_works_fixture(1000 + seed, 15, 30);
        Dataset d;
        std::istringstream in(fx.jsonl);
        IngestOptions o;
        o.at = testkit::fixed_time();
        ingest_works(d, in, o);
        const Service s(d);
        for (const auto& doi : fx.dois) {
            const auto n = json::parse(s.get(base + "/citations/" + doi).body).size();
            const auto c = json::parse(s.get(base + "/citation-count/" + doi).body)["count"].get<std::size_t>();
            const auto m = json::parse(s.get(base + "/references/" + doi).body).size();
            const auto rc = json::parse(s.get(base + "/reference-count/" + doi).body)["count"].get<std::size_t>();
            count_mismatch += (n != c) + (m != rc);
        }
    }
    return {golden_ok == 32 && scholix && count_mismatch == 0,
            std::to_string(golden_ok) + "/32 golden responses, Scholix source/target " + (scholix ? "ok" : "WRONG") +
                ", " + std::to_string(count_mismatch) + " count/list mismatches over 50 fixtures"};
}

Outcome throughput() {
    const std::string text = testkit::make_citation_csv(8, 100000);
    Dataset ds;
    IngestOptions o;
    o.at = testkit::fixed_time();
    const auto t0 = Clock::now();
    std::istringstream in(text);
    const auto report = ingest_csv(ds, in, o);
    const double ingest_s = ms_since(t0) / 1000.0;

    const Service svc(ds);
    std::vector<double> lat;
    testkit::Rng rng(3);
    const std::size_t dois = 100000 / 4 + 2;
    for (int i = 0; i < 1000; ++i) {
        const std::string doi = "10.7777/c." + std::to_string(rng() % dois);
        const auto t = Clock::now();
        const auto r = svc.get(std::string(kApiBase) + "/citations/" + doi);
        lat.push_back(ms_since(t));
        if (r.status != 200) {
            return {false, "lookup failed for " + doi};
        }
    }
    std::nth_element(lat.begin(), lat.begin() + static_cast<long>(lat.size() / 2), lat.end());
    const double median = lat[lat.size() / 2];
    const bool ok = report.citations_created == 100000 && ingest_s < 60.0 && median < 10.0;
    return {ok, std::to_string(report.citations_created) + " citations ingested in " + fmt(ingest_s) +
                    " s (limit 60), median lookup " + fmt(median, 3) + " ms (limit 10)"};
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_ms; // 0 = no time limit
        std::function<Outcome()> fn;
    };
    const std::vector<Criterion> criteria = {
        {1, "OCI exactness", 1000, oci_exactness},
        {2, "codec round trip", 5000, codec_round_trip},
        {3, "timespan suite", 0, timespan_suite},
        {4, "query-engine oracle", 30000, query_oracle},
        {5, "provenance time travel", 0, provenance_time_travel},
        {6, "end-to-end ingestion", 0, end_to_end},
        {7, "API conformance", 0, api_conformance},
        {8, "desk-scale throughput", 0, throughput},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = c.fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double ms = ms_since(t0);
        if (c.limit_ms > 0 && ms >= c.limit_ms) {
            o.ok = false;
            o.detail += ", over the " + fmt(c.limit_ms / 1000.0, 0) + " s limit";
        }
        failed += !o.ok;
        std::cout << "criterion " << c.id << ": " << (o.ok ? "PASS" : "FAIL") << "  " << c.name << " -- " << o.detail
                  << " [" << fmt(ms) << " ms]" << std::endl;
    }
    std::cout << (failed == 0 ? "all 8 criteria pass" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
