#include <gtest/gtest.h>

#include "ocindex/error.hpp"
#include "ocindex/mapping.hpp"
#include "ocindex/ntriples.hpp"
#include "ocindex/provenance.hpp"
#include "ocindex/vocab.hpp"
#include "support.hpp"

using namespace ocindex;
using std::chrono::seconds;

namespace {

const std::string kEntity = std::string(vocab::kBase) + "br/1";
const std::string kAgent = std::string(vocab::kBase) + "ra/curator";
const std::string kSource = "https://api.crossref.org/works";

Quad title(const std::string& t) {
    return {Term::iri(kEntity), Term::iri(vocab::kTitle), Term::literal(t), std::nullopt};
}

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return Errc::IoError;
}

std::vector<Quad> sorted(std::vector<Quad> v) {
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

TEST(Timestamps, FormatParse) {
    const Timestamp t = testkit::fixed_time();
    EXPECT_EQ(format_timestamp(t), "2019-11-04T10:15:00Z");
    EXPECT_EQ(parse_timestamp("2019-11-04T10:15:00Z"), t);
    EXPECT_EQ(code_of([] { parse_timestamp("2019-11-04"); }), Errc::ParseError);
    EXPECT_EQ(code_of([] { parse_timestamp("2019-13-04T10:15:00Z"); }), Errc::ParseError);
}

TEST(Provenance, Creation) {
    QuadStore st;
    ProvenanceLog log(st);
    const Snapshot s = log.record_creation(kEntity, {title("A")}, kAgent, kSource, testkit::fixed_time());
    EXPECT_EQ(s.seq, 1u);
    EXPECT_FALSE(s.invalidated_at);
    EXPECT_TRUE(s.delta.empty());
    EXPECT_TRUE(st.contains(title("A")));
    EXPECT_EQ(log.current_snapshot(kEntity)->seq, 1u);
    EXPECT_EQ(s.iri(), kEntity + "/prov/se/1");
    EXPECT_EQ(code_of([&] { log.record_creation(kEntity, {}, kAgent, kSource, testkit::fixed_time(5)); }),
              Errc::AlreadyExists);
}

TEST(Provenance, UpdateAndTimeTravel) {
    QuadStore st;
    ProvenanceLog log(st);
    const Timestamp t1 = testkit::fixed_time();
    const Timestamp t2 = t1 + seconds(100);
    log.record_creation(kEntity, {title("A")}, kAgent, kSource, t1);
    const Snapshot s2 = log.record_update(kEntity, Delta{{title("B")}, {title("A")}}, kAgent, kSource, t2);
    EXPECT_EQ(s2.seq, 2u);
    EXPECT_TRUE(st.contains(title("B")));
    EXPECT_FALSE(st.contains(title("A")));
    const auto h = log.history(kEntity);
    ASSERT_EQ(h.size(), 2u);
    EXPECT_EQ(*h[0].invalidated_at, t2);
    EXPECT_FALSE(h[1].invalidated_at);

    EXPECT_EQ(log.reconstruct_at(kEntity, t1 + seconds(50)), std::vector<Quad>{title("A")});
    EXPECT_EQ(log.reconstruct_at(kEntity, t2), std::vector<Quad>{title("B")});
    EXPECT_EQ(log.reconstruct_at(kEntity, t2 + seconds(1000)), std::vector<Quad>{title("B")});
    EXPECT_EQ(code_of([&] { log.reconstruct_at(kEntity, t1 - seconds(1)); }), Errc::BeforeCreation);
    EXPECT_TRUE(log.integrity_ok());
}

TEST(Provenance, UpdateErrors) {
    QuadStore st;
    ProvenanceLog log(st);
    const Timestamp t1 = testkit::fixed_time();
    EXPECT_EQ(code_of([&] { log.record_update(kEntity, {}, kAgent, kSource, t1); }), Errc::NoSuchEntity);
    EXPECT_EQ(code_of([&] { log.reconstruct_at(kEntity, t1); }), Errc::NoSuchEntity);
    log.record_creation(kEntity, {title("A")}, kAgent, kSource, t1);
    EXPECT_EQ(code_of([&] { log.record_update(kEntity, {}, kAgent, kSource, t1 - seconds(10)); }),
              Errc::NonMonotonicTime);
    EXPECT_EQ(code_of([&] { log.record_update(kEntity, {}, kAgent, kSource, t1); }), Errc::NonMonotonicTime);
    EXPECT_EQ(code_of([&] { log.record_update(kEntity, Delta{{}, {title("Z")}}, kAgent, kSource, t1 + seconds(1)); }),
              Errc::RemovedQuadAbsent);
    EXPECT_EQ(code_of([&] {
                  log.record_update(kEntity, Delta{{title("A")}, {title("A")}}, kAgent, kSource, t1 + seconds(1));
              }),
              Errc::InvalidDelta);
    // failed updates leave no trace
    EXPECT_EQ(log.history(kEntity).size(), 1u);
    EXPECT_TRUE(st.contains(title("A")));

    // an empty delta is a valid confirmation snapshot
    const auto s = log.record_update(kEntity, {}, kAgent, kSource, t1 + seconds(2), "checked");
    EXPECT_EQ(s.seq, 2u);
    EXPECT_EQ(s.description, "checked");
    EXPECT_TRUE(log.integrity_ok());
}

TEST(Delta, SerializeEmpty) {
    EXPECT_EQ(serialize_delta({}), "DELETE DATA { }; INSERT DATA { }");
    EXPECT_TRUE(parse_delta("DELETE DATA { }; INSERT DATA { }").empty());
}

TEST(Delta, RoundTripByteExact) {
    Delta d{{title("B \"quoted\"")}, {}};
    const std::string text = serialize_delta(d);
    EXPECT_EQ(text, "DELETE DATA { }; INSERT DATA {\n" + quad_line(title("B \"quoted\"")) + "\n}");
    EXPECT_EQ(parse_delta(text), d);
    EXPECT_EQ(serialize_delta(parse_delta(text)), text);

    Delta both{{title("new"), title("new2")}, {title("old")}};
    normalize(both);
    EXPECT_EQ(parse_delta(serialize_delta(both)), both);
}

TEST(Delta, MalformedHasLine) {
    const std::string bad = "DELETE DATA {\n<http://a> <http://b> \"c\" .\n}; INSERT DATA {\n<http://a> <http://b> .\n}";
    try {
        parse_delta(bad);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::SyntaxError);
        EXPECT_EQ(e.line(), 4u);
    }
    EXPECT_EQ(code_of([] { parse_delta("INSERT DATA { }; DELETE DATA { }"); }), Errc::SyntaxError);
    EXPECT_EQ(code_of([] { parse_delta("DELETE DATA { }; INSERT DATA { } trailing"); }), Errc::SyntaxError);
}

TEST(Delta, Reversibility) {
    testkit::Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        const auto h = testkit::random_history(rng, kEntity, 5);
        QuadStore st;
        for (const auto& q : h.front().state) st.insert(q);
        for (std::size_t k = 1; k < h.size(); ++k) {
            const auto before = st.match({});
            st.apply(h[k].delta.removed, h[k].delta.added);
            const Delta inv = h[k].delta.inverse();
            st.apply(inv.removed, inv.added);
            EXPECT_EQ(sorted(st.match({})), sorted(before));
            st.apply(h[k].delta.removed, h[k].delta.added);
        }
    }
}

TEST(Provenance, ExportLoadQuads) {
    QuadStore st;
    ProvenanceLog log(st);
    const Timestamp t1 = testkit::fixed_time();
    log.record_creation(kEntity, {title("A")}, kAgent, kSource, t1);
    log.record_update(kEntity, Delta{{title("B")}, {title("A")}}, kAgent, "not an iri", t1 + seconds(60));
    const auto quads = log.to_quads();
    for (const auto& q : quads) {
        ASSERT_TRUE(q.graph);
        EXPECT_EQ(q.graph->value, kEntity + "/prov");
    }
    const auto has = [&](const std::string& p, const Term& o) {
        return std::any_of(quads.begin(), quads.end(), [&](const Quad& q) { return q.predicate.value == p && q.object == o; });
    };
    EXPECT_TRUE(has(vocab::kGeneratedAtTime, Term::literal("2019-11-04T10:15:00Z", vocab::kXsdDateTime)));
    EXPECT_TRUE(has(vocab::kInvalidatedAtTime, Term::literal("2019-11-04T10:16:00Z", vocab::kXsdDateTime)));
    EXPECT_TRUE(has(vocab::kSpecializationOf, Term::iri(kEntity)));
    EXPECT_TRUE(has(vocab::kWasAttributedTo, Term::iri(kAgent)));
    EXPECT_TRUE(has(vocab::kHadPrimarySource, Term::iri(kSource)));
    EXPECT_TRUE(has(vocab::kHadPrimarySource, Term::literal("not an iri")));

    QuadStore other;
    ProvenanceLog copy(other);
    copy.load_quads(quads);
    EXPECT_EQ(copy.history(kEntity), log.history(kEntity));
    EXPECT_TRUE(copy.integrity_ok());
}

// Full-copy oracle: the test keeps every state; the log keeps only deltas.
TEST(ProvenanceProperty, TimeTravelMatchesFullCopies) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        testkit::Rng rng(seed);
        const auto steps = testkit::random_history(rng, kEntity, 20);
        QuadStore st;
        // unrelated entity sharing the store
        st.insert({Term::iri(kEntity + "0"), Term::iri(vocab::kTitle), Term::literal("other"), std::nullopt});
        ProvenanceLog log(st);
        log.record_creation(kEntity, steps[0].state, kAgent, kSource, steps[0].at);
        for (std::size_t k = 1; k < steps.size(); ++k) {
            log.record_update(kEntity, steps[k].delta, kAgent, kSource, steps[k].at);
        }
        ASSERT_TRUE(log.integrity_ok());
        for (std::size_t k = 0; k < steps.size(); ++k) {
            ASSERT_EQ(sorted(log.reconstruct_at(kEntity, steps[k].at)), steps[k].state) << "seed " << seed << " step " << k;
            const Timestamp next = k + 1 < steps.size() ? steps[k + 1].at : steps[k].at + seconds(3600);
            const Timestamp mid = steps[k].at + (next - steps[k].at) / 2;
            ASSERT_EQ(sorted(log.reconstruct_at(kEntity, mid)), steps[k].state) << "seed " << seed << " mid " << k;
            if (next - steps[k].at > seconds(1)) {
                ASSERT_EQ(sorted(log.reconstruct_at(kEntity, next - seconds(1))), steps[k].state);
            }
        }
        ASSERT_EQ(code_of([&] { log.reconstruct_at(kEntity, steps[0].at - seconds(1)); }), Errc::BeforeCreation);
    }
}
