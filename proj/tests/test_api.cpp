#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ocindex/api.hpp"
#include "ocindex/error.hpp"
#include "ocindex/mapping.hpp"
#include "ocindex/query.hpp"
#include "ocindex/vocab.hpp"
#include "support.hpp"

using namespace ocindex;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kBase(kApiBase);

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return Errc::IoError;
}

const Dataset& fixture() {
    static Dataset* ds = [] {
        auto* d = new Dataset();
        testkit::load_paper_fixture(*d);
        return d;
    }();
    return *ds;
}

std::string dump(const Response& r) {
    return "status: " + std::to_string(r.status) + "\ncontent-type: " + r.content_type + "\n\n" + r.body;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST(Negotiation, Examples) {
    EXPECT_EQ(negotiate_format("text/csv", std::nullopt), Format::Csv);
    EXPECT_EQ(negotiate_format("", std::nullopt), Format::Json);
    EXPECT_EQ(negotiate_format("*/*", std::nullopt), Format::Json);
    EXPECT_EQ(negotiate_format("application/scholix+json", std::nullopt), Format::Scholix);
    EXPECT_EQ(negotiate_format("application/n-triples", std::nullopt), Format::NTriples);
    EXPECT_EQ(negotiate_format("application/pdf, text/csv;q=0.5", std::nullopt), Format::Csv);
    EXPECT_EQ(negotiate_format("text/csv;q=0, application/json", std::nullopt), Format::Json);
    EXPECT_EQ(negotiate_format("application/pdf", "csv"), Format::Csv);
    EXPECT_EQ(code_of([] { negotiate_format("application/pdf", std::nullopt); }), Errc::NotAcceptable);
    EXPECT_EQ(code_of([] { negotiate_format("", "xml"); }), Errc::NotAcceptable);
}

TEST(Negotiation, Totality) {
    const std::vector<std::string> accepts = {"", "*/*", "text/csv", "application/json", "application/scholix+json",
                                              "application/n-triples", "application/pdf", "text/*", "image/png, */*;q=0.1",
                                              "text/csv;q=0", "application/xml, text/html"};
    const std::vector<std::optional<std::string>> params = {std::nullopt, "json", "csv", "scholix", "ntriples", "nt",
                                                            "turtle", ""};
    for (const auto& a : accepts) {
        for (const auto& p : params) {
            try {
                const Format f = negotiate_format(a, p ? std::optional<std::string_view>(*p) : std::nullopt);
                if (p && !p->empty()) {
                    EXPECT_EQ(f, *format_from_name(*p));
                }
            } catch (const Error& e) {
                EXPECT_EQ(e.code(), Errc::NotAcceptable) << a;
            }
        }
    }
}

TEST(RouteConfig, EmptyGivesBuiltins) {
    const auto routes = load_route_config("");
    EXPECT_EQ(routes.size(), 8u);
    EXPECT_EQ(routes.size(), builtin_routes().size());
}

TEST(RouteConfig, CustomRoute) {
    const std::string cfg =
        "## citations created in a given year\n"
        "#url /by-year/{y}\n"
        "#method get\n"
        "#field_type int(y)\n"
        "#call SELECT ?c ?d WHERE {\n"
        "  ?c <cito:hasCitationCreationDate> ?d .\n"
        "  FILTER(?d CONTAINS \"[[y]]\")\n"
        "}\n"
        "#output c, d\n"
        "#format csv\n";
    const auto routes = load_route_config(cfg);
    ASSERT_EQ(routes.size(), 9u);
    EXPECT_EQ(routes.back().url, "/by-year/{y}");
    EXPECT_EQ(routes.back().default_format, Format::Csv);

    const Service svc(fixture(), routes);
    const auto r = svc.get(kBase + "/by-year/2013");
    EXPECT_EQ(r.status, 200);
    EXPECT_EQ(r.content_type.rfind("text/csv", 0), 0u);
    EXPECT_NE(r.body.find("2013-12-05"), std::string::npos) << r.body;
    EXPECT_EQ(r.body.find("2015-03"), std::string::npos) << r.body;
    EXPECT_EQ(svc.get(kBase + "/by-year/abc").status, 400);
}

TEST(RouteConfig, Errors) {
    EXPECT_EQ(code_of([] { load_route_config("#url /citations/{doi}\n#call SELECT ?x WHERE { ?x ?p ?o . }\n"); }),
              Errc::ShadowedBuiltin);
    EXPECT_EQ(code_of([] { load_route_config("#url /a/{x}\n#colour red\n"); }), Errc::ConfigError);
    EXPECT_EQ(code_of([] { load_route_config("#url /a/{x}\n#call SELECT ?x WHERE { ?x ?p \"[[y]]\" . }\n"); }),
              Errc::ConfigError);
    EXPECT_EQ(code_of([] { load_route_config("#url /a\n#call SELECT ?x WHERE { ?x ?p }\n"); }), Errc::ConfigError);
    EXPECT_EQ(code_of([] { load_route_config("#url /a\n#method post\n#call SELECT ?x WHERE { ?x ?p ?o . }\n"); }),
              Errc::ConfigError);
    try {
        load_route_config("## c\n#url /a\n#call SELECT ?x WHERE { ?x ?p ?o . }\n#output y\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.line(), 4u);
    }
}

TEST(Settings, KeyValue) {
    const auto s = load_settings("# service\nport = 9000\ndata=/tmp/x.nq\nremote_url=http://localhost:1/works\n");
    EXPECT_EQ(s.port, 9000);
    EXPECT_EQ(s.data, "/tmp/x.nq");
    EXPECT_EQ(s.host, "127.0.0.1");
    EXPECT_EQ(code_of([] { load_settings("port=abc\n"); }), Errc::ConfigError);
    EXPECT_EQ(code_of([] { load_settings("colour=red\n"); }), Errc::ConfigError);
}

TEST(Service, CitationLists) {
    const Service svc(fixture());
    const auto incoming = svc.citation_list(Direction::Incoming, testkit::kDoiB);
    ASSERT_EQ(incoming.size(), 2u);
    EXPECT_TRUE(std::any_of(incoming.begin(), incoming.end(),
                            [](const Citation& c) { return c.oci.text == testkit::kPaperOci; }));
    EXPECT_TRUE(svc.citation_list(Direction::Outgoing, testkit::kDoiB).empty());
    EXPECT_EQ(svc.citation_count(Direction::Incoming, testkit::kDoiB), 2u);
    EXPECT_EQ(svc.citation_count(Direction::Incoming, "10.1/unknown"), 0u);
    EXPECT_EQ(code_of([&] { svc.citation_list(Direction::Incoming, "not a doi"); }), Errc::BadIdentifier);

    const auto r = svc.get(kBase + "/citations/10.1/unknown");
    EXPECT_EQ(r.status, 200);
    EXPECT_EQ(json::parse(r.body), json::array());
    EXPECT_EQ(svc.get(kBase + "/citations/not%20a%20doi").status, 400);
}

TEST(Service, ListsAgreeWithStoreQuery) {
    const Service svc(fixture());
    const auto rows = evaluate(fixture().store(), parse_query("SELECT ?c WHERE { ?c <cito:hasCitedEntity> "
                                                              "<https://doi.org/10.1186/1756-8722-5-31> . }"));
    const auto list = svc.citation_list(Direction::Incoming, testkit::kDoiB);
    ASSERT_EQ(rows.rows.size(), list.size());
    for (std::size_t i = 0; i < list.size(); ++i) {
        EXPECT_EQ(rows.rows[i][0].value, citation_iri(list[i].oci));
    }
}

TEST(Service, Lookup) {
    const Service svc(fixture());
    EXPECT_EQ(svc.citation_lookup(testkit::kPaperOci).oci.text, testkit::kPaperOci);
    EXPECT_EQ(code_of([&] { svc.citation_lookup("oci:xx-yy"); }), Errc::MalformedOci);
    EXPECT_EQ(code_of([&] { svc.citation_lookup("oci:0301-0302"); }), Errc::NotFound);
    const auto r = svc.get(kBase + "/citation/oci:0301-0302");
    EXPECT_EQ(r.status, 404);
    const auto body = json::parse(r.body);
    EXPECT_EQ(body["error"], "not_found");
    EXPECT_NE(body["message"].get<std::string>().find("cit"), std::string::npos);
    EXPECT_EQ(svc.get(kBase + "/citation/oci:xx-yy").status, 400);
    EXPECT_EQ(svc.get(kBase + "/no/such/route").status, 404);
}

TEST(Service, Scholix) {
    const Service svc(fixture());
    const auto j = json::parse(svc.resolve(testkit::kPaperOci, Format::Scholix));
    EXPECT_EQ(j["RelationshipType"], "References");
    EXPECT_EQ(j["LinkIdentifier"], testkit::kPaperOci);
    EXPECT_EQ(j["Source"]["Identifier"], testkit::kDoiA);
    EXPECT_EQ(j["Source"]["IDScheme"], "doi");
    EXPECT_EQ(j["Source"]["Type"], "literature");
    EXPECT_EQ(j["Target"]["Identifier"], testkit::kDoiB);
    EXPECT_EQ(j["LinkPublicationDate"], "2013-12-05");

    // Source/Target agree with decoding the OCI of every listed link
    const auto list = json::parse(svc.get(kBase + "/citations/" + testkit::kDoiB + "?format=scholix").body);
    ASSERT_EQ(list.size(), 2u);
    for (const auto& link : list) {
        const Oci o = parse_oci(SupplierRegistry{}, link["LinkIdentifier"].get<std::string>());
        EXPECT_EQ(link["Source"]["Identifier"], o.citing.local_id);
        EXPECT_EQ(link["Target"]["Identifier"], o.cited.local_id);
    }
}

TEST(Service, ResolverRepresentations) {
    const Service svc(fixture());
    const std::string csv = svc.resolve(testkit::kPaperOci, Format::Csv);
    EXPECT_EQ(csv, std::string(kCitationCsvHeader) + "\n" + testkit::kPaperOci +
                       ",10.1186/1756-8722-6-59,10.1186/1756-8722-5-31,2013-12-05,P1Y0M19D,yes,yes\n");
    const std::string nt = svc.resolve(testkit::kPaperOci, Format::NTriples);
    EXPECT_NE(nt.find("<https://doi.org/10.1186/1756-8722-6-59> <http://purl.org/spar/cito/cites> "
                      "<https://doi.org/10.1186/1756-8722-5-31> ."),
              std::string::npos)
        << nt;
}

TEST(Service, Metadata) {
    FakeMetadataClient fake;
    CrossrefWorkRecord rec;
    rec.doi = "10.1/remote";
    rec.title = "Fetched remotely";
    rec.issued = PartialDate::parse("2001-02");
    fake.add(rec);
    const Service svc(fixture(), builtin_routes(), &fake);
    const auto rows = svc.metadata(std::string(testkit::kDoiB) + ",10.1/remote,10.1/nowhere");
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].title, "Persistent links between scholarly works");
    EXPECT_EQ(rows[0].citation_count, 2u);
    EXPECT_EQ(rows[0].issn, "1756-8722");
    EXPECT_EQ(rows[1].title, "Fetched remotely");
    EXPECT_EQ(rows[1].pub_date, "2001-02");
    EXPECT_EQ(rows[2].doi, "10.1/nowhere");
    EXPECT_TRUE(rows[2].title.empty());
    EXPECT_EQ(fake.calls(), 2u);

    const Service local(fixture());
    EXPECT_TRUE(local.metadata("10.1/remote")[0].title.empty());

    fake.fail_with("timeout");
    const auto r = svc.get(kBase + "/metadata/10.1/remote");
    EXPECT_EQ(r.status, 200);
    EXPECT_EQ(json::parse(r.body)[0]["doi"], "10.1/remote");
    EXPECT_EQ(svc.get(kBase + "/metadata/bogus").status, 400);
}

TEST(Service, Search) {
    const Service svc(fixture());
    const auto by_doi = svc.search(testkit::kDoiA, SearchKind::Auto);
    ASSERT_EQ(by_doi.size(), 1u);
    EXPECT_EQ(by_doi[0].doi, testkit::kDoiA);
    const auto by_title = svc.search("CITATIONS", SearchKind::Auto);
    ASSERT_EQ(by_title.size(), 1u);
    EXPECT_EQ(by_title[0].doi, testkit::kDoiC);
    const auto by_author = svc.search("shotton", SearchKind::Author);
    EXPECT_EQ(by_author.size(), 2u);
    const auto by_orcid = svc.search("0000-0003-0530-4305", SearchKind::Auto);
    EXPECT_EQ(by_orcid.size(), 2u);
    EXPECT_EQ(code_of([&] { svc.search("", SearchKind::Auto); }), Errc::EmptyQuery);
    EXPECT_EQ(svc.get(kBase + "/search?q=").status, 400);
    EXPECT_EQ(svc.get(kBase + "/search?q=x&kind=colour").status, 400);
}

TEST(Service, ReadOnly) {
    Dataset ds;
    testkit::load_paper_fixture(ds);
    const auto before = ds.all_quads();
    const Service svc(ds);
    for (const char* t : {"/citations/10.1186/1756-8722-5-31", "/references/10.1186/1756-8722-6-59",
                          "/citation-count/10.1/x", "/metadata/10.1/nowhere", "/search?q=open", "/oci/oci:0301-0302"}) {
        svc.get(kBase + t);
    }
    EXPECT_EQ(ds.all_quads(), before);
}

TEST(Service, TableVersionHeader) {
    const Service svc(fixture());
    const auto r = svc.get(kBase + "/citation-count/" + testkit::kDoiB);
    EXPECT_EQ(r.headers.at("X-Oci-Table"), kNumeralTableVersion);
    EXPECT_EQ(json::parse(r.body)["count"], 2);
}

TEST(ServiceProperty, CountsEqualListLengths) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto fx = testkit::make_works_fixture(1000 + seed, 15, 30);
        Dataset ds;
        std::istringstream in(fx.jsonl);
        IngestOptions o;
        o.at = testkit::fixed_time();
        ingest_works(ds, in, o);
        const Service svc(ds);
        for (const auto& doi : fx.dois) {
            for (const auto dir : {Direction::Incoming, Direction::Outgoing}) {
                const auto n = svc.citation_list(dir, doi).size();
                ASSERT_EQ(svc.citation_count(dir, doi), n) << doi;
                const auto expected = std::count_if(fx.edges.begin(), fx.edges.end(), [&](const auto& e) {
                    return (dir == Direction::Incoming ? e.second : e.first) == doi;
                });
                ASSERT_EQ(n, static_cast<std::size_t>(expected)) << doi;
            }
            const std::string count = svc.get(kBase + "/citation-count/" + doi).body;
            const auto list = json::parse(svc.get(kBase + "/citations/" + doi).body);
            ASSERT_EQ(json::parse(count)["count"].get<std::size_t>(), list.size());
        }
    }
}

// Eight routes by four formats on the paper fixture. Set OCINDEX_UPDATE_GOLDEN=1
// to rewrite the files after an intended change.
TEST(Golden, RoutesByFormats) {
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
    const bool update = std::getenv("OCINDEX_UPDATE_GOLDEN") != nullptr;
    const fs::path dir = OCINDEX_GOLDEN_DIR;
    const Service svc(fixture());
    for (const auto& [name, path] : routes) {
        for (const char* fmt : {"json", "csv", "scholix", "ntriples"}) {
            const std::string sep = path.find('?') == std::string::npos ? "?" : "&";
            const Response r = svc.get(kBase + path + sep + "format=" + fmt);
            const std::string got = dump(r);
            const fs::path file = dir / (name + "." + fmt);
            if (update) {
                fs::create_directories(dir);
                std::ofstream(file, std::ios::binary) << got;
                continue;
            }
            ASSERT_TRUE(fs::exists(file)) << file;
            EXPECT_EQ(got, read_file(file)) << file;
        }
    }
}
