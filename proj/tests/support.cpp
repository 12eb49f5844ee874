#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "ocindex/ingestion.hpp"

namespace ocindex::testkit {

namespace chr = std::chrono;
using nlohmann::json;

namespace {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

chr::year_month_day to_ymd(const PartialDate& d) {
    return chr::year{d.year} / chr::month{static_cast<unsigned>(d.month.value_or(1))} /
           chr::day{static_cast<unsigned>(d.day.value_or(1))};
}

// Calendar month addition; an overflowing day falls back to the month's last day.
chr::year_month_day add_months_clamped(chr::year_month_day d, int k) {
    chr::year_month_day r = d + chr::months{k};
    if (!r.ok()) {
        r = chr::year_month_day_last(r.year(), chr::month_day_last(r.month()));
    }
    return r;
}

PartialDate truncate(const PartialDate& d, Precision p) {
    PartialDate out{d.year, std::nullopt, std::nullopt};
    if (p >= Precision::Month) {
        out.month = d.month;
    }
    if (p == Precision::Day) {
        out.day = d.day;
    }
    return out;
}

std::string render(const Term& t) {
    switch (t.kind) {
    case Term::Kind::Iri: return "<" + t.value + ">";
    case Term::Kind::Blank: return "_:" + t.value;
    case Term::Kind::Literal: break;
    }
    std::string s = "\"" + t.value + "\"";
    if (!t.datatype.empty()) {
        s += "^^<" + t.datatype + ">";
    }
    if (!t.lang.empty()) {
        s += "@" + t.lang;
    }
    return s;
}

std::optional<double> number(const std::string& s) {
    if (s.empty() || std::isspace(static_cast<unsigned char>(s.front()))) {
        return std::nullopt;
    }
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) {
        return std::nullopt;
    }
    return v;
}

bool oracle_filter(const Filter& f, const Term& t) {
    if (f.op == FilterOp::Eq) {
        return t.kind == f.value.kind && t.value == f.value.value && t.datatype == f.value.datatype &&
               t.lang == f.value.lang;
    }
    if (f.op == FilterOp::Ne) {
        return !(t.kind == f.value.kind && t.value == f.value.value && t.datatype == f.value.datatype &&
                 t.lang == f.value.lang);
    }
    if (f.op == FilterOp::Contains) {
        return t.value.find(f.value.value) != std::string::npos;
    }
    int cmp = 0;
    const auto a = number(t.value);
    const auto b = number(f.value.value);
    if (a && b) {
        cmp = (*a > *b) - (*a < *b);
    } else {
        cmp = (t.value > f.value.value) - (t.value < f.value.value);
    }
    switch (f.op) {
    case FilterOp::Lt: return cmp < 0;
    case FilterOp::Le: return cmp <= 0;
    case FilterOp::Gt: return cmp > 0;
    case FilterOp::Ge: return cmp >= 0;
    default: return false;
    }
}

const char* kEx = "http://example.org/";

Term ex(const std::string& local) { return Term::iri(kEx + local); }

} // namespace

std::string random_doi(Rng& rng, const std::string& alphabet) {
    std::string doi = "10." + std::to_string(uniform(rng, 1000, 99999)) + "/";
    const int n = uniform(rng, 1, 64);
    for (int i = 0; i < n; ++i) {
        doi += alphabet[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(alphabet.size()) - 1))];
    }
    return doi;
}

PartialDate random_partial_date(Rng& rng, int min_year, int max_year) {
    PartialDate d{uniform(rng, min_year, max_year), std::nullopt, std::nullopt};
    const int precision = uniform(rng, 0, 2);
    if (precision >= 1) {
        d.month = uniform(rng, 1, 12);
    }
    if (precision == 2) {
        const auto last = chr::year_month_day_last(chr::year{d.year}, chr::month_day_last(chr::month{
                                                                          static_cast<unsigned>(*d.month)}));
        const int days = static_cast<int>(static_cast<unsigned>(last.day()));
        // month ends are where clamping matters
        d.day = coin(rng, 0.3) ? days - uniform(rng, 0, 2) : uniform(rng, 1, days);
    }
    return d;
}

SignedDuration oracle_timespan(const PartialDate& citing, const PartialDate& cited) {
    const Precision p = std::min(citing.precision(), cited.precision());
    const PartialDate a = truncate(citing, p);
    const PartialDate b = truncate(cited, p);
    const chr::year_month_day ya = to_ymd(a);
    const chr::year_month_day yb = to_ymd(b);
    const bool negative = chr::sys_days(ya) < chr::sys_days(yb);
    const chr::year_month_day later = negative ? yb : ya;
    const chr::year_month_day earlier = negative ? ya : yb;

    SignedDuration d;
    d.precision = p;
    if (p == Precision::Year) {
        d.years = static_cast<int>(later.year()) - static_cast<int>(earlier.year());
    } else {
        int k = 0;
        if (p == Precision::Month) {
            chr::year_month ym = earlier.year() / earlier.month();
            while (ym < later.year() / later.month()) {
                ym += chr::months{1};
                ++k;
            }
        } else {
            while (chr::sys_days(add_months_clamped(earlier, k + 1)) <= chr::sys_days(later)) {
                ++k;
            }
            chr::sys_days step = add_months_clamped(earlier, k);
            while (step < chr::sys_days(later)) {
                step += chr::days{1};
                ++d.days;
            }
        }
        d.years = k / 12;
        d.months = k % 12;
    }
    d.negative = negative && !d.is_zero();
    return d;
}

std::vector<std::vector<Term>> oracle_evaluate(const std::vector<Quad>& quads, const Query& query) {
    struct Out {
        std::vector<std::string> key;
        std::vector<Term> row;
    };
    std::vector<Out> rows;
    std::map<std::string, Term> binding;

    const auto unify = [&](const PatternTerm& slot, const Term& value, std::vector<std::string>& fresh) {
        if (const auto* t = std::get_if<Term>(&slot)) {
            return *t == value;
        }
        const std::string& name = std::get<Variable>(slot).name;
        const auto it = binding.find(name);
        if (it != binding.end()) {
            return it->second == value;
        }
        binding.emplace(name, value);
        fresh.push_back(name);
        return true;
    };

    std::function<void(std::size_t)> step = [&](std::size_t i) {
        if (i == query.patterns.size()) {
            for (const auto& f : query.filters) {
                if (!oracle_filter(f, binding.at(f.variable))) {
                    return;
                }
            }
            Out o;
            for (const auto& v : query.projection) {
                o.row.push_back(binding.at(v));
                o.key.push_back(render(o.row.back()));
            }
            rows.push_back(std::move(o));
            return;
        }
        const TriplePattern& tp = query.patterns[i];
        for (const Quad& q : quads) {
            std::vector<std::string> fresh;
            if (unify(tp.subject, q.subject, fresh) && unify(tp.predicate, q.predicate, fresh) &&
                unify(tp.object, q.object, fresh)) {
                step(i + 1);
            }
            for (const auto& v : fresh) {
                binding.erase(v);
            }
        }
    };
    step(0);

    std::stable_sort(rows.begin(), rows.end(), [](const Out& x, const Out& y) { return x.key < y.key; });
    if (query.limit && rows.size() > *query.limit) {
        rows.resize(*query.limit);
    }
    std::vector<std::vector<Term>> out;
    for (auto& o : rows) {
        out.push_back(std::move(o.row));
    }
    return out;
}

std::string query_text(const Query& q) {
    static const char* ops[] = {"=", "!=", "<", "<=", ">", ">=", "CONTAINS"};
    const auto slot = [](const PatternTerm& t) {
        if (const auto* v = std::get_if<Variable>(&t)) {
            return "?" + v->name;
        }
        return render(std::get<Term>(t));
    };
    std::string s = "SELECT";
    for (const auto& v : q.projection) {
        s += " ?" + v;
    }
    s += " WHERE {\n";
    for (const auto& tp : q.patterns) {
        s += "  " + slot(tp.subject) + " " + slot(tp.predicate) + " " + slot(tp.object) + " .\n";
    }
    for (const auto& f : q.filters) {
        s += "  FILTER(?" + f.variable + " " + ops[static_cast<int>(f.op)] + " " + render(f.value) + ")\n";
    }
    s += "}";
    if (q.limit) {
        s += " LIMIT " + std::to_string(*q.limit);
    }
    return s;
}

RandomQueryCase random_query_case(Rng& rng, std::size_t max_quads) {
    static const std::vector<std::string> words = {"alpha", "beta", "gamma", "alphabet", "delta"};
    const auto random_object = [&]() -> Term {
        switch (uniform(rng, 0, 2)) {
        case 0: return ex("s" + std::to_string(uniform(rng, 0, 5)));
        case 1: return Term::literal(std::to_string(uniform(rng, 0, 20)));
        default: return Term::literal(words[static_cast<std::size_t>(uniform(rng, 0, 4))]);
        }
    };

    RandomQueryCase c;
    std::set<Quad> seen;
    const int n = uniform(rng, 0, static_cast<int>(max_quads));
    for (int i = 0; i < n; ++i) {
        Quad q{ex("s" + std::to_string(uniform(rng, 0, 5))), ex("p" + std::to_string(uniform(rng, 0, 2))),
               random_object(), std::nullopt};
        const int g = uniform(rng, 0, 4);
        if (g >= 3) {
            q.graph = ex("g" + std::to_string(g - 3));
        }
        if (seen.insert(q).second) {
            c.quads.push_back(q);
        }
    }

    static const std::vector<std::string> vars = {"a", "b", "c", "d"};
    std::vector<std::string> used;
    const auto slot = [&](double p_var, const std::function<Term()>& constant) -> PatternTerm {
        if (coin(rng, p_var)) {
            const std::string v = vars[static_cast<std::size_t>(uniform(rng, 0, 3))];
            if (std::find(used.begin(), used.end(), v) == used.end()) {
                used.push_back(v);
            }
            return Variable{v};
        }
        return constant();
    };
    const int patterns = uniform(rng, 1, 3);
    for (int i = 0; i < patterns; ++i) {
        TriplePattern tp{
            slot(0.6, [&] { return ex("s" + std::to_string(uniform(rng, 0, 5))); }),
            slot(0.3, [&] { return ex("p" + std::to_string(uniform(rng, 0, 2))); }),
            slot(0.6, random_object),
        };
        c.query.patterns.push_back(std::move(tp));
    }
    if (used.empty()) {
        c.query.patterns.front().subject = Variable{"a"};
        used.push_back("a");
    }
    std::shuffle(used.begin(), used.end(), rng);
    c.query.projection.assign(used.begin(), used.begin() + uniform(rng, 1, static_cast<int>(used.size())));

    const int filters = uniform(rng, 0, 2);
    for (int i = 0; i < filters; ++i) {
        Filter f;
        f.variable = used[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(used.size()) - 1))];
        f.op = static_cast<FilterOp>(uniform(rng, 0, 6));
        f.value = f.op == FilterOp::Contains ? Term::literal(coin(rng, 0.5) ? "al" : "1") : random_object();
        c.query.filters.push_back(std::move(f));
    }
    if (coin(rng, 0.2)) {
        c.query.limit = static_cast<std::size_t>(uniform(rng, 0, 10));
    }
    return c;
}

std::vector<HistoryStep> random_history(Rng& rng, const std::string& entity, std::size_t max_updates) {
    std::vector<Quad> pool;
    for (const std::string subject : {entity, entity + "/id/doi/10.1%2Fx", entity + "/ar/1"}) {
        for (int p = 0; p < 4; ++p) {
            for (int v = 0; v < 10; ++v) {
                pool.push_back(Quad{Term::iri(subject), ex("p" + std::to_string(p)),
                                    Term::literal("v" + std::to_string(v)), std::nullopt});
            }
        }
    }

    // sub-entities only belong to the snapshot while linked from the root
    const std::vector<Quad> links{
        Quad{Term::iri(entity), ex("link"), Term::iri(entity + "/id/doi/10.1%2Fx"), std::nullopt},
        Quad{Term::iri(entity), ex("link"), Term::iri(entity + "/ar/1"), std::nullopt}};

    std::vector<HistoryStep> steps;
    std::set<Quad> state(links.begin(), links.end());
    Timestamp t = fixed_time(uniform(rng, 0, 1000));
    const int initial = uniform(rng, 1, 8);
    for (int i = 0; i < initial; ++i) {
        state.insert(pool[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(pool.size()) - 1))]);
    }
    steps.push_back({t, {state.begin(), state.end()}, {}});

    const int updates = uniform(rng, 0, static_cast<int>(max_updates));
    for (int u = 0; u < updates; ++u) {
        Delta d;
        for (const Quad& q : state) {
            if (coin(rng, 0.2) && q.predicate != ex("link")) {
                d.removed.push_back(q);
            }
        }
        const int adds = uniform(rng, 0, 3);
        for (int i = 0; i < adds; ++i) {
            const Quad& q = pool[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(pool.size()) - 1))];
            if (state.count(q) == 0 && std::find(d.added.begin(), d.added.end(), q) == d.added.end()) {
                d.added.push_back(q);
            }
        }
        for (const Quad& q : d.removed) {
            state.erase(q);
        }
        state.insert(d.added.begin(), d.added.end());
        t += chr::seconds{uniform(rng, 1, 1000)};
        steps.push_back({t, {state.begin(), state.end()}, std::move(d)});
    }
    return steps;
}

WorksFixture make_works_fixture(std::uint64_t seed, std::size_t works, std::size_t edges) {
    Rng rng(seed);
    WorksFixture fx;
    for (std::size_t i = 0; i < works; ++i) {
        fx.dois.push_back("10.9999/w" + std::to_string(seed) + "." + std::to_string(i));
    }
    std::map<std::size_t, std::vector<std::size_t>> refs;
    while (fx.edges.size() < edges) {
        const auto a = static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(works) - 1));
        const auto b = static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(works) - 1));
        if (a != b && fx.edges.emplace(fx.dois[a], fx.dois[b]).second) {
            refs[a].push_back(b);
        }
    }

    static const std::vector<std::string> journals = {"Journal of Tests", "Fixture Letters", "Synthetic Review"};
    static const std::vector<std::string> issns = {"1234-5679", "2049-3630", "0378-5955"};
    std::ostringstream out;
    for (std::size_t i = 0; i < works; ++i) {
        json w;
        w["DOI"] = fx.dois[i];
        w["title"] = json::array({"Synthetic work number " + std::to_string(i)});
        json parts = json::array({uniform(rng, 1995, 2020)});
        if (coin(rng, 0.8)) {
            parts.push_back(uniform(rng, 1, 12));
            if (coin(rng, 0.7)) {
                parts.push_back(uniform(rng, 1, 28));
            }
        }
        w["issued"] = {{"date-parts", json::array({parts})}};
        const auto j = static_cast<std::size_t>(uniform(rng, 0, 2));
        w["container-title"] = json::array({journals[j]});
        w["ISSN"] = json::array({issns[j]});
        json authors = json::array();
        const int n_authors = uniform(rng, 0, 3);
        for (int a = 0; a < n_authors; ++a) {
            json au = {{"family", "Author" + std::to_string(uniform(rng, 0, 9))}, {"given", "Test"}};
            authors.push_back(au);
        }
        w["author"] = authors;
        json reference = json::array();
        for (std::size_t b : refs[i]) {
            std::string doi = fx.dois[b];
            if (coin(rng, 0.1)) {
                std::transform(doi.begin(), doi.end(), doi.begin(), [](unsigned char c) { return std::toupper(c); });
            } else if (coin(rng, 0.1)) {
                doi = "https://doi.org/" + doi;
            }
            reference.push_back({{"key", "ref" + std::to_string(b)}, {"DOI", doi}});
        }
        if (coin(rng, 0.3)) {
            reference.push_back({{"key", "raw"}, {"unstructured", "Anonymous. Unindexed pamphlet " + std::to_string(i)}});
            ++fx.unresolved;
        }
        w["reference"] = reference;
        out << w.dump() << '\n';
    }
    fx.jsonl = out.str();
    return fx;
}

std::string make_citation_csv(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    const std::size_t m = n / 4 + 2;
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    std::ostringstream out;
    out << "citing_id,cited_id\n";
    while (pairs.size() < n) {
        const auto a = static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(m) - 1));
        const auto b = static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(m) - 1));
        if (a != b && pairs.emplace(a, b).second) {
            out << "10.7777/c." << a << ",10.7777/c." << b << '\n';
        }
    }
    return out.str();
}

std::string paper_fixture_jsonl() {
    const json a = {
        {"DOI", kDoiA},
        {"title", {"Open citation identifiers in hematology"}},
        {"issued", {{"date-parts", {{2013, 12, 5}}}}},
        {"container-title", {"Journal of Hematology & Oncology"}},
        {"ISSN", {"1756-8722"}},
        {"author", {{{"family", "Peroni"}, {"given", "Silvio"}, {"ORCID", "http://orcid.org/0000-0003-0530-4305"}}}},
        {"reference",
         {{{"key", "b1"}, {"DOI", kDoiB}},
          {{"key", "b2"}, {"unstructured", "Smith J. An unindexed report. 2010."}}}},
    };
    const json b = {
        {"DOI", kDoiB},
        {"title", {"Persistent links between scholarly works"}},
        {"issued", {{"date-parts", {{2012, 11, 16}}}}},
        {"container-title", {"Journal of Hematology & Oncology"}},
        {"ISSN", {"1756-8722"}},
        {"author",
         {{{"family", "Peroni"}, {"given", "Silvio"}, {"ORCID", "0000-0003-0530-4305"}},
          {{"family", "Shotton"}, {"given", "David"}}}},
    };
    const json c = {
        {"DOI", kDoiC},
        {"title", {"Citations as first-class data entities"}},
        {"issued", {{"date-parts", {{2015, 3}}}}},
        {"container-title", {"Data Science"}},
        {"ISSN", {"2451-8484"}},
        {"author", {{{"family", "Shotton"}, {"given", "David"}, {"ORCID", "0000-0001-5506-523X"}}}},
        {"reference", {{{"key", "c1"}, {"DOI", kDoiA}}, {{"key", "c2"}, {"DOI", kDoiB}}}},
    };
    return a.dump() + "\n" + b.dump() + "\n" + c.dump() + "\n";
}

Timestamp fixed_time(int offset_seconds) {
    return chr::sys_days{chr::year{2019} / 11 / 4} + chr::hours{10} + chr::minutes{15} + chr::seconds{offset_seconds};
}

void load_paper_fixture(Dataset& ds) {
    std::istringstream in(paper_fixture_jsonl());
    IngestOptions opts;
    opts.source = "https://example.org/fixture/works.jsonl";
    opts.at = fixed_time();
    ingest_works(ds, in, opts);
}

} // namespace ocindex::testkit
