#include "ocindex/query.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>

#include "ocindex/error.hpp"
#include "ocindex/vocab.hpp"

namespace ocindex {

namespace {

class QueryParser {
public:
    explicit QueryParser(std::string_view text) : s_(text) {}

    Query parse() {
        Query q;
        expect_keyword("SELECT");
        skip_ws();
        while (peek() == '?') {
            q.projection.push_back(variable());
            skip_ws();
        }
        if (q.projection.empty()) {
            fail("expected at least one ?variable after SELECT");
        }
        expect_keyword("WHERE");
        expect_char('{');
        for (;;) {
            skip_ws();
            if (peek() == '}') {
                break;
            }
            if (at_keyword("FILTER")) {
                q.filters.push_back(filter());
                continue;
            }
            if (!q.filters.empty()) {
                fail("triple patterns must precede filters");
            }
            TriplePattern p;
            p.subject = pattern_term(false);
            p.predicate = pattern_term(true);
            p.object = pattern_term(false);
            skip_ws();
            if (peek() == '.') {
                ++pos_;
            } else if (peek() != '}' && !at_keyword("FILTER")) {
                fail("expected '.' after triple pattern");
            }
            q.patterns.push_back(std::move(p));
        }
        expect_char('}');
        if (q.patterns.empty()) {
            fail("WHERE block needs at least one triple pattern");
        }
        skip_ws();
        if (at_keyword("LIMIT")) {
            expect_keyword("LIMIT");
            skip_ws();
            const auto start = pos_;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                ++pos_;
            }
            if (start == pos_) {
                fail("LIMIT needs a non-negative integer");
            }
            std::size_t n = 0;
            std::from_chars(s_.data() + start, s_.data() + pos_, n);
            q.limit = n;
        }
        skip_ws();
        if (!at_end()) {
            fail("unexpected trailing input");
        }
        check_bound(q);
        return q;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        std::size_t line = 1;
        std::size_t col = 1;
        for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i) {
            if (s_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw Error(Errc::SyntaxError,
                    "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what, line, col);
    }

    bool at_end() const { return pos_ >= s_.size(); }
    char peek(std::size_t ahead = 0) const { return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0'; }

    void skip_ws() {
        for (;;) {
            while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) {
                ++pos_;
            }
            if (peek() != '#') {
                return;
            }
            while (!at_end() && peek() != '\n') {
                ++pos_;
            }
        }
    }

    bool at_keyword(std::string_view kw) const {
        if (pos_ + kw.size() > s_.size()) {
            return false;
        }
        for (std::size_t i = 0; i < kw.size(); ++i) {
            if (std::toupper(static_cast<unsigned char>(s_[pos_ + i])) != kw[i]) {
                return false;
            }
        }
        const char next = peek(kw.size());
        return !(std::isalnum(static_cast<unsigned char>(next)) || next == '_');
    }

    void expect_keyword(std::string_view kw) {
        skip_ws();
        if (!at_keyword(kw)) {
            fail("expected " + std::string(kw));
        }
        pos_ += kw.size();
    }

    void expect_char(char c) {
        skip_ws();
        if (peek() != c) {
            fail(std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    std::string variable() {
        ++pos_; // '?'
        const auto start = pos_;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
            ++pos_;
        }
        if (start == pos_) {
            fail("empty variable name");
        }
        return std::string(s_.substr(start, pos_ - start));
    }

    std::string iri_body() {
        ++pos_; // '<'
        const auto close = s_.find('>', pos_);
        if (close == std::string_view::npos) {
            fail("unterminated IRI");
        }
        const auto body = s_.substr(pos_, close - pos_);
        for (char c : body) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                fail("whitespace inside IRI");
            }
        }
        pos_ = close + 1;
        return vocab::expand_curie(body);
    }

    Term literal() {
        ++pos_; // '"'
        std::string v;
        for (;;) {
            if (at_end()) {
                fail("unterminated literal");
            }
            const char c = s_[pos_++];
            if (c == '"') {
                break;
            }
            if (c == '\\') {
                const char e = peek();
                ++pos_;
                switch (e) {
                case '"': v.push_back('"'); break;
                case '\\': v.push_back('\\'); break;
                case 'n': v.push_back('\n'); break;
                case 't': v.push_back('\t'); break;
                case 'r': v.push_back('\r'); break;
                default: fail("unknown escape in literal");
                }
                continue;
            }
            v.push_back(c);
        }
        if (peek() == '^' && peek(1) == '^') {
            pos_ += 2;
            if (peek() != '<') {
                fail("expected datatype IRI");
            }
            return Term::literal(std::move(v), iri_body());
        }
        if (peek() == '@') {
            ++pos_;
            const auto start = pos_;
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-') {
                ++pos_;
            }
            return Term::literal(std::move(v), {}, std::string(s_.substr(start, pos_ - start)));
        }
        return Term::literal(std::move(v));
    }

    Term number() {
        const auto start = pos_;
        if (peek() == '-' || peek() == '+') {
            ++pos_;
        }
        bool dot = false;
        while (std::isdigit(static_cast<unsigned char>(peek())) || (!dot && peek() == '.' &&
                                                                    std::isdigit(static_cast<unsigned char>(peek(1))))) {
            dot = dot || peek() == '.';
            ++pos_;
        }
        if (pos_ == start) {
            fail("expected a term");
        }
        return Term::literal(std::string(s_.substr(start, pos_ - start)),
                             dot ? vocab::iri(vocab::kXsd, "decimal") : vocab::kXsdInteger);
    }

    Term constant() {
        switch (peek()) {
        case '<': return Term::iri(iri_body());
        case '"': return literal();
        case '_': {
            if (peek(1) != ':') {
                fail("expected blank node");
            }
            pos_ += 2;
            const auto start = pos_;
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-') {
                ++pos_;
            }
            return Term::blank(std::string(s_.substr(start, pos_ - start)));
        }
        default: return number();
        }
    }

    PatternTerm pattern_term(bool predicate) {
        skip_ws();
        if (peek() == '?') {
            return Variable{variable()};
        }
        if (predicate && peek() == 'a' && std::isspace(static_cast<unsigned char>(peek(1)))) {
            ++pos_;
            return Term::iri(vocab::kType);
        }
        if (at_end() || peek() == '}' || peek() == '.') {
            fail("expected a term");
        }
        return constant();
    }

    Filter filter() {
        expect_keyword("FILTER");
        expect_char('(');
        skip_ws();
        if (peek() != '?') {
            fail("FILTER must start with a ?variable");
        }
        Filter f;
        f.variable = variable();
        skip_ws();
        if (peek() == '!' && peek(1) == '=') {
            f.op = FilterOp::Ne;
            pos_ += 2;
        } else if (peek() == '<' && peek(1) == '=') {
            f.op = FilterOp::Le;
            pos_ += 2;
        } else if (peek() == '>' && peek(1) == '=') {
            f.op = FilterOp::Ge;
            pos_ += 2;
        } else if (peek() == '<') {
            f.op = FilterOp::Lt;
            ++pos_;
        } else if (peek() == '>') {
            f.op = FilterOp::Gt;
            ++pos_;
        } else if (peek() == '=') {
            f.op = FilterOp::Eq;
            ++pos_;
        } else if (at_keyword("CONTAINS")) {
            f.op = FilterOp::Contains;
            pos_ += 8;
        } else {
            fail("expected a comparison operator");
        }
        skip_ws();
        if (peek() == '?') {
            fail("FILTER compares a variable with a constant");
        }
        f.value = constant();
        expect_char(')');
        return f;
    }

    static void check_bound(const Query& q) {
        std::set<std::string> seen;
        for (const auto& p : q.patterns) {
            for (const auto* t : {&p.subject, &p.predicate, &p.object}) {
                if (const auto* v = std::get_if<Variable>(t)) {
                    seen.insert(v->name);
                }
            }
        }
        for (const auto& v : q.projection) {
            if (seen.count(v) == 0) {
                throw Error(Errc::UnboundVariable, "?" + v + " does not occur in any triple pattern");
            }
        }
        for (const auto& f : q.filters) {
            if (seen.count(f.variable) == 0) {
                throw Error(Errc::UnboundVariable, "?" + f.variable + " does not occur in any triple pattern");
            }
        }
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

std::optional<double> as_number(const std::string& s) {
    if (s.empty()) {
        return std::nullopt;
    }
    const char* first = s.data();
    if (*first == '+') {
        ++first;
    }
    double v = 0;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

// Pattern slot: a constant id or a variable index.
struct Slot {
    bool is_var = false;
    TermId id = 0;
    std::size_t var = 0;
};

struct Compiled {
    std::array<Slot, 3> slots;
};

class Evaluator {
public:
    Evaluator(const StoreReader& reader, const Query& query) : reader_(reader), query_(query) {}

    BindingSet run() {
        BindingSet out;
        out.variables = query_.projection;
        if (!compile()) {
            return out;
        }
        plan();
        binding_.assign(var_names_.size(), 0);
        join(0);

        struct Row {
            std::vector<Term> terms;
            std::vector<std::string> text;
        };
        std::vector<Row> sorted;
        sorted.reserve(rows_.size());
        for (const auto& ids : rows_) {
            Row r;
            for (TermId id : ids) {
                r.terms.push_back(reader_.lookup(id));
                r.text.push_back(r.terms.back().to_string());
            }
            sorted.push_back(std::move(r));
        }
        std::stable_sort(sorted.begin(), sorted.end(), [](const Row& a, const Row& b) { return a.text < b.text; });
        const std::size_t n = query_.limit ? std::min(*query_.limit, sorted.size()) : sorted.size();
        out.rows.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            out.rows.push_back(std::move(sorted[i].terms));
        }
        return out;
    }

private:
    std::size_t var_index(const std::string& name) {
        auto [it, fresh] = var_ids_.try_emplace(name, var_names_.size());
        if (fresh) {
            var_names_.push_back(name);
        }
        return it->second;
    }

    // False when some constant never occurs in the store.
    bool compile() {
        bool satisfiable = true;
        for (const auto& p : query_.patterns) {
            Compiled c;
            const PatternTerm* terms[3] = {&p.subject, &p.predicate, &p.object};
            for (int i = 0; i < 3; ++i) {
                if (const auto* v = std::get_if<Variable>(terms[i])) {
                    c.slots[i].is_var = true;
                    c.slots[i].var = var_index(v->name);
                } else {
                    const auto id = reader_.find(std::get<Term>(*terms[i]));
                    if (!id) {
                        satisfiable = false;
                    } else {
                        c.slots[i].id = *id;
                    }
                }
            }
            patterns_.push_back(c);
        }
        for (const auto& v : query_.projection) {
            projection_.push_back(var_index(v));
        }
        return satisfiable;
    }

    // Greedy: cheapest pattern first, then prefer patterns joined to what is bound.
    void plan() {
        std::vector<std::size_t> cost(patterns_.size());
        for (std::size_t i = 0; i < patterns_.size(); ++i) {
            IdPattern ids;
            for (int k = 0; k < 3; ++k) {
                if (!patterns_[i].slots[k].is_var) {
                    ids[k] = patterns_[i].slots[k].id;
                }
            }
            cost[i] = reader_.count(ids);
        }
        std::vector<bool> used(patterns_.size(), false);
        std::set<std::size_t> bound;
        for (std::size_t step = 0; step < patterns_.size(); ++step) {
            std::size_t best = patterns_.size();
            std::pair<int, std::size_t> best_key{2, SIZE_MAX};
            for (std::size_t i = 0; i < patterns_.size(); ++i) {
                if (used[i]) {
                    continue;
                }
                bool joined = false;
                for (const auto& s : patterns_[i].slots) {
                    joined = joined || (s.is_var && bound.count(s.var) != 0);
                }
                const std::pair<int, std::size_t> key{bound.empty() || joined ? 0 : 1, cost[i]};
                if (key < best_key) {
                    best_key = key;
                    best = i;
                }
            }
            used[best] = true;
            order_.push_back(best);
            for (const auto& s : patterns_[best].slots) {
                if (s.is_var) {
                    bound.insert(s.var);
                }
            }
        }
        // Each filter runs right after the step that first binds its variable.
        filters_at_.assign(order_.size(), {});
        for (const auto& f : query_.filters) {
            const std::size_t v = var_ids_.at(f.variable);
            for (std::size_t step = 0; step < order_.size(); ++step) {
                const auto& slots = patterns_[order_[step]].slots;
                if (std::any_of(slots.begin(), slots.end(), [&](const Slot& s) { return s.is_var && s.var == v; })) {
                    filters_at_[step].push_back(&f);
                    break;
                }
            }
        }
    }

    void join(std::size_t step) {
        if (step == order_.size()) {
            std::vector<TermId> row;
            row.reserve(projection_.size());
            for (std::size_t v : projection_) {
                row.push_back(binding_[v]);
            }
            rows_.push_back(std::move(row));
            return;
        }
        const Compiled& c = patterns_[order_[step]];
        IdPattern ids;
        for (int k = 0; k < 3; ++k) {
            const Slot& s = c.slots[k];
            if (!s.is_var) {
                ids[k] = s.id;
            } else if (binding_[s.var] != 0) {
                ids[k] = binding_[s.var];
            }
        }
        std::vector<IdQuad> hits;
        reader_.for_each(ids, [&](const IdQuad& q) { hits.push_back(q); });
        for (const IdQuad& q : hits) {
            std::vector<std::size_t> newly;
            bool ok = true;
            for (int k = 0; k < 3 && ok; ++k) {
                const Slot& s = c.slots[k];
                if (!s.is_var) {
                    continue;
                }
                if (binding_[s.var] == 0) {
                    binding_[s.var] = q[k];
                    newly.push_back(s.var);
                } else if (binding_[s.var] != q[k]) {
                    ok = false;
                }
            }
            for (const Filter* f : filters_at_[step]) {
                if (!ok) {
                    break;
                }
                ok = filter_accepts(*f, reader_.lookup(binding_[var_ids_.at(f->variable)]));
            }
            if (ok) {
                join(step + 1);
            }
            for (std::size_t v : newly) {
                binding_[v] = 0;
            }
        }
    }

    const StoreReader& reader_;
    const Query& query_;
    std::map<std::string, std::size_t> var_ids_;
    std::vector<std::string> var_names_;
    std::vector<Compiled> patterns_;
    std::vector<std::size_t> projection_;
    std::vector<std::size_t> order_;
    std::vector<std::vector<const Filter*>> filters_at_;
    std::vector<TermId> binding_;
    std::vector<std::vector<TermId>> rows_;
};

} // namespace

Query parse_query(std::string_view text) {
    return QueryParser(text).parse();
}

bool filter_accepts(const Filter& filter, const Term& bound) {
    switch (filter.op) {
    case FilterOp::Eq: return bound == filter.value;
    case FilterOp::Ne: return bound != filter.value;
    case FilterOp::Contains: return bound.value.find(filter.value.value) != std::string::npos;
    default: break;
    }
    int cmp = 0;
    const auto a = as_number(bound.value);
    const auto b = as_number(filter.value.value);
    if (a && b) {
        cmp = *a < *b ? -1 : (*a > *b ? 1 : 0);
    } else {
        cmp = bound.value.compare(filter.value.value);
        cmp = cmp < 0 ? -1 : (cmp > 0 ? 1 : 0);
    }
    switch (filter.op) {
    case FilterOp::Lt: return cmp < 0;
    case FilterOp::Le: return cmp <= 0;
    case FilterOp::Gt: return cmp > 0;
    case FilterOp::Ge: return cmp >= 0;
    default: return false;
    }
}

BindingSet evaluate(const StoreReader& reader, const Query& query) {
    return Evaluator(reader, query).run();
}

BindingSet evaluate(const QuadStore& store, const Query& query) {
    const auto reader = store.read();
    return evaluate(reader, query);
}

} // namespace ocindex
