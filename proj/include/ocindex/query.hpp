#ifndef OCINDEX_QUERY_HPP
#define OCINDEX_QUERY_HPP

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ocindex/store.hpp"
#include "ocindex/term.hpp"

namespace ocindex {

struct Variable {
    std::string name; ///< without the leading '?'
    bool operator==(const Variable&) const = default;
};

using PatternTerm = std::variant<Term, Variable>;

struct TriplePattern {
    PatternTerm subject;
    PatternTerm predicate;
    PatternTerm object;
};

enum class FilterOp { Eq, Ne, Lt, Le, Gt, Ge, Contains };

struct Filter {
    std::string variable;
    FilterOp op = FilterOp::Eq;
    Term value;
};

/// SELECT-only basic graph pattern query with filters and a limit.
/// Triple patterns match quads in any graph.
struct Query {
    std::vector<std::string> projection;
    std::vector<TriplePattern> patterns;
    std::vector<Filter> filters;
    std::optional<std::size_t> limit;
};

/// Rows sorted by the N-Triples text of the projected terms, leftmost first.
struct BindingSet {
    std::vector<std::string> variables;
    std::vector<std::vector<Term>> rows;
};

/// Grammar:
///   query   := "SELECT" var+ "WHERE" "{" (pattern ".")+ filter* "}" ("LIMIT" int)?
///   pattern := term term term
///   filter  := "FILTER(" var op (literal|iri) ")"
///   op      := = | != | < | <= | > | >= | CONTAINS
/// IRIs written as <prefix:local> are expanded for the built-in namespaces.
/// Throws SyntaxError(line, column) or UnboundVariable.
Query parse_query(std::string_view text);

/// Comparison semantics shared by the engine: = and != compare terms;
/// ordering compares numerically when both lexical forms are numbers,
/// otherwise by lexical form; CONTAINS is a substring test on lexical forms.
bool filter_accepts(const Filter& filter, const Term& bound);

BindingSet evaluate(const StoreReader& reader, const Query& query);
BindingSet evaluate(const QuadStore& store, const Query& query);

} // namespace ocindex

#endif // OCINDEX_QUERY_HPP
