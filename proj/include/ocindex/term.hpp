#ifndef OCINDEX_TERM_HPP
#define OCINDEX_TERM_HPP

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace ocindex {

/// RDF term: IRI, literal (with optional datatype or language) or blank node.
struct Term {
    enum class Kind : unsigned char { Iri, Literal, Blank };

    Kind kind = Kind::Iri;
    std::string value;
    std::string datatype;
    std::string lang;

    static Term iri(std::string v) { return {Kind::Iri, std::move(v), {}, {}}; }
    static Term literal(std::string v, std::string datatype = {}, std::string lang = {}) {
        return {Kind::Literal, std::move(v), std::move(datatype), std::move(lang)};
    }
    static Term blank(std::string label) { return {Kind::Blank, std::move(label), {}, {}}; }

    bool is_iri() const noexcept { return kind == Kind::Iri; }
    bool is_literal() const noexcept { return kind == Kind::Literal; }
    bool is_blank() const noexcept { return kind == Kind::Blank; }

    /// N-Triples rendering, e.g. `<http://x>`, `"a\"b"@en`, `_:b0`.
    std::string to_string() const;

    auto operator<=>(const Term&) const = default;
};

struct TermHash {
    std::size_t operator()(const Term& t) const noexcept;
};

/// Absolute IRI with no characters that the line format cannot carry.
bool is_valid_iri(std::string_view iri) noexcept;

/// Throws InvalidTerm.
void validate(const Term& term);

/// Statement with an optional named graph (nullopt = default graph).
struct Quad {
    Term subject;
    Term predicate;
    Term object;
    std::optional<Term> graph;

    auto operator<=>(const Quad&) const = default;
};

/// Throws InvalidTerm when a position holds the wrong kind of term.
void validate(const Quad& quad);

/// Escapes `"`, `\`, newline, carriage return and tab.
std::string escape_literal(std::string_view text);

} // namespace ocindex

#endif // OCINDEX_TERM_HPP
