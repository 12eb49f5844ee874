#include "ocindex/term.hpp"

#include <cctype>
#include <functional>

#include "ocindex/error.hpp"

namespace ocindex {

std::string escape_literal(std::string_view text) {
    std::string out;
    out.reserve(text.size() + 2);
    for (char c : text) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

std::string Term::to_string() const {
    switch (kind) {
    case Kind::Iri:
        return "<" + value + ">";
    case Kind::Blank:
        return "_:" + value;
    case Kind::Literal: {
        std::string s = "\"" + escape_literal(value) + "\"";
        if (!datatype.empty()) {
            s += "^^<" + datatype + ">";
        } else if (!lang.empty()) {
            s += "@" + lang;
        }
        return s;
    }
    }
    return {};
}

std::size_t TermHash::operator()(const Term& t) const noexcept {
    std::size_t h = std::hash<std::string>{}(t.value);
    h ^= static_cast<std::size_t>(t.kind) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    if (!t.datatype.empty()) {
        h ^= std::hash<std::string>{}(t.datatype) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    if (!t.lang.empty()) {
        h ^= std::hash<std::string>{}(t.lang) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

bool is_valid_iri(std::string_view iri) noexcept {
    // scheme ":" ...
    const auto colon = iri.find(':');
    if (colon == std::string_view::npos || colon == 0 || !std::isalpha(static_cast<unsigned char>(iri[0]))) {
        return false;
    }
    for (std::size_t i = 1; i < colon; ++i) {
        const char c = iri[i];
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.')) {
            return false;
        }
    }
    for (char c : iri) {
        const auto u = static_cast<unsigned char>(c);
        if (u <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
            c == '`' || c == '\\') {
            return false;
        }
    }
    return true;
}

void validate(const Term& term) {
    switch (term.kind) {
    case Term::Kind::Iri:
        if (!is_valid_iri(term.value)) {
            throw Error(Errc::InvalidTerm, "not an absolute IRI: " + term.value);
        }
        break;
    case Term::Kind::Literal:
        if (!term.datatype.empty() && !term.lang.empty()) {
            throw Error(Errc::InvalidTerm, "literal has both datatype and language");
        }
        if (!term.datatype.empty() && !is_valid_iri(term.datatype)) {
            throw Error(Errc::InvalidTerm, "literal datatype is not an IRI: " + term.datatype);
        }
        for (char c : term.lang) {
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-')) {
                throw Error(Errc::InvalidTerm, "bad language tag: " + term.lang);
            }
        }
        break;
    case Term::Kind::Blank:
        if (term.value.empty()) {
            throw Error(Errc::InvalidTerm, "blank node without label");
        }
        for (char c : term.value) {
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
                throw Error(Errc::InvalidTerm, "bad blank node label: " + term.value);
            }
        }
        break;
    }
}

void validate(const Quad& quad) {
    validate(quad.subject);
    validate(quad.predicate);
    validate(quad.object);
    if (quad.subject.is_literal()) {
        throw Error(Errc::InvalidTerm, "literal in subject position");
    }
    if (!quad.predicate.is_iri()) {
        throw Error(Errc::InvalidTerm, "predicate must be an IRI");
    }
    if (quad.graph) {
        validate(*quad.graph);
        if (!quad.graph->is_iri()) {
            throw Error(Errc::InvalidTerm, "graph name must be an IRI");
        }
    }
}

} // namespace ocindex
