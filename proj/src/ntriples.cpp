#include "ocindex/ntriples.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

#include "ocindex/error.hpp"

namespace ocindex {

namespace {

class LineParser {
public:
    LineParser(std::string_view line, std::size_t line_no) : s_(line), line_no_(line_no) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw Error(Errc::SyntaxError, "line " + std::to_string(line_no_) + ", column " + std::to_string(pos_ + 1) +
                                           ": " + what,
                    line_no_, pos_ + 1);
    }

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) {
            ++pos_;
        }
    }

    bool at_end() const { return pos_ >= s_.size(); }
    char peek() const { return at_end() ? '\0' : s_[pos_]; }

    std::string iri() {
        ++pos_; // '<'
        const auto close = s_.find('>', pos_);
        if (close == std::string_view::npos) {
            fail("unterminated IRI");
        }
        std::string v(s_.substr(pos_, close - pos_));
        pos_ = close + 1;
        if (!is_valid_iri(v)) {
            fail("invalid IRI <" + v + ">");
        }
        return v;
    }

    static void append_utf8(std::string& out, unsigned long cp) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
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
            if (c != '\\') {
                v.push_back(c);
                continue;
            }
            if (at_end()) {
                fail("dangling escape");
            }
            const char e = s_[pos_++];
            switch (e) {
            case '"': v.push_back('"'); break;
            case '\\': v.push_back('\\'); break;
            case 'n': v.push_back('\n'); break;
            case 'r': v.push_back('\r'); break;
            case 't': v.push_back('\t'); break;
            case 'u':
            case 'U': {
                const std::size_t len = e == 'u' ? 4 : 8;
                if (pos_ + len > s_.size()) {
                    fail("short unicode escape");
                }
                unsigned long cp = 0;
                for (std::size_t i = 0; i < len; ++i) {
                    const char h = s_[pos_ + i];
                    if (!std::isxdigit(static_cast<unsigned char>(h))) {
                        fail("bad unicode escape");
                    }
                    cp = cp * 16 + static_cast<unsigned long>(std::isdigit(static_cast<unsigned char>(h))
                                                                  ? h - '0'
                                                                  : std::tolower(static_cast<unsigned char>(h)) - 'a' + 10);
                }
                pos_ += len;
                append_utf8(v, cp);
                break;
            }
            default:
                fail(std::string("unknown escape \\") + e);
            }
        }
        if (peek() == '^') {
            if (s_.substr(pos_, 3) != "^^<") {
                fail("expected ^^<datatype>");
            }
            pos_ += 2;
            return Term::literal(std::move(v), iri());
        }
        if (peek() == '@') {
            ++pos_;
            const auto start = pos_;
            while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-')) {
                ++pos_;
            }
            if (pos_ == start) {
                fail("empty language tag");
            }
            return Term::literal(std::move(v), {}, std::string(s_.substr(start, pos_ - start)));
        }
        return Term::literal(std::move(v));
    }

    Term blank() {
        if (s_.substr(pos_, 2) != "_:") {
            fail("expected blank node");
        }
        pos_ += 2;
        const auto start = pos_;
        while (!at_end() &&
               (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-' || peek() == '.')) {
            ++pos_;
        }
        // a trailing '.' belongs to the statement terminator
        while (pos_ > start && s_[pos_ - 1] == '.') {
            --pos_;
        }
        if (pos_ == start) {
            fail("empty blank node label");
        }
        return Term::blank(std::string(s_.substr(start, pos_ - start)));
    }

    Term term(bool allow_literal) {
        skip_ws();
        switch (peek()) {
        case '<': return Term::iri(iri());
        case '_': return blank();
        case '"':
            if (!allow_literal) {
                fail("literal not allowed here");
            }
            return literal();
        default: fail("expected a term");
        }
    }

    Quad statement(bool allow_graph) {
        Quad q;
        q.subject = term(false);
        skip_ws();
        if (peek() != '<') {
            fail("predicate must be an IRI");
        }
        q.predicate = term(false);
        q.object = term(true);
        skip_ws();
        if (peek() == '<') {
            if (!allow_graph) {
                fail("graph column not allowed in N-Triples");
            }
            q.graph = term(false);
            skip_ws();
        }
        if (peek() != '.') {
            fail("expected '.'");
        }
        ++pos_;
        skip_ws();
        if (!at_end() && peek() != '#') {
            fail("trailing content after '.'");
        }
        return q;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
    std::size_t line_no_;
};

void parse_text(std::string_view text, bool allow_graph, std::vector<Quad>& out) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (auto q = parse_nquad_line(line, ++line_no, allow_graph)) {
            out.push_back(std::move(*q));
        }
    }
}

} // namespace

std::optional<Quad> parse_nquad_line(std::string_view line, std::size_t line_no, bool allow_graph) {
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') {
        return std::nullopt;
    }
    LineParser p(line, line_no);
    Quad q = p.statement(allow_graph);
    try {
        validate(q);
    } catch (const Error& e) {
        throw Error(Errc::SyntaxError, "line " + std::to_string(line_no) + ": " + e.what(), line_no, 1);
    }
    return q;
}

void read_nquads(std::istream& in, const std::function<void(Quad&&)>& sink, bool allow_graph) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        if (auto q = parse_nquad_line(line, ++line_no, allow_graph)) {
            sink(std::move(*q));
        }
    }
}

std::vector<Quad> parse_nquads(std::string_view text) {
    std::vector<Quad> out;
    parse_text(text, true, out);
    return out;
}

std::vector<Quad> parse_ntriples(std::string_view text) {
    std::vector<Quad> out;
    parse_text(text, false, out);
    return out;
}

std::string quad_line(const Quad& quad) {
    std::string s = quad.subject.to_string();
    s += ' ';
    s += quad.predicate.to_string();
    s += ' ';
    s += quad.object.to_string();
    if (quad.graph) {
        s += ' ';
        s += quad.graph->to_string();
    }
    s += " .";
    return s;
}

void sort_canonical(std::vector<Quad>& quads) {
    struct Keyed {
        std::string g, s, p, o;
        Quad* quad;
    };
    std::vector<Keyed> keyed;
    keyed.reserve(quads.size());
    for (auto& q : quads) {
        keyed.push_back({q.graph ? q.graph->to_string() : std::string(), q.subject.to_string(),
                         q.predicate.to_string(), q.object.to_string(), &q});
    }
    std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
        return std::tie(a.g, a.s, a.p, a.o) < std::tie(b.g, b.s, b.p, b.o);
    });
    std::vector<Quad> sorted;
    sorted.reserve(quads.size());
    for (std::size_t i = 0; i < keyed.size(); ++i) {
        if (i > 0 && std::tie(keyed[i].g, keyed[i].s, keyed[i].p, keyed[i].o) ==
                         std::tie(keyed[i - 1].g, keyed[i - 1].s, keyed[i - 1].p, keyed[i - 1].o)) {
            continue;
        }
        sorted.push_back(std::move(*keyed[i].quad));
    }
    quads = std::move(sorted);
}

void write_nquads(std::ostream& out, std::vector<Quad> quads) {
    sort_canonical(quads);
    for (const auto& q : quads) {
        out << quad_line(q) << '\n';
    }
}

std::string serialize_nquads(std::vector<Quad> quads) {
    std::ostringstream out;
    write_nquads(out, std::move(quads));
    return out.str();
}

std::string serialize_ntriples(std::vector<Quad> quads) {
    for (auto& q : quads) {
        q.graph.reset();
    }
    return serialize_nquads(std::move(quads));
}

} // namespace ocindex
