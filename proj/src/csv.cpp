#include "ocindex/csv.hpp"

#include <istream>

#include "ocindex/error.hpp"

namespace ocindex::csv {

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += escape(fields[i]);
    }
    return out;
}

bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line) {
    fields.clear();
    if (in.peek() == std::char_traits<char>::eof()) {
        return false;
    }
    const std::size_t start = line + 1;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    ++line;
    for (int ch = in.get();; ch = in.get()) {
        if (ch == std::char_traits<char>::eof()) {
            if (quoted) {
                throw Error(Errc::ParseError, "unterminated quoted field starting on line " + std::to_string(start), start);
            }
            break;
        }
        const char c = static_cast<char>(ch);
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get();
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') {
                    ++line;
                }
                field += c;
            }
            continue;
        }
        if (c == '"' && field.empty() && !was_quoted) {
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            was_quoted = false;
        } else if (c == '\n') {
            break;
        } else if (c == '\r' && in.peek() == '\n') {
            continue;
        } else {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return true;
}

} // namespace ocindex::csv
