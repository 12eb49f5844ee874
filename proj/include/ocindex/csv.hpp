#ifndef OCINDEX_CSV_HPP
#define OCINDEX_CSV_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ocindex::csv {

/// Quotes the field when it holds a comma, quote, CR or LF.
std::string escape(std::string_view field);
std::string join(const std::vector<std::string>& fields);

/// Reads one record (quoted fields may span lines). `line` is advanced by the
/// number of physical lines consumed. Returns false at end of input.
/// Throws ParseError on an unterminated quote.
bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line);

} // namespace ocindex::csv

#endif // OCINDEX_CSV_HPP
