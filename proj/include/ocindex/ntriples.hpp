#ifndef OCINDEX_NTRIPLES_HPP
#define OCINDEX_NTRIPLES_HPP

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ocindex/term.hpp"

namespace ocindex {

/// Parses one statement line. Blank and '#' comment lines yield nullopt.
/// Throws SyntaxError(line_no, column).
std::optional<Quad> parse_nquad_line(std::string_view line, std::size_t line_no = 1, bool allow_graph = true);

/// Streams statements to `sink`, one line at a time.
void read_nquads(std::istream& in, const std::function<void(Quad&&)>& sink, bool allow_graph = true);

std::vector<Quad> parse_nquads(std::string_view text);
std::vector<Quad> parse_ntriples(std::string_view text);

std::string quad_line(const Quad& quad);

/// Sorts by (graph, subject, predicate, object) term text and drops duplicates,
/// so equal quad sets give byte-identical output.
void sort_canonical(std::vector<Quad>& quads);

std::string serialize_nquads(std::vector<Quad> quads);
/// Graph names are dropped.
std::string serialize_ntriples(std::vector<Quad> quads);
void write_nquads(std::ostream& out, std::vector<Quad> quads);

} // namespace ocindex

#endif // OCINDEX_NTRIPLES_HPP
