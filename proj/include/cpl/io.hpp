#pragma once

#include <iosfwd>
#include <string>

#include "cpl/polyhedron.hpp"
#include "cpl/random_sums.hpp"
#include "cpl/rare_events.hpp"

namespace cpl {

// Shortest decimal that round-trips to the same double.
std::string format_double(double v);
double parse_double(const std::string& s);

// Distribution literal:
//   dim <d>
//   <x1> ... <xd> <mass>
// '#' starts a comment, blank lines ignored.
std::string emit_distribution(const DiscreteDistribution& f);
DiscreteDistribution parse_distribution(std::istream& in);
DiscreteDistribution parse_distribution_text(const std::string& text);
DiscreteDistribution load_distribution(const std::string& path);

// Polyhedron literal:
//   m <count>
//   <t coords...> <b|inf>
std::string emit_polyhedron(const Polyhedron& p);
Polyhedron parse_polyhedron(std::istream& in);
Polyhedron parse_polyhedron_text(const std::string& text);
Polyhedron load_polyhedron(const std::string& path);

// Integer pmf: one "k mass" pair per line.
std::string emit_integer_pmf(const IntegerPmf& u);
IntegerPmf parse_integer_pmf(std::istream& in);
IntegerPmf load_integer_pmf(const std::string& path);

// Rare-event model config:
//   n <count>
// then per entry either
//   p <value> file <path-to-distribution-literal>
// or
//   p <value> inline
//   ... distribution literal lines ...
//   end
RareEventModel parse_model(std::istream& in, const std::string& base_dir);
RareEventModel load_model(const std::string& path);

// Writes text via a temp file + atomic rename; no partial output on error.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace cpl
