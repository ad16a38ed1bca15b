#pragma once

#include <string>
#include <vector>

#include "cpl/error.hpp"

namespace cpl {

enum class DistanceProvenance { exact, certified_lower_bound, monte_carlo };

std::string to_string(DistanceProvenance mode);
DistanceProvenance provenance_from_string(const std::string& s);

struct RateEntry {
  double parameter = 0.0;  // n, p or k depending on the family
  double distance = 0.0;
  DistanceProvenance mode = DistanceProvenance::exact;
  double error_bound = 0.0;  // truncation / Monte Carlo band, 0 when exact
};

// (parameter, distance) series for one family; the carrier the harness fits
// slopes on.
struct RateTable {
  std::string id;         // file stem
  std::string family_id;  // which input family produced it
  std::vector<RateEntry> entries;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int excluded_zeros = 0;  // points dropped because distance == 0
};

// Ordinary least squares on (log x, log y); zero distances are excluded and
// counted. Needs at least 3 positive pairs.
SlopeFit fit_slope(const std::vector<double>& xs, const std::vector<double>& ys);

SlopeFit fit_slope(const RateTable& table);

enum class Verdict { pass, fail, informational };

std::string to_string(Verdict v);

struct ExperimentReport {
  std::string id;
  std::uint64_t seed = 0;
  double tol = 0.0;
  Verdict verdict = Verdict::informational;
  std::vector<RateTable> tables;
  std::vector<std::pair<std::string, SlopeFit>> fits;  // keyed by table id
  std::vector<std::string> notes;  // free-form summary lines, byte-stable
};

}  // namespace cpl
