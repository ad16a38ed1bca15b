#include "cpl/rate.hpp"

#include <cmath>

namespace cpl {

std::string to_string(DistanceProvenance mode) {
  switch (mode) {
    case DistanceProvenance::exact:
      return "exact";
    case DistanceProvenance::certified_lower_bound:
      return "certified-lower-bound";
    case DistanceProvenance::monte_carlo:
      return "monte-carlo";
  }
  return "exact";
}

DistanceProvenance provenance_from_string(const std::string& s) {
  if (s == "exact") return DistanceProvenance::exact;
  if (s == "certified-lower-bound")
    return DistanceProvenance::certified_lower_bound;
  if (s == "monte-carlo") return DistanceProvenance::monte_carlo;
  throw invalid_input("unknown provenance: " + s);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::informational:
      return "informational";
  }
  return "informational";
}

SlopeFit fit_slope(const std::vector<double>& xs,
                   const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw invalid_input("series length mismatch");
  std::vector<double> lx, ly;
  int zeros = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0)) throw invalid_input("parameters must be positive");
    if (ys[i] == 0.0) {
      ++zeros;
      continue;
    }
    if (!(ys[i] > 0.0)) throw invalid_input("distances must be nonnegative");
    lx.push_back(std::log(xs[i]));
    ly.push_back(std::log(ys[i]));
  }
  if (lx.size() < 3)
    throw invalid_input("need at least 3 positive pairs for a slope fit");
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
    syy += ly[i] * ly[i];
  }
  const double vxx = sxx - sx * sx / n;
  const double vxy = sxy - sx * sy / n;
  const double vyy = syy - sy * sy / n;
  if (vxx <= 0.0) throw invalid_input("degenerate parameter grid");
  SlopeFit fit;
  fit.slope = vxy / vxx;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.r_squared = vyy > 0.0 ? std::min(1.0, (vxy * vxy) / (vxx * vyy)) : 1.0;
  fit.excluded_zeros = zeros;
  return fit;
}

SlopeFit fit_slope(const RateTable& table) {
  std::vector<double> xs, ys;
  for (const auto& e : table.entries) {
    xs.push_back(e.parameter);
    ys.push_back(e.distance);
  }
  return fit_slope(xs, ys);
}

}  // namespace cpl
