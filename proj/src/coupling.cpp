#include "cpl/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace cpl {

Coupling::Coupling(std::size_t rows, std::size_t cols, std::vector<double> joint)
    : rows_(rows), cols_(cols), joint_(std::move(joint)) {
  if (rows_ == 0 || cols_ == 0) throw invalid_input("empty coupling");
  if (joint_.size() != rows_ * cols_) throw invalid_input("joint size mismatch");
  for (double& v : joint_) {
    if (v < -1e-9) throw invalid_input("negative joint mass");
    if (v < 0.0) v = 0.0;
  }
}

std::vector<double> Coupling::row_sums() const {
  std::vector<double> s(rows_, 0.0);
  for (std::size_t k = 0; k < rows_; ++k)
    for (std::size_t l = 0; l < cols_; ++l) s[k] += at(k, l);
  return s;
}

std::vector<double> Coupling::col_sums() const {
  std::vector<double> s(cols_, 0.0);
  for (std::size_t k = 0; k < rows_; ++k)
    for (std::size_t l = 0; l < cols_; ++l) s[l] += at(k, l);
  return s;
}

double expected_cost(const Coupling& c, const CouplingBoundSpec& spec) {
  double total = 0.0;
  for (std::size_t k = 0; k < c.rows(); ++k)
    for (std::size_t l = 0; l < c.cols(); ++l)
      if (c.at(k, l) > 0.0) total += c.at(k, l) * coupling_cost(k, l, spec);
  return total;
}

namespace {

// Transportation simplex over the coupling polytope. Supplies and demands
// get a tiny uniform perturbation to avoid degenerate pivots; the bias it
// introduces in the optimum is below 1e-9.
class TransportationSimplex {
 public:
  TransportationSimplex(std::vector<double> supply, std::vector<double> demand,
                        std::vector<double> cost)
      : rows_(supply.size()),
        cols_(demand.size()),
        a_(std::move(supply)),
        b_(std::move(demand)),
        c_(std::move(cost)) {
    const double eps = 1e-12;
    for (double& v : a_) v += eps;
    const double balance =
        eps * static_cast<double>(rows_) / static_cast<double>(cols_);
    for (double& v : b_) v += balance;
  }

  std::vector<double> solve() {
    northwest_corner();
    for (long iter = 0; iter < 200000; ++iter) {
      compute_potentials();
      auto entering = find_entering();
      if (entering.first < 0) {
        std::vector<double> joint(rows_ * cols_, 0.0);
        for (const auto& [cell, f] : flow_)
          joint[static_cast<std::size_t>(cell.first) * cols_ +
                static_cast<std::size_t>(cell.second)] = std::max(0.0, f);
        return joint;
      }
      pivot(entering.first, entering.second);
    }
    throw resource_limit("transportation simplex iteration cap reached");
  }

 private:
  double cost(int i, int j) const {
    return c_[static_cast<std::size_t>(i) * cols_ +
              static_cast<std::size_t>(j)];
  }

  void add_basic(int i, int j, double f) {
    flow_[{i, j}] = f;
    row_adj_[i].insert(j);
    col_adj_[j].insert(i);
  }

  void remove_basic(int i, int j) {
    flow_.erase({i, j});
    row_adj_[i].erase(j);
    col_adj_[j].erase(i);
  }

  void northwest_corner() {
    row_adj_.assign(rows_, {});
    col_adj_.assign(cols_, {});
    auto a = a_;
    auto b = b_;
    std::size_t i = 0, j = 0;
    while (i < rows_ && j < cols_) {
      double f = std::min(a[i], b[j]);
      add_basic(static_cast<int>(i), static_cast<int>(j), f);
      a[i] -= f;
      b[j] -= f;
      if (i + 1 == rows_ && j + 1 == cols_) break;
      if (a[i] <= b[j] && i + 1 < rows_)
        ++i;
      else
        ++j;
    }
  }

  void compute_potentials() {
    u_.assign(rows_, 0.0);
    v_.assign(cols_, 0.0);
    std::vector<char> ru(rows_, 0), rv(cols_, 0);
    // BFS from row 0 over the basis tree.
    std::vector<std::pair<char, int>> queue{{0, 0}};  // (is_col, index)
    ru[0] = 1;
    while (!queue.empty()) {
      auto [is_col, idx] = queue.back();
      queue.pop_back();
      if (!is_col) {
        for (int j : row_adj_[static_cast<std::size_t>(idx)])
          if (!rv[static_cast<std::size_t>(j)]) {
            v_[static_cast<std::size_t>(j)] =
                cost(idx, j) - u_[static_cast<std::size_t>(idx)];
            rv[static_cast<std::size_t>(j)] = 1;
            queue.push_back({1, j});
          }
      } else {
        for (int i : col_adj_[static_cast<std::size_t>(idx)])
          if (!ru[static_cast<std::size_t>(i)]) {
            u_[static_cast<std::size_t>(i)] =
                cost(i, idx) - v_[static_cast<std::size_t>(idx)];
            ru[static_cast<std::size_t>(i)] = 1;
            queue.push_back({0, i});
          }
      }
    }
  }

  std::pair<int, int> find_entering() const {
    double best = -1e-11;
    std::pair<int, int> cell{-1, -1};
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        if (flow_.count({static_cast<int>(i), static_cast<int>(j)})) continue;
        double rc = c_[i * cols_ + j] - u_[i] - v_[j];
        if (rc < best) {
          best = rc;
          cell = {static_cast<int>(i), static_cast<int>(j)};
        }
      }
    return cell;
  }

  // Unique basis-tree path from row node `si` to col node `tj`; returns the
  // cells along it in order.
  std::vector<std::pair<int, int>> tree_path(int si, int tj) const {
    // parent pointers via DFS over (is_col, index) nodes
    std::map<std::pair<char, int>, std::pair<char, int>> parent;
    std::vector<std::pair<char, int>> stack{{0, si}};
    parent[{0, si}] = {0, si};
    bool found = false;
    while (!stack.empty() && !found) {
      auto node = stack.back();
      stack.pop_back();
      auto [is_col, idx] = node;
      if (!is_col) {
        for (int j : row_adj_[static_cast<std::size_t>(idx)]) {
          std::pair<char, int> next{1, j};
          if (parent.count(next)) continue;
          parent[next] = node;
          if (j == tj) {
            found = true;
            break;
          }
          stack.push_back(next);
        }
      } else {
        for (int i : col_adj_[static_cast<std::size_t>(idx)]) {
          std::pair<char, int> next{0, i};
          if (parent.count(next)) continue;
          parent[next] = node;
          stack.push_back(next);
        }
      }
    }
    if (!parent.count({1, tj}))
      throw resource_limit("basis tree disconnected");
    std::vector<std::pair<int, int>> cells;
    std::pair<char, int> cur{1, tj};
    while (!(cur.first == 0 && cur.second == si)) {
      auto par = parent[cur];
      if (cur.first == 1)
        cells.push_back({par.second, cur.second});  // row -> col edge
      else
        cells.push_back({cur.second, par.second});  // col -> row edge
      cur = par;
    }
    std::reverse(cells.begin(), cells.end());
    return cells;
  }

  void pivot(int ei, int ej) {
    auto path = tree_path(ei, ej);
    // Cycle: entering (ei,ej) gets +theta, then alternate along the path
    // starting with -theta on its last cell, back toward (ei, ...).
    // Walking the path from the row end, cells alternate -,+,-,...
    std::vector<std::pair<int, int>> minus, plus;
    for (std::size_t idx = 0; idx < path.size(); ++idx) {
      if (idx % 2 == 0)
        minus.push_back(path[idx]);
      else
        plus.push_back(path[idx]);
    }
    double theta = kInfFlow;
    std::pair<int, int> leaving{-1, -1};
    for (const auto& cell : minus) {
      double f = flow_.at(cell);
      if (f < theta) {
        theta = f;
        leaving = cell;
      }
    }
    for (const auto& cell : minus) flow_.at(cell) -= theta;
    for (const auto& cell : plus) flow_.at(cell) += theta;
    add_basic(ei, ej, theta);
    remove_basic(leaving.first, leaving.second);
  }

  static constexpr double kInfFlow = 1e300;

  std::size_t rows_, cols_;
  std::vector<double> a_, b_, c_;
  std::map<std::pair<int, int>, double> flow_;
  std::vector<std::set<int>> row_adj_, col_adj_;
  std::vector<double> u_, v_;
};

}  // namespace

OptimalCouplingResult optimal_coupling(const IntegerPmf& u, const IntegerPmf& v,
                                       const CouplingBoundSpec& spec,
                                       std::size_t max_support) {
  const std::size_t rows = u.max_value() + 1;
  const std::size_t cols = v.max_value() + 1;
  if (rows > max_support || cols > max_support)
    throw resource_limit("coupling support exceeds cap");
  double usum = 0.0, vsum = 0.0;
  for (double m : u.masses()) usum += m;
  for (double m : v.masses()) vsum += m;
  if (std::abs(usum - vsum) > 1e-9)
    throw invalid_input("marginal masses mismatch");

  std::vector<double> cost(rows * cols);
  for (std::size_t k = 0; k < rows; ++k)
    for (std::size_t l = 0; l < cols; ++l)
      cost[k * cols + l] = coupling_cost(k, l, spec);

  TransportationSimplex simplex(u.masses(), v.masses(), cost);
  auto joint = simplex.solve();
  Coupling c(rows, cols, std::move(joint));
  return {c, expected_cost(c, spec)};
}

Coupling quantile_coupling(const IntegerPmf& u, const IntegerPmf& v) {
  const std::size_t rows = u.max_value() + 1;
  const std::size_t cols = v.max_value() + 1;
  std::vector<double> joint(rows * cols, 0.0);
  std::size_t k = 0, l = 0;
  double ru = u.mass(0), rv = v.mass(0);
  while (k < rows && l < cols) {
    double f = std::min(ru, rv);
    joint[k * cols + l] += f;
    ru -= f;
    rv -= f;
    if (ru <= 1e-15) {
      ++k;
      if (k < rows) ru = u.mass(k);
    }
    if (rv <= 1e-15) {
      ++l;
      if (l < cols) rv = v.mass(l);
    }
  }
  return Coupling(rows, cols, std::move(joint));
}

}  // namespace cpl
