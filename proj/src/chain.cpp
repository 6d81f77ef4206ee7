#include "specnoise/chain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "specnoise/errors.hpp"

namespace specnoise {

namespace {

constexpr double kRowSumTol = 1e-12;
constexpr double kBalanceRelTol = 1e-10;
constexpr double kPiSumTol = 1e-12;
constexpr double kStationaryResidualTol = 1e-10;

// Strong connectivity of the support digraph {(i,j): q_ij > 0}.
bool strongly_connected(const Eigen::MatrixXd& q) {
  const int n = static_cast<int>(q.rows());
  if (n == 0) return false;
  auto reach_all = [&](bool transpose) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w = 0; w < n; ++w) {
        double rate = transpose ? q(w, v) : q(v, w);
        if (w != v && rate > 0.0 && !seen[w]) {
          seen[w] = 1;
          ++count;
          stack.push_back(w);
        }
      }
    }
    return count == n;
  };
  return reach_all(false) && reach_all(true);
}

}  // namespace

int Chain::index_of(const std::string& label) const {
  for (int i = 0; i < size(); ++i)
    if (states[i] == label) return i;
  return -1;
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.pass; });
}

const CheckResult& ValidationReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  fail("InvalidParams", "unknown validation check: " + name);
}

Chain build_graph_walk(
    const std::vector<std::pair<std::string, std::string>>& edges) {
  if (edges.empty()) fail("EmptyGraph", "graph has no edges");

  std::vector<std::string> states;
  std::map<std::string, int> index;
  auto intern = [&](const std::string& label) {
    auto it = index.find(label);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(states.size());
    index.emplace(label, id);
    states.push_back(label);
    return id;
  };

  std::set<std::pair<int, int>> seen;
  std::vector<std::pair<int, int>> edge_ids;
  for (const auto& [a, b] : edges) {
    int u = intern(a);
    int v = intern(b);
    if (u == v)
      fail("SelfLoopOrMultiEdge", "self loop at state " + a);
    auto key = std::minmax(u, v);
    if (!seen.insert(key).second)
      fail("SelfLoopOrMultiEdge", "duplicate edge " + a + " -- " + b);
    edge_ids.push_back(key);
  }

  const int n = static_cast<int>(states.size());
  std::vector<int> degree(n, 0);
  for (auto [u, v] : edge_ids) {
    ++degree[u];
    ++degree[v];
  }

  Chain chain;
  chain.states = std::move(states);
  chain.generator = Eigen::MatrixXd::Zero(n, n);
  for (auto [u, v] : edge_ids) {
    chain.generator(u, v) = 1.0 / degree[u];
    chain.generator(v, u) = 1.0 / degree[v];
  }
  for (int i = 0; i < n; ++i) chain.generator(i, i) = -1.0;

  if (!strongly_connected(chain.generator))
    fail("DisconnectedGraph", "graph is not connected");

  const double volume = 2.0 * static_cast<double>(edge_ids.size());
  chain.pi = Eigen::VectorXd(n);
  for (int i = 0; i < n; ++i) chain.pi(i) = degree[i] / volume;
  return chain;
}

Eigen::VectorXd stationary_from_generator(const Eigen::MatrixXd& generator) {
  const int n = static_cast<int>(generator.rows());
  if (n < 1 || generator.cols() != n)
    fail("InvalidParams", "generator must be a nonempty square matrix");
  if (!strongly_connected(generator))
    fail("Reducible", "generator support is not strongly connected");

  // The rows of Q^T pi = 0 sum to zero (Q has zero row sums), so one
  // equation is redundant; replace it with the normalization sum(pi)=1.
  Eigen::MatrixXd a = generator.transpose();
  a.row(0).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(0) = 1.0;
  Eigen::VectorXd pi = a.colPivHouseholderQr().solve(b);

  double residual = (pi.transpose() * generator).cwiseAbs().maxCoeff();
  double scale = std::max(1.0, generator.cwiseAbs().maxCoeff());
  if (!(residual <= kStationaryResidualTol * scale))
    fail("NumericalFailure",
         "stationary solve residual " + std::to_string(residual));
  if ((pi.array() <= 0.0).any())
    fail("NumericalFailure", "stationary solution has nonpositive entries");
  return pi / pi.sum();
}

ValidationReport validate(const Chain& chain) {
  ValidationReport report;
  const int n = chain.size();
  const auto& q = chain.generator;
  const auto& pi = chain.pi;

  if (n == 0 || q.rows() != n || q.cols() != n || pi.size() != n) {
    report.checks.push_back(
        {"shape", false, 0.0, "states/generator/pi sizes disagree"});
    return report;
  }
  report.checks.push_back({"shape", true, 0.0, ""});

  double worst_row = 0.0;
  for (int i = 0; i < n; ++i) {
    double scale = std::max(1.0, q.row(i).cwiseAbs().maxCoeff());
    worst_row = std::max(worst_row, std::abs(q.row(i).sum()) / scale);
  }
  report.checks.push_back({"row_sums_zero", worst_row <= kRowSumTol, worst_row,
                           "max |row sum| / row scale"});

  bool nonneg = true;
  for (int i = 0; i < n && nonneg; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && q(i, j) < 0.0) {
        nonneg = false;
        break;
      }
  report.checks.push_back({"offdiagonal_nonnegative", nonneg, 0.0, ""});

  bool pi_pos = (pi.array() > 0.0).all();
  double pi_sum_err = std::abs(pi.sum() - 1.0);
  report.checks.push_back({"pi_positive", pi_pos, 0.0, ""});
  report.checks.push_back(
      {"pi_normalized", pi_sum_err <= kPiSumTol, pi_sum_err, "|sum(pi) - 1|"});

  double worst_balance = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double a = pi(i) * q(i, j);
      double b = pi(j) * q(j, i);
      double denom = std::max(std::abs(a), std::abs(b));
      if (denom > 0.0)
        worst_balance = std::max(worst_balance, std::abs(a - b) / denom);
    }
  report.checks.push_back({"detailed_balance",
                           worst_balance <= kBalanceRelTol, worst_balance,
                           "max relative detailed-balance violation"});

  report.checks.push_back(
      {"irreducible", strongly_connected(q), 0.0, "support digraph"});
  return report;
}

}  // namespace specnoise
