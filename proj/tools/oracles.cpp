#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gso::oracle {

double sk_ground_state(const SKInstance& inst)
{
  const int n = inst.n;
  if (n > 24)
    throw std::invalid_argument("exhaustive SK search is limited to n <= 24");
  double best = std::numeric_limits<double>::infinity();
  // Spin 0 fixed to +1; the energy is invariant under a global flip.
  for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      const int si = i == 0 ? 1 : ((mask >> (i - 1)) & 1 ? 1 : -1);
      for (int j = i + 1; j < n; ++j) {
        const int sj = (mask >> (j - 1)) & 1 ? 1 : -1;
        e -= inst.couplings(i, j) * si * sj;
      }
    }
    best = std::min(best, e / n);
  }
  return best;
}

namespace {

std::vector<std::uint32_t> neighbour_masks(const Graph& g)
{
  if (g.n_vertices() > 24)
    throw std::invalid_argument("exhaustive set search is limited to n <= 24");
  std::vector<std::uint32_t> masks(g.n_vertices(), 0);
  for (auto [u, v] : g.edges()) {
    masks[u] |= 1u << v;
    masks[v] |= 1u << u;
  }
  return masks;
}

}  // namespace

int max_independent_set(const Graph& g)
{
  const auto nb = neighbour_masks(g);
  const int n = g.n_vertices();
  int best = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool ok = true;
    for (int v = 0; v < n && ok; ++v)
      if ((mask >> v) & 1)
        ok = (nb[v] & mask) == 0;
    if (ok)
      best = std::max(best, __builtin_popcount(mask));
  }
  return best;
}

double min_penalized_set(const Graph& g, double alpha)
{
  const int n = g.n_vertices();
  neighbour_masks(g);
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    int violated = 0;
    for (auto [u, v] : g.edges())
      violated += ((mask >> u) & 1) && ((mask >> v) & 1);
    best = std::min(best, -__builtin_popcount(mask) + alpha * violated);
  }
  return best;
}

double modularity_direct(const Graph& g, const std::vector<int>& labels)
{
  const int n = g.n_vertices();
  const double two_m = 2.0 * g.n_edges();
  std::vector<double> k(n, 0.0);
  for (auto [u, v] : g.edges()) {
    k[u] += 1;
    k[v] += 1;
  }
  double q = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (labels[i] == labels[j]) {
        const double a = g.has_edge(i, j) ? 1.0 : 0.0;
        q += a - k[i] * k[j] / two_m;
      }
  return q / two_m;
}

double best_modularity(const Graph& g, int k)
{
  const int n = g.n_vertices();
  if (n > 12)
    throw std::invalid_argument("exhaustive partition search is limited to n <= 12");
  std::vector<int> labels(n, 0);
  double best = -1.0;
  while (true) {
    best = std::max(best, modularity_direct(g, labels));
    int i = 0;
    while (i < n && ++labels[i] == k)
      labels[i++] = 0;
    if (i == n)
      break;
  }
  return best;
}

std::vector<std::vector<double>> cml_trajectory(const Graph& g, const std::vector<double>& x0,
                                                int steps, double coupling, double lambda)
{
  const int n = g.n_vertices();
  std::vector<std::vector<int>> nbrs(n);
  for (auto [u, v] : g.edges()) {
    nbrs[u].push_back(v);
    nbrs[v].push_back(u);
  }
  std::vector<std::vector<double>> out{x0};
  for (int t = 0; t < steps; ++t) {
    const std::vector<double>& x = out.back();
    std::vector<double> next(n);
    for (int i = 0; i < n; ++i) {
      const double own = lambda * x[i] * (1.0 - x[i]);
      double mix = 0.0;
      for (int j : nbrs[i])
        mix += lambda * x[j] * (1.0 - x[j]);
      const double deg = static_cast<double>(nbrs[i].size());
      next[i] = (1.0 - coupling) * own + (deg > 0 ? coupling / deg * mix : 0.0);
    }
    out.push_back(std::move(next));
  }
  return out;
}

}  // namespace gso::oracle
