#ifndef GSO_BASELINES_HPP
#define GSO_BASELINES_HPP

#include <cstdint>

#include "gso/engine.hpp"
#include "gso/graph.hpp"
#include "gso/problem.hpp"

namespace gso {

// Metropolis annealing with geometric cooling from t_start to t_end across
// the sweeps. One sweep is num_vars random single-variable proposals.
struct SAConfig {
  int sweeps = 2560;
  double t_start = 2.0;
  double t_end = 0.01;
  int restarts = 1;
  std::uint64_t seed = 1;

  void validate() const;
  // Per-sweep temperature factor, (t_end / t_start)^(1 / (sweeps - 1)).
  double cooling() const;
  // Default schedule for an n-variable problem: 10 n sweeps.
  static SAConfig for_size(int n, std::uint64_t seed);
};

// Each restart starts from a uniformly random configuration and owns the
// stream replica_rng(seed, restart). Returns the best configuration ever
// visited, re-scored with a full evaluation.
SolveResult simulated_annealing(const LocalMoves& problem, const SAConfig& cfg);

// Gradient descent on the mean-field energy <E> = -sum_{i<j} J_ij m_i m_j
// with m = tanh(phi), per spin. Uses the engine's Adam, schedule ignored.
// Final spins are sign(m) with 0 -> +1, returned as states (0 = -1, 1 = +1).
SolveResult mean_field_gd(const SKInstance& inst, const OptimConfig& cfg);

}  // namespace gso

#endif  // GSO_BASELINES_HPP
