#ifndef GSO_PROBLEM_HPP
#define GSO_PROBLEM_HPP

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gso/relaxation.hpp"

namespace gso {

// An objective over K-state variables, lower is better, with a relaxed form
// that is differentiable in the per-variable probability vectors.
class Problem {
public:
  virtual ~Problem() = default;

  virtual std::string name() const = 0;
  virtual int num_vars() const = 0;
  virtual int num_states() const = 0;

  // probs has one column per replica in the MeanFieldParams layout. Writes
  // the relaxed objective of every replica into values and, when grad is
  // non-null, dE_r/dprobs into column r of grad. On one-hot columns the
  // relaxed value equals discrete().
  virtual void relaxed(const Eigen::MatrixXd& probs, Eigen::VectorXd& values,
                       Eigen::MatrixXd* grad) const = 0;

  virtual double discrete(const Config& config) const = 0;

  virtual Eigen::VectorXd discrete_batch(const std::vector<Config>& configs) const
  {
    Eigen::VectorXd values(static_cast<Eigen::Index>(configs.size()));
    for (std::size_t r = 0; r < configs.size(); ++r)
      values[static_cast<Eigen::Index>(r)] = discrete(configs[r]);
    return values;
  }
};

// Single-variable move interface for local search. Holds a current
// configuration and the caches needed for O(degree) deltas.
class LocalMoves {
public:
  virtual ~LocalMoves() = default;

  virtual int num_vars() const = 0;
  virtual int num_states() const = 0;
  virtual std::unique_ptr<LocalMoves> clone() const = 0;

  virtual void reset(const Config& config) = 0;
  virtual const Config& config() const = 0;
  virtual double value() const = 0;
  // Objective change if `var` were set to `state`.
  virtual double delta(int var, int state) const = 0;
  virtual void apply(int var, int state) = 0;
  // Full re-evaluation, independent of the caches.
  virtual double evaluate(const Config& config) const = 0;
  // Factor from objective units to the energy scale annealing temperatures
  // refer to (n for per-spin SK energies).
  virtual double energy_scale() const { return 1.0; }
};

struct SolveResult {
  Config best_config;
  double best_value = 0.0;
  std::vector<double> per_replica_values;
  std::vector<Config> per_replica_configs;
  // Running best objective after each step (sweep, for annealing).
  std::vector<double> history;
  double wall_time = 0.0;
  std::size_t steps_run = 0;
  int best_replica = 0;
  // Logits after the last step, one column per replica (GSO only).
  Eigen::MatrixXd final_logits;
};

}  // namespace gso

#endif  // GSO_PROBLEM_HPP
