#ifndef GSO_ENGINE_HPP
#define GSO_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gso/problem.hpp"
#include "gso/relaxation.hpp"

namespace gso {

struct OptimConfig {
  int batch_size = 128;
  int steps = 2000;
  // Per-replica early stop once its best hardened value has not improved for
  // this many steps. 0 disables.
  int patience = 500;
  double learning_rate = 0.01;
  AnnealSchedule schedule;
  std::uint64_t seed = 1;
  // Replica r of this run uses stream replica_rng(seed, first_replica + r).
  std::uint64_t first_replica = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

struct AdamState {
  Eigen::MatrixXd first_moment;
  Eigen::MatrixXd second_moment;
  std::size_t step = 0;

  AdamState() = default;
  AdamState(Eigen::Index rows, Eigen::Index cols)
  : first_moment(Eigen::MatrixXd::Zero(rows, cols))
  , second_moment(Eigen::MatrixXd::Zero(rows, cols))
  { }
};

// Bias-corrected Adam step, in place.
void adam_update(Eigen::MatrixXd& params, const Eigen::MatrixXd& grads, AdamState& state,
                 double learning_rate, double beta1 = 0.9, double beta2 = 0.999,
                 double epsilon = 1e-8);

// Scalar function of the logits tensor; writes its gradient when grad is non-null.
using LogitObjective = std::function<double(const Eigen::MatrixXd& logits, Eigen::MatrixXd* grad)>;

// Sum over replicas of the problem's relaxed objective evaluated on
// gumbel_softmax(logits, noise, tau), with the noise held fixed.
LogitObjective relaxed_objective(const Problem& problem, Eigen::MatrixXd noise, double tau);

// Gradient of objective at params.logits. Throws NumericError naming the
// stage if the value or any gradient entry is non-finite.
Eigen::MatrixXd gradient(const LogitObjective& objective, const MeanFieldParams& params);

// Worst relative error between the analytic gradient and central differences
// with step h, over `coords` (flat column-major indices; all when empty).
// Denominators are floored at 1e-12.
double finite_diff_check(const LogitObjective& objective, const MeanFieldParams& params, double h,
                         std::span<const Eigen::Index> coords = {});

// Batched Gumbel-softmax optimization. Each step draws fresh noise per
// replica, evaluates the relaxed objective at the annealed temperature,
// back-propagates through the sampler and takes an Adam step. Every step's
// hardened samples are scored with the discrete objective; each replica keeps
// its best, and after the loop the argmax of its marginals is scored too.
SolveResult gso_solve(const Problem& problem, const OptimConfig& cfg);

// Optional hook for initial logits (e.g. a warm start). Called once per
// replica column after the random initialisation.
using LogitInit = std::function<void(int replica, Eigen::Ref<Eigen::VectorXd> logits)>;
SolveResult gso_solve(const Problem& problem, const OptimConfig& cfg, const LogitInit& init);

}  // namespace gso

#endif  // GSO_ENGINE_HPP
