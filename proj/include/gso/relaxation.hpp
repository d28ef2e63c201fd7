#ifndef GSO_RELAXATION_HPP
#define GSO_RELAXATION_HPP

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gso/rng.hpp"

namespace gso {

// A discrete configuration: one state index in [0, K) per variable.
using Config = std::vector<int>;

// Logits of the product distribution for a batch of replicas. Column r holds
// replica r; entry (v*K + k) is the unnormalized log-probability of variable
// v taking state k.
struct MeanFieldParams {
  int batch = 0;
  int vars = 0;
  int states = 0;
  Eigen::MatrixXd logits;

  MeanFieldParams() = default;
  MeanFieldParams(int batch_size, int n_vars, int n_states);
};

// Per-variable probability vectors with the layout of MeanFieldParams.
struct RelaxedSample {
  int vars = 0;
  int states = 0;
  double temperature = 1.0;
  Eigen::MatrixXd probs;

  int batch() const { return static_cast<int>(probs.cols()); }
};

// Geometric temperature decay with a floor.
struct AnnealSchedule {
  double tau0 = 1.0;
  double rate = 0.999;
  double tau_min = 0.1;

  void validate() const;
};

constexpr double kInitLogitStddev = 0.01;

// Near-uniform start: i.i.d. N(0, kInitLogitStddev^2) logits.
void init_logits(Eigen::Ref<Eigen::VectorXd> column, Rng& rng);

// Standard Gumbel draws -log(-log(u)) with u clamped to [1e-12, 1 - 1e-12].
double sample_gumbel(Rng& rng);
void sample_gumbel(Eigen::Ref<Eigen::VectorXd> out, Rng& rng);
Eigen::MatrixXd sample_gumbel(Eigen::Index rows, Eigen::Index cols, Rng& rng);

// softmax((logits + noise) / tau) over one K-slice, max-subtracted.
// Throws std::invalid_argument for tau <= 0 or mismatched lengths.
void gumbel_softmax(std::span<const double> logits, std::span<const double> noise, double tau,
                    std::span<double> out);
std::vector<double> gumbel_softmax(std::span<const double> logits, std::span<const double> noise,
                                   double tau);

// Whole-batch form; noise has the shape of params.logits.
RelaxedSample gumbel_softmax(const MeanFieldParams& params, const Eigen::MatrixXd& noise,
                             double tau);

// Reverse pass through gumbel_softmax: maps dE/dprobs to dE/dlogits using
// dp_k/dtheta_j = p_k (delta_kj - p_j) / tau per slice.
Eigen::MatrixXd gumbel_softmax_backward(const RelaxedSample& sample,
                                        const Eigen::MatrixXd& grad_probs);

// Per-variable argmax, ties to the lowest index.
Config harden_column(const Eigen::Ref<const Eigen::VectorXd>& column, int states);
std::vector<Config> harden(const RelaxedSample& sample);

// One-hot encoding of a configuration, the inverse of harden_column.
Eigen::VectorXd one_hot(const Config& config, int states);

// max(tau_min, tau0 * rate^step)
double anneal(const AnnealSchedule& schedule, std::size_t step);

}  // namespace gso

#endif  // GSO_RELAXATION_HPP
