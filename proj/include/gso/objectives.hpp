#ifndef GSO_OBJECTIVES_HPP
#define GSO_OBJECTIVES_HPP

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gso/graph.hpp"
#include "gso/rng.hpp"

namespace gso {

// x_{t+1}(i) = (1-s) f(x_t(i)) + s/deg(i) sum_j a_ij f(x_t(j)),  f(x) = lambda x (1-x)
struct CMLConfig {
  double coupling = 0.2;
  double lambda = 3.8;

  void validate() const;
  double logistic(double x) const { return lambda * x * (1.0 - x); }
};

struct MISConfig {
  double alpha = 2.0;

  void validate() const;
};

// Floor on relaxed degrees in the CML coupling term.
constexpr double kDegreeFloor = 1e-8;

// Per-spin energy -(1/N) sum_{i<j} J_ij s_i s_j. Spins may be relaxed values in [-1, 1].
double sk_energy(const SKInstance& inst, std::span<const double> spins);

// Relaxed spins s_i = p_i(+) - p_i(-) from a K=2 probability column where
// state 0 is spin -1 and state 1 is spin +1.
std::vector<double> spins_from_probs(const Eigen::Ref<const Eigen::VectorXd>& probs);

// Expected SK energy of a product distribution with magnetizations m (total, not per spin).
double mean_field_energy(const SKInstance& inst, std::span<const double> m);
// d<E>/dm_i = -sum_{j != i} J_ij m_j
std::vector<double> mean_field_gradient(const SKInstance& inst, std::span<const double> m);

// -sum_i x_i + alpha sum_{(i,j) in E} x_i x_j
double mis_objective(const Graph& g, std::span<const double> x, const MISConfig& cfg);

bool is_independent_set(const Graph& g, const std::vector<int>& membership);

// Q = 1/(2M) sum_ij [A_ij - k_i k_j / 2M] delta(s_i, s_j), summed over all
// ordered pairs including i == j. The soft form takes an n x K matrix of
// membership probabilities and uses delta(s_i, s_j) = sum_k p_ik p_jk.
double modularity(const Graph& g, const Eigen::MatrixXd& soft_assign);
double modularity(const Graph& g, const Partition& partition);

// One CML step on a dense adjacency (0/1 or relaxed). Relaxed degrees are
// floored at kDegreeFloor.
Eigen::VectorXd cml_step(const Eigen::MatrixXd& adjacency, const Eigen::VectorXd& x,
                         const CMLConfig& cfg);
// Exact step on a graph. An isolated vertex receives no coupling term.
Eigen::VectorXd cml_step(const Graph& g, const Eigen::VectorXd& x, const CMLConfig& cfg);

// Runs `transient` unrecorded steps from x0, then records `length` states.
TimeSeries simulate_cml(const Graph& g, Eigen::VectorXd x0, int length, int transient,
                        const CMLConfig& cfg);
// Same, from a uniform random x0.
TimeSeries simulate_cml(const Graph& g, int length, int transient, const CMLConfig& cfg,
                        Rng& rng);

// sum_{t>=1} || x_t - F(x_{t-1}, A) ||^2
double recon_objective(const Eigen::MatrixXd& adjacency, const TimeSeries& series,
                       const CMLConfig& cfg);

// Number of unordered pairs i < j; index of pair (i, j) in row-major upper-triangular order.
inline int n_pairs(int n) { return n * (n - 1) / 2; }
inline int pair_index(int n, int i, int j) { return i * (2 * n - i - 1) / 2 + (j - i - 1); }

// Symmetric matrix with zero diagonal from upper-triangular entries.
Eigen::MatrixXd adjacency_from_upper(std::span<const double> upper, int n);
Eigen::MatrixXd adjacency_from_upper(const std::vector<int>& upper, int n);

}  // namespace gso

#endif  // GSO_OBJECTIVES_HPP
