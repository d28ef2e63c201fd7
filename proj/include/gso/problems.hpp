#ifndef GSO_PROBLEMS_HPP
#define GSO_PROBLEMS_HPP

#include <memory>

#include "gso/graph.hpp"
#include "gso/objectives.hpp"
#include "gso/problem.hpp"

namespace gso {

// Ground state of the SK model, per-spin energy. State 0 is spin -1, state 1 is +1.
class SKProblem final : public Problem {
public:
  explicit SKProblem(SKInstance inst);

  std::string name() const override { return "sk"; }
  int num_vars() const override { return inst_.n; }
  int num_states() const override { return 2; }
  void relaxed(const Eigen::MatrixXd& probs, Eigen::VectorXd& values,
               Eigen::MatrixXd* grad) const override;
  double discrete(const Config& config) const override;
  Eigen::VectorXd discrete_batch(const std::vector<Config>& configs) const override;

  const SKInstance& instance() const { return inst_; }

private:
  SKInstance inst_;
};

// Penalized independent set; state 1 means the vertex is selected.
class MISProblem final : public Problem {
public:
  MISProblem(Graph g, MISConfig cfg);

  std::string name() const override { return "mis"; }
  int num_vars() const override { return g_.n_vertices(); }
  int num_states() const override { return 2; }
  void relaxed(const Eigen::MatrixXd& probs, Eigen::VectorXd& values,
               Eigen::MatrixXd* grad) const override;
  double discrete(const Config& config) const override;

  const Graph& graph() const { return g_; }

private:
  Graph g_;
  MISConfig cfg_;
};

// Negated modularity over K community labels.
class ModularityProblem final : public Problem {
public:
  ModularityProblem(Graph g, int communities);

  std::string name() const override { return "modularity"; }
  int num_vars() const override { return g_.n_vertices(); }
  int num_states() const override { return k_; }
  void relaxed(const Eigen::MatrixXd& probs, Eigen::VectorXd& values,
               Eigen::MatrixXd* grad) const override;
  double discrete(const Config& config) const override;

  const Graph& graph() const { return g_; }

private:
  Graph g_;
  int k_;
};

// CML structure inference. One K=2 variable per unordered pair (i < j) in
// row-major order; state 1 means the edge is present.
class ReconstructionProblem final : public Problem {
public:
  ReconstructionProblem(TimeSeries series, CMLConfig cfg);

  std::string name() const override { return "reconstruct"; }
  int num_vars() const override { return n_pairs(n_); }
  int num_states() const override { return 2; }
  void relaxed(const Eigen::MatrixXd& probs, Eigen::VectorXd& values,
               Eigen::MatrixXd* grad) const override;
  double discrete(const Config& config) const override;

  int n_nodes() const { return n_; }
  const TimeSeries& series() const { return series_; }
  const CMLConfig& cml() const { return cfg_; }

private:
  TimeSeries series_;
  CMLConfig cfg_;
  int n_;
  Eigen::MatrixXd mapped_;  // f(x_t) for t = 0..T-2
  Eigen::MatrixXd target_;  // x_t for t = 1..T-1
};

std::unique_ptr<LocalMoves> sk_moves(const SKInstance& inst);
std::unique_ptr<LocalMoves> mis_moves(const Graph& g, const MISConfig& cfg);
std::unique_ptr<LocalMoves> modularity_moves(const Graph& g, int communities);
std::unique_ptr<LocalMoves> reconstruction_moves(const TimeSeries& series, const CMLConfig& cfg);

}  // namespace gso

#endif  // GSO_PROBLEMS_HPP
