#include "gso/objectives.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace gso {

namespace {

void expect_length(std::size_t got, int want, const char* what)
{
  if (got != static_cast<std::size_t>(want))
    throw std::invalid_argument(std::string(what) + ": expected length " + std::to_string(want) +
                                ", got " + std::to_string(got));
}

}  // namespace

void CMLConfig::validate() const
{
  if (!(coupling >= 0.0 && coupling <= 1.0))
    throw std::invalid_argument("CML coupling must lie in [0, 1]");
  if (!(lambda > 0.0 && lambda <= 4.0))
    throw std::invalid_argument("logistic parameter must lie in (0, 4]");
}

void MISConfig::validate() const
{
  if (!(alpha > 1.0))
    throw std::invalid_argument("MIS penalty alpha must exceed 1");
}

double sk_energy(const SKInstance& inst, std::span<const double> spins)
{
  expect_length(spins.size(), inst.n, "sk_energy");
  const Eigen::Map<const Eigen::VectorXd> s(spins.data(), inst.n);
  return -0.5 * s.dot(inst.couplings * s) / inst.n;
}

std::vector<double> spins_from_probs(const Eigen::Ref<const Eigen::VectorXd>& probs)
{
  std::vector<double> spins(probs.size() / 2);
  for (std::size_t i = 0; i < spins.size(); ++i)
    spins[i] = probs[2 * i + 1] - probs[2 * i];
  return spins;
}

double mean_field_energy(const SKInstance& inst, std::span<const double> m)
{
  expect_length(m.size(), inst.n, "mean_field_energy");
  double energy = 0.0;
  for (int i = 0; i < inst.n; ++i)
    for (int j = i + 1; j < inst.n; ++j)
      energy -= inst.couplings(i, j) * m[i] * m[j];
  return energy;
}

std::vector<double> mean_field_gradient(const SKInstance& inst, std::span<const double> m)
{
  expect_length(m.size(), inst.n, "mean_field_gradient");
  const Eigen::Map<const Eigen::VectorXd> mv(m.data(), inst.n);
  const Eigen::VectorXd field = inst.couplings * mv;
  std::vector<double> grad(inst.n);
  for (int i = 0; i < inst.n; ++i)
    grad[i] = -field[i];
  return grad;
}

double mis_objective(const Graph& g, std::span<const double> x, const MISConfig& cfg)
{
  expect_length(x.size(), g.n_vertices(), "mis_objective");
  double size = 0.0;
  for (double xi : x)
    size += xi;
  double penalty = 0.0;
  for (auto [u, v] : g.edges())
    penalty += x[u] * x[v];
  return -size + cfg.alpha * penalty;
}

bool is_independent_set(const Graph& g, const std::vector<int>& membership)
{
  expect_length(membership.size(), g.n_vertices(), "is_independent_set");
  return std::none_of(g.edges().begin(), g.edges().end(), [&](const Edge& e) {
    return membership[e.first] != 0 && membership[e.second] != 0;
  });
}

double modularity(const Graph& g, const Eigen::MatrixXd& soft_assign)
{
  if (g.n_edges() == 0)
    throw std::invalid_argument("modularity is undefined on an edgeless graph");
  if (soft_assign.rows() != g.n_vertices())
    throw std::invalid_argument("modularity: assignment rows must equal vertex count");
  const double two_m = 2.0 * g.n_edges();

  // sum_ij A_ij <p_i, p_j> counts each undirected edge twice.
  double within = 0.0;
  for (auto [u, v] : g.edges())
    within += 2.0 * soft_assign.row(u).dot(soft_assign.row(v));

  Eigen::RowVectorXd weighted = Eigen::RowVectorXd::Zero(soft_assign.cols());
  for (int i = 0; i < g.n_vertices(); ++i)
    weighted += g.degree(i) * soft_assign.row(i);
  const double expected = weighted.squaredNorm() / two_m;

  return (within - expected) / two_m;
}

double modularity(const Graph& g, const Partition& partition)
{
  expect_length(partition.labels.size(), g.n_vertices(), "modularity");
  partition.validate();
  Eigen::MatrixXd hard = Eigen::MatrixXd::Zero(g.n_vertices(), partition.n_communities);
  for (int i = 0; i < g.n_vertices(); ++i)
    hard(i, partition.labels[i]) = 1.0;
  return modularity(g, hard);
}

Eigen::VectorXd cml_step(const Eigen::MatrixXd& adjacency, const Eigen::VectorXd& x,
                         const CMLConfig& cfg)
{
  const Eigen::Index n = x.size();
  if (adjacency.rows() != n || adjacency.cols() != n)
    throw std::invalid_argument("cml_step: adjacency shape does not match state");
  const Eigen::VectorXd fx = x.unaryExpr([&](double v) { return cfg.logistic(v); });
  const Eigen::VectorXd neighbor_sum = adjacency * fx;
  Eigen::VectorXd next(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double deg = std::max(adjacency.row(i).sum(), kDegreeFloor);
    next[i] = (1.0 - cfg.coupling) * fx[i] + cfg.coupling / deg * neighbor_sum[i];
  }
  return next;
}

Eigen::VectorXd cml_step(const Graph& g, const Eigen::VectorXd& x, const CMLConfig& cfg)
{
  if (x.size() != g.n_vertices())
    throw std::invalid_argument("cml_step: state length does not match graph");
  const Eigen::VectorXd fx = x.unaryExpr([&](double v) { return cfg.logistic(v); });
  Eigen::VectorXd next(x.size());
  for (int i = 0; i < g.n_vertices(); ++i) {
    double sum = 0.0;
    for (int j : g.neighbors(i))
      sum += fx[j];
    const double weight = g.degree(i) > 0 ? cfg.coupling / g.degree(i) : 0.0;
    next[i] = (1.0 - cfg.coupling) * fx[i] + weight * sum;
  }
  return next;
}

TimeSeries simulate_cml(const Graph& g, Eigen::VectorXd x0, int length, int transient,
                        const CMLConfig& cfg)
{
  if (length < 2)
    throw std::invalid_argument("series length must be at least 2");
  for (int t = 0; t < transient; ++t)
    x0 = cml_step(g, x0, cfg);
  TimeSeries series{Eigen::MatrixXd(length, g.n_vertices())};
  series.states.row(0) = x0.transpose();
  for (int t = 1; t < length; ++t) {
    x0 = cml_step(g, x0, cfg);
    series.states.row(t) = x0.transpose();
  }
  return series;
}

TimeSeries simulate_cml(const Graph& g, int length, int transient, const CMLConfig& cfg,
                        Rng& rng)
{
  Eigen::VectorXd x0(g.n_vertices());
  for (int i = 0; i < g.n_vertices(); ++i)
    x0[i] = uniform01(rng);
  return simulate_cml(g, std::move(x0), length, transient, cfg);
}

double recon_objective(const Eigen::MatrixXd& adjacency, const TimeSeries& series,
                       const CMLConfig& cfg)
{
  if (series.length() < 2)
    throw std::invalid_argument("reconstruction needs at least two time steps");
  if (adjacency.rows() != series.n_nodes() || adjacency.cols() != series.n_nodes())
    throw std::invalid_argument("recon_objective: adjacency shape does not match series");
  double error = 0.0;
  for (int t = 1; t < series.length(); ++t) {
    const Eigen::VectorXd predicted =
        cml_step(adjacency, series.states.row(t - 1).transpose(), cfg);
    error += (series.states.row(t).transpose() - predicted).squaredNorm();
  }
  return error;
}

Eigen::MatrixXd adjacency_from_upper(std::span<const double> upper, int n)
{
  expect_length(upper.size(), n_pairs(n), "adjacency_from_upper");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  int e = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++e) {
      a(i, j) = upper[e];
      a(j, i) = upper[e];
    }
  return a;
}

Eigen::MatrixXd adjacency_from_upper(const std::vector<int>& upper, int n)
{
  std::vector<double> values(upper.begin(), upper.end());
  return adjacency_from_upper(values, n);
}

}  // namespace gso
