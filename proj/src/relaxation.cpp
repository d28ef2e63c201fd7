#include "gso/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gso {

MeanFieldParams::MeanFieldParams(int batch_size, int n_vars, int n_states)
: batch(batch_size)
, vars(n_vars)
, states(n_states)
, logits(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_vars) * n_states, batch_size))
{
  if (batch_size < 1 || n_vars < 1 || n_states < 2)
    throw std::invalid_argument("mean-field params need batch >= 1, vars >= 1, states >= 2");
}

void AnnealSchedule::validate() const
{
  if (!(tau0 > 0.0) || !(tau_min > 0.0))
    throw std::invalid_argument("temperatures must be positive");
  if (!(rate > 0.0 && rate <= 1.0))
    throw std::invalid_argument("anneal rate must lie in (0, 1]");
  if (tau_min > tau0)
    throw std::invalid_argument("tau_min must not exceed tau0");
}

void init_logits(Eigen::Ref<Eigen::VectorXd> column, Rng& rng)
{
  for (Eigen::Index i = 0; i < column.size(); ++i)
    column[i] = kInitLogitStddev * standard_normal(rng);
}

double sample_gumbel(Rng& rng)
{
  constexpr double lo = 1e-12;
  constexpr double hi = 1.0 - 1e-12;
  const double u = std::clamp(uniform01(rng), lo, hi);
  return -std::log(-std::log(u));
}

void sample_gumbel(Eigen::Ref<Eigen::VectorXd> out, Rng& rng)
{
  for (Eigen::Index i = 0; i < out.size(); ++i)
    out[i] = std::clamp(uniform01(rng), 1e-12, 1.0 - 1e-12);
  out = -(-out.array().log()).log();
}

Eigen::MatrixXd sample_gumbel(Eigen::Index rows, Eigen::Index cols, Rng& rng)
{
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    sample_gumbel(out.col(c), rng);
  return out;
}

namespace {

// Slice softmax on raw pointers; the batch path calls this in a tight loop.
inline void softmax_slice(const double* logits, const double* noise, double inv_tau, int k,
                          double* out)
{
  double peak = -INFINITY;
  for (int j = 0; j < k; ++j) {
    out[j] = (logits[j] + noise[j]) * inv_tau;
    peak = std::max(peak, out[j]);
  }
  double total = 0.0;
  for (int j = 0; j < k; ++j) {
    out[j] = std::exp(out[j] - peak);
    total += out[j];
  }
  const double inv_total = 1.0 / total;
  for (int j = 0; j < k; ++j)
    out[j] *= inv_total;
}

}  // namespace

void gumbel_softmax(std::span<const double> logits, std::span<const double> noise, double tau,
                    std::span<double> out)
{
  if (!(tau > 0.0))
    throw std::invalid_argument("Gumbel-softmax temperature must be positive");
  if (logits.size() != noise.size() || logits.size() != out.size() || logits.empty())
    throw std::invalid_argument("Gumbel-softmax slices must be non-empty and equal length");
  softmax_slice(logits.data(), noise.data(), 1.0 / tau, static_cast<int>(logits.size()),
                out.data());
}

std::vector<double> gumbel_softmax(std::span<const double> logits, std::span<const double> noise,
                                   double tau)
{
  std::vector<double> out(logits.size());
  gumbel_softmax(logits, noise, tau, out);
  return out;
}

RelaxedSample gumbel_softmax(const MeanFieldParams& params, const Eigen::MatrixXd& noise,
                             double tau)
{
  if (!(tau > 0.0))
    throw std::invalid_argument("Gumbel-softmax temperature must be positive");
  if (noise.rows() != params.logits.rows() || noise.cols() != params.logits.cols())
    throw std::invalid_argument("noise shape does not match logits");
  RelaxedSample sample{params.vars, params.states, tau,
                       Eigen::MatrixXd(params.logits.rows(), params.logits.cols())};
  const double inv_tau = 1.0 / tau;
  const int k = params.states;
  for (Eigen::Index r = 0; r < params.logits.cols(); ++r) {
    Eigen::Map<Eigen::ArrayXXd> p(sample.probs.col(r).data(), k, params.vars);
    p = (Eigen::Map<const Eigen::ArrayXXd>(params.logits.col(r).data(), k, params.vars) +
         Eigen::Map<const Eigen::ArrayXXd>(noise.col(r).data(), k, params.vars)) *
        inv_tau;
    p.rowwise() -= p.colwise().maxCoeff();
    p = p.exp();
    p.rowwise() /= p.colwise().sum();
  }
  return sample;
}

Eigen::MatrixXd gumbel_softmax_backward(const RelaxedSample& sample,
                                        const Eigen::MatrixXd& grad_probs)
{
  if (grad_probs.rows() != sample.probs.rows() || grad_probs.cols() != sample.probs.cols())
    throw std::invalid_argument("gradient shape does not match sample");
  Eigen::MatrixXd grad(grad_probs.rows(), grad_probs.cols());
  const double inv_tau = 1.0 / sample.temperature;
  const int k = sample.states;
  for (Eigen::Index r = 0; r < grad.cols(); ++r) {
    const double* p = sample.probs.col(r).data();
    const double* gp = grad_probs.col(r).data();
    double* out = grad.col(r).data();
    for (int v = 0; v < sample.vars; ++v) {
      const int base = v * k;
      double dot = 0.0;
      for (int j = 0; j < k; ++j)
        dot += p[base + j] * gp[base + j];
      for (int j = 0; j < k; ++j)
        out[base + j] = inv_tau * p[base + j] * (gp[base + j] - dot);
    }
  }
  return grad;
}

Config harden_column(const Eigen::Ref<const Eigen::VectorXd>& column, int states)
{
  const int vars = static_cast<int>(column.size()) / states;
  Config config(vars);
  for (int v = 0; v < vars; ++v) {
    int best = 0;
    for (int j = 1; j < states; ++j)
      if (column[v * states + j] > column[v * states + best])
        best = j;
    config[v] = best;
  }
  return config;
}

std::vector<Config> harden(const RelaxedSample& sample)
{
  std::vector<Config> configs;
  configs.reserve(sample.batch());
  for (Eigen::Index r = 0; r < sample.probs.cols(); ++r)
    configs.push_back(harden_column(sample.probs.col(r), sample.states));
  return configs;
}

Eigen::VectorXd one_hot(const Config& config, int states)
{
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(config.size()) * states);
  for (std::size_t v = 0; v < config.size(); ++v)
    out[static_cast<Eigen::Index>(v) * states + config[v]] = 1.0;
  return out;
}

double anneal(const AnnealSchedule& schedule, std::size_t step)
{
  const double tau = schedule.tau0 * std::pow(schedule.rate, static_cast<double>(step));
  return std::max(schedule.tau_min, tau);
}

}  // namespace gso
