#include "gso/engine.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "gso/error.hpp"
#include "gso/parallel.hpp"

namespace gso {

void OptimConfig::validate() const
{
  if (batch_size < 1)
    throw std::invalid_argument("batch size must be at least 1");
  if (steps < 1)
    throw std::invalid_argument("step budget must be at least 1");
  if (patience < 0)
    throw std::invalid_argument("patience must be non-negative");
  if (!(learning_rate > 0.0))
    throw std::invalid_argument("learning rate must be positive");
  schedule.validate();
}

namespace {

void adam_columns(Eigen::MatrixXd& params, const Eigen::MatrixXd& grads, AdamState& state,
                  Eigen::Index col, Eigen::Index grad_col, std::size_t t, double lr,
                  double beta1, double beta2, double epsilon)
{
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  double* x = params.col(col).data();
  double* m = state.first_moment.col(col).data();
  double* v = state.second_moment.col(col).data();
  const double* g = grads.col(grad_col).data();
  for (Eigen::Index i = 0; i < params.rows(); ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    x[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + epsilon);
  }
}

bool all_finite(const Eigen::MatrixXd& m)
{
  return m.allFinite();
}

}  // namespace

void adam_update(Eigen::MatrixXd& params, const Eigen::MatrixXd& grads, AdamState& state,
                 double learning_rate, double beta1, double beta2, double epsilon)
{
  if (grads.rows() != params.rows() || grads.cols() != params.cols() ||
      state.first_moment.rows() != params.rows() || state.first_moment.cols() != params.cols() ||
      state.second_moment.rows() != params.rows() || state.second_moment.cols() != params.cols())
    throw std::invalid_argument("adam_update: shape mismatch");
  ++state.step;
  for (Eigen::Index c = 0; c < params.cols(); ++c)
    adam_columns(params, grads, state, c, c, state.step, learning_rate, beta1, beta2, epsilon);
}

LogitObjective relaxed_objective(const Problem& problem, Eigen::MatrixXd noise, double tau)
{
  return [&problem, noise = std::move(noise), tau](const Eigen::MatrixXd& logits,
                                                   Eigen::MatrixXd* grad) {
    MeanFieldParams params;
    params.batch = static_cast<int>(logits.cols());
    params.vars = problem.num_vars();
    params.states = problem.num_states();
    params.logits = logits;
    const RelaxedSample sample = gumbel_softmax(params, noise, tau);
    if (!all_finite(sample.probs))
      throw NumericError("gumbel_softmax");
    Eigen::VectorXd values;
    Eigen::MatrixXd grad_probs;
    problem.relaxed(sample.probs, values, grad ? &grad_probs : nullptr);
    if (!values.allFinite())
      throw NumericError(problem.name() + " objective");
    if (grad) {
      if (!all_finite(grad_probs))
        throw NumericError(problem.name() + " objective gradient");
      *grad = gumbel_softmax_backward(sample, grad_probs);
    }
    return values.sum();
  };
}

Eigen::MatrixXd gradient(const LogitObjective& objective, const MeanFieldParams& params)
{
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(params.logits.rows(), params.logits.cols());
  const double value = objective(params.logits, &grad);
  if (!std::isfinite(value))
    throw NumericError("objective value");
  if (grad.rows() != params.logits.rows() || grad.cols() != params.logits.cols())
    throw std::invalid_argument("objective returned a gradient of the wrong shape");
  if (!all_finite(grad))
    throw NumericError("softmax backward");
  return grad;
}

double finite_diff_check(const LogitObjective& objective, const MeanFieldParams& params, double h,
                         std::span<const Eigen::Index> coords)
{
  const Eigen::MatrixXd analytic = gradient(objective, params);
  std::vector<Eigen::Index> all;
  if (coords.empty()) {
    all.resize(static_cast<std::size_t>(params.logits.size()));
    for (std::size_t i = 0; i < all.size(); ++i)
      all[i] = static_cast<Eigen::Index>(i);
    coords = all;
  }
  Eigen::MatrixXd probe = params.logits;
  double worst = 0.0;
  for (Eigen::Index idx : coords) {
    const double saved = probe.data()[idx];
    probe.data()[idx] = saved + h;
    const double up = objective(probe, nullptr);
    probe.data()[idx] = saved - h;
    const double down = objective(probe, nullptr);
    probe.data()[idx] = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double exact = analytic.data()[idx];
    const double scale = std::max({std::abs(numeric), std::abs(exact), 1e-12});
    worst = std::max(worst, std::abs(numeric - exact) / scale);
  }
  return worst;
}

SolveResult gso_solve(const Problem& problem, const OptimConfig& cfg)
{
  return gso_solve(problem, cfg, nullptr);
}

SolveResult gso_solve(const Problem& problem, const OptimConfig& cfg, const LogitInit& init)
{
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const int batch = cfg.batch_size;
  const int k = problem.num_states();

  MeanFieldParams params(batch, problem.num_vars(), k);
  std::vector<Rng> rngs;
  rngs.reserve(batch);
  for (int r = 0; r < batch; ++r) {
    rngs.push_back(replica_rng(cfg.seed, cfg.first_replica + static_cast<std::uint64_t>(r)));
    init_logits(params.logits.col(r), rngs[r]);
    if (init)
      init(r, params.logits.col(r));
  }
  AdamState adam(params.logits.rows(), batch);

  std::vector<double> best(batch, std::numeric_limits<double>::infinity());
  std::vector<Config> best_configs(batch);
  std::vector<int> stale(batch, 0);
  std::vector<int> active(batch);
  for (int r = 0; r < batch; ++r)
    active[r] = r;

  SolveResult result;
  result.history.reserve(cfg.steps);
  double running_best = std::numeric_limits<double>::infinity();

  MeanFieldParams live;
  live.vars = params.vars;
  live.states = k;
  Eigen::MatrixXd noise;
  std::size_t step = 0;
  for (; step < static_cast<std::size_t>(cfg.steps) && !active.empty(); ++step) {
    const int width = static_cast<int>(active.size());
    const double tau = anneal(cfg.schedule, step);
    live.batch = width;
    live.logits = params.logits(Eigen::all, active);
    noise.resize(params.logits.rows(), width);
    for (int c = 0; c < width; ++c)
      sample_gumbel(noise.col(c), rngs[active[c]]);

    const RelaxedSample sample = gumbel_softmax(live, noise, tau);
    Eigen::VectorXd values(width);
    Eigen::MatrixXd grad_probs(params.logits.rows(), width);
    std::vector<Config> hardened(width);
    Eigen::VectorXd scores(width);
    parallel_for(width, [&](int begin, int end) {
      const int len = end - begin;
      Eigen::VectorXd v;
      Eigen::MatrixXd g;
      problem.relaxed(sample.probs.middleCols(begin, len), v, &g);
      values.segment(begin, len) = v;
      grad_probs.middleCols(begin, len) = g;
      for (int c = begin; c < end; ++c)
        hardened[c] = harden_column(sample.probs.col(c), k);
      const std::vector<Config> chunk(hardened.begin() + begin, hardened.begin() + end);
      scores.segment(begin, len) = problem.discrete_batch(chunk);
    });
    if (!values.allFinite())
      throw DivergenceError(step, "non-finite relaxed objective");
    const Eigen::MatrixXd grad = gumbel_softmax_backward(sample, grad_probs);
    if (!all_finite(grad))
      throw DivergenceError(step, "non-finite gradient");

    ++adam.step;
    for (int c = 0; c < width; ++c)
      adam_columns(params.logits, grad, adam, active[c], c, adam.step, cfg.learning_rate,
                   cfg.beta1, cfg.beta2, cfg.epsilon);

    std::vector<int> still_active;
    still_active.reserve(width);
    for (int c = 0; c < width; ++c) {
      const int r = active[c];
      if (scores[c] < best[r]) {
        best[r] = scores[c];
        best_configs[r] = std::move(hardened[c]);
        stale[r] = 0;
      } else {
        ++stale[r];
      }
      running_best = std::min(running_best, best[r]);
      if (cfg.patience == 0 || stale[r] < cfg.patience)
        still_active.push_back(r);
    }
    active = std::move(still_active);
    result.history.push_back(running_best);
  }
  result.steps_run = step;

  for (int r = 0; r < batch; ++r) {
    Config marginal = harden_column(params.logits.col(r), k);
    const double value = problem.discrete(marginal);
    if (value < best[r]) {
      best[r] = value;
      best_configs[r] = std::move(marginal);
    }
  }

  int winner = 0;
  for (int r = 1; r < batch; ++r)
    if (best[r] < best[winner])
      winner = r;
  result.best_config = best_configs[winner];
  result.best_value = best[winner];
  result.best_replica = winner;
  result.per_replica_values = std::move(best);
  result.per_replica_configs = std::move(best_configs);
  result.final_logits = std::move(params.logits);
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace gso
