#include "gso/baselines.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gso/objectives.hpp"
#include "gso/parallel.hpp"
#include "gso/rng.hpp"

namespace gso {

void SAConfig::validate() const
{
  if (sweeps < 1 || restarts < 1)
    throw std::invalid_argument("annealing needs at least one sweep and one restart");
  if (!(t_end > 0.0) || !(t_start >= t_end))
    throw std::invalid_argument("annealing temperatures need t_start >= t_end > 0");
}

double SAConfig::cooling() const
{
  if (sweeps == 1)
    return 1.0;
  return std::pow(t_end / t_start, 1.0 / (sweeps - 1));
}

SAConfig SAConfig::for_size(int n, std::uint64_t seed)
{
  SAConfig cfg;
  cfg.sweeps = 10 * n;
  cfg.seed = seed;
  return cfg;
}

namespace {

struct RestartOutcome {
  Config config;
  double value = 0.0;
  std::vector<double> history;
};

RestartOutcome anneal_once(const LocalMoves& prototype, const SAConfig& cfg, Rng rng)
{
  auto moves = prototype.clone();
  const int n = moves->num_vars();
  const int k = moves->num_states();

  Config start(n);
  for (int& s : start)
    s = static_cast<int>(uniform_index(rng, k));
  moves->reset(start);

  RestartOutcome out;
  out.config = moves->config();
  out.value = moves->value();
  out.history.reserve(cfg.sweeps);
  const double factor = cfg.cooling();
  const double scale = moves->energy_scale();
  double temperature = cfg.t_start;
  for (int sweep = 0; sweep < cfg.sweeps; ++sweep) {
    for (int attempt = 0; attempt < n; ++attempt) {
      const int var = static_cast<int>(uniform_index(rng, n));
      int state = static_cast<int>(uniform_index(rng, k - 1));
      if (state >= moves->config()[var])
        ++state;
      const double delta = moves->delta(var, state);
      if (delta <= 0.0 || uniform01(rng) < std::exp(-delta * scale / temperature)) {
        moves->apply(var, state);
        if (moves->value() < out.value) {
          out.value = moves->value();
          out.config = moves->config();
        }
      }
    }
    out.history.push_back(out.value);
    temperature *= factor;
  }
  out.value = moves->evaluate(out.config);
  return out;
}

}  // namespace

SolveResult simulated_annealing(const LocalMoves& problem, const SAConfig& cfg)
{
  cfg.validate();
  if (problem.num_states() < 2)
    throw std::invalid_argument("annealing needs at least two states per variable");
  const auto start = std::chrono::steady_clock::now();

  std::vector<RestartOutcome> outcomes(cfg.restarts);
  parallel_for(cfg.restarts, [&](int begin, int end) {
    for (int r = begin; r < end; ++r)
      outcomes[r] = anneal_once(problem, cfg, replica_rng(cfg.seed, r));
  });

  SolveResult result;
  int winner = 0;
  for (int r = 0; r < cfg.restarts; ++r) {
    result.per_replica_values.push_back(outcomes[r].value);
    result.per_replica_configs.push_back(outcomes[r].config);
    if (outcomes[r].value < outcomes[winner].value)
      winner = r;
  }
  result.best_replica = winner;
  result.best_config = outcomes[winner].config;
  result.best_value = outcomes[winner].value;
  result.history.assign(cfg.sweeps, std::numeric_limits<double>::infinity());
  for (const auto& o : outcomes)
    for (int s = 0; s < cfg.sweeps; ++s)
      result.history[s] = std::min(result.history[s], o.history[s]);
  result.steps_run = static_cast<std::size_t>(cfg.sweeps);
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

SolveResult mean_field_gd(const SKInstance& inst, const OptimConfig& cfg)
{
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const int n = inst.n;
  const int batch = cfg.batch_size;
  const double inv_n = 1.0 / n;

  Eigen::MatrixXd phi(n, batch);
  for (int r = 0; r < batch; ++r) {
    Rng rng = replica_rng(cfg.seed, cfg.first_replica + static_cast<std::uint64_t>(r));
    init_logits(phi.col(r), rng);
  }
  AdamState adam(n, batch);
  Eigen::MatrixXd m(n, batch), grad(n, batch);
  Eigen::VectorXd field(n);

  SolveResult result;
  result.history.reserve(cfg.steps);
  double best_expected = std::numeric_limits<double>::infinity();
  for (int step = 0; step < cfg.steps; ++step) {
    m = phi.array().tanh().matrix();
    for (int r = 0; r < batch; ++r) {
      field.noalias() = inst.couplings * m.col(r);
      best_expected = std::min(best_expected, -0.5 * m.col(r).dot(field) * inv_n);
      // d<E>/dphi = -(J m)_i (1 - m_i^2) / n
      grad.col(r) = -(field.array() * (1.0 - m.col(r).array().square())).matrix() * inv_n;
    }
    adam_update(phi, grad, adam, cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.epsilon);
    result.history.push_back(best_expected);
  }
  result.steps_run = static_cast<std::size_t>(cfg.steps);

  int winner = 0;
  for (int r = 0; r < batch; ++r) {
    Config config(n);
    std::vector<double> spins(n);
    for (int i = 0; i < n; ++i) {
      config[i] = phi(i, r) >= 0.0 ? 1 : 0;
      spins[i] = config[i] == 1 ? 1.0 : -1.0;
    }
    result.per_replica_values.push_back(sk_energy(inst, spins));
    result.per_replica_configs.push_back(std::move(config));
    if (result.per_replica_values[r] < result.per_replica_values[winner])
      winner = r;
  }
  result.best_replica = winner;
  result.best_config = result.per_replica_configs[winner];
  result.best_value = result.per_replica_values[winner];
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace gso
