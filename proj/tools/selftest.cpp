#include "selftest.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "gso/engine.hpp"
#include "gso/harness.hpp"
#include "gso/objectives.hpp"
#include "gso/problems.hpp"
#include "oracles.hpp"

namespace gso {

namespace {

double worst_fd_error(const Problem& problem, double tau, std::uint64_t seed)
{
  Rng rng(seed);
  MeanFieldParams params(2, problem.num_vars(), problem.num_states());
  for (Eigen::Index i = 0; i < params.logits.size(); ++i)
    params.logits.data()[i] = standard_normal(rng);
  Eigen::MatrixXd noise = sample_gumbel(params.logits.rows(), params.logits.cols(), rng);
  return finite_diff_check(relaxed_objective(problem, std::move(noise), tau), params, 1e-5);
}

std::vector<std::unique_ptr<Problem>> small_problems()
{
  std::vector<std::unique_ptr<Problem>> out;
  out.push_back(std::make_unique<SKProblem>(gen_sk_instance(6, 11)));
  out.push_back(std::make_unique<MISProblem>(gen_erdos_renyi(8, 0.4, 12), MISConfig{}));
  out.push_back(std::make_unique<ModularityProblem>(
      Graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}}), 3));
  Rng rng(13);
  const Graph g = gen_random_regular(6, 2, 13);
  out.push_back(std::make_unique<ReconstructionProblem>(simulate_cml(g, 20, 10, CMLConfig{}, rng),
                                                        CMLConfig{}));
  return out;
}

}  // namespace

bool run_selftest(std::ostream& log)
{
  bool all = true;
  auto report = [&](bool ok, const std::string& what) {
    log << (ok ? "ok   " : "FAIL ") << what << '\n';
    all = all && ok;
  };

  for (const auto& p : small_problems())
    for (double tau : {0.5, 1.0, 2.0}) {
      const double err = worst_fd_error(*p, tau, 5);
      report(err < 1e-4, "gradient " + p->name() + " tau=" + std::to_string(tau).substr(0, 3) +
                             " max rel err " + std::to_string(err));
    }

  OptimConfig cfg;
  cfg.batch_size = 32;
  cfg.steps = 500;
  cfg.seed = 3;

  {
    const SKInstance inst = gen_sk_instance(10, 7);
    const double exact = oracle::sk_ground_state(inst);
    const double found = gso_solve(SKProblem(inst), cfg).best_value;
    report(std::abs(found - exact) < 1e-12 && found >= exact - 1e-12,
           "sk n=10 ground state " + std::to_string(exact) + " found " + std::to_string(found));
  }
  {
    const Graph g = gen_erdos_renyi(12, 0.3, 4);
    const MISOutcome out = run_mis(g, cfg);
    const int exact = oracle::max_independent_set(g);
    report(is_independent_set(g, out.repaired) && out.repaired_size == exact,
           "mis n=12 size " + std::to_string(out.repaired_size) + " of " + std::to_string(exact));
  }
  {
    const Graph g(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}});
    const ModularityOutcome out = run_modularity(g, 2, cfg);
    const double exact = oracle::best_modularity(g, 2);
    const double direct = oracle::modularity_direct(g, out.partition.labels);
    report(std::abs(out.q - exact) < 1e-12 && std::abs(out.q - direct) < 1e-12,
           "modularity two triangles Q " + std::to_string(out.q));
  }
  {
    const Graph g = gen_random_regular(10, 4, 9);
    Rng rng(9);
    std::vector<double> x0(10);
    for (double& x : x0)
      x = uniform01(rng);
    const CMLConfig cml;
    const auto loop = oracle::cml_trajectory(g, x0, 100, cml.coupling, cml.lambda);
    const TimeSeries series =
        simulate_cml(g, Eigen::Map<const Eigen::VectorXd>(x0.data(), 10), 101, 0, cml);
    double worst = 0.0;
    for (int t = 0; t <= 100; ++t)
      for (int i = 0; i < 10; ++i)
        worst = std::max(worst, std::abs(series.states(t, i) - loop[t][i]));
    report(worst < 1e-12, "cml trajectory max deviation " + std::to_string(worst));
  }
  return all;
}

}  // namespace gso
