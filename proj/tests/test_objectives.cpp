#include <doctest.h>

#include <cmath>
#include <memory>

#include "gso/objectives.hpp"
#include "gso/problems.hpp"
#include "oracles.hpp"

using namespace gso;

namespace {

SKInstance two_spin(double j)
{
  SKInstance inst{2, Eigen::MatrixXd::Zero(2, 2)};
  inst.couplings(0, 1) = inst.couplings(1, 0) = j;
  return inst;
}

Graph two_triangles()
{
  return Graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}});
}

Eigen::MatrixXd random_probs(int vars, int states, int batch, Rng& rng)
{
  Eigen::MatrixXd p(vars * states, batch);
  for (int r = 0; r < batch; ++r)
    for (int v = 0; v < vars; ++v) {
      double total = 0.0;
      for (int k = 0; k < states; ++k)
        total += p(v * states + k, r) = 0.05 + uniform01(rng);
      for (int k = 0; k < states; ++k)
        p(v * states + k, r) /= total;
    }
  return p;
}

Config random_config(int vars, int states, Rng& rng)
{
  Config c(vars);
  for (int& s : c)
    s = static_cast<int>(uniform_index(rng, states));
  return c;
}

TimeSeries small_series(const Graph& g, int length, std::uint64_t seed)
{
  Rng rng(seed);
  return simulate_cml(g, length, 10, CMLConfig{}, rng);
}

}  // namespace

TEST_SUITE("objectives") {

TEST_CASE("SK energy examples")
{
  const std::vector<double> up{1.0, 1.0};
  const std::vector<double> split{1.0, -1.0};
  CHECK(sk_energy(two_spin(1.0), up) == -0.5);
  CHECK(sk_energy(two_spin(1.0), split) == 0.5);
  CHECK(sk_energy(two_spin(-2.0), split) == -1.0);
  const std::vector<double> zero{0.0, 0.0};
  CHECK(sk_energy(two_spin(3.0), zero) == 0.0);
  CHECK_THROWS_AS(sk_energy(two_spin(1.0), std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("SK ground state is symmetric under a global flip")
{
  const SKInstance inst = gen_sk_instance(8, 3);
  const SKProblem p(inst);
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    Config c = random_config(8, 2, rng);
    Config flipped = c;
    for (int& s : flipped)
      s = 1 - s;
    CHECK(p.discrete(c) == doctest::Approx(p.discrete(flipped)).epsilon(1e-14));
  }
}

TEST_CASE("SK discrete objective matches a direct double loop")
{
  const SKInstance inst = gen_sk_instance(9, 21);
  const SKProblem p(inst);
  Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    const Config c = random_config(9, 2, rng);
    double e = 0.0;
    for (int i = 0; i < 9; ++i)
      for (int j = i + 1; j < 9; ++j)
        e -= inst.couplings(i, j) * (2 * c[i] - 1) * (2 * c[j] - 1);
    CHECK(p.discrete(c) == doctest::Approx(e / 9).epsilon(1e-12));
  }
}

TEST_CASE("mean-field energy and gradient")
{
  const SKInstance inst = gen_sk_instance(7, 8);
  Rng rng(4);
  std::vector<double> m(7);
  for (double& x : m)
    x = 2.0 * uniform01(rng) - 1.0;
  double direct = 0.0;
  for (int i = 0; i < 7; ++i)
    for (int j = i + 1; j < 7; ++j)
      direct -= inst.couplings(i, j) * m[i] * m[j];
  CHECK(mean_field_energy(inst, m) == doctest::Approx(direct).epsilon(1e-12));
  const auto grad = mean_field_gradient(inst, m);
  for (int i = 0; i < 7; ++i) {
    auto up = m, down = m;
    up[i] += 1e-6;
    down[i] -= 1e-6;
    const double fd = (mean_field_energy(inst, up) - mean_field_energy(inst, down)) / 2e-6;
    CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("MIS objective examples")
{
  const Graph tri(3, {{0, 1}, {1, 2}, {0, 2}});
  const MISConfig cfg{2.0};
  CHECK(mis_objective(tri, std::vector<double>{1, 0, 0}, cfg) == -1.0);
  CHECK(mis_objective(tri, std::vector<double>{1, 1, 0}, cfg) == 0.0);
  CHECK(mis_objective(tri, std::vector<double>{1, 1, 1}, cfg) == 3.0);
  CHECK(mis_objective(tri, std::vector<double>{0, 0, 0}, cfg) == 0.0);
  CHECK(is_independent_set(tri, {0, 1, 0}));
  CHECK_FALSE(is_independent_set(tri, {1, 0, 1}));
  CHECK_THROWS_AS((MISConfig{0.0}.validate()), std::invalid_argument);
}

TEST_CASE("penalty minimizers are maximum independent sets on all small graphs")
{
  // Every graph on up to 5 vertices, and a sample on 6.
  for (int n = 1; n <= 6; ++n) {
    std::vector<Edge> pairs;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        pairs.emplace_back(i, j);
    const unsigned total = 1u << pairs.size();
    const unsigned stride = n == 6 ? 97 : 1;
    for (unsigned mask = 0; mask < total; mask += stride) {
      std::vector<Edge> edges;
      for (std::size_t e = 0; e < pairs.size(); ++e)
        if (mask >> e & 1u)
          edges.push_back(pairs[e]);
      const Graph g(n, edges);
      CHECK(oracle::min_penalized_set(g, 2.0) == -oracle::max_independent_set(g));
    }
  }
}

TEST_CASE("MIS discrete matches brute force minimum")
{
  const Graph g = gen_erdos_renyi(10, 0.35, 6);
  const MISProblem p(g, MISConfig{});
  double best = 1e9;
  for (unsigned mask = 0; mask < 1024; ++mask) {
    Config c(10);
    for (int v = 0; v < 10; ++v)
      c[v] = mask >> v & 1u;
    best = std::min(best, p.discrete(c));
  }
  CHECK(best == -oracle::max_independent_set(g));
}

TEST_CASE("modularity examples")
{
  const Graph g = two_triangles();
  const Partition split{{0, 0, 0, 1, 1, 1}, 2};
  // 2 * (3/7 - (7/14)^2)
  CHECK(modularity(g, split) == doctest::Approx(2.0 * (3.0 / 7.0 - 0.25)).epsilon(1e-14));
  CHECK(modularity(g, Partition{{0, 0, 0, 0, 0, 0}, 1}) == doctest::Approx(0.0).scale(1));
  CHECK(modularity(g, split) == doctest::Approx(oracle::modularity_direct(g, split.labels)));

  // Soft assignment with one-hot rows gives the hard value.
  Eigen::MatrixXd soft = Eigen::MatrixXd::Zero(6, 2);
  for (int v = 0; v < 6; ++v)
    soft(v, split.labels[v]) = 1.0;
  CHECK(modularity(g, soft) == doctest::Approx(modularity(g, split)).epsilon(1e-14));

  CHECK_THROWS_AS(modularity(Graph(3, {}), split), std::invalid_argument);
  CHECK_THROWS_AS(modularity(Graph(3, {}), Partition{{0, 0, 0}, 1}), std::invalid_argument);
}

TEST_CASE("modularity bounds and oracle agreement on random partitions")
{
  const Graph g = gen_erdos_renyi(20, 0.2, 15);
  Rng rng(7);
  for (int t = 0; t < 1000; ++t) {
    const int k = 1 + static_cast<int>(uniform_index(rng, 5));
    const Partition p{random_config(20, k, rng), k};
    const double q = modularity(g, p);
    CHECK(q >= -0.5 - 1e-12);
    CHECK(q <= 1.0);
    if (t % 50 == 0)
      CHECK(q == doctest::Approx(oracle::modularity_direct(g, p.labels)).epsilon(1e-12));
  }
}

TEST_CASE("CML step examples")
{
  const Graph ring = gen_random_regular(8, 2, 3);
  const CMLConfig cfg{0.3, 3.7};

  Eigen::VectorXd uniform = Eigen::VectorXd::Constant(8, 0.4);
  const Eigen::VectorXd next = cml_step(ring, uniform, cfg);
  for (int i = 0; i < 8; ++i)
    CHECK(next[i] == doctest::Approx(cfg.logistic(0.4)).epsilon(1e-15));

  Rng rng(2);
  Eigen::VectorXd x(8);
  for (int i = 0; i < 8; ++i)
    x[i] = uniform01(rng);
  const Eigen::VectorXd free = cml_step(ring, x, CMLConfig{0.0, 3.7});
  for (int i = 0; i < 8; ++i)
    CHECK(free[i] == CMLConfig{0.0, 3.7}.logistic(x[i]));

  const Eigen::VectorXd dense = cml_step(ring.adjacency(), x, cfg);
  const Eigen::VectorXd sparse = cml_step(ring, x, cfg);
  CHECK((dense - sparse).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("isolated vertices get no coupling term")
{
  const Graph g(4, {{0, 1}, {1, 2}});
  const CMLConfig cfg{0.5, 3.9};
  Eigen::VectorXd x(4);
  x << 0.2, 0.5, 0.7, 0.33;
  CHECK(cml_step(g, x, cfg)[3] == (1.0 - 0.5) * cfg.logistic(0.33));
  const auto traj = oracle::cml_trajectory(g, {0.2, 0.5, 0.7, 0.33}, 1, 0.5, 3.9);
  CHECK(traj[1][3] == (1.0 - 0.5) * cfg.logistic(0.33));
}

TEST_CASE("CML trajectory matches an independent loop")
{
  const Graph g = gen_random_regular(12, 3, 5);
  const CMLConfig cfg{0.2, 3.8};
  std::vector<double> x0(12);
  Rng rng(6);
  for (double& v : x0)
    v = uniform01(rng);
  const auto expected = oracle::cml_trajectory(g, x0, 100, cfg.coupling, cfg.lambda);
  const TimeSeries s =
      simulate_cml(g, Eigen::Map<const Eigen::VectorXd>(x0.data(), 12), 101, 0, cfg);
  double worst = 0.0;
  for (int t = 0; t <= 100; ++t)
    for (int i = 0; i < 12; ++i)
      worst = std::max(worst, std::abs(s.states(t, i) - expected[t][i]));
  CHECK(worst < 1e-12);
}

TEST_CASE("CML states stay in the unit interval")
{
  const Graph g = gen_random_regular(20, 4, 8);
  Rng rng(1);
  const TimeSeries s = simulate_cml(g, 10000, 0, CMLConfig{0.2, 4.0}, rng);
  CHECK(s.states.minCoeff() >= 0.0);
  CHECK(s.states.maxCoeff() <= 1.0);
  CHECK_THROWS_AS((CMLConfig{1.5, 3.8}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((CMLConfig{0.2, 4.5}.validate()), std::invalid_argument);
}

TEST_CASE("reconstruction objective")
{
  const Graph g = gen_random_regular(8, 2, 4);
  const CMLConfig cfg{};
  const TimeSeries s = small_series(g, 30, 9);
  CHECK(recon_objective(g.adjacency(), s, cfg) < 1e-18);

  // Hand check: two nodes, one edge, a single transition.
  TimeSeries two{Eigen::MatrixXd(2, 2)};
  two.states << 0.3, 0.6, 0.5, 0.5;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
  a(0, 1) = a(1, 0) = 1.0;
  const double f0 = 3.8 * 0.3 * 0.7, f1 = 3.8 * 0.6 * 0.4;
  const double e0 = 0.5 - (0.8 * f0 + 0.2 * f1);
  const double e1 = 0.5 - (0.8 * f1 + 0.2 * f0);
  CHECK(recon_objective(a, two, cfg) == doctest::Approx(e0 * e0 + e1 * e1).epsilon(1e-14));

  // Toggling any single pair away from the truth increases the objective.
  const Eigen::MatrixXd truth = g.adjacency();
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j) {
      Eigen::MatrixXd wrong = truth;
      wrong(i, j) = wrong(j, i) = 1.0 - truth(i, j);
      CHECK(recon_objective(wrong, s, cfg) > 1e-10);
    }
}

TEST_CASE("pair indexing")
{
  int expected = 0;
  for (int i = 0; i < 7; ++i)
    for (int j = i + 1; j < 7; ++j)
      CHECK(pair_index(7, i, j) == expected++);
  CHECK(n_pairs(7) == expected);
  const Eigen::MatrixXd a = adjacency_from_upper(std::vector<int>{1, 0, 1}, 3);
  CHECK(a(0, 1) == 1.0);
  CHECK(a(2, 1) == 1.0);
  CHECK(a(0, 2) == 0.0);
  CHECK(a.diagonal().isZero());
}

TEST_CASE("relaxed objectives equal discrete ones on one-hot inputs")
{
  std::vector<std::unique_ptr<Problem>> problems;
  problems.push_back(std::make_unique<SKProblem>(gen_sk_instance(11, 2)));
  problems.push_back(std::make_unique<MISProblem>(gen_erdos_renyi(9, 0.4, 3), MISConfig{}));
  problems.push_back(std::make_unique<ModularityProblem>(two_triangles(), 3));
  problems.push_back(std::make_unique<ReconstructionProblem>(
      small_series(gen_random_regular(6, 2, 5), 15, 4), CMLConfig{}));
  Rng rng(10);
  for (const auto& p : problems) {
    CAPTURE(p->name());
    const int batch = 5;
    Eigen::MatrixXd probs(p->num_vars() * p->num_states(), batch);
    std::vector<Config> configs;
    for (int r = 0; r < batch; ++r) {
      configs.push_back(random_config(p->num_vars(), p->num_states(), rng));
      probs.col(r) = one_hot(configs.back(), p->num_states());
    }
    Eigen::VectorXd values;
    p->relaxed(probs, values, nullptr);
    const Eigen::VectorXd batch_values = p->discrete_batch(configs);
    for (int r = 0; r < batch; ++r) {
      CHECK(values[r] == doctest::Approx(p->discrete(configs[r])).epsilon(1e-10).scale(1));
      CHECK(batch_values[r] == doctest::Approx(p->discrete(configs[r])).epsilon(1e-12).scale(1));
    }
  }
}

TEST_CASE("relaxed gradients match finite differences in probability space")
{
  std::vector<std::unique_ptr<Problem>> problems;
  problems.push_back(std::make_unique<SKProblem>(gen_sk_instance(6, 2)));
  problems.push_back(std::make_unique<MISProblem>(gen_erdos_renyi(7, 0.5, 3), MISConfig{}));
  problems.push_back(std::make_unique<ModularityProblem>(two_triangles(), 3));
  problems.push_back(std::make_unique<ReconstructionProblem>(
      small_series(gen_random_regular(6, 2, 5), 15, 4), CMLConfig{}));
  Rng rng(12);
  for (const auto& p : problems) {
    CAPTURE(p->name());
    Eigen::MatrixXd probs = random_probs(p->num_vars(), p->num_states(), 2, rng);
    Eigen::VectorXd values;
    Eigen::MatrixXd grad;
    p->relaxed(probs, values, &grad);
    for (Eigen::Index i = 0; i < probs.size(); i += 3) {
      Eigen::MatrixXd up = probs, down = probs;
      up.data()[i] += 1e-6;
      down.data()[i] -= 1e-6;
      Eigen::VectorXd vu, vd;
      p->relaxed(up, vu, nullptr);
      p->relaxed(down, vd, nullptr);
      const double fd = (vu.sum() - vd.sum()) / 2e-6;
      CHECK(grad.data()[i] == doctest::Approx(fd).epsilon(1e-5).scale(1e-3));
    }
  }
}

TEST_CASE("local move deltas agree with full evaluation")
{
  const Graph g = gen_erdos_renyi(15, 0.3, 2);
  std::vector<std::unique_ptr<LocalMoves>> movers;
  movers.push_back(sk_moves(gen_sk_instance(15, 4)));
  movers.push_back(mis_moves(g, MISConfig{}));
  movers.push_back(modularity_moves(g, 4));
  movers.push_back(
      reconstruction_moves(small_series(gen_random_regular(6, 2, 5), 15, 4), CMLConfig{}));
  Rng rng(3);
  for (auto& m : movers) {
    CAPTURE(m->num_vars());
    m->reset(random_config(m->num_vars(), m->num_states(), rng));
    double worst = 0.0;
    for (int t = 0; t < 10000; ++t) {
      const int var = static_cast<int>(uniform_index(rng, m->num_vars()));
      const int state = static_cast<int>(uniform_index(rng, m->num_states()));
      Config next = m->config();
      next[var] = state;
      const double expected = m->evaluate(next) - m->evaluate(m->config());
      worst = std::max(worst, std::abs(m->delta(var, state) - expected));
      m->apply(var, state);
    }
    worst = std::max(worst, std::abs(m->value() - m->evaluate(m->config())));
    CHECK(worst < 1e-9);
  }
}

}
