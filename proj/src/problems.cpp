#include "gso/problems.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace gso {

namespace {

void check_probs(const Eigen::MatrixXd& probs, const Problem& p)
{
  if (probs.rows() != static_cast<Eigen::Index>(p.num_vars()) * p.num_states())
    throw std::invalid_argument(p.name() + ": probability tensor has " +
                                std::to_string(probs.rows()) + " rows, expected " +
                                std::to_string(p.num_vars() * p.num_states()));
}

void check_config(const Config& config, const Problem& p)
{
  if (config.size() != static_cast<std::size_t>(p.num_vars()))
    throw std::invalid_argument(p.name() + ": configuration length mismatch");
  for (int s : config)
    if (s < 0 || s >= p.num_states())
      throw std::invalid_argument(p.name() + ": state out of range");
}

void prepare(const Eigen::MatrixXd& probs, Eigen::VectorXd& values, Eigen::MatrixXd* grad)
{
  values.resize(probs.cols());
  if (grad)
    grad->resize(probs.rows(), probs.cols());
}

// F = J * S. Every entry is the chain acc += J(i, j) * S(j, c) over ascending
// j, whatever the tiling, so a replica's fields do not depend on how many
// other replicas share the call. J is walked in panels of kDepth columns so
// a panel is reused by all replica groups while it is in cache.
constexpr Eigen::Index kDepth = 256;
constexpr int kGroup = 8;

using Lanes = double __attribute__((vector_size(32)));

inline Lanes load_lanes(const double* p)
{
  Lanes v;
  std::memcpy(&v, p, sizeof v);
  return v;
}

inline void store_lanes(double* p, const Lanes& v)
{
  std::memcpy(p, &v, sizeof v);
}

// Rows [i0, i0 + 8) of W columns, accumulating j in [j0, j1) into f.
template <int W>
void coupling_tile(const double* j_mat, Eigen::Index n, Eigen::Index i0, Eigen::Index j0,
                   Eigen::Index j1, const double* s, double* f)
{
  Lanes lo[W], hi[W];
  for (int c = 0; c < W; ++c) {
    lo[c] = load_lanes(f + c * n + i0);
    hi[c] = load_lanes(f + c * n + i0 + 4);
  }
  for (Eigen::Index j = j0; j < j1; ++j) {
    const Lanes a = load_lanes(j_mat + j * n + i0);
    const Lanes b = load_lanes(j_mat + j * n + i0 + 4);
    for (int c = 0; c < W; ++c) {
      const double sj = s[c * n + j];
      lo[c] += a * sj;
      hi[c] += b * sj;
    }
  }
  for (int c = 0; c < W; ++c) {
    store_lanes(f + c * n + i0, lo[c]);
    store_lanes(f + c * n + i0 + 4, hi[c]);
  }
}

void coupling_product(const Eigen::MatrixXd& j_mat, const Eigen::MatrixXd& spins,
                      Eigen::MatrixXd& fields)
{
  const Eigen::Index n = spins.rows();
  const Eigen::Index cols = spins.cols();
  fields.setZero(n, cols);
  const double* jm = j_mat.data();
  const Eigen::Index full_rows = n - n % 8;
  for (Eigen::Index j0 = 0; j0 < n; j0 += kDepth) {
    const Eigen::Index j1 = std::min(n, j0 + kDepth);
    for (Eigen::Index i0 = 0; i0 < full_rows; i0 += 8) {
      Eigen::Index c = 0;
      for (; c + kGroup <= cols; c += kGroup)
        coupling_tile<kGroup>(jm, n, i0, j0, j1, spins.col(c).data(), fields.col(c).data());
      for (; c < cols; ++c)
        coupling_tile<1>(jm, n, i0, j0, j1, spins.col(c).data(), fields.col(c).data());
    }
    for (Eigen::Index i = full_rows; i < n; ++i)
      for (Eigen::Index c = 0; c < cols; ++c) {
        double acc = fields(i, c);
        for (Eigen::Index j = j0; j < j1; ++j)
          acc += jm[j * n + i] * spins(j, c);
        fields(i, c) = acc;
      }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// SK

SKProblem::SKProblem(SKInstance inst)
: inst_(std::move(inst))
{
  if (inst_.n < 2 || inst_.couplings.rows() != inst_.n || inst_.couplings.cols() != inst_.n)
    throw std::invalid_argument("malformed SK instance");
}

void SKProblem::relaxed(const Eigen::MatrixXd& probs, Eigen::VectorXd& values,
                        Eigen::MatrixXd* grad) const
{
  check_probs(probs, *this);
  prepare(probs, values, grad);
  const int n = inst_.n;
  const double inv_n = 1.0 / n;
  Eigen::MatrixXd s(n, probs.cols()), field;
  for (Eigen::Index r = 0; r < probs.cols(); ++r) {
    const double* p = probs.col(r).data();
    for (int i = 0; i < n; ++i)
      s(i, r) = p[2 * i + 1] - p[2 * i];
  }
  coupling_product(inst_.couplings, s, field);
  for (Eigen::Index r = 0; r < probs.cols(); ++r) {
    values[r] = -0.5 * s.col(r).dot(field.col(r)) * inv_n;
    if (grad) {
      double* g = grad->col(r).data();
      for (int i = 0; i < n; ++i) {
        g[2 * i] = field(i, r) * inv_n;
        g[2 * i + 1] = -field(i, r) * inv_n;
      }
    }
  }
}

double SKProblem::discrete(const Config& config) const
{
  return discrete_batch({config})[0];
}

Eigen::VectorXd SKProblem::discrete_batch(const std::vector<Config>& configs) const
{
  const auto count = static_cast<Eigen::Index>(configs.size());
  Eigen::VectorXd values(count);
  Eigen::MatrixXd s(inst_.n, count), field;
  for (Eigen::Index r = 0; r < count; ++r) {
    check_config(configs[r], *this);
    for (int i = 0; i < inst_.n; ++i)
      s(i, r) = configs[r][i] == 1 ? 1.0 : -1.0;
  }
  coupling_product(inst_.couplings, s, field);
  for (Eigen::Index r = 0; r < count; ++r)
    values[r] = -0.5 * s.col(r).dot(field.col(r)) / inst_.n;
  return values;
}

// ---------------------------------------------------------------------------
// MIS

MISProblem::MISProblem(Graph g, MISConfig cfg)
: g_(std::move(g))
, cfg_(cfg)
{
  cfg_.validate();
}

void MISProblem::relaxed(const Eigen::MatrixXd& probs, Eigen::VectorXd& values,
                         Eigen::MatrixXd* grad) const
{
  check_probs(probs, *this);
  prepare(probs, values, grad);
  const int n = g_.n_vertices();
  for (Eigen::Index r = 0; r < probs.cols(); ++r) {
    const double* p = probs.col(r).data();
    double size = 0.0;
    for (int v = 0; v < n; ++v)
      size += p[2 * v + 1];
    double penalty = 0.0;
    for (auto [u, v] : g_.edges())
      penalty += p[2 * u + 1] * p[2 * v + 1];
    values[r] = -size + cfg_.alpha * penalty;
    if (grad) {
      double* g = grad->col(r).data();
      for (int v = 0; v < n; ++v) {
        double nb = 0.0;
        for (int u : g_.neighbors(v))
          nb += p[2 * u + 1];
        g[2 * v] = 0.0;
        g[2 * v + 1] = -1.0 + cfg_.alpha * nb;
      }
    }
  }
}

double MISProblem::discrete(const Config& config) const
{
  check_config(config, *this);
  std::vector<double> x(config.begin(), config.end());
  return mis_objective(g_, x, cfg_);
}

// ---------------------------------------------------------------------------
// Modularity

ModularityProblem::ModularityProblem(Graph g, int communities)
: g_(std::move(g))
, k_(communities)
{
  if (k_ < 2)
    throw std::invalid_argument("modularity needs at least two communities");
  if (g_.n_edges() == 0)
    throw std::invalid_argument("modularity is undefined on an edgeless graph");
}

void ModularityProblem::relaxed(const Eigen::MatrixXd& probs, Eigen::VectorXd& values,
                                Eigen::MatrixXd* grad) const
{
  check_probs(probs, *this);
  prepare(probs, values, grad);
  const int n = g_.n_vertices();
  const double two_m = 2.0 * g_.n_edges();
  Eigen::VectorXd weighted(k_);
  for (Eigen::Index r = 0; r < probs.cols(); ++r) {
    // Column r viewed as K x n: entry (k, v) is p_vk.
    const Eigen::Map<const Eigen::MatrixXd> p(probs.col(r).data(), k_, n);
    double within = 0.0;
    for (auto [u, v] : g_.edges())
      within += 2.0 * p.col(u).dot(p.col(v));
    weighted.setZero();
    for (int v = 0; v < n; ++v)
      weighted += g_.degree(v) * p.col(v);
    const double q = (within - weighted.squaredNorm() / two_m) / two_m;
    values[r] = -q;
    if (grad) {
      Eigen::Map<Eigen::MatrixXd> g(grad->col(r).data(), k_, n);
      for (int v = 0; v < n; ++v) {
        Eigen::VectorXd nb = Eigen::VectorXd::Zero(k_);
        for (int u : g_.neighbors(v))
          nb += p.col(u);
        g.col(v) = -(2.0 * nb - (2.0 * g_.degree(v) / two_m) * weighted) / two_m;
      }
    }
  }
}

double ModularityProblem::discrete(const Config& config) const
{
  check_config(config, *this);
  return -modularity(g_, Partition{config, k_});
}

// ---------------------------------------------------------------------------
// Reconstruction

ReconstructionProblem::ReconstructionProblem(TimeSeries series, CMLConfig cfg)
: series_(std::move(series))
, cfg_(cfg)
, n_(series_.n_nodes())
{
  cfg_.validate();
  if (series_.length() < 2 || n_ < 2)
    throw std::invalid_argument("reconstruction needs T >= 2 and at least two nodes");
  const int steps = series_.length() - 1;
  mapped_ = series_.states.topRows(steps).unaryExpr([&](double x) { return cfg_.logistic(x); });
  target_ = series_.states.bottomRows(steps);
}

void ReconstructionProblem::relaxed(const Eigen::MatrixXd& probs, Eigen::VectorXd& values,
                                    Eigen::MatrixXd* grad) const
{
  check_probs(probs, *this);
  prepare(probs, values, grad);
  const double s = cfg_.coupling;
  Eigen::MatrixXd a(n_, n_);
  Eigen::MatrixXd coupled, residual, pull;
  Eigen::VectorXd deg(n_), floored(n_);
  for (Eigen::Index r = 0; r < probs.cols(); ++r) {
    const double* p = probs.col(r).data();
    a.setZero();
    for (int i = 0, e = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j, ++e)
        a(i, j) = a(j, i) = p[2 * e + 1];
    deg = a.rowwise().sum();
    floored = deg.cwiseMax(kDegreeFloor);

    // coupled(t, i) = sum_j a_ij f(x_t(j)) / deg(i)
    coupled.noalias() = mapped_ * a;
    coupled = coupled * floored.cwiseInverse().asDiagonal();
    residual = (1.0 - s) * mapped_ + s * coupled - target_;
    values[r] = residual.squaredNorm();

    if (grad) {
      // dE/da_ij through row i: (2s/deg_i) sum_t r_ti (f_tj - c_ti); the
      // -c_ti part vanishes where the degree floor is active.
      pull.noalias() = residual.transpose() * mapped_;
      const Eigen::VectorXd self = (residual.cwiseProduct(coupled)).colwise().sum().transpose();
      double* g = grad->col(r).data();
      for (int i = 0, e = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j, ++e) {
          const double from_i =
              (pull(i, j) - (deg[i] > kDegreeFloor ? self[i] : 0.0)) / floored[i];
          const double from_j =
              (pull(j, i) - (deg[j] > kDegreeFloor ? self[j] : 0.0)) / floored[j];
          g[2 * e] = 0.0;
          g[2 * e + 1] = 2.0 * s * (from_i + from_j);
        }
    }
  }
}

double ReconstructionProblem::discrete(const Config& config) const
{
  check_config(config, *this);
  return recon_objective(adjacency_from_upper(config, n_), series_, cfg_);
}

// ---------------------------------------------------------------------------
// Local moves

namespace {

class SKMoves final : public LocalMoves {
public:
  explicit SKMoves(const SKInstance& inst)
  : inst_(std::make_shared<const SKInstance>(inst))
  { }

  int num_vars() const override { return inst_->n; }
  int num_states() const override { return 2; }
  std::unique_ptr<LocalMoves> clone() const override { return std::make_unique<SKMoves>(*this); }

  void reset(const Config& config) override
  {
    config_ = config;
    spins_.resize(inst_->n);
    for (int i = 0; i < inst_->n; ++i)
      spins_[i] = config[i] == 1 ? 1.0 : -1.0;
    field_ = inst_->couplings * spins_;
    value_ = -0.5 * spins_.dot(field_) / inst_->n;
  }

  const Config& config() const override { return config_; }
  double value() const override { return value_; }

  double delta(int var, int state) const override
  {
    if (state == config_[var])
      return 0.0;
    return 2.0 * spins_[var] * field_[var] / inst_->n;
  }

  void apply(int var, int state) override
  {
    if (state == config_[var])
      return;
    value_ += delta(var, state);
    const double change = -2.0 * spins_[var];
    field_ += change * inst_->couplings.col(var);
    spins_[var] = -spins_[var];
    config_[var] = state;
  }

  double evaluate(const Config& config) const override
  {
    std::vector<double> spins(config.size());
    for (std::size_t i = 0; i < config.size(); ++i)
      spins[i] = config[i] == 1 ? 1.0 : -1.0;
    return sk_energy(*inst_, spins);
  }

  double energy_scale() const override { return inst_->n; }

private:
  std::shared_ptr<const SKInstance> inst_;
  Config config_;
  Eigen::VectorXd spins_;
  Eigen::VectorXd field_;
  double value_ = 0.0;
};

class MISMoves final : public LocalMoves {
public:
  MISMoves(const Graph& g, const MISConfig& cfg)
  : g_(std::make_shared<const Graph>(g))
  , cfg_(cfg)
  { }

  int num_vars() const override { return g_->n_vertices(); }
  int num_states() const override { return 2; }
  std::unique_ptr<LocalMoves> clone() const override { return std::make_unique<MISMoves>(*this); }

  void reset(const Config& config) override
  {
    config_ = config;
    value_ = evaluate(config);
  }

  const Config& config() const override { return config_; }
  double value() const override { return value_; }

  double delta(int var, int state) const override
  {
    if (state == config_[var])
      return 0.0;
    double selected_nb = 0.0;
    for (int u : g_->neighbors(var))
      selected_nb += config_[u];
    const double sign = state == 1 ? 1.0 : -1.0;
    return sign * (-1.0 + cfg_.alpha * selected_nb);
  }

  void apply(int var, int state) override
  {
    value_ += delta(var, state);
    config_[var] = state;
  }

  double evaluate(const Config& config) const override
  {
    std::vector<double> x(config.begin(), config.end());
    return mis_objective(*g_, x, cfg_);
  }

private:
  std::shared_ptr<const Graph> g_;
  MISConfig cfg_;
  Config config_;
  double value_ = 0.0;
};

class ModularityMoves final : public LocalMoves {
public:
  ModularityMoves(const Graph& g, int k)
  : g_(std::make_shared<const Graph>(g))
  , k_(k)
  , two_m_(2.0 * g.n_edges())
  { }

  int num_vars() const override { return g_->n_vertices(); }
  int num_states() const override { return k_; }
  std::unique_ptr<LocalMoves> clone() const override
  {
    return std::make_unique<ModularityMoves>(*this);
  }

  void reset(const Config& config) override
  {
    config_ = config;
    totals_.assign(k_, 0.0);
    for (int v = 0; v < g_->n_vertices(); ++v)
      totals_[config[v]] += g_->degree(v);
    value_ = evaluate(config);
  }

  const Config& config() const override { return config_; }
  double value() const override { return value_; }

  // Moving v from a to b changes Q by [e_vb - e_va - k_v (K_b - K_a + k_v) / 2M] / M.
  double delta(int var, int state) const override
  {
    const int from = config_[var];
    if (state == from)
      return 0.0;
    double links_from = 0.0, links_to = 0.0;
    for (int u : g_->neighbors(var)) {
      if (config_[u] == from)
        links_from += 1.0;
      else if (config_[u] == state)
        links_to += 1.0;
    }
    const double kv = g_->degree(var);
    const double dq =
        (links_to - links_from - kv * (totals_[state] - totals_[from] + kv) / two_m_) /
        (0.5 * two_m_);
    return -dq;
  }

  void apply(int var, int state) override
  {
    const int from = config_[var];
    if (state == from)
      return;
    value_ += delta(var, state);
    totals_[from] -= g_->degree(var);
    totals_[state] += g_->degree(var);
    config_[var] = state;
  }

  double evaluate(const Config& config) const override
  {
    return -modularity(*g_, Partition{config, k_});
  }

private:
  std::shared_ptr<const Graph> g_;
  int k_;
  double two_m_;
  Config config_;
  std::vector<double> totals_;
  double value_ = 0.0;
};

class ReconstructionMoves final : public LocalMoves {
public:
  ReconstructionMoves(const TimeSeries& series, const CMLConfig& cfg)
  : series_(std::make_shared<const TimeSeries>(series))
  , cfg_(cfg)
  , n_(series.n_nodes())
  , steps_(series.length() - 1)
  {
    mapped_ = series.states.topRows(steps_).unaryExpr([&](double x) { return cfg_.logistic(x); });
  }

  int num_vars() const override { return n_pairs(n_); }
  int num_states() const override { return 2; }
  std::unique_ptr<LocalMoves> clone() const override
  {
    return std::make_unique<ReconstructionMoves>(*this);
  }

  void reset(const Config& config) override
  {
    config_ = config;
    const Eigen::MatrixXd a = adjacency_from_upper(config, n_);
    deg_ = a.rowwise().sum();
    sums_ = mapped_ * a;
    row_error_.resize(n_);
    for (int i = 0; i < n_; ++i)
      row_error_[i] = row_error(i, deg_[i], sums_.col(i));
    value_ = row_error_.sum();
  }

  const Config& config() const override { return config_; }
  double value() const override { return value_; }

  double delta(int var, int state) const override
  {
    if (state == config_[var])
      return 0.0;
    const auto [i, j] = endpoints(var);
    const double sign = state == 1 ? 1.0 : -1.0;
    const double new_i = row_error(i, deg_[i] + sign, sums_.col(i) + sign * mapped_.col(j));
    const double new_j = row_error(j, deg_[j] + sign, sums_.col(j) + sign * mapped_.col(i));
    return new_i - row_error_[i] + new_j - row_error_[j];
  }

  void apply(int var, int state) override
  {
    if (state == config_[var])
      return;
    const auto [i, j] = endpoints(var);
    const double sign = state == 1 ? 1.0 : -1.0;
    deg_[i] += sign;
    deg_[j] += sign;
    sums_.col(i) += sign * mapped_.col(j);
    sums_.col(j) += sign * mapped_.col(i);
    const double new_i = row_error(i, deg_[i], sums_.col(i));
    const double new_j = row_error(j, deg_[j], sums_.col(j));
    value_ += new_i - row_error_[i] + new_j - row_error_[j];
    row_error_[i] = new_i;
    row_error_[j] = new_j;
    config_[var] = state;
  }

  double evaluate(const Config& config) const override
  {
    return recon_objective(adjacency_from_upper(config, n_), *series_, cfg_);
  }

private:
  std::pair<int, int> endpoints(int var) const
  {
    int i = 0;
    while (var >= n_ - 1 - i) {
      var -= n_ - 1 - i;
      ++i;
    }
    return {i, i + 1 + var};
  }

  double row_error(int i, double deg, const Eigen::VectorXd& sums) const
  {
    const double s = cfg_.coupling;
    // Degrees are whole numbers here; at zero the sum holds only rounding residue.
    const double weight = deg > 0.5 ? s / deg : 0.0;
    double err = 0.0;
    for (int t = 0; t < steps_; ++t) {
      const double pred = (1.0 - s) * mapped_(t, i) + weight * sums[t];
      const double r = series_->states(t + 1, i) - pred;
      err += r * r;
    }
    return err;
  }

  std::shared_ptr<const TimeSeries> series_;
  CMLConfig cfg_;
  int n_;
  int steps_;
  Eigen::MatrixXd mapped_;
  Config config_;
  Eigen::VectorXd deg_;
  Eigen::MatrixXd sums_;  // (t, i): sum_j a_ij f(x_t(j))
  Eigen::VectorXd row_error_;
  double value_ = 0.0;
};

}  // namespace

std::unique_ptr<LocalMoves> sk_moves(const SKInstance& inst)
{
  return std::make_unique<SKMoves>(inst);
}

std::unique_ptr<LocalMoves> mis_moves(const Graph& g, const MISConfig& cfg)
{
  cfg.validate();
  return std::make_unique<MISMoves>(g, cfg);
}

std::unique_ptr<LocalMoves> modularity_moves(const Graph& g, int communities)
{
  if (communities < 2 || g.n_edges() == 0)
    throw std::invalid_argument("modularity moves need K >= 2 and a non-empty graph");
  return std::make_unique<ModularityMoves>(g, communities);
}

std::unique_ptr<LocalMoves> reconstruction_moves(const TimeSeries& series, const CMLConfig& cfg)
{
  cfg.validate();
  return std::make_unique<ReconstructionMoves>(series, cfg);
}

}  // namespace gso
