#include "gso/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gso/problems.hpp"
#include "gso/rng.hpp"

namespace gso {

std::string to_string(Method m)
{
  switch (m) {
  case Method::gso: return "gso";
  case Method::sa: return "sa";
  case Method::gd: return "gd";
  }
  return "?";
}

Method parse_method(const std::string& name)
{
  if (name == "gso")
    return Method::gso;
  if (name == "sa")
    return Method::sa;
  if (name == "gd")
    return Method::gd;
  throw std::invalid_argument("unknown method '" + name + "' (expected gso, sa or gd)");
}

namespace {

std::string fnv1a_hex(const std::string& text)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int selected_count(const Config& c)
{
  return static_cast<int>(std::count(c.begin(), c.end(), 1));
}

}  // namespace

std::string config_hash(const OptimConfig& cfg)
{
  std::ostringstream s;
  s << "gso;batch=" << cfg.batch_size << ";steps=" << cfg.steps << ";patience=" << cfg.patience
    << ";lr=" << format_double(cfg.learning_rate) << ";tau0=" << format_double(cfg.schedule.tau0)
    << ";rate=" << format_double(cfg.schedule.rate)
    << ";tau_min=" << format_double(cfg.schedule.tau_min) << ";seed=" << cfg.seed
    << ";first=" << cfg.first_replica << ";betas=" << format_double(cfg.beta1) << ','
    << format_double(cfg.beta2) << ";eps=" << format_double(cfg.epsilon);
  return fnv1a_hex(s.str());
}

std::string config_hash(const SAConfig& cfg)
{
  std::ostringstream s;
  s << "sa;sweeps=" << cfg.sweeps << ";t_start=" << format_double(cfg.t_start)
    << ";t_end=" << format_double(cfg.t_end) << ";restarts=" << cfg.restarts
    << ";seed=" << cfg.seed;
  return fnv1a_hex(s.str());
}

std::uint64_t instance_seed(std::uint64_t seed, int n, int index)
{
  return splitmix64(seed ^ splitmix64((static_cast<std::uint64_t>(n) << 32) |
                                      static_cast<std::uint32_t>(index)));
}

SKSweep run_sk_sweep(const std::vector<int>& sizes, int instances,
                     const std::vector<Method>& methods, const OptimConfig& cfg)
{
  if (instances < 1)
    throw std::invalid_argument("sweep needs at least one instance");
  SKSweep sweep;
  for (int n : sizes) {
    if (n < 2)
      throw std::invalid_argument("SK sizes must be at least 2");
    std::vector<std::vector<const ExperimentRecord*>> by_method(methods.size());
    const std::size_t first = sweep.records.size();
    for (int i = 0; i < instances; ++i) {
      const std::uint64_t seed = instance_seed(cfg.seed, n, i);
      const SKInstance inst = gen_sk_instance(n, seed);
      const std::string descriptor = "sk_n" + std::to_string(n) + "_i" + std::to_string(i);
      for (Method m : methods) {
        ExperimentRecord rec;
        rec.problem = "sk";
        rec.instance = descriptor;
        rec.method = to_string(m);
        rec.seed = seed;
        SolveResult r;
        if (m == Method::gso) {
          OptimConfig c = cfg;
          c.seed = splitmix64(seed);
          r = gso_solve(SKProblem(inst), c);
          rec.config_hash = config_hash(c);
        } else if (m == Method::gd) {
          OptimConfig c = cfg;
          c.seed = splitmix64(seed);
          c.batch_size = 1;
          r = mean_field_gd(inst, c);
          rec.config_hash = config_hash(c);
        } else {
          const SAConfig c = SAConfig::for_size(n, splitmix64(seed));
          r = simulated_annealing(*sk_moves(inst), c);
          rec.config_hash = config_hash(c);
        }
        rec.objective = r.best_value;
        rec.wall_time = r.wall_time;
        sweep.records.push_back(rec);
      }
    }
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      SweepSummary sum;
      sum.n = n;
      sum.method = to_string(methods[mi]);
      sum.instances = instances;
      std::vector<double> values;
      double time = 0.0;
      for (std::size_t j = first; j < sweep.records.size(); ++j)
        if (sweep.records[j].method == sum.method) {
          values.push_back(sweep.records[j].objective);
          time += sweep.records[j].wall_time;
        }
      sum.mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
      if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values)
          ss += (v - sum.mean) * (v - sum.mean);
        sum.sem = std::sqrt(ss / (values.size() - 1) / values.size());
      }
      sum.mean_time = time / values.size();
      sweep.summaries.push_back(sum);
    }
  }
  return sweep;
}

Config repair_independent_set(const Graph& g, const Config& membership,
                              const Eigen::Ref<const Eigen::VectorXd>& logits)
{
  if (membership.size() != static_cast<std::size_t>(g.n_vertices()) ||
      logits.size() != 2 * static_cast<Eigen::Index>(g.n_vertices()))
    throw std::invalid_argument("repair: size mismatch");
  Config set = membership;
  auto exclusion = [&](int v) { return logits[2 * v] - logits[2 * v + 1]; };
  for (auto [u, v] : g.edges()) {
    if (set[u] == 0 || set[v] == 0)
      continue;
    const double eu = exclusion(u);
    const double ev = exclusion(v);
    // u < v, so a tie drops v.
    set[eu > ev ? u : v] = 0;
  }
  for (int v = 0; v < g.n_vertices(); ++v) {
    if (set[v] == 1)
      continue;
    const auto& nb = g.neighbors(v);
    if (std::none_of(nb.begin(), nb.end(), [&](int u) { return set[u] == 1; }))
      set[v] = 1;
  }
  return set;
}

MISOutcome run_mis(const Graph& g, const OptimConfig& cfg, const MISConfig& mis,
                   const std::string& instance)
{
  const SolveResult r = gso_solve(MISProblem(g, mis), cfg);
  MISOutcome out;
  out.raw = r.best_config;
  out.raw_size = selected_count(out.raw);
  out.raw_independent = is_independent_set(g, out.raw);
  out.repaired = repair_independent_set(g, out.raw, r.final_logits.col(r.best_replica));
  out.repaired_size = selected_count(out.repaired);
  if (!is_independent_set(g, out.repaired))
    throw std::logic_error("repaired set is not independent");

  out.record.problem = "mis";
  out.record.instance = instance;
  out.record.method = "gso";
  out.record.config_hash = config_hash(cfg);
  out.record.seed = cfg.seed;
  out.record.objective = r.best_value;
  out.record.set_size = out.raw_size;
  out.record.repaired_size = out.repaired_size;
  out.record.wall_time = r.wall_time;
  return out;
}

ModularityOutcome run_modularity(const Graph& g, int communities, const OptimConfig& cfg,
                                 const std::string& instance)
{
  const SolveResult r = gso_solve(ModularityProblem(g, communities), cfg);
  ModularityOutcome out;
  out.partition = Partition{r.best_config, communities};
  out.q = modularity(g, out.partition);

  out.record.problem = "modularity";
  out.record.instance = instance;
  out.record.method = "gso";
  out.record.config_hash = config_hash(cfg);
  out.record.seed = cfg.seed;
  out.record.objective = r.best_value;
  out.record.modularity = out.q;
  out.record.communities = out.partition.n_nonempty();
  out.record.wall_time = r.wall_time;
  return out;
}

double reconstruction_accuracy(const Config& upper, const Graph& truth)
{
  const int n = truth.n_vertices();
  if (upper.size() != static_cast<std::size_t>(n_pairs(n)))
    throw std::invalid_argument("reconstruction_accuracy: expected one entry per vertex pair");
  int correct = 0;
  for (int i = 0, e = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++e)
      correct += (upper[e] == 1) == truth.has_edge(i, j);
  return 100.0 * correct / n_pairs(n);
}

OptimConfig reconstruction_defaults()
{
  OptimConfig cfg;
  cfg.learning_rate = 1.0;
  cfg.schedule.tau0 = 20.0;
  cfg.schedule.rate = 0.9999;
  return cfg;
}

ReconstructionOutcome run_reconstruction(int n, int degree, const CMLConfig& cml, int length,
                                         const OptimConfig& cfg)
{
  cml.validate();
  Graph truth = gen_random_regular(n, degree, splitmix64(cfg.seed));
  Rng rng(splitmix64(cfg.seed + 1));
  const TimeSeries series = simulate_cml(truth, length, kReconTransient, cml, rng);
  auto out = run_reconstruction(truth, series, cml, cfg);
  char name[96];
  std::snprintf(name, sizeof name, "regular_n%d_d%d_s%g_l%g_T%d", n, degree, cml.coupling,
                cml.lambda, length);
  out.record.instance = name;
  return out;
}

ReconstructionOutcome run_reconstruction(const Graph& truth, const TimeSeries& series,
                                         const CMLConfig& cml, const OptimConfig& cfg,
                                         const LogitInit& init)
{
  if (truth.n_vertices() != series.n_nodes())
    throw std::invalid_argument("truth graph and series disagree on node count");
  const SolveResult r = gso_solve(ReconstructionProblem(series, cml), cfg, init);
  ReconstructionOutcome out;
  out.truth = truth;
  out.recovered = r.best_config;
  out.accuracy = reconstruction_accuracy(out.recovered, truth);

  out.record.problem = "reconstruct";
  out.record.instance = "series_n" + std::to_string(truth.n_vertices());
  out.record.method = "gso";
  out.record.config_hash = config_hash(cfg);
  out.record.seed = cfg.seed;
  out.record.objective = r.best_value;
  out.record.accuracy = out.accuracy;
  out.record.wall_time = r.wall_time;
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("slope fit needs at least two matching points");
  const double count = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::invalid_argument("slope fit needs positive values");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = count * sxx - sx * sx;
  if (denom == 0.0)
    throw std::invalid_argument("slope fit needs distinct sizes");
  return (count * sxy - sx * sy) / denom;
}

ScalingResult run_scaling(const std::vector<int>& sizes,
                          const std::function<double(int)>& timed_run)
{
  ScalingResult out;
  for (int n : sizes) {
    const double seconds = timed_run(n);
    out.sizes.push_back(n);
    out.seconds.push_back(seconds);
  }
  out.slope = loglog_slope(out.sizes, out.seconds);
  return out;
}

ScalingResult run_scaling(const std::vector<int>& sizes, const OptimConfig& cfg)
{
  std::vector<ExperimentRecord> records;
  auto timed = [&](int n) {
    const std::uint64_t seed = instance_seed(cfg.seed, n, 0);
    const SKInstance inst = gen_sk_instance(n, seed);
    OptimConfig c = cfg;
    c.seed = splitmix64(seed);
    const SolveResult r = gso_solve(SKProblem(inst), c);
    ExperimentRecord rec;
    rec.problem = "sk";
    rec.instance = "sk_n" + std::to_string(n) + "_i0";
    rec.method = "gso";
    rec.config_hash = config_hash(c);
    rec.seed = seed;
    rec.objective = r.best_value;
    rec.wall_time = r.wall_time;
    records.push_back(rec);
    return r.wall_time;
  };
  ScalingResult out = run_scaling(sizes, timed);
  out.records = std::move(records);
  return out;
}

double sk_step_flops(int n, int batch)
{
  return 2.0 * static_cast<double>(n) * n * batch;
}

Format parse_format(const std::string& name)
{
  if (name == "csv")
    return Format::csv;
  if (name == "jsonl")
    return Format::jsonl;
  throw std::invalid_argument("unknown format '" + name + "' (expected csv or jsonl)");
}

namespace {

const std::vector<std::string> kColumns = {
    "problem", "instance",      "method",     "config_hash", "seed",     "objective",
    "set_size", "repaired_size", "modularity", "communities", "accuracy", "wall_time"};

std::string csv_field(const std::string& s)
{
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> split_csv(const std::string& line)
{
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cells.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cells.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.emplace_back();
    } else {
      cells.back() += c;
    }
  }
  return cells;
}

std::string optional_field(const std::optional<double>& v)
{
  return v ? format_double(*v) : std::string();
}

nlohmann::ordered_json to_json(const ExperimentRecord& r, bool with_timing)
{
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  nlohmann::ordered_json j;
  j["problem"] = r.problem;
  j["instance"] = r.instance;
  j["method"] = r.method;
  j["config_hash"] = r.config_hash;
  j["seed"] = r.seed;
  j["objective"] = r.objective;
  j["set_size"] = opt(r.set_size);
  j["repaired_size"] = opt(r.repaired_size);
  j["modularity"] = opt(r.modularity);
  j["communities"] = opt(r.communities);
  j["accuracy"] = opt(r.accuracy);
  if (with_timing)
    j["wall_time"] = r.wall_time;
  return j;
}

}  // namespace

void emit(const std::vector<ExperimentRecord>& records, const std::filesystem::path& path,
          Format format, bool with_timing)
{
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  emit(records, out, format, with_timing);
}

void emit(const std::vector<ExperimentRecord>& records, std::ostream& out, Format format,
          bool with_timing)
{
  if (format == Format::jsonl) {
    for (const auto& r : records)
      out << to_json(r, with_timing).dump() << '\n';
    return;
  }
  const std::size_t width = with_timing ? kColumns.size() : kColumns.size() - 1;
  for (std::size_t c = 0; c < width; ++c)
    out << (c ? "," : "") << kColumns[c];
  out << '\n';
  for (const auto& r : records) {
    out << csv_field(r.problem) << ',' << csv_field(r.instance) << ',' << csv_field(r.method)
        << ',' << csv_field(r.config_hash) << ',' << r.seed << ',' << format_double(r.objective)
        << ',' << optional_field(r.set_size) << ',' << optional_field(r.repaired_size) << ','
        << optional_field(r.modularity) << ',' << optional_field(r.communities) << ','
        << optional_field(r.accuracy);
    if (with_timing)
      out << ',' << format_double(r.wall_time);
    out << '\n';
  }
}

std::vector<ExperimentRecord> load_records_csv(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty record file " + path.string());
  const auto header = split_csv(line);
  const bool timing = header.size() == kColumns.size();
  if (header.size() > kColumns.size() || header.size() + 1 < kColumns.size() ||
      !std::equal(header.begin(), header.end(), kColumns.begin()))
    throw std::runtime_error("unexpected record header in " + path.string());

  auto number = [](const std::string& s) { return std::stod(s); };
  auto optional = [&](const std::string& s) -> std::optional<double> {
    if (s.empty())
      return std::nullopt;
    return number(s);
  };
  std::vector<ExperimentRecord> records;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    const auto c = split_csv(line);
    if (c.size() != header.size())
      throw std::runtime_error("record row has " + std::to_string(c.size()) + " cells");
    ExperimentRecord r;
    r.problem = c[0];
    r.instance = c[1];
    r.method = c[2];
    r.config_hash = c[3];
    r.seed = std::stoull(c[4]);
    r.objective = number(c[5]);
    r.set_size = optional(c[6]);
    r.repaired_size = optional(c[7]);
    r.modularity = optional(c[8]);
    r.communities = optional(c[9]);
    r.accuracy = optional(c[10]);
    if (timing)
      r.wall_time = number(c[11]);
    records.push_back(std::move(r));
  }
  return records;
}

void emit_plot_data(const std::vector<double>& x, const std::vector<double>& y,
                    const std::filesystem::path& path, const std::string& x_name,
                    const std::string& y_name)
{
  if (x.size() != y.size())
    throw std::invalid_argument("plot columns differ in length");
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  out << x_name << ',' << y_name << '\n';
  for (std::size_t i = 0; i < x.size(); ++i)
    out << format_double(x[i]) << ',' << format_double(y[i]) << '\n';
}

}  // namespace gso
