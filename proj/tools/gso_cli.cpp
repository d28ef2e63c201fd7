#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gso/error.hpp"
#include "gso/harness.hpp"
#include "gso/problems.hpp"
#include "selftest.hpp"

namespace {

using namespace gso;

struct Options {
  int n = 256;
  int instances = 1;
  int batch = 128;
  int steps = 2000;
  int patience = 500;
  double lr = 0.01;
  double anneal_rate = 0.999;
  double tau0 = 1.0;
  double tau_min = 0.1;
  std::uint64_t seed = 1;
  double alpha = 2.0;
  int k = 4;
  int recon_n = 10;
  int degree = 4;
  double coupling = 0.2;
  double lambda = 3.8;
  int timesteps = 100;
  std::string graph;
  std::string series;
  std::string method = "gso";
  std::string out;
  std::string format = "csv";
  bool one_based = false;
  bool timing = false;
  std::vector<int> sizes{256, 512, 1024, 2048};
};

// Bad input files surface as this so they map to the usage exit code.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

OptimConfig optim_config(const Options& o)
{
  OptimConfig cfg;
  cfg.batch_size = o.batch;
  cfg.steps = o.steps;
  cfg.patience = o.patience;
  cfg.learning_rate = o.lr;
  cfg.schedule = {o.tau0, o.anneal_rate, o.tau_min};
  cfg.seed = o.seed;
  cfg.validate();
  return cfg;
}

void add_optim_flags(CLI::App& cmd, Options& o)
{
  cmd.add_option("--batch", o.batch, "Replicas optimized in parallel")->capture_default_str();
  cmd.add_option("--steps", o.steps, "Optimization step budget")->capture_default_str();
  cmd.add_option("--patience", o.patience, "Per-replica early stop, 0 disables")
      ->capture_default_str();
  cmd.add_option("--lr", o.lr, "Adam learning rate")->capture_default_str();
  cmd.add_option("--anneal-rate", o.anneal_rate, "Temperature decay per step")
      ->capture_default_str();
  cmd.add_option("--tau0", o.tau0, "Initial temperature")->capture_default_str();
  cmd.add_option("--tau-min", o.tau_min, "Temperature floor")->capture_default_str();
  cmd.add_option("--seed", o.seed, "Random seed")->capture_default_str();
}

void add_output_flags(CLI::App& cmd, Options& o)
{
  cmd.add_option("--out", o.out, "Output file (standard output when omitted)");
  cmd.add_option("--format", o.format, "Record format")
      ->check(CLI::IsMember({"csv", "jsonl"}))
      ->capture_default_str();
  cmd.add_flag("--timing", o.timing, "Include wall_time in the records");
}

void write_records(const std::vector<ExperimentRecord>& records, const Options& o)
{
  const Format format = parse_format(o.format);
  if (o.out.empty())
    emit(records, std::cout, format, o.timing);
  else
    emit(records, o.out, format, o.timing);
}

Graph read_graph(const Options& o)
{
  try {
    return load_edge_list(o.graph, o.one_based);
  } catch (const std::exception& e) {
    throw InputError(o.graph + ": " + e.what());
  }
}

std::string stem(const std::string& path)
{
  return std::filesystem::path(path).stem().string();
}

int run_sk(const Options& o)
{
  const SKSweep sweep = run_sk_sweep({o.n}, o.instances, {parse_method(o.method)}, optim_config(o));
  write_records(sweep.records, o);
  for (const auto& s : sweep.summaries)
    std::cerr << "sk n=" << s.n << ' ' << s.method << " mean " << s.mean << " sem " << s.sem
              << '\n';
  return 0;
}

int run_mis_cmd(const Options& o)
{
  const Graph g = read_graph(o);
  const MISOutcome out = run_mis(g, optim_config(o), MISConfig{o.alpha}, stem(o.graph));
  write_records({out.record}, o);
  std::cerr << "mis raw " << out.raw_size << (out.raw_independent ? "" : " (not independent)")
            << " repaired " << out.repaired_size << '\n';
  return 0;
}

int run_modularity_cmd(const Options& o)
{
  const Graph g = read_graph(o);
  const ModularityOutcome out = run_modularity(g, o.k, optim_config(o), stem(o.graph));
  write_records({out.record}, o);
  std::cerr << "modularity Q " << out.q << " communities " << out.partition.n_nonempty() << '\n';
  return 0;
}

int run_reconstruct_cmd(const Options& o)
{
  const CMLConfig cml{o.coupling, o.lambda};
  cml.validate();
  ReconstructionOutcome out;
  if (o.series.empty()) {
    out = run_reconstruction(o.recon_n, o.degree, cml, o.timesteps, optim_config(o));
  } else {
    TimeSeries series;
    try {
      series = load_series(o.series);
    } catch (const std::exception& e) {
      throw InputError(o.series + ": " + e.what());
    }
    out = run_reconstruction(read_graph(o), series, cml, optim_config(o));
    out.record.instance = stem(o.series);
  }
  write_records({out.record}, o);
  std::cerr << "reconstruct accuracy " << out.accuracy << "%\n";
  return 0;
}

int run_bench(const Options& o)
{
  OptimConfig cfg = optim_config(o);
  cfg.patience = 0;
  const ScalingResult r = run_scaling(o.sizes, cfg);
  if (o.out.empty()) {
    for (std::size_t i = 0; i < r.sizes.size(); ++i)
      std::cout << r.sizes[i] << ',' << r.seconds[i] << '\n';
  } else {
    emit_plot_data(r.sizes, r.seconds, o.out, "n", "seconds");
  }
  std::cerr << "log-log slope " << r.slope << '\n';
  return 0;
}

Options with_reconstruction_defaults()
{
  const OptimConfig cfg = reconstruction_defaults();
  Options o;
  o.lr = cfg.learning_rate;
  o.anneal_rate = cfg.schedule.rate;
  o.tau0 = cfg.schedule.tau0;
  o.tau_min = cfg.schedule.tau_min;
  return o;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Gumbel-softmax optimization for combinatorial problems on graphs"};
  app.require_subcommand(1);

  Options sk_opts;
  auto* sk = app.add_subcommand("sk", "Ground state of a random SK spin glass");
  sk->add_option("--n", sk_opts.n, "Number of spins")->capture_default_str();
  sk->add_option("--instances", sk_opts.instances, "Random instances to solve")
      ->capture_default_str();
  sk->add_option("--method", sk_opts.method, "Solver")
      ->check(CLI::IsMember({"gso", "sa", "gd"}))
      ->capture_default_str();
  add_optim_flags(*sk, sk_opts);
  add_output_flags(*sk, sk_opts);

  Options mis_opts;
  auto* mis = app.add_subcommand("mis", "Maximum independent set of an edge list");
  mis->add_option("--graph", mis_opts.graph, "Edge list file")
      ->required()
      ->check(CLI::ExistingFile);
  mis->add_flag("--one-based", mis_opts.one_based, "Vertex ids in the file start at 1");
  mis->add_option("--alpha", mis_opts.alpha, "Penalty per selected edge")->capture_default_str();
  add_optim_flags(*mis, mis_opts);
  add_output_flags(*mis, mis_opts);

  Options mod_opts;
  auto* mod = app.add_subcommand("modularity", "Community detection by modularity");
  mod->add_option("--graph", mod_opts.graph, "Edge list file")
      ->required()
      ->check(CLI::ExistingFile);
  mod->add_flag("--one-based", mod_opts.one_based, "Vertex ids in the file start at 1");
  mod->add_option("--k", mod_opts.k, "Number of community labels")->capture_default_str();
  add_optim_flags(*mod, mod_opts);
  add_output_flags(*mod, mod_opts);

  Options rec_opts = with_reconstruction_defaults();
  auto* rec = app.add_subcommand("reconstruct", "Recover a network from coupled-map dynamics");
  rec->add_option("--n", rec_opts.recon_n, "Nodes of the generated regular graph")
      ->capture_default_str();
  rec->add_option("--degree", rec_opts.degree, "Degree of the generated regular graph")
      ->capture_default_str();
  rec->add_option("--coupling", rec_opts.coupling, "Coupling strength s")->capture_default_str();
  rec->add_option("--lambda", rec_opts.lambda, "Logistic map parameter")->capture_default_str();
  rec->add_option("--timesteps", rec_opts.timesteps, "Observed series length")
      ->capture_default_str();
  auto* series_opt =
      rec->add_option("--series", rec_opts.series, "Observed series CSV instead of simulating")
          ->check(CLI::ExistingFile);
  auto* truth_opt =
      rec->add_option("--graph", rec_opts.graph, "True edge list to score against")
          ->check(CLI::ExistingFile);
  series_opt->needs(truth_opt);
  truth_opt->needs(series_opt);
  rec->add_flag("--one-based", rec_opts.one_based, "Vertex ids in the file start at 1");
  add_optim_flags(*rec, rec_opts);
  add_output_flags(*rec, rec_opts);

  Options bench_opts;
  bench_opts.steps = 50;
  auto* bench = app.add_subcommand("bench", "Time GSO on SK instances of growing size");
  bench->add_option("--sizes", bench_opts.sizes, "Spin counts")
      ->delimiter(',')
      ->capture_default_str();
  add_optim_flags(*bench, bench_opts);
  bench->add_option("--out", bench_opts.out, "Plot data file with columns n,seconds");

  auto* self = app.add_subcommand("selftest", "Gradient and brute-force oracle checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*sk)
      return run_sk(sk_opts);
    if (*mis)
      return run_mis_cmd(mis_opts);
    if (*mod)
      return run_modularity_cmd(mod_opts);
    if (*rec)
      return run_reconstruct_cmd(rec_opts);
    if (*bench)
      return run_bench(bench_opts);
    if (*self)
      return run_selftest(std::cout) ? 0 : 1;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
