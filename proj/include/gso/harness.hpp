#ifndef GSO_HARNESS_HPP
#define GSO_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gso/baselines.hpp"
#include "gso/engine.hpp"
#include "gso/graph.hpp"
#include "gso/objectives.hpp"

namespace gso {

enum class Method { gso, sa, gd };

std::string to_string(Method m);
Method parse_method(const std::string& name);

// One row of an experiment table. Metrics that do not apply to the problem are empty.
struct ExperimentRecord {
  std::string problem;
  std::string instance;
  std::string method;
  std::string config_hash;
  std::uint64_t seed = 0;
  double objective = 0.0;
  std::optional<double> set_size;
  std::optional<double> repaired_size;
  std::optional<double> modularity;
  std::optional<double> communities;
  std::optional<double> accuracy;
  double wall_time = 0.0;

  friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

// FNV-1a over a canonical text form of the settings, 16 hex digits.
std::string config_hash(const OptimConfig& cfg);
std::string config_hash(const SAConfig& cfg);

// Seed of instance `index` at size n for a sweep seeded with `seed`.
std::uint64_t instance_seed(std::uint64_t seed, int n, int index);

struct SweepSummary {
  int n = 0;
  std::string method;
  int instances = 0;
  double mean = 0.0;
  double sem = 0.0;  // standard error of the mean
  double mean_time = 0.0;
};

struct SKSweep {
  std::vector<ExperimentRecord> records;
  std::vector<SweepSummary> summaries;
};

// Per-spin SK ground-state energies. GD runs a single replica per instance,
// SA uses SAConfig::for_size, GSO uses cfg as given.
SKSweep run_sk_sweep(const std::vector<int>& sizes, int instances,
                     const std::vector<Method>& methods, const OptimConfig& cfg);

struct MISOutcome {
  ExperimentRecord record;
  Config raw;
  Config repaired;
  int raw_size = 0;
  int repaired_size = 0;
  bool raw_independent = false;
};

// Makes `membership` independent, then maximal. Violated edges are visited in
// sorted order; of two selected endpoints the one whose logits favour
// exclusion more (theta_out - theta_in) is dropped, ties dropping the higher
// index. Free vertices are then added in ascending order.
Config repair_independent_set(const Graph& g, const Config& membership,
                              const Eigen::Ref<const Eigen::VectorXd>& logits);

MISOutcome run_mis(const Graph& g, const OptimConfig& cfg, const MISConfig& mis = {},
                   const std::string& instance = "graph");

struct ModularityOutcome {
  ExperimentRecord record;
  Partition partition;
  double q = 0.0;
};

ModularityOutcome run_modularity(const Graph& g, int communities, const OptimConfig& cfg,
                                 const std::string& instance = "graph");

// Percentage of unordered pairs whose hardened entry matches the truth.
double reconstruction_accuracy(const Config& upper, const Graph& truth);

struct ReconstructionOutcome {
  ExperimentRecord record;
  Graph truth;
  Config recovered;
  double accuracy = 0.0;
};

constexpr int kReconTransient = 100;

// Solver settings used for reconstruction: lr 1 and anneal rate 0.9999 from
// a hot start (tau0 = 20). The SK defaults leave most pairs undecided here.
OptimConfig reconstruction_defaults();

// Random d-regular truth graph and CML series both seeded from cfg.seed.
ReconstructionOutcome run_reconstruction(int n, int degree, const CMLConfig& cml, int length,
                                         const OptimConfig& cfg);
// Same on a given graph and series.
ReconstructionOutcome run_reconstruction(const Graph& truth, const TimeSeries& series,
                                         const CMLConfig& cml, const OptimConfig& cfg,
                                         const LogitInit& init = nullptr);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ScalingResult {
  std::vector<ExperimentRecord> records;
  std::vector<double> sizes;
  std::vector<double> seconds;
  double slope = 0.0;
};

// Times timed_run(n) for each size and fits the log-log slope.
ScalingResult run_scaling(const std::vector<int>& sizes, const std::function<double(int)>& timed_run);
// GSO on one SK instance per size.
ScalingResult run_scaling(const std::vector<int>& sizes, const OptimConfig& cfg);

// Multiply-adds of one GSO step on a dense SK instance (relaxed pass, hardened
// score and gradient for every replica).
double sk_step_flops(int n, int batch);

enum class Format { csv, jsonl };
Format parse_format(const std::string& name);

// Stable column order. wall_time is written only when with_timing is set, so
// that seeded runs produce byte-identical files.
void emit(const std::vector<ExperimentRecord>& records, const std::filesystem::path& path,
          Format format, bool with_timing = true);
void emit(const std::vector<ExperimentRecord>& records, std::ostream& out, Format format,
          bool with_timing = true);
std::vector<ExperimentRecord> load_records_csv(const std::filesystem::path& path);
void emit_plot_data(const std::vector<double>& x, const std::vector<double>& y,
                    const std::filesystem::path& path, const std::string& x_name = "x",
                    const std::string& y_name = "y");

}  // namespace gso

#endif  // GSO_HARNESS_HPP
