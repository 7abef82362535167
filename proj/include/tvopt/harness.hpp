#ifndef TVOPT_HARNESS_HPP
#define TVOPT_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tvopt/model.hpp"
#include "tvopt/trust_region.hpp"

namespace tvopt {

/// Deterministic 64-bit generator (splitmix64). Hand-rolled so that seeded
/// runs reproduce across standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform draw from {0, ..., n-1}.
  std::uint64_t bounded(std::uint64_t n);

 private:
  std::uint64_t state_;
};

/// Stream seed for one sample of a batch; samples are independent of worker
/// scheduling because each derives only from (master, index).
std::uint64_t derive_seed(std::uint64_t master, int index);

/// Builds a benchmark model by name ("lvm" or "heat"); `params` may override
/// any model constant (JSON object, unknown keys rejected).
std::unique_ptr<Model> make_model(const std::string& name, int cells,
                                  const nlohmann::json& params = nlohmann::json::object());

PNorm default_pnorm(const std::string& model_name);
double default_beta(const std::string& model_name);

/// Random admissible start: a uniform switch count s <= floor(n/10), s
/// distinct switch positions, and per-segment alphabet values with
/// consecutive segments forced distinct.
ControlGrid random_start(const Model& model, std::uint64_t seed);

struct BenchmarkSpec {
  std::string model = "lvm";
  int cells = 512;
  std::optional<PNorm> p;        // model default when absent
  std::optional<double> beta;    // model default when absent
  int samples = 20;
  std::uint64_t seed = 0;
  TrustRegionConfig trust_region;
  std::optional<int> max_switches;
  std::string out_dir;
  nlohmann::json model_params = nlohmann::json::object();
};

BenchmarkSpec load_benchmark_spec(const std::string& path);

struct SampleResult {
  int sample = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double objective = 0.0;
  double tracking = 0.0;
  double tv = 0.0;
  double seconds = 0.0;
  double residual_norm = 0.0;
  int outer_iterations = 0;
  double model_time_frac = 0.0;  // share of wall time in objective+gradient
  double dp_time_frac = 0.0;     // share of wall time in the DP solver
  SolveStatus status = SolveStatus::Converged;
};

struct Stats {
  double min = 0.0, max = 0.0, mean = 0.0, median = 0.0;
};

struct BenchmarkResult {
  std::vector<SampleResult> rows;
  std::vector<std::pair<std::string, Stats>> aggregates;  // over succeeded rows
};

/// Runs `samples` trust-region solves from seeded random starts, fanned out
/// over a worker pool (TVOPT_WORKERS overrides the size). Individual sample
/// failures are recorded, not fatal.
BenchmarkResult run_benchmark(const BenchmarkSpec& spec);

/// samples.csv + summary.csv under dir (created if needed).
void write_benchmark_files(const BenchmarkResult& result, const std::string& dir);
void print_benchmark_summary(std::ostream& out, const BenchmarkResult& result);

/// Step-plot, state-trajectory and scaled-gradient data files for one control.
void emit_solution(const Model& model, const ControlGrid& u, const std::string& dir);

}  // namespace tvopt

#endif  // TVOPT_HARNESS_HPP
