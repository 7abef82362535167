#include "tvopt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "tvopt/heat_model.hpp"
#include "tvopt/io.hpp"
#include "tvopt/lotka_volterra.hpp"
#include "tvopt/optimality.hpp"
#include "tvopt/representation.hpp"

namespace tvopt {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::bounded(std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
}

std::uint64_t derive_seed(std::uint64_t master, int index) {
  SplitMix64 rng(master + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(index));
  return rng.next();
}

namespace {

template <size_t N>
void read_array(const nlohmann::json& j, const char* key, std::array<double, N>& out) {
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != N) {
    throw std::invalid_argument(std::string("config key '") + key + "' needs " +
                                std::to_string(N) + " numbers");
  }
  for (size_t i = 0; i < N; ++i) out[i] = v[i].get<double>();
}

LotkaVolterraParams lvm_params(const nlohmann::json& j) {
  LotkaVolterraParams p;
  for (const auto& [key, value] : j.items()) {
    if (key == "prey_catch") read_array(j, "prey_catch", p.prey_catch);
    else if (key == "predator_catch") read_array(j, "predator_catch", p.predator_catch);
    else if (key == "initial_state") read_array(j, "initial_state", p.initial_state);
    else if (key == "horizon") p.horizon = value.get<double>();
    else throw std::invalid_argument("unknown lvm config key '" + key + "'");
  }
  return p;
}

HeatParams heat_params(const nlohmann::json& j) {
  HeatParams p;
  for (const auto& [key, value] : j.items()) {
    if (key == "diffusivity") p.diffusivity = value.get<double>();
    else if (key == "robin") p.robin = value.get<double>();
    else if (key == "energy_weight") p.energy_weight = value.get<double>();
    else if (key == "target") p.target = value.get<double>();
    else if (key == "initial") p.initial = value.get<double>();
    else if (key == "outside") p.outside = value.get<double>();
    else if (key == "heater_amplitude") read_array(j, "heater_amplitude", p.heater_amplitude);
    else if (key == "heater_width") read_array(j, "heater_width", p.heater_width);
    else if (key == "heater_center") {
      const auto& c = value;
      if (!c.is_array() || c.size() != 2) {
        throw std::invalid_argument("heater_center needs two [x,y] pairs");
      }
      for (int i = 0; i < 2; ++i) {
        p.heater_center[i][0] = c[i].at(0).get<double>();
        p.heater_center[i][1] = c[i].at(1).get<double>();
      }
    } else if (key == "horizon") p.horizon = value.get<double>();
    else if (key == "max_level") p.max_level = value.get<int>();
    else if (key == "nodes") p.nodes = value.get<int>();
    else if (key == "substeps") p.substeps = value.get<int>();
    else throw std::invalid_argument("unknown heat config key '" + key + "'");
  }
  return p;
}

}  // namespace

std::unique_ptr<Model> make_model(const std::string& name, int cells,
                                  const nlohmann::json& params) {
  if (name == "lvm") return std::make_unique<LotkaVolterraModel>(cells, lvm_params(params));
  if (name == "heat") return std::make_unique<HeatModel>(cells, heat_params(params));
  throw std::invalid_argument("unknown model '" + name + "' (expected lvm or heat)");
}

PNorm default_pnorm(const std::string& model_name) {
  if (model_name == "lvm") return LotkaVolterraModel::default_pnorm();
  if (model_name == "heat") return HeatModel::default_pnorm();
  throw std::invalid_argument("unknown model '" + model_name + "'");
}

double default_beta(const std::string& model_name) {
  if (model_name == "lvm") return LotkaVolterraModel::default_beta();
  if (model_name == "heat") return HeatModel::default_beta();
  throw std::invalid_argument("unknown model '" + model_name + "'");
}

ControlGrid random_start(const Model& model, std::uint64_t seed) {
  const int n = model.grid().cells;
  const int d = model.alphabet()->size();
  SplitMix64 rng(seed);

  const int bound = n / 10;
  int switches = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(bound) + 1));
  switches = std::min(switches, n - 1);

  // Floyd's sampling of `switches` distinct boundaries from {1, ..., n-1}.
  std::vector<int> boundaries;
  std::vector<bool> taken(static_cast<size_t>(n), false);
  for (int j = n - 1 - switches + 1; j <= n - 1; ++j) {
    const int r = 1 + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(j)));
    if (taken[r]) {
      taken[j] = true;
      boundaries.push_back(j);
    } else {
      taken[r] = true;
      boundaries.push_back(r);
    }
  }
  std::sort(boundaries.begin(), boundaries.end());

  std::vector<int> segment_values(static_cast<size_t>(switches) + 1);
  segment_values[0] = static_cast<int>(rng.bounded(d));
  for (size_t s = 1; s < segment_values.size(); ++s) {
    int idx = static_cast<int>(rng.bounded(d - 1));
    if (idx >= segment_values[s - 1]) ++idx;  // consecutive segments differ
    segment_values[s] = idx;
  }

  std::vector<int> indices(n);
  int segment = 0;
  for (int j = 0; j < n; ++j) {
    while (segment < switches && j >= boundaries[segment]) ++segment;
    indices[j] = segment_values[segment];
  }
  return ControlGrid(model.alphabet(), model.grid().horizon, std::move(indices));
}

BenchmarkSpec load_benchmark_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec '" + path + "'");
  nlohmann::json j;
  in >> j;

  BenchmarkSpec spec;
  for (const auto& [key, value] : j.items()) {
    if (key == "model") spec.model = value.get<std::string>();
    else if (key == "n") spec.cells = value.get<int>();
    else if (key == "p") {
      spec.p = value.is_string() ? PNorm::parse(value.get<std::string>())
                                 : PNorm::finite(value.get<double>());
    } else if (key == "beta") spec.beta = value.get<double>();
    else if (key == "samples") spec.samples = value.get<int>();
    else if (key == "seed") spec.seed = value.get<std::uint64_t>();
    else if (key == "sigma_max") {
      if (!value.is_null()) spec.max_switches = value.get<int>();
    } else if (key == "out_dir") spec.out_dir = value.get<std::string>();
    else if (key == "model_params") spec.model_params = value;
    else if (key == "trust_region") {
      for (const auto& [tk, tv] : value.items()) {
        if (tk == "initial_radius") spec.trust_region.initial_radius = tv.get<double>();
        else if (tk == "acceptance_ratio") spec.trust_region.acceptance_ratio = tv.get<double>();
        else if (tk == "max_outer") spec.trust_region.max_outer = tv.get<int>();
        else if (tk == "pred_tol") spec.trust_region.pred_tol = tv.get<double>();
        else throw std::invalid_argument("unknown trust_region key '" + tk + "'");
      }
    } else throw std::invalid_argument("unknown spec key '" + key + "'");
  }
  if (spec.samples < 1) throw std::invalid_argument("spec needs samples >= 1");
  return spec;
}

namespace {

int worker_count(int samples) {
  if (const char* env = std::getenv("TVOPT_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return std::min(w, samples);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return std::min(samples, static_cast<int>(hw > 0 ? hw : 1));
}

Stats stats_of(std::vector<double> values) {
  Stats s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  s.min = values.front();
  s.max = values.back();
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / values.size();
  const size_t mid = values.size() / 2;
  s.median = values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
  return s;
}

}  // namespace

BenchmarkResult run_benchmark(const BenchmarkSpec& spec) {
  const PNorm p = spec.p.value_or(default_pnorm(spec.model));
  const double beta = spec.beta.value_or(default_beta(spec.model));
  const int N = spec.samples;

  BenchmarkResult result;
  result.rows.resize(static_cast<size_t>(N));
  std::atomic<int> next{0};

  auto work = [&]() {
    const std::unique_ptr<Model> model = make_model(spec.model, spec.cells, spec.model_params);
    for (int i = next.fetch_add(1); i < N; i = next.fetch_add(1)) {
      SampleResult row;
      row.sample = i;
      row.seed = derive_seed(spec.seed, i);
      try {
        const ControlGrid start = random_start(*model, row.seed);
        const MinimizeResult r =
            minimize(*model, start, spec.trust_region, p, beta, spec.max_switches);
        row.ok = true;
        row.objective = r.objective;
        row.tracking = r.tracking;
        row.tv = r.tv;
        row.seconds = r.seconds_total;
        row.outer_iterations = r.outer_iterations;
        row.model_time_frac = r.seconds_total > 0 ? r.seconds_model / r.seconds_total : 0.0;
        row.dp_time_frac = r.seconds_total > 0 ? r.seconds_dp / r.seconds_total : 0.0;
        row.status = r.status;
        row.residual_norm = first_order(*model, r.control).residual_norm;
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
      }
      result.rows[static_cast<size_t>(i)] = std::move(row);
    }
  };

  std::vector<std::thread> workers;
  const int W = worker_count(N);
  workers.reserve(static_cast<size_t>(W));
  for (int w = 0; w < W; ++w) workers.emplace_back(work);
  for (auto& t : workers) t.join();

  std::vector<double> objective, seconds, residual, outers, model_frac, dp_frac;
  for (const auto& row : result.rows) {
    if (!row.ok) continue;
    objective.push_back(row.objective);
    seconds.push_back(row.seconds);
    residual.push_back(row.residual_norm);
    outers.push_back(row.outer_iterations);
    model_frac.push_back(row.model_time_frac);
    dp_frac.push_back(row.dp_time_frac);
  }
  result.aggregates = {
      {"objective", stats_of(objective)},   {"seconds", stats_of(seconds)},
      {"residual_norm", stats_of(residual)}, {"outer_iters", stats_of(outers)},
      {"model_time_frac", stats_of(model_frac)}, {"dp_time_frac", stats_of(dp_frac)},
  };
  return result;
}

namespace {

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::RadiusExhausted: return "radius_exhausted";
    case SolveStatus::IterationLimit: return "iteration_limit";
  }
  return "unknown";
}

}  // namespace

void write_benchmark_files(const BenchmarkResult& result, const std::string& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir + "/samples.csv");
    if (!out) throw std::runtime_error("cannot write samples.csv");
    out << "sample,seed,status,objective,tracking,tv,seconds,residual_norm,outer_iters,"
           "model_time_frac,dp_time_frac,error\n"
        << std::setprecision(17);
    for (const auto& row : result.rows) {
      std::string err = row.error;
      std::replace(err.begin(), err.end(), ',', ';');
      out << row.sample << ',' << row.seed << ','
          << (row.ok ? status_name(row.status) : "failed") << ',';
      if (row.ok) {
        out << row.objective << ',' << row.tracking << ',' << row.tv << ',' << row.seconds << ','
            << row.residual_norm << ',' << row.outer_iterations << ',' << row.model_time_frac
            << ',' << row.dp_time_frac << ',';
      } else {
        out << ",,,,,,,,";
      }
      out << err << '\n';
    }
  }
  std::ofstream out(dir + "/summary.csv");
  if (!out) throw std::runtime_error("cannot write summary.csv");
  out << "column,min,max,mean,median\n" << std::setprecision(17);
  for (const auto& [name, s] : result.aggregates) {
    out << name << ',' << s.min << ',' << s.max << ',' << s.mean << ',' << s.median << '\n';
  }
}

void print_benchmark_summary(std::ostream& out, const BenchmarkResult& result) {
  int failed = 0;
  for (const auto& row : result.rows) {
    if (!row.ok) ++failed;
  }
  out << "samples: " << result.rows.size() << " (" << failed << " failed)\n";
  out << std::left << std::setw(18) << "column" << std::right << std::setw(14) << "min"
      << std::setw(14) << "max" << std::setw(14) << "mean" << std::setw(14) << "median" << '\n';
  out << std::setprecision(6);
  for (const auto& [name, s] : result.aggregates) {
    out << std::left << std::setw(18) << name << std::right << std::setw(14) << s.min
        << std::setw(14) << s.max << std::setw(14) << s.mean << std::setw(14) << s.median << '\n';
  }
}

void emit_solution(const Model& model, const ControlGrid& u, const std::string& dir) {
  std::filesystem::create_directories(dir);
  write_control_file(dir + "/control.dat", u);

  const MinimalRepresentation m = extract_minimal(u);
  const int M = u.alphabet().dim();
  for (int c = 0; c < M; ++c) {
    std::vector<double> t{0.0}, v{static_cast<double>(m.levels()[0][c])};
    for (size_t j = 0; j < m.times().size(); ++j) {
      t.push_back(m.times()[j]);
      v.push_back(static_cast<double>(m.levels()[j + 1][c]));
    }
    t.push_back(u.horizon());
    v.push_back(static_cast<double>(m.levels().back()[c]));
    write_column_file(dir + "/control_u" + std::to_string(c + 1) + ".dat",
                      "t u" + std::to_string(c + 1), t, v);
  }

  const RowMatrix g = model.gradient(u);
  double maxabs = 0.0;
  for (int j = 0; j < g.rows(); ++j) {
    for (int c = 0; c < M; ++c) maxabs = std::max(maxabs, std::abs(g(j, c)));
  }
  const double scale = maxabs > 0.0 ? u.alphabet().component_range() / maxabs : 1.0;
  for (int c = 0; c < M; ++c) {
    std::vector<double> t, v;
    for (int j = 0; j < g.rows(); ++j) {
      t.push_back(j * u.dt());
      v.push_back(scale * g(j, c));
    }
    write_column_file(dir + "/gradient_u" + std::to_string(c + 1) + ".dat",
                      "t dF_u" + std::to_string(c + 1), t, v);
  }

  for (const NamedSeries& series : model.trajectories(u)) {
    write_column_file(dir + "/state_" + series.name + ".dat", "t " + series.name, series.times,
                      series.values);
  }
}

}  // namespace tvopt
