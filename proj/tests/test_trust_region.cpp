#include <doctest.h>

#include <cmath>

#include "oracle_helpers.hpp"
#include "tvopt/lotka_volterra.hpp"
#include "tvopt/trust_region.hpp"

using namespace tvopt;
using testing::QuadraticTrackingModel;

namespace {

AlphabetPtr small_alphabet() {
  return std::make_shared<AdmissibleSet>(AdmissibleSet::box(1, 0, 2));
}

}  // namespace

TEST_CASE("an optimal start terminates immediately") {
  const auto V = small_alphabet();
  const ControlGrid target(V, 5.0, std::vector<int>(5, 1));
  const QuadraticTrackingModel model(V, target);
  const MinimizeResult r = minimize(model, target, {}, PNorm::finite(2), 1e-3);
  CHECK(r.status == SolveStatus::Converged);
  CHECK(r.outer_iterations == 1);
  CHECK(r.control == target);
  CHECK(r.dp_builds == 1);
  CHECK(r.gradient_calls == 1);
}

TEST_CASE("tracking toy reaches the exhaustive minimizer") {
  const auto V = small_alphabet();
  SplitMix64 rng(13);
  // an exactly quadratic objective puts full corrections precisely on the
  // ared = sigma*pred boundary when sigma = 1/2; any ratio below it keeps the
  // acceptance test off that knife edge
  TrustRegionConfig cfg;
  cfg.acceptance_ratio = 0.45;
  for (int trial = 0; trial < 10; ++trial) {
    const ControlGrid target = testing::random_grid(rng, V, 5, 5.0);
    const QuadraticTrackingModel model(V, target);
    const ControlGrid start = testing::random_grid(rng, V, 5, 5.0);
    const double beta = 1e-6;
    const MinimizeResult r = minimize(model, start, cfg, PNorm::finite(2), beta);
    const auto [best, best_value] = testing::exhaustive_minimize(model, PNorm::finite(2), beta);
    CHECK(r.objective == doctest::Approx(best_value).epsilon(1e-12));
    CHECK(r.control == best);
  }
}

TEST_CASE("trace bookkeeping and monotone descent on the benchmark model") {
  const LotkaVolterraModel model(64);
  const ControlGrid start = [&] {
    std::vector<int> idx(64, 0);
    for (int j = 20; j < 40; ++j) idx[j] = 1;
    return ControlGrid(model.alphabet(), model.grid().horizon, idx);
  }();
  const TrustRegionConfig cfg;
  const PNorm p = LotkaVolterraModel::default_pnorm();
  const MinimizeResult r = minimize(model, start, cfg, p, LotkaVolterraModel::default_beta());
  CHECK(r.status == SolveStatus::Converged);

  // one gradient and one table build per outer iteration
  CHECK(r.gradient_calls == r.outer_iterations);
  CHECK(r.dp_builds == r.outer_iterations);

  long ared_rows = 0;
  double objective = 1e300;
  bool first_accept = true;
  for (const TraceRow& row : r.trace) {
    if (row.ared != 0.0 || row.accepted) ++ared_rows;
    if (row.accepted) {
      CHECK(row.ared >= cfg.acceptance_ratio * row.pred - 1e-12);
      CHECK(row.pred > 0.0);
      // L1 step bound: dt * deviation <= radius
      CHECK(model.grid().dt() * row.step_l1 <= row.radius + 1e-12);
      if (!first_accept) CHECK(row.objective < objective);
      objective = row.objective;
      first_accept = false;
    }
  }
  CHECK(r.objective_calls == 1 + ared_rows);

  // termination certificate: the final iterate solves its own subproblem
  const RowMatrix g = model.gradient(r.control);
  const TraceRow& last = r.trace.back();
  CHECK(last.pred <= 1e-12);
  const SolveResult re = solve(SubproblemInstance{
      r.control, g, p, LotkaVolterraModel::default_beta(), last.budget, {}});
  double lin = 0.0;
  for (int j = 0; j < 64; ++j) {
    for (int m = 0; m < 3; ++m) lin += g(j, m) * r.control.value(j)[m];
  }
  const double current_cost =
      model.grid().dt() * lin + LotkaVolterraModel::default_beta() * r.tv;
  CHECK(std::abs(current_cost - re.best.value) <= 1e-9);
}

TEST_CASE("iteration limit reports the best iterate so far") {
  const auto V = small_alphabet();
  SplitMix64 rng(3);
  const ControlGrid target = testing::random_grid(rng, V, 6, 6.0);
  const QuadraticTrackingModel model(V, target);
  ControlGrid start(V, 6.0, {2, 2, 2, 2, 2, 2});
  TrustRegionConfig cfg;
  cfg.max_outer = 1;
  const MinimizeResult r = minimize(model, start, cfg, PNorm::finite(2), 1e-6);
  if (r.status == SolveStatus::IterationLimit) {
    CHECK(r.objective <= model.objective(start) + 1e-6 * tvp(start, PNorm::finite(2)) + 1e-12);
  }
}

TEST_CASE("config validation") {
  const auto V = small_alphabet();
  const ControlGrid target(V, 5.0, std::vector<int>(5, 1));
  const QuadraticTrackingModel model(V, target);
  TrustRegionConfig cfg;
  cfg.initial_radius = 0.0;
  CHECK_THROWS_AS(minimize(model, target, cfg, PNorm::finite(2), 0.1), std::invalid_argument);
  cfg = {};
  cfg.acceptance_ratio = 1.0;
  CHECK_THROWS_AS(minimize(model, target, cfg, PNorm::finite(2), 0.1), std::invalid_argument);
  const ControlGrid wrong(V, 5.0, std::vector<int>(4, 1));
  CHECK_THROWS_AS(minimize(model, wrong, {}, PNorm::finite(2), 0.1), std::invalid_argument);
}
