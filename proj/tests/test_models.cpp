#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "oracle_helpers.hpp"
#include "tvopt/harness.hpp"
#include "tvopt/heat_model.hpp"
#include "tvopt/lotka_volterra.hpp"
#include "tvopt/trust_region.hpp"

using namespace tvopt;

namespace {

/// Central finite difference of the objective along a direction, compared to
/// the inner product with the gradient samples (dt-weighted).
double fd_relative_error(const Model& model, const RowMatrix& base, const RowMatrix& direction,
                         double eps) {
  const double dt = model.grid().dt();
  RowMatrix plus = base, minus = base;
  for (int j = 0; j < base.rows(); ++j) {
    for (int m = 0; m < base.cols(); ++m) {
      plus(j, m) += eps * direction(j, m);
      minus(j, m) -= eps * direction(j, m);
    }
  }
  const double fd = (model.objective(plus) - model.objective(minus)) / (2.0 * eps);
  const RowMatrix g = model.gradient(base);
  double inner = 0.0;
  for (int j = 0; j < base.rows(); ++j) {
    for (int m = 0; m < base.cols(); ++m) inner += dt * g(j, m) * direction(j, m);
  }
  return std::abs(fd - inner) / std::max(1e-12, std::abs(inner));
}

RowMatrix random_direction(SplitMix64& rng, int rows, int cols) {
  RowMatrix d(rows, cols);
  for (int j = 0; j < rows; ++j) {
    for (int m = 0; m < cols; ++m) d(j, m) = testing::uniform(rng, -1.0, 1.0);
  }
  return d;
}

}  // namespace

TEST_CASE("predator-prey adjoint gradient matches finite differences") {
  SplitMix64 rng(8);
  const LotkaVolterraModel model(48);
  const ControlGrid u = random_start(model, 4);
  const RowMatrix base = u.to_samples();
  for (int k = 0; k < 6; ++k) {
    const RowMatrix dir = random_direction(rng, base.rows(), base.cols());
    CHECK(fd_relative_error(model, base, dir, 1e-5) <= 1e-6);
  }
}

TEST_CASE("gradient vanishes when fishing has no effect") {
  LotkaVolterraParams params;
  params.prey_catch = {0.0, 0.0, 0.0};
  params.predator_catch = {0.0, 0.0, 0.0};
  const LotkaVolterraModel model(32, params);
  const ControlGrid u = random_start(model, 1);
  const RowMatrix g = model.gradient(u);
  for (int j = 0; j < g.rows(); ++j) {
    for (int m = 0; m < g.cols(); ++m) CHECK(g(j, m) == doctest::Approx(0.0));
  }
}

TEST_CASE("integrator converges at first order") {
  // constant third mode: prey catch rate 0.01
  double previous_gap = 0.0;
  double f_coarse = 0.0;
  for (int level = 0; level < 3; ++level) {
    const int n = 128 << level;
    const LotkaVolterraModel model(n);
    RowMatrix u(n, 3);
    for (int j = 0; j < n; ++j) u(j, 2) = 1.0;
    const double f = model.objective(u);
    if (level > 0) {
      const double gap = std::abs(f - f_coarse);
      if (level > 1) CHECK(gap <= 0.65 * previous_gap);
      previous_gap = gap;
    }
    f_coarse = f;
  }
}

TEST_CASE("integration blow-up on a too-coarse grid is reported") {
  // dt = 0.6 makes the explicit scheme spiral outward under sustained
  // low-fishing mode
  const LotkaVolterraModel model(20);
  RowMatrix u(20, 3);
  for (int j = 0; j < 20; ++j) u(j, 2) = 1.0;
  CHECK_THROWS_AS(model.objective(u), std::runtime_error);

  // the failure propagates through the driver
  const ControlGrid grid(model.alphabet(), model.grid().horizon, std::vector<int>(20, 2));
  CHECK_THROWS_AS(minimize(model, grid, {}, PNorm::inf(), 1e-3), std::runtime_error);
}

TEST_CASE("populations stay positive at benchmark resolution") {
  const LotkaVolterraModel model(512);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ControlGrid u = random_start(model, seed);
    for (const NamedSeries& series : model.trajectories(u)) {
      for (double v : series.values) CHECK(v > 0.0);
    }
  }
}

TEST_CASE("weighted heat operator is symmetric") {
  HeatParams params;
  params.nodes = 9;
  const HeatModel model(4, params);
  const Eigen::MatrixXd L = Eigen::MatrixXd(model.laplacian());
  const Eigen::VectorXd w = model.quadrature_weights();
  const Eigen::MatrixXd WL = w.asDiagonal() * L;
  CHECK((WL - WL.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * WL.cwiseAbs().maxCoeff());
}

TEST_CASE("heat adjoint gradient matches finite differences") {
  SplitMix64 rng(9);
  HeatParams params;
  params.nodes = 17;
  const HeatModel model(16, params);
  const ControlGrid u = random_start(model, 21);
  const RowMatrix base = u.to_samples();
  for (int k = 0; k < 3; ++k) {
    const RowMatrix dir = random_direction(rng, base.rows(), base.cols());
    CHECK(fd_relative_error(model, base, dir, 1e-4) <= 1e-5);
  }
}

TEST_CASE("idle heaters: bounded decay and gradients below the energy weight") {
  HeatParams params;
  params.nodes = 17;
  const HeatModel model(24, params);
  RowMatrix off(24, 2);
  const auto series = model.trajectories(off);
  REQUIRE(series.size() == 1);
  // temperature stays inside [0, initial]: the L2 distance to the target
  // then stays inside the induced band
  const double area = 4.0;
  for (double v : series[0].values) {
    CHECK(v >= std::sqrt((params.target - params.initial) * (params.target - params.initial) *
                         area) -
                   1e-9);
    CHECK(v <= std::sqrt(params.target * params.target * area) + 1e-9);
  }
  const RowMatrix g = model.gradient(off);
  for (int j = 0; j < g.rows(); ++j) {
    for (int m = 0; m < g.cols(); ++m) CHECK(g(j, m) < params.energy_weight);
  }
}

TEST_CASE("one factorization per model instance") {
  const long before = HeatModel::factorization_count();
  HeatParams params;
  params.nodes = 17;
  const HeatModel model(8, params);
  const ControlGrid u = random_start(model, 3);
  model.objective(u);
  model.gradient(u);
  model.objective(u);
  CHECK(HeatModel::factorization_count() == before + 1);
}

TEST_CASE("model configuration overrides") {
  nlohmann::json j;
  j["horizon"] = 6.0;
  const auto model = make_model("lvm", 16, j);
  CHECK(model->grid().horizon == doctest::Approx(6.0));
  j["unknown_key"] = 1;
  CHECK_THROWS_AS(make_model("lvm", 16, j), std::invalid_argument);

  nlohmann::json h;
  h["nodes"] = 9;
  h["max_level"] = 2;
  const auto heat = make_model("heat", 8, h);
  CHECK(heat->alphabet()->size() == 9);
  CHECK_THROWS_AS(make_model("nope", 8, nlohmann::json::object()), std::invalid_argument);
}
