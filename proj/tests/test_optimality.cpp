#include <doctest.h>

#include <cmath>

#include "oracle_helpers.hpp"
#include "tvopt/optimality.hpp"

using namespace tvopt;
using testing::QuadraticTrackingModel;
using testing::ScaledModel;

namespace {

AlphabetPtr box1(int hi) { return std::make_shared<AdmissibleSet>(AdmissibleSet::box(1, 0, hi)); }

}  // namespace

TEST_CASE("constant control yields an empty report") {
  const auto V = box1(2);
  const ControlGrid u(V, 4.0, std::vector<int>(8, 1));
  const QuadraticTrackingModel model(V, u);
  const FirstOrderReport report = first_order(model, u);
  CHECK(report.residuals.empty());
  CHECK(report.residual_norm == 0.0);
}

TEST_CASE("residuals vanish at the tracking target") {
  const auto V = box1(2);
  const ControlGrid target(V, 4.0, {0, 0, 2, 2, 1, 1, 1, 1});
  const QuadraticTrackingModel model(V, target);
  const FirstOrderReport report = first_order(model, target);
  REQUIRE(report.residuals.size() == 2);
  for (double r : report.residuals) CHECK(r == doctest::Approx(0.0));
  CHECK(report.residual_norm == doctest::Approx(0.0));
}

TEST_CASE("jump vectors follow the before-minus-after convention") {
  const auto V = box1(2);
  const ControlGrid u(V, 4.0, {0, 0, 2, 2});
  const QuadraticTrackingModel model(V, u);
  const FirstOrderReport report = first_order(model, u);
  REQUIRE(report.jumps.size() == 1);
  CHECK(report.jumps[0] == std::vector<int>{-2});
  CHECK(report.switch_times[0] == doctest::Approx(2.0));
}

TEST_CASE("single-cell switch moves change the toy objective by exactly -dt*r") {
  const auto V = box1(2);
  // u switches 0 -> 2 at t=4 (cell 4 of 8, dt = 1); target is constant 0, so
  // the residual at the switch is -2
  const ControlGrid target(V, 8.0, std::vector<int>(8, 0));
  const QuadraticTrackingModel model(V, target);
  const ControlGrid u(V, 8.0, {0, 0, 0, 0, 2, 2, 2, 2});
  const FirstOrderReport report = first_order(model, u);
  REQUIRE(report.residuals.size() == 1);
  const double r = report.residuals[0];
  CHECK(r == doctest::Approx(-2.0));
  const double dt = u.dt();
  const double base = model.objective(u);

  ControlGrid left(V, 8.0, {0, 0, 0, 2, 2, 2, 2, 2});   // retract by one cell
  ControlGrid right(V, 8.0, {0, 0, 0, 0, 0, 2, 2, 2});  // extend by one cell
  CHECK(model.objective(left) - base == doctest::Approx(-dt * r).epsilon(1e-12));
  CHECK(model.objective(right) - base == doctest::Approx(dt * r).epsilon(1e-12));
}

TEST_CASE("descent direction achieves the guaranteed linear decrease") {
  // a gradient that is constant in time satisfies the smoothness the descent
  // construction leans on
  const auto V = box1(2);
  RowMatrix coeff(8, 1);
  for (int j = 0; j < 8; ++j) coeff(j, 0) = 0.7;
  const testing::LinearModel model(V, 8.0, coeff);
  const ControlGrid u(V, 8.0, {0, 0, 0, 0, 2, 2, 2, 2});
  const FirstOrderReport report = first_order(model, u);
  const double r = report.residuals[0];
  CHECK(r == doctest::Approx(-1.4));
  int mass_per_cell = 0;
  for (int c : report.jumps[0]) mass_per_cell += std::abs(c);

  const DescentStep step = descent_direction(model, u, 0, 2.5);
  CHECK(step.cells_moved == 1);
  CHECK(step.mass == doctest::Approx(2.0));
  const double eps = std::abs(r) / mass_per_cell;
  CHECK(step.linear_change <= -(eps / 2.0) * step.mass + 1e-12);

  // negative residual extends the pre-switch level to the right
  CHECK(step.control.index(4) != u.index(4));
  CHECK(step.control.index(3) == u.index(3));

  // flipping the gradient sign flips the chosen side
  const ScaledModel flipped(model, -1.0);
  const DescentStep other = descent_direction(flipped, u, 0, 2.5);
  CHECK(other.control.index(3) != u.index(3));
  CHECK(other.control.index(4) == u.index(4));
  CHECK(other.linear_change <= -(eps / 2.0) * other.mass + 1e-12);
}

TEST_CASE("descent direction error paths") {
  const auto V = box1(2);
  RowMatrix coeff(8, 1);
  for (int j = 0; j < 8; ++j) coeff(j, 0) = 0.7;
  const testing::LinearModel model(V, 8.0, coeff);

  // constant control: no switch to move
  const ControlGrid constant(V, 8.0, std::vector<int>(8, 1));
  CHECK_THROWS_AS(descent_direction(model, constant, 0, 1.0), std::invalid_argument);

  const ControlGrid u(V, 8.0, {0, 0, 0, 0, 2, 2, 2, 2});
  CHECK_THROWS_AS(descent_direction(model, u, 0, 1e-9), std::invalid_argument);  // rounds to zero
  CHECK_THROWS_AS(descent_direction(model, u, 5, 1.0), std::invalid_argument);   // bad index
  // the move would need six cells but only four exist beyond the switch
  CHECK_THROWS_AS(descent_direction(model, u, 0, 2.0 * 6.0), std::invalid_argument);

  // a vanishing residual rejects the construction
  RowMatrix zero(8, 1);
  const testing::LinearModel flat(V, 8.0, zero);
  CHECK_THROWS_AS(descent_direction(flat, u, 0, 2.0), std::invalid_argument);
}

TEST_CASE("second-order report on the quadratic toy") {
  const auto V = box1(2);
  const ControlGrid target(V, 8.0, {0, 0, 2, 2, 1, 1, 1, 1});
  const QuadraticTrackingModel model(V, target);
  const SecondOrderReport report = second_order(model, target);

  // switches 0->2 and 2->1: only the first has a segment-interior point
  REQUIRE(report.gradient_rate.size() == 2);
  CHECK(report.lambda_active == std::vector<int>{0});

  // identity kernel: positive diagonal, vanishing cross terms, PSD form
  CHECK(report.curvature(0, 0) > 0.0);
  CHECK(report.curvature(1, 1) > 0.0);
  CHECK(report.curvature(0, 1) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(report.min_eigenvalue > 0.0);
  CHECK(report.sonc_form);
  CHECK(report.sonc_rate);

  // strict flags imply the weak ones
  CHECK((!report.soec_rate || report.sonc_rate));
  CHECK((!report.soec_form || report.sonc_form));
}

TEST_CASE("scaling the objective scales the curvature matrix") {
  const auto V = box1(2);
  const ControlGrid target(V, 8.0, {0, 0, 2, 2, 1, 1, 1, 1});
  const QuadraticTrackingModel model(V, target);
  const ScaledModel scaled(model, 3.0);
  const SecondOrderReport a = second_order(model, target);
  const SecondOrderReport b = second_order(scaled, target);
  REQUIRE(a.curvature.rows() == b.curvature.rows());
  for (int i = 0; i < a.curvature.rows(); ++i) {
    for (int j = 0; j < a.curvature.cols(); ++j) {
      CHECK(b.curvature(i, j) == doctest::Approx(3.0 * a.curvature(i, j)).epsilon(1e-6));
    }
  }
  CHECK(a.sonc_form == b.sonc_form);
  CHECK(a.sonc_rate == b.sonc_rate);
  CHECK(a.lambda_active == b.lambda_active);
}

TEST_CASE("lambda-active switches are exactly the duplicated-time switches") {
  SplitMix64 rng(456);
  for (int trial = 0; trial < 50; ++trial) {
    const auto V = testing::random_alphabet(rng, 2, 6);
    const ControlGrid u = testing::random_grid(rng, V, 12, 6.0);
    const MinimalRepresentation m = extract_minimal(u);
    if (m.count() < 2) continue;
    const QuadraticTrackingModel model(V, u);
    const SecondOrderReport report = second_order(model, u);

    const FullRepresentation f = extract_full(m, *V);
    std::vector<int> duplicated;
    for (size_t j = 0; j < m.times().size(); ++j) {
      const size_t copies = std::count(f.times().begin(), f.times().end(), m.times()[j]);
      if (copies > 1) duplicated.push_back(static_cast<int>(j));
    }
    CHECK(report.lambda_active == duplicated);
  }
}

TEST_CASE("empty second-order report for constant controls") {
  const auto V = box1(2);
  const ControlGrid u(V, 4.0, std::vector<int>(8, 1));
  const QuadraticTrackingModel model(V, u);
  const SecondOrderReport report = second_order(model, u);
  CHECK(report.gradient_rate.empty());
  CHECK(report.lambda_active.empty());
  CHECK(report.sonc_form);
}
