#include "tvopt/lotka_volterra.hpp"

#include <cmath>
#include <stdexcept>

namespace tvopt {

LotkaVolterraModel::LotkaVolterraModel(int cells, LotkaVolterraParams params)
    : cells_(cells), params_(params) {
  if (cells_ < 1) throw std::invalid_argument("model needs at least one cell");
  alphabet_ = std::make_shared<AdmissibleSet>(AdmissibleSet::unit_vectors(3));
}

RowMatrix LotkaVolterraModel::integrate(const RowMatrix& control) const {
  if (control.rows() != cells_ || control.cols() != 3) {
    throw std::invalid_argument("control samples do not match the model grid");
  }
  const double dt = params_.horizon / cells_;
  RowMatrix y(cells_ + 1, 2);
  y(0, 0) = params_.initial_state[0];
  y(0, 1) = params_.initial_state[1];
  for (int k = 0; k < cells_; ++k) {
    double c1 = 0.0, c2 = 0.0;
    for (int m = 0; m < 3; ++m) {
      c1 += params_.prey_catch[m] * control(k, m);
      c2 += params_.predator_catch[m] * control(k, m);
    }
    const double y1 = y(k, 0);
    const double y2 = y(k, 1);
    y(k + 1, 0) = y1 + dt * (y1 - y1 * y2 - y1 * c1);
    y(k + 1, 1) = y2 + dt * (-y2 + y1 * y2 - y2 * c2);
    if (!std::isfinite(y(k + 1, 0)) || !std::isfinite(y(k + 1, 1))) {
      throw std::runtime_error("state blow-up in the predator-prey integration");
    }
  }
  return y;
}

double LotkaVolterraModel::objective(const RowMatrix& control) const {
  const RowMatrix y = integrate(control);
  const double dt = params_.horizon / cells_;
  double sum = 0.0;
  // left-endpoint rectangle rule, matching the forward Euler pairing of
  // (y^k, u^k) on cell k
  for (int k = 0; k < cells_; ++k) {
    const double e1 = y(k, 0) - 1.0;
    const double e2 = y(k, 1) - 1.0;
    sum += 0.5 * (e1 * e1 + e2 * e2);
  }
  return dt * sum;
}

RowMatrix LotkaVolterraModel::gradient(const RowMatrix& control) const {
  const RowMatrix y = integrate(control);
  const double dt = params_.horizon / cells_;
  RowMatrix g(cells_, 3);
  // backward sweep of the exact adjoint of the Euler recursion; p^n = 0
  double p1 = 0.0, p2 = 0.0;
  for (int k = cells_ - 1; k >= 0; --k) {
    const double y1 = y(k, 0);
    const double y2 = y(k, 1);
    for (int m = 0; m < 3; ++m) {
      g(k, m) = -(y1 * p1 * params_.prey_catch[m] + y2 * p2 * params_.predator_catch[m]);
    }
    double c1 = 0.0, c2 = 0.0;
    for (int m = 0; m < 3; ++m) {
      c1 += params_.prey_catch[m] * control(k, m);
      c2 += params_.predator_catch[m] * control(k, m);
    }
    const double q1 = p1 + dt * ((1.0 - y2 - c1) * p1 + y2 * p2 + (y1 - 1.0));
    const double q2 = p2 + dt * (-y1 * p1 + (-1.0 + y1 - c2) * p2 + (y2 - 1.0));
    p1 = q1;
    p2 = q2;
  }
  return g;
}

std::vector<NamedSeries> LotkaVolterraModel::trajectories(const RowMatrix& control) const {
  const RowMatrix y = integrate(control);
  const double dt = params_.horizon / cells_;
  NamedSeries prey{"y1", {}, {}};
  NamedSeries predator{"y2", {}, {}};
  for (int k = 0; k <= cells_; ++k) {
    prey.times.push_back(k * dt);
    prey.values.push_back(y(k, 0));
    predator.times.push_back(k * dt);
    predator.values.push_back(y(k, 1));
  }
  return {prey, predator};
}

std::unique_ptr<Model> LotkaVolterraModel::clone() const {
  return std::make_unique<LotkaVolterraModel>(cells_, params_);
}

}  // namespace tvopt
