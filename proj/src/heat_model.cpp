#include "tvopt/heat_model.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace tvopt {

std::atomic<long> HeatModel::factorizations_{0};

HeatModel::HeatModel(int cells, HeatParams params) : cells_(cells), params_(params) {
  if (cells_ < 1) throw std::invalid_argument("model needs at least one cell");
  if (params_.nodes < 3) throw std::invalid_argument("heat model needs at least 3 nodes per axis");
  if (params_.substeps < 1) throw std::invalid_argument("heat model needs at least one substep");
  if (params_.max_level < 1) throw std::invalid_argument("heat model needs max_level >= 1");
  alphabet_ = std::make_shared<AdmissibleSet>(AdmissibleSet::box(2, 0, params_.max_level));
  assemble();
}

void HeatModel::assemble() {
  const int nx = params_.nodes;
  const int nn = nx * nx;
  const double h = 2.0 / (nx - 1);
  const double inv_h2 = 1.0 / (h * h);
  const double robin = 2.0 * params_.robin / h;

  auto id = [nx](int ix, int iy) { return ix + nx * iy; };

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(nn) * 5);
  robin_rhs_ = Eigen::VectorXd::Zero(nn);
  for (int iy = 0; iy < nx; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const int row = id(ix, iy);
      double diag = 0.0;
      // x direction
      if (ix == 0) {
        diag += 2.0 * inv_h2 + robin;
        trips.emplace_back(row, id(1, iy), -2.0 * inv_h2);
        robin_rhs_[row] += robin * params_.outside;
      } else if (ix == nx - 1) {
        diag += 2.0 * inv_h2 + robin;
        trips.emplace_back(row, id(nx - 2, iy), -2.0 * inv_h2);
        robin_rhs_[row] += robin * params_.outside;
      } else {
        diag += 2.0 * inv_h2;
        trips.emplace_back(row, id(ix - 1, iy), -inv_h2);
        trips.emplace_back(row, id(ix + 1, iy), -inv_h2);
      }
      // y direction
      if (iy == 0) {
        diag += 2.0 * inv_h2 + robin;
        trips.emplace_back(row, id(ix, 1), -2.0 * inv_h2);
        robin_rhs_[row] += robin * params_.outside;
      } else if (iy == nx - 1) {
        diag += 2.0 * inv_h2 + robin;
        trips.emplace_back(row, id(ix, nx - 2), -2.0 * inv_h2);
        robin_rhs_[row] += robin * params_.outside;
      } else {
        diag += 2.0 * inv_h2;
        trips.emplace_back(row, id(ix, iy - 1), -inv_h2);
        trips.emplace_back(row, id(ix, iy + 1), -inv_h2);
      }
      trips.emplace_back(row, row, diag);
    }
  }
  laplacian_.resize(nn, nn);
  laplacian_.setFromTriplets(trips.begin(), trips.end());
  robin_rhs_ *= params_.diffusivity;

  weights_ = Eigen::VectorXd::Zero(nn);
  heater_[0] = Eigen::VectorXd::Zero(nn);
  heater_[1] = Eigen::VectorXd::Zero(nn);
  for (int iy = 0; iy < nx; ++iy) {
    const double wy = (iy == 0 || iy == nx - 1) ? 0.5 * h : h;
    const double py = -1.0 + iy * h;
    for (int ix = 0; ix < nx; ++ix) {
      const double wx = (ix == 0 || ix == nx - 1) ? 0.5 * h : h;
      const double px = -1.0 + ix * h;
      const int row = id(ix, iy);
      weights_[row] = wx * wy;
      for (int i = 0; i < 2; ++i) {
        const double dx = px - params_.heater_center[i][0];
        const double dy = py - params_.heater_center[i][1];
        heater_[i][row] =
            params_.heater_amplitude[i] * std::exp(-params_.heater_width[i] * (dx * dx + dy * dy));
      }
    }
  }

  const double dt_sub = params_.horizon / cells_ / params_.substeps;
  Eigen::SparseMatrix<double> identity(nn, nn);
  identity.setIdentity();
  system_ = identity + dt_sub * params_.diffusivity * laplacian_;
  solver_.compute(system_);
  if (solver_.info() != Eigen::Success) {
    throw std::runtime_error("factorization of the implicit-Euler system failed");
  }
  factorizations_.fetch_add(1);
}

Eigen::VectorXd HeatModel::step_source(const RowMatrix& control, int cell) const {
  Eigen::VectorXd s = robin_rhs_;
  s += control(cell, 0) * heater_[0];
  s += control(cell, 1) * heater_[1];
  return s;
}

double HeatModel::tracking(const Eigen::VectorXd& y) const {
  double q = 0.0;
  for (int i = 0; i < y.size(); ++i) {
    const double e = y[i] - params_.target;
    q += weights_[i] * e * e;
  }
  return q;
}

double HeatModel::objective(const RowMatrix& control) const {
  if (control.rows() != cells_ || control.cols() != 2) {
    throw std::invalid_argument("control samples do not match the model grid");
  }
  const double dt = params_.horizon / cells_;
  const double dt_sub = dt / params_.substeps;
  const int nn = params_.nodes * params_.nodes;

  Eigen::VectorXd y = Eigen::VectorXd::Constant(nn, params_.initial);
  double track = 0.0;
  double energy = 0.0;
  for (int j = 0; j < cells_; ++j) {
    const Eigen::VectorXd source = step_source(control, j);
    for (int s = 0; s < params_.substeps; ++s) {
      y = solver_.solve((y + dt_sub * source).eval());
      if (solver_.info() != Eigen::Success) {
        throw std::runtime_error("implicit-Euler solve failed");
      }
      track += dt_sub * tracking(y);
    }
    energy += dt * (control(j, 0) + control(j, 1));
  }
  return track + params_.energy_weight * energy;
}

RowMatrix HeatModel::gradient(const RowMatrix& control) const {
  if (control.rows() != cells_ || control.cols() != 2) {
    throw std::invalid_argument("control samples do not match the model grid");
  }
  const double dt = params_.horizon / cells_;
  const double dt_sub = dt / params_.substeps;
  const int nn = params_.nodes * params_.nodes;
  const int steps = cells_ * params_.substeps;

  std::vector<Eigen::VectorXd> y(steps + 1);
  y[0] = Eigen::VectorXd::Constant(nn, params_.initial);
  for (int k = 0; k < steps; ++k) {
    const Eigen::VectorXd source = step_source(control, k / params_.substeps);
    y[k + 1] = solver_.solve((y[k] + dt_sub * source).eval());
    if (solver_.info() != Eigen::Success) {
      throw std::runtime_error("implicit-Euler solve failed");
    }
  }

  // Adjoint sweep in the quadrature-weighted variable: the weighted system
  // matrix is symmetric, so the forward factorization applies.
  RowMatrix g(cells_, 2);
  Eigen::VectorXd adj = Eigen::VectorXd::Zero(nn);
  for (int k = steps; k >= 1; --k) {
    adj = solver_.solve((adj + 2.0 * dt_sub * (y[k].array() - params_.target).matrix()).eval());
    if (solver_.info() != Eigen::Success) {
      throw std::runtime_error("adjoint solve failed");
    }
    const int cell = (k - 1) / params_.substeps;
    for (int i = 0; i < 2; ++i) {
      g(cell, i) += dt_sub * (weights_.array() * heater_[i].array() * adj.array()).sum();
    }
  }
  for (int j = 0; j < cells_; ++j) {
    for (int i = 0; i < 2; ++i) {
      g(j, i) = g(j, i) / dt + params_.energy_weight;
    }
  }
  return g;
}

std::vector<NamedSeries> HeatModel::trajectories(const RowMatrix& control) const {
  const double dt = params_.horizon / cells_;
  const double dt_sub = dt / params_.substeps;
  const int nn = params_.nodes * params_.nodes;

  NamedSeries dist{"tracking_error", {0.0}, {}};
  Eigen::VectorXd y = Eigen::VectorXd::Constant(nn, params_.initial);
  dist.values.push_back(std::sqrt(tracking(y)));
  for (int j = 0; j < cells_; ++j) {
    const Eigen::VectorXd source = step_source(control, j);
    for (int s = 0; s < params_.substeps; ++s) {
      y = solver_.solve((y + dt_sub * source).eval());
    }
    dist.times.push_back((j + 1) * dt);
    dist.values.push_back(std::sqrt(tracking(y)));
  }
  return {dist};
}

std::unique_ptr<Model> HeatModel::clone() const {
  return std::make_unique<HeatModel>(cells_, params_);
}

}  // namespace tvopt
