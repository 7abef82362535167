#include "tvopt/optimality.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace tvopt {

namespace {

int boundary_cell(double time, double dt) { return static_cast<int>(std::llround(time / dt)); }

std::vector<std::vector<int>> jump_vectors(const MinimalRepresentation& m) {
  std::vector<std::vector<int>> mu;
  for (int j = 0; j + 1 < m.count(); ++j) {
    std::vector<int> d(m.levels()[j].size());
    for (size_t k = 0; k < d.size(); ++k) d[k] = m.levels()[j][k] - m.levels()[j + 1][k];
    mu.push_back(std::move(d));
  }
  return mu;
}

double dot_mean(const std::vector<int>& mu, const RowMatrix& g, int cell) {
  // gradient at the boundary between cells cell-1 and cell
  double r = 0.0;
  for (size_t m = 0; m < mu.size(); ++m) {
    r += mu[m] * 0.5 * (g(cell - 1, static_cast<int>(m)) + g(cell, static_cast<int>(m)));
  }
  return r;
}

}  // namespace

FirstOrderReport first_order(const ControlGrid& u, const RowMatrix& gradient) {
  const MinimalRepresentation m = extract_minimal(u);
  FirstOrderReport report;
  report.switch_times = m.times();
  report.jumps = jump_vectors(m);
  const double dt = u.dt();
  double sq = 0.0;
  for (size_t j = 0; j < report.switch_times.size(); ++j) {
    const int cell = boundary_cell(report.switch_times[j], dt);
    const double r = dot_mean(report.jumps[j], gradient, cell);
    report.residuals.push_back(r);
    sq += r * r;
  }
  report.residual_norm = std::sqrt(sq);
  return report;
}

FirstOrderReport first_order(const Model& model, const ControlGrid& u) {
  return first_order(u, model.gradient(u));
}

DescentStep descent_direction(const Model& model, const ControlGrid& u, int switch_index,
                              double step_mass) {
  const MinimalRepresentation m = extract_minimal(u);
  const int switches = m.count() - 1;
  if (switch_index < 0 || switch_index >= switches) {
    throw std::invalid_argument("switch index out of range");
  }
  const RowMatrix g = model.gradient(u);
  const FirstOrderReport report = first_order(u, g);
  const double residual = report.residuals[switch_index];
  if (residual == 0.0) {
    throw std::invalid_argument("descent direction needs a nonzero residual");
  }

  const auto& mu = report.jumps[switch_index];
  int mass_per_cell = 0;
  for (int c : mu) mass_per_cell += std::abs(c);
  const double dt = u.dt();
  const int cells_moved = static_cast<int>(std::floor(step_mass / (dt * mass_per_cell) + 1e-12));
  if (cells_moved < 1) {
    throw std::invalid_argument("step mass rounds to zero cells");
  }

  const int boundary = boundary_cell(m.times()[switch_index], dt);
  std::vector<int> indices = u.indices();
  int first_cell, last_cell;  // half-open [first_cell, last_cell)
  int new_index;
  if (residual > 0.0) {
    // retract: the level after the switch claims cells left of the boundary
    first_cell = boundary - cells_moved;
    last_cell = boundary;
    const int prev_boundary =
        switch_index > 0 ? boundary_cell(m.times()[switch_index - 1], dt) : 0;
    if (first_cell < prev_boundary) {
      throw std::invalid_argument("perturbation would cross the previous switch");
    }
    new_index = *u.alphabet().find(m.levels()[switch_index + 1]);
  } else {
    // extend: the level before the switch claims cells right of the boundary
    first_cell = boundary;
    last_cell = boundary + cells_moved;
    const int next_boundary = switch_index + 1 < switches
                                  ? boundary_cell(m.times()[switch_index + 1], dt)
                                  : u.cells();
    if (last_cell > next_boundary) {
      throw std::invalid_argument("perturbation would cross the next switch");
    }
    new_index = *u.alphabet().find(m.levels()[switch_index]);
  }

  double change = 0.0;
  for (int c = first_cell; c < last_cell; ++c) {
    const auto old_value = u.value(c);
    const auto& new_value = u.alphabet().value(new_index);
    for (size_t k = 0; k < old_value.size(); ++k) {
      change += g(c, static_cast<int>(k)) * (new_value[k] - old_value[k]);
    }
    indices[c] = new_index;
  }

  DescentStep step{ControlGrid(u.alphabet_ptr(), u.horizon(), std::move(indices)),
                   static_cast<double>(cells_moved) * dt * mass_per_cell, dt * change,
                   cells_moved};
  return step;
}

SecondOrderReport second_order(const Model& model, const ControlGrid& u, double fd_step) {
  if (!(fd_step > 0.0)) throw std::invalid_argument("fd_step must be positive");
  const MinimalRepresentation m = extract_minimal(u);
  const int S = m.count() - 1;
  SecondOrderReport report;
  report.switch_times = m.times();
  if (S == 0) return report;  // constant control: nothing to check

  const double dt = u.dt();
  const auto mu = jump_vectors(m);
  const RowMatrix base = u.to_samples();
  const RowMatrix g0 = model.gradient(base);

  for (int j = 0; j < S; ++j) {
    const int cell = boundary_cell(m.times()[j], dt);
    if (cell < 1 || cell >= u.cells()) {
      throw std::invalid_argument("switch too close to the boundary for the stencil");
    }
    double rate = 0.0;
    for (size_t k = 0; k < mu[j].size(); ++k) {
      rate += mu[j][k] * (g0(cell, static_cast<int>(k)) - g0(cell - 1, static_cast<int>(k))) / dt;
    }
    report.gradient_rate.push_back(rate);
    if (!lambda_set(m.levels()[j], m.levels()[j + 1], u.alphabet()).empty()) {
      report.lambda_active.push_back(j);
    }
  }

  // Kernel entries mu_j . H(t_j, t_k) mu_k from central differences under a
  // one-cell pulse of direction mu_k placed right of t_k.
  RowMatrix kernel(S, S);
  for (int k = 0; k < S; ++k) {
    const int pulse_cell = boundary_cell(m.times()[k], dt);
    int mass_per_cell = 0;
    for (int c : mu[k]) mass_per_cell += std::abs(c);
    const double scale = fd_step / (dt * mass_per_cell);

    RowMatrix plus = base;
    RowMatrix minus = base;
    for (size_t c = 0; c < mu[k].size(); ++c) {
      plus(pulse_cell, static_cast<int>(c)) += scale * mu[k][c];
      minus(pulse_cell, static_cast<int>(c)) -= scale * mu[k][c];
    }
    const RowMatrix gp = model.gradient(plus);
    const RowMatrix gm = model.gradient(minus);
    for (int j = 0; j < S; ++j) {
      const int cell = boundary_cell(m.times()[j], dt);
      const double diff = dot_mean(mu[j], gp, cell) - dot_mean(mu[j], gm, cell);
      kernel(j, k) = diff / (2.0 * scale * dt);
    }
  }

  report.curvature = RowMatrix(S, S);
  Eigen::MatrixXd sym(S, S);
  double magnitude = 1.0;
  for (int j = 0; j < S; ++j) {
    for (int k = 0; k < S; ++k) {
      report.curvature(j, k) = kernel(j, k) + (j == k ? report.gradient_rate[j] : 0.0);
    }
  }
  for (int j = 0; j < S; ++j) {
    for (int k = 0; k < S; ++k) {
      sym(j, k) = 0.5 * (report.curvature(j, k) + report.curvature(k, j));
      magnitude = std::max(magnitude, std::abs(report.curvature(j, k)));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
  report.min_eigenvalue = eig.eigenvalues().minCoeff();

  const double tol = 1e-9 * magnitude;
  report.sonc_form = report.min_eigenvalue >= -tol;
  report.soec_form = report.min_eigenvalue > tol;
  for (int j : report.lambda_active) {
    report.sonc_rate = report.sonc_rate && report.gradient_rate[j] >= -tol;
    report.soec_rate = report.soec_rate && report.gradient_rate[j] > tol;
  }
  return report;
}

}  // namespace tvopt
