#ifndef TVOPT_OPTIMALITY_HPP
#define TVOPT_OPTIMALITY_HPP

#include <vector>

#include "tvopt/model.hpp"
#include "tvopt/representation.hpp"

namespace tvopt {

/// First-order switching-point residuals: one per interior switch of the
/// minimal representation, r_j = mu_j . grad F(u)(t_j) with
/// mu_j = a_j - a_{j+1} and the gradient at a switch taken as the mean of the
/// two adjacent cell samples.
struct FirstOrderReport {
  std::vector<double> switch_times;
  std::vector<std::vector<int>> jumps;  // mu_j
  std::vector<double> residuals;        // r_j
  double residual_norm = 0.0;           // ||(r_j)_j||_2
};

FirstOrderReport first_order(const Model& model, const ControlGrid& u);
/// Same, reusing an already computed gradient.
FirstOrderReport first_order(const ControlGrid& u, const RowMatrix& gradient);

/// An admissible descent move when a residual is nonzero: the switch at t_j
/// is retracted (r_j > 0) or extended (r_j < 0) by whole cells carrying a
/// total L1 mass close to the requested one.
struct DescentStep {
  ControlGrid control;        // the perturbed grid u + d
  double mass = 0.0;          // realized ||d||_L1
  double linear_change = 0.0; // quadrature of (grad F, d); negative by construction
  int cells_moved = 0;
};

/// Throws std::invalid_argument when the residual vanishes, the mass rounds
/// to zero cells, or the move would run into a neighboring switch.
DescentStep descent_direction(const Model& model, const ControlGrid& u, int switch_index,
                              double step_mass);

/// Second-order diagnostics at the switch times: rates mu_j . (grad F)'(t_j),
/// the curvature matrix of the switching-time quadratic form, and the
/// necessary/strict condition flags. The Hessian kernel entries come from
/// finite differences of the gradient under one-cell pulses.
struct SecondOrderReport {
  std::vector<double> switch_times;
  std::vector<int> lambda_active;      // J: switches whose segment set is nonempty
  std::vector<double> gradient_rate;   // mu_j . (grad F)'(t_j)
  RowMatrix curvature;                 // (n_t-1) x (n_t-1)
  double min_eigenvalue = 0.0;         // of the symmetric part of curvature
  bool sonc_rate = true;   // rates >= 0 on J
  bool sonc_form = true;   // quadratic form positive semidefinite
  bool soec_rate = true;   // rates > 0 on J
  bool soec_form = true;   // quadratic form positive definite
};

SecondOrderReport second_order(const Model& model, const ControlGrid& u, double fd_step = 1e-4);

}  // namespace tvopt

#endif  // TVOPT_OPTIMALITY_HPP
