#ifndef TVOPT_HEAT_MODEL_HPP
#define TVOPT_HEAT_MODEL_HPP

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <array>
#include <atomic>

#include "tvopt/model.hpp"
#include "tvopt/tvp.hpp"

namespace tvopt {

/// Heating of the square plate (-1,1)^2 by two Gaussian heaters with integer
/// power levels, Robin heat loss across the whole boundary, and a target
/// temperature to track.
struct HeatParams {
  double diffusivity = 0.5;        // alpha
  double robin = 0.12;             // kappa
  double energy_weight = 10.0;     // gamma
  double target = 20.0;            // y_d
  double initial = 10.0;           // y_0
  double outside = 0.0;            // y_out
  std::array<double, 2> heater_amplitude = {20.0, 20.0};
  std::array<double, 2> heater_width = {10.0, 10.0};
  std::array<std::array<double, 2>, 2> heater_center = {{{-1.0, 0.0}, {1.0, 0.0}}};
  double horizon = 10.0;
  int max_level = 5;   // alphabet {0..max_level}^2
  int nodes = 33;      // vertex-centered nodes per spatial dimension
  int substeps = 1;    // implicit-Euler steps per control cell
};

/// Spatial discretization: 5-point Laplacian on a vertex-centered grid with
/// ghost-node closure of the Robin condition; the weighted operator W*L is
/// symmetric, which the adjoint sweep exploits to reuse the single LU
/// factorization of the time-stepping matrix.
class HeatModel : public Model {
 public:
  explicit HeatModel(int cells, HeatParams params = {});

  GridSpec grid() const override { return {params_.horizon, cells_}; }
  AlphabetPtr alphabet() const override { return alphabet_; }
  double objective(const RowMatrix& control) const override;
  RowMatrix gradient(const RowMatrix& control) const override;
  std::vector<NamedSeries> trajectories(const RowMatrix& control) const override;
  std::unique_ptr<Model> clone() const override;

  const HeatParams& params() const { return params_; }

  static PNorm default_pnorm() { return PNorm::finite(2.0); }
  static double default_beta() { return 0.1; }

  /// Total LU factorizations performed by all instances; each instance
  /// factors exactly once.
  static long factorization_count() { return factorizations_.load(); }

  /// Implicit-Euler system matrix I + dt*alpha*L (exposed for tests).
  const Eigen::SparseMatrix<double>& system_matrix() const { return system_; }
  /// Robin-closed negative Laplacian.
  const Eigen::SparseMatrix<double>& laplacian() const { return laplacian_; }
  /// Trapezoid quadrature weights per node.
  const Eigen::VectorXd& quadrature_weights() const { return weights_; }

  using Model::gradient;
  using Model::objective;
  using Model::trajectories;

 private:
  void assemble();
  Eigen::VectorXd step_source(const RowMatrix& control, int cell) const;
  double tracking(const Eigen::VectorXd& y) const;

  int cells_;
  HeatParams params_;
  AlphabetPtr alphabet_;

  Eigen::SparseMatrix<double> laplacian_;  // L with -lap(y) = L y - robin_rhs
  Eigen::SparseMatrix<double> system_;     // A = I + dt*alpha*L
  Eigen::SparseLU<Eigen::SparseMatrix<double>> solver_;
  Eigen::VectorXd weights_;                // W
  Eigen::VectorXd robin_rhs_;              // constant boundary source (alpha included)
  std::array<Eigen::VectorXd, 2> heater_;  // f_1, f_2 on nodes

  static std::atomic<long> factorizations_;
};

}  // namespace tvopt

#endif  // TVOPT_HEAT_MODEL_HPP
