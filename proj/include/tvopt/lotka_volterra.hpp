#ifndef TVOPT_LOTKA_VOLTERRA_HPP
#define TVOPT_LOTKA_VOLTERRA_HPP

#include <array>

#include "tvopt/model.hpp"
#include "tvopt/tvp.hpp"

namespace tvopt {

/// Multimode fishing: three mutually exclusive fishing modes act on a
/// predator-prey system, and the tracking objective drives both populations
/// toward 1.
struct LotkaVolterraParams {
  std::array<double, 3> prey_catch = {0.2, 0.4, 0.01};       // v1, rate on y1
  std::array<double, 3> predator_catch = {0.1, 0.2, 0.1};    // v2, rate on y2
  std::array<double, 2> initial_state = {0.5, 0.7};
  double horizon = 12.0;
};

/// Tracking objective 1/2 int (y1-1)^2 + (y2-1)^2 dt with explicit-Euler
/// dynamics on the control grid (one step per cell) and the exact discrete
/// adjoint for gradients. The alphabet is the three unit vectors, so exactly
/// one mode is active per cell by construction.
class LotkaVolterraModel : public Model {
 public:
  explicit LotkaVolterraModel(int cells, LotkaVolterraParams params = {});

  GridSpec grid() const override { return {params_.horizon, cells_}; }
  AlphabetPtr alphabet() const override { return alphabet_; }
  double objective(const RowMatrix& control) const override;
  RowMatrix gradient(const RowMatrix& control) const override;
  std::vector<NamedSeries> trajectories(const RowMatrix& control) const override;
  std::unique_ptr<Model> clone() const override;

  const LotkaVolterraParams& params() const { return params_; }

  static PNorm default_pnorm() { return PNorm::inf(); }
  static double default_beta() { return 1e-3; }

  using Model::gradient;
  using Model::objective;
  using Model::trajectories;

 private:
  /// Forward explicit Euler; returns the (cells+1) x 2 state trajectory.
  RowMatrix integrate(const RowMatrix& control) const;

  int cells_;
  LotkaVolterraParams params_;
  AlphabetPtr alphabet_;
};

}  // namespace tvopt

#endif  // TVOPT_LOTKA_VOLTERRA_HPP
