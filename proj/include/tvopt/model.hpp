#ifndef TVOPT_MODEL_HPP
#define TVOPT_MODEL_HPP

#include <memory>
#include <string>
#include <vector>

#include "tvopt/control_grid.hpp"
#include "tvopt/matrix.hpp"

namespace tvopt {

struct GridSpec {
  double horizon = 1.0;
  int cells = 1;
  double dt() const { return horizon / cells; }
};

/// A named time series for plotting, sampled at the cells+1 grid nodes.
struct NamedSeries {
  std::string name;
  std::vector<double> times;
  std::vector<double> values;
};

/// A benchmark problem: the smooth part F of the objective and the cell means
/// of its gradient. Evaluators accept real-valued per-cell samples so that
/// finite-difference probes work; alphabet-valued grids go through the
/// convenience overloads. Implementations are immutable after construction
/// and allocate per-call workspaces, so concurrent evaluation is safe.
class Model {
 public:
  virtual ~Model() = default;

  virtual GridSpec grid() const = 0;
  virtual AlphabetPtr alphabet() const = 0;

  /// F at the piecewise-constant control given by per-cell samples (cells x M).
  virtual double objective(const RowMatrix& control) const = 0;

  /// Cell means of the gradient of F (cells x M).
  virtual RowMatrix gradient(const RowMatrix& control) const = 0;

  /// State summaries for plot files.
  virtual std::vector<NamedSeries> trajectories(const RowMatrix&) const { return {}; }

  virtual std::unique_ptr<Model> clone() const = 0;

  double objective(const ControlGrid& u) const { return objective(u.to_samples()); }
  RowMatrix gradient(const ControlGrid& u) const { return gradient(u.to_samples()); }
  std::vector<NamedSeries> trajectories(const ControlGrid& u) const {
    return trajectories(u.to_samples());
  }
};

}  // namespace tvopt

#endif  // TVOPT_MODEL_HPP
