#ifndef TVOPT_CONTROL_GRID_HPP
#define TVOPT_CONTROL_GRID_HPP

#include <memory>
#include <span>
#include <vector>

#include "tvopt/admissible_set.hpp"
#include "tvopt/matrix.hpp"

namespace tvopt {

/// Piecewise-constant control on a uniform time grid, stored as 0-based
/// alphabet indices. Cell j covers [j*dt, (j+1)*dt). Immutable after
/// construction.
class ControlGrid {
 public:
  ControlGrid(AlphabetPtr alphabet, double horizon, std::vector<int> indices);

  int cells() const { return static_cast<int>(indices_.size()); }
  double horizon() const { return horizon_; }
  double dt() const { return horizon_ / cells(); }

  int index(int cell) const { return indices_[cell]; }
  const std::vector<int>& indices() const { return indices_; }

  /// Alphabet value held on the given cell.
  std::span<const int> value(int cell) const {
    const auto& v = alphabet_->value(indices_[cell]);
    return {v.data(), v.size()};
  }

  const AdmissibleSet& alphabet() const { return *alphabet_; }
  const AlphabetPtr& alphabet_ptr() const { return alphabet_; }

  /// Real-valued per-cell samples (cells x M), the form model evaluators eat.
  RowMatrix to_samples() const;

  /// Integer L1 distance sum_j ||u^j - w^j||_1 between two controls sharing a
  /// grid.
  static int l1_deviation(const ControlGrid& u, const ControlGrid& w);

  friend bool operator==(const ControlGrid& a, const ControlGrid& b) {
    return a.horizon_ == b.horizon_ && a.indices_ == b.indices_;
  }

 private:
  AlphabetPtr alphabet_;
  double horizon_;
  std::vector<int> indices_;
};

}  // namespace tvopt

#endif  // TVOPT_CONTROL_GRID_HPP
