#include "tvopt/control_grid.hpp"

#include <stdexcept>

namespace tvopt {

ControlGrid::ControlGrid(AlphabetPtr alphabet, double horizon, std::vector<int> indices)
    : alphabet_(std::move(alphabet)), horizon_(horizon), indices_(std::move(indices)) {
  if (!alphabet_) throw std::invalid_argument("control grid needs an alphabet");
  if (indices_.empty()) throw std::invalid_argument("control grid needs at least one cell");
  if (!(horizon_ > 0.0)) throw std::invalid_argument("control grid needs a positive horizon");
  for (int idx : indices_) {
    if (idx < 0 || idx >= alphabet_->size()) {
      throw std::invalid_argument("control grid index out of alphabet range");
    }
  }
}

RowMatrix ControlGrid::to_samples() const {
  RowMatrix samples(cells(), alphabet_->dim());
  for (int j = 0; j < cells(); ++j) {
    const auto& v = alphabet_->value(indices_[j]);
    for (int m = 0; m < alphabet_->dim(); ++m) samples(j, m) = static_cast<double>(v[m]);
  }
  return samples;
}

int ControlGrid::l1_deviation(const ControlGrid& u, const ControlGrid& w) {
  if (u.cells() != w.cells()) throw std::invalid_argument("controls live on different grids");
  int total = 0;
  for (int j = 0; j < u.cells(); ++j) {
    total += u.alphabet().l1_distance(u.index(j), w.index(j));
  }
  return total;
}

}  // namespace tvopt
