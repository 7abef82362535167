#include "tvopt/admissible_set.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <stdexcept>

namespace tvopt {

AdmissibleSet::AdmissibleSet(std::vector<std::vector<int>> values) : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw std::invalid_argument("admissible set needs at least two values");
  }
  dim_ = static_cast<int>(values_.front().size());
  if (dim_ < 1) {
    throw std::invalid_argument("admissible set values must have dimension >= 1");
  }
  std::set<std::vector<int>> seen;
  for (const auto& v : values_) {
    if (static_cast<int>(v.size()) != dim_) {
      throw std::invalid_argument("admissible set values must share one dimension");
    }
    if (!seen.insert(v).second) {
      throw std::invalid_argument("admissible set values must be pairwise distinct");
    }
  }
}

AdmissibleSet AdmissibleSet::box(int dim, int lo, int hi) {
  if (dim < 1 || hi < lo) {
    throw std::invalid_argument("invalid box alphabet");
  }
  std::vector<std::vector<int>> values;
  std::vector<int> current(dim, lo);
  const int levels = hi - lo + 1;
  const long long total = [&] {
    long long t = 1;
    for (int i = 0; i < dim; ++i) t *= levels;
    return t;
  }();
  values.reserve(static_cast<size_t>(total));
  for (long long k = 0; k < total; ++k) {
    values.push_back(current);
    for (int i = dim - 1; i >= 0; --i) {
      if (current[i] < hi) {
        ++current[i];
        break;
      }
      current[i] = lo;
    }
  }
  return AdmissibleSet(std::move(values));
}

AdmissibleSet AdmissibleSet::unit_vectors(int dim) {
  if (dim < 2) {
    throw std::invalid_argument("unit-vector alphabet needs dim >= 2");
  }
  std::vector<std::vector<int>> values(dim, std::vector<int>(dim, 0));
  for (int i = 0; i < dim; ++i) values[i][i] = 1;
  return AdmissibleSet(std::move(values));
}

std::optional<int> AdmissibleSet::find(std::span<const int> v) const {
  for (int i = 0; i < size(); ++i) {
    if (std::equal(v.begin(), v.end(), values_[i].begin(), values_[i].end())) return i;
  }
  return std::nullopt;
}

int AdmissibleSet::l1_distance(int i, int j) const {
  const auto& a = values_[i];
  const auto& b = values_[j];
  int s = 0;
  for (int k = 0; k < dim_; ++k) s += std::abs(a[k] - b[k]);
  return s;
}

int AdmissibleSet::component_range() const {
  int lo = values_[0][0];
  int hi = values_[0][0];
  for (const auto& v : values_) {
    for (int x : v) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  return hi - lo;
}

}  // namespace tvopt
