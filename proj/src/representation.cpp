#include "tvopt/representation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tvopt {

Fraction::Fraction(long long n, long long d) : num(n), den(d) {
  if (den == 0) throw std::invalid_argument("fraction with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

std::vector<Fraction> lambda_set(std::span<const int> a, std::span<const int> b,
                                 const AdmissibleSet& V) {
  if (a.size() != b.size() || static_cast<int>(a.size()) != V.dim()) {
    throw std::invalid_argument("lambda_set: dimension mismatch");
  }
  if (std::equal(a.begin(), a.end(), b.begin())) {
    throw std::invalid_argument("lambda_set: endpoints coincide");
  }
  int pivot = 0;
  while (a[pivot] == b[pivot]) ++pivot;
  const long long span_pivot = b[pivot] - a[pivot];

  std::vector<Fraction> result;
  for (const auto& point : V.values()) {
    const long long offset = point[pivot] - a[pivot];
    // candidate weight offset/span_pivot must lie strictly inside (0,1)
    if (span_pivot > 0) {
      if (offset <= 0 || offset >= span_pivot) continue;
    } else {
      if (offset >= 0 || offset <= span_pivot) continue;
    }
    bool collinear = true;
    for (int i = 0; i < V.dim(); ++i) {
      const long long lhs = static_cast<long long>(point[i] - a[i]) * span_pivot;
      const long long rhs = offset * static_cast<long long>(b[i] - a[i]);
      if (lhs != rhs) {
        collinear = false;
        break;
      }
    }
    if (collinear) result.emplace_back(offset, span_pivot);
  }
  std::sort(result.begin(), result.end());
  return result;
}

namespace {

void check_levels_shape(const std::vector<std::vector<int>>& levels,
                        const std::vector<double>& times, double horizon) {
  if (levels.empty()) throw std::invalid_argument("representation needs at least one level");
  if (times.size() + 1 != levels.size()) {
    throw std::invalid_argument("representation needs one time per switch");
  }
  const size_t dim = levels.front().size();
  for (const auto& level : levels) {
    if (level.size() != dim) throw std::invalid_argument("levels must share one dimension");
  }
  for (double t : times) {
    if (!(t > 0.0) || !(t < horizon)) {
      throw std::invalid_argument("switch times must lie strictly inside (0, horizon)");
    }
  }
}

}  // namespace

MinimalRepresentation::MinimalRepresentation(double horizon,
                                             std::vector<std::vector<int>> levels,
                                             std::vector<double> times)
    : horizon_(horizon), levels_(std::move(levels)), times_(std::move(times)) {
  if (!(horizon_ > 0.0)) throw std::invalid_argument("representation needs a positive horizon");
  check_levels_shape(levels_, times_, horizon_);
  for (size_t i = 0; i + 1 < times_.size(); ++i) {
    if (!(times_[i] < times_[i + 1])) {
      throw std::invalid_argument("minimal representation needs strictly increasing times");
    }
  }
  for (size_t i = 0; i + 1 < levels_.size(); ++i) {
    if (levels_[i] == levels_[i + 1]) {
      throw std::invalid_argument("minimal representation needs distinct consecutive levels");
    }
  }
}

FullRepresentation::FullRepresentation(double horizon, std::vector<std::vector<int>> levels,
                                       std::vector<double> times,
                                       std::vector<std::optional<Fraction>> weights)
    : horizon_(horizon),
      levels_(std::move(levels)),
      times_(std::move(times)),
      weights_(std::move(weights)) {
  if (!(horizon_ > 0.0)) throw std::invalid_argument("representation needs a positive horizon");
  check_levels_shape(levels_, times_, horizon_);
  if (weights_.size() != levels_.size()) {
    throw std::invalid_argument("full representation needs one weight slot per level");
  }
  for (size_t i = 0; i + 1 < times_.size(); ++i) {
    if (times_[i] > times_[i + 1]) {
      throw std::invalid_argument("full representation needs nondecreasing times");
    }
  }
}

MinimalRepresentation extract_minimal(const ControlGrid& u) {
  const double dt = u.dt();
  std::vector<std::vector<int>> levels;
  std::vector<double> times;
  levels.push_back(u.alphabet().value(u.index(0)));
  for (int j = 1; j < u.cells(); ++j) {
    if (u.index(j) != u.index(j - 1)) {
      levels.push_back(u.alphabet().value(u.index(j)));
      times.push_back(dt * j);
    }
  }
  return MinimalRepresentation(u.horizon(), std::move(levels), std::move(times));
}

namespace {

std::vector<int> segment_point(const std::vector<int>& a, const std::vector<int>& b,
                               const Fraction& lambda) {
  std::vector<int> p(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    const long long scaled = lambda.num * static_cast<long long>(b[i] - a[i]);
    if (scaled % lambda.den != 0) {
      throw std::logic_error("segment point is not a lattice point");
    }
    p[i] = a[i] + static_cast<int>(scaled / lambda.den);
  }
  return p;
}

FullRepresentation expand_switches(double horizon, const std::vector<std::vector<int>>& levels,
                                   const std::vector<double>& times, const AdmissibleSet& V) {
  std::vector<std::vector<int>> out_levels;
  std::vector<double> out_times;
  for (size_t j = 0; j < times.size(); ++j) {
    out_levels.push_back(levels[j]);
    out_times.push_back(times[j]);
    const auto lambdas = lambda_set(levels[j], levels[j + 1], V);
    for (const auto& lambda : lambdas) {
      out_levels.push_back(segment_point(levels[j], levels[j + 1], lambda));
      out_times.push_back(times[j]);
    }
  }
  out_levels.push_back(levels.back());

  // Weights are recovered from the final cluster structure (maximal runs of
  // one switch time).
  std::vector<std::optional<Fraction>> weights(out_levels.size());
  size_t i = 0;
  while (i < out_times.size()) {
    size_t j = i;
    while (j + 1 < out_times.size() && out_times[j + 1] == out_times[i]) ++j;
    const auto& head = out_levels[i];
    const auto& tail = out_levels[j + 1];
    if (j > i && head == tail) throw std::logic_error("degenerate switch cluster");
    for (size_t k = i + 1; k <= j; ++k) {
      int pivot = 0;
      while (head[pivot] == tail[pivot]) ++pivot;
      weights[k] = Fraction(out_levels[k][pivot] - head[pivot], tail[pivot] - head[pivot]);
    }
    i = j + 1;
  }
  return FullRepresentation(horizon, std::move(out_levels), std::move(out_times),
                            std::move(weights));
}

}  // namespace

FullRepresentation extract_full(const MinimalRepresentation& m, const AdmissibleSet& V) {
  return expand_switches(m.horizon(), m.levels(), m.times(), V);
}

FullRepresentation extract_full(const FullRepresentation& f, const AdmissibleSet& V) {
  return expand_switches(f.horizon(), f.levels(), f.times(), V);
}

ControlGrid render_grid(const MinimalRepresentation& m, AlphabetPtr alphabet, int cells) {
  if (cells < 1) throw std::invalid_argument("render_grid needs at least one cell");
  const double dt = m.horizon() / cells;
  std::vector<int> boundaries;
  boundaries.reserve(m.times().size());
  for (double t : m.times()) {
    const double ratio = t / dt;
    const long long k = std::llround(ratio);
    if (std::abs(t - k * dt) > 1e-9 * m.horizon() || k < 1 || k > cells - 1) {
      throw std::invalid_argument("switch time is not aligned with the target grid");
    }
    boundaries.push_back(static_cast<int>(k));
  }

  std::vector<int> indices(cells);
  int segment = 0;
  for (int j = 0; j < cells; ++j) {
    while (segment < static_cast<int>(boundaries.size()) && j >= boundaries[segment]) ++segment;
    const auto idx = alphabet->find(m.levels()[segment]);
    if (!idx) throw std::invalid_argument("representation level is not in the alphabet");
    indices[j] = *idx;
  }
  return ControlGrid(std::move(alphabet), m.horizon(), std::move(indices));
}

void validate_full_representation(const FullRepresentation& f, const AdmissibleSet& V) {
  const auto& levels = f.levels();
  const auto& times = f.times();
  const auto& weights = f.weights();
  for (const auto& level : levels) {
    if (!V.find(level)) throw std::logic_error("full representation level outside alphabet");
  }
  for (size_t i = 0; i + 1 < levels.size(); ++i) {
    if (levels[i] == levels[i + 1]) {
      throw std::logic_error("full representation repeats a level");
    }
  }
  size_t i = 0;
  while (i < times.size()) {
    size_t j = i;
    while (j + 1 < times.size() && times[j + 1] == times[i]) ++j;
    const auto& head = levels[i];
    const auto& tail = levels[j + 1];
    const auto lambdas = lambda_set(head, tail, V);
    if (lambdas.size() != j - i) {
      throw std::logic_error("cluster does not carry every segment-interior point");
    }
    for (size_t k = i + 1; k <= j; ++k) {
      const auto& lambda = lambdas[k - i - 1];
      if (segment_point(head, tail, lambda) != levels[k]) {
        throw std::logic_error("cluster levels out of order");
      }
      if (!weights[k] || !(*weights[k] == lambda)) {
        throw std::logic_error("cluster weight mismatch");
      }
    }
    i = j + 1;
  }
}

}  // namespace tvopt
