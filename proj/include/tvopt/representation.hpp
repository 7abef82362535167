#ifndef TVOPT_REPRESENTATION_HPP
#define TVOPT_REPRESENTATION_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tvopt/control_grid.hpp"

namespace tvopt {

/// Exact rational in lowest terms with positive denominator. Convex weights
/// between integer lattice points are rationals, so collinearity checks stay
/// exact.
struct Fraction {
  long long num = 0;
  long long den = 1;

  Fraction() = default;
  Fraction(long long n, long long d);  // normalizes, throws on d == 0

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Fraction& a, const Fraction& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(const Fraction& a, const Fraction& b) {
    return a.num * b.den < b.num * a.den;
  }
};

/// All lambda in (0,1) with (1-lambda)*a + lambda*b in V, strictly increasing.
/// Throws std::invalid_argument when a == b (the weight would be the whole
/// interval, which signals a broken switching sequence).
std::vector<Fraction> lambda_set(std::span<const int> a, std::span<const int> b,
                                 const AdmissibleSet& V);

/// Switching-point encoding with strictly increasing interior switch times
/// and pairwise distinct consecutive levels.
class MinimalRepresentation {
 public:
  MinimalRepresentation(double horizon, std::vector<std::vector<int>> levels,
                        std::vector<double> times);

  int count() const { return static_cast<int>(levels_.size()); }  // n_t
  const std::vector<std::vector<int>>& levels() const { return levels_; }
  const std::vector<double>& times() const { return times_; }
  double horizon() const { return horizon_; }

  friend bool operator==(const MinimalRepresentation&, const MinimalRepresentation&) = default;

 private:
  double horizon_;
  std::vector<std::vector<int>> levels_;
  std::vector<double> times_;  // count()-1 interior switch times
};

/// Minimal representation augmented by duplicated switch times that carry
/// every alphabet point lying on the segment between the adjacent levels.
/// Levels interior to a duplicated-time cluster remember their convex weight.
class FullRepresentation {
 public:
  FullRepresentation(double horizon, std::vector<std::vector<int>> levels,
                     std::vector<double> times,
                     std::vector<std::optional<Fraction>> weights);

  int count() const { return static_cast<int>(levels_.size()); }  // n-hat
  const std::vector<std::vector<int>>& levels() const { return levels_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<std::optional<Fraction>>& weights() const { return weights_; }
  double horizon() const { return horizon_; }

 private:
  double horizon_;
  std::vector<std::vector<int>> levels_;
  std::vector<double> times_;  // count()-1, nondecreasing
  std::vector<std::optional<Fraction>> weights_;  // per level; set on cluster-interior levels
};

/// Merge maximal runs of equal values; switch times land on cell boundaries.
MinimalRepresentation extract_minimal(const ControlGrid& u);

/// Duplicate each switch time once per segment-interior alphabet point and
/// insert those points in increasing-weight order.
FullRepresentation extract_full(const MinimalRepresentation& m, const AdmissibleSet& V);

/// Re-running the duplication on an already-full sequence changes nothing;
/// exposed so that idempotence is testable.
FullRepresentation extract_full(const FullRepresentation& f, const AdmissibleSet& V);

/// Exact sampling back onto an n-cell grid. Throws when a switch time is not
/// an integer multiple of horizon/n (refuses lossy rendering) or a level is
/// not in the alphabet.
ControlGrid render_grid(const MinimalRepresentation& m, AlphabetPtr alphabet, int cells);

/// Checks every structural property of a full representation (time ordering,
/// cluster weight completeness and order, distinct neighbors at singleton
/// times). Throws std::logic_error with a reason on violation.
void validate_full_representation(const FullRepresentation& f, const AdmissibleSet& V);

}  // namespace tvopt

#endif  // TVOPT_REPRESENTATION_HPP
