#ifndef TVOPT_TVP_HPP
#define TVOPT_TVP_HPP

#include <span>
#include <string>

#include "tvopt/control_grid.hpp"
#include "tvopt/representation.hpp"

namespace tvopt {

/// Exponent of a vector p-norm: a finite real >= 1 or infinity.
class PNorm {
 public:
  static PNorm finite(double p);
  static PNorm inf() { return PNorm(0.0, true); }

  /// Accepts "inf" (case-insensitive) or a numeric literal >= 1.
  static PNorm parse(const std::string& text);

  bool is_inf() const { return inf_; }
  double exponent() const;  // finite norms only
  std::string str() const;

  friend bool operator==(const PNorm& a, const PNorm& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.p_ == b.p_);
  }

 private:
  PNorm(double p, bool inf) : p_(p), inf_(inf) {}
  double p_;
  bool inf_;
};

/// (sum |x_i|^p)^(1/p), or max |x_i| for the infinity norm.
double pnorm(std::span<const double> x, const PNorm& p);
double pnorm(std::span<const int> x, const PNorm& p);

/// Switching cost: sum of p-norms of consecutive level jumps. Equal
/// neighboring cells contribute nothing; accumulation is left to right so
/// results are reproducible bit for bit.
double tvp(const ControlGrid& u, const PNorm& p);
double tvp(const MinimalRepresentation& m, const PNorm& p);
double tvp(const FullRepresentation& f, const PNorm& p);

}  // namespace tvopt

#endif  // TVOPT_TVP_HPP
