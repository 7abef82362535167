#include "tvopt/tvp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace tvopt {

PNorm PNorm::finite(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("p-norm exponent must satisfy p >= 1");
  }
  return PNorm(p, false);
}

PNorm PNorm::parse(const std::string& text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "inf" || lower == "infinity") return inf();
  size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(lower, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse p-norm exponent '" + text + "'");
  }
  if (used != lower.size()) {
    throw std::invalid_argument("cannot parse p-norm exponent '" + text + "'");
  }
  return finite(p);
}

double PNorm::exponent() const {
  if (inf_) throw std::logic_error("infinity norm has no finite exponent");
  return p_;
}

std::string PNorm::str() const {
  if (inf_) return "inf";
  if (p_ == static_cast<long long>(p_)) return std::to_string(static_cast<long long>(p_));
  return std::to_string(p_);
}

namespace {

template <typename T>
double pnorm_impl(std::span<const T> x, const PNorm& p) {
  if (p.is_inf()) {
    double m = 0.0;
    for (T v : x) m = std::max(m, std::abs(static_cast<double>(v)));
    return m;
  }
  const double e = p.exponent();
  if (e == 1.0) {
    double s = 0.0;
    for (T v : x) s += std::abs(static_cast<double>(v));
    return s;
  }
  if (e == 2.0) {
    double s = 0.0;
    for (T v : x) s += static_cast<double>(v) * static_cast<double>(v);
    return std::sqrt(s);
  }
  double s = 0.0;
  for (T v : x) s += std::pow(std::abs(static_cast<double>(v)), e);
  return std::pow(s, 1.0 / e);
}

double jump_sum(const std::vector<std::vector<int>>& levels, const PNorm& p) {
  double total = 0.0;
  std::vector<int> diff;
  for (size_t i = 0; i + 1 < levels.size(); ++i) {
    const auto& a = levels[i];
    const auto& b = levels[i + 1];
    diff.assign(a.size(), 0);
    for (size_t k = 0; k < a.size(); ++k) diff[k] = b[k] - a[k];
    total += pnorm(std::span<const int>(diff), p);
  }
  return total;
}

}  // namespace

double pnorm(std::span<const double> x, const PNorm& p) { return pnorm_impl(x, p); }
double pnorm(std::span<const int> x, const PNorm& p) { return pnorm_impl(x, p); }

double tvp(const ControlGrid& u, const PNorm& p) {
  double total = 0.0;
  std::vector<int> diff(u.alphabet().dim());
  for (int j = 0; j + 1 < u.cells(); ++j) {
    if (u.index(j) == u.index(j + 1)) continue;
    const auto a = u.value(j);
    const auto b = u.value(j + 1);
    for (int k = 0; k < u.alphabet().dim(); ++k) diff[k] = b[k] - a[k];
    total += pnorm(std::span<const int>(diff), p);
  }
  return total;
}

double tvp(const MinimalRepresentation& m, const PNorm& p) { return jump_sum(m.levels(), p); }

double tvp(const FullRepresentation& f, const PNorm& p) { return jump_sum(f.levels(), p); }

}  // namespace tvopt
