#include "tvopt/dp_subproblem.hpp"

#include <limits>
#include <stdexcept>

namespace tvopt {

namespace {
constexpr double kUnreachable = std::numeric_limits<double>::max();
}

/// Shared access point for the private table internals.
struct dp_detail {
  static SolveResult run(const SubproblemInstance& inst);
  static SubproblemSolution reconstruct(const DPTables& t, int budget);
};

SolveResult dp_detail::run(const SubproblemInstance& inst) {
  const ControlGrid& v = inst.current;
  const AdmissibleSet& V = v.alphabet();
  const int n = v.cells();
  const int d = V.size();
  const int M = V.dim();
  const int B = inst.budget;
  if (inst.gradient.rows() != n || inst.gradient.cols() != M) {
    throw std::invalid_argument("gradient samples do not match the control grid");
  }
  if (B < 0) throw std::invalid_argument("budget must be nonnegative");
  if (inst.beta < 0.0) throw std::invalid_argument("beta must be nonnegative");
  if (inst.max_switches && *inst.max_switches < 0) {
    throw std::invalid_argument("switch bound must be nonnegative");
  }
  if (d >= std::numeric_limits<int16_t>::max()) {
    throw std::invalid_argument("alphabet too large for the policy table");
  }

  const bool bounded = inst.max_switches.has_value();
  const int ss = bounded ? *inst.max_switches + 1 : 1;  // sigma slots
  const int bs = B + 1;                                 // budget slots
  const double dt = v.dt();

  DPTables t;
  t.alphabet_ = v.alphabet_ptr();
  t.horizon_ = v.horizon();
  t.cells_ = n;
  t.levels_ = d;
  t.budget_ = B;
  t.sigma_slots_ = ss;
  t.bounded_ = bounded;

  // Pairwise switching costs beta*||nu_l' - nu_l||_p and per-cell L1
  // deviations from v.
  std::vector<double> switch_cost(static_cast<size_t>(d) * d);
  std::vector<int> diff(M);
  for (int l = 0; l < d; ++l) {
    for (int lp = 0; lp < d; ++lp) {
      for (int m = 0; m < M; ++m) diff[m] = V.value(lp)[m] - V.value(l)[m];
      switch_cost[static_cast<size_t>(l) * d + lp] =
          inst.beta * pnorm(std::span<const int>(diff), inst.p);
    }
  }
  t.deviation_.resize(static_cast<size_t>(n) * d);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < d; ++l) {
      t.deviation_[static_cast<size_t>(j) * d + l] = V.l1_distance(l, v.index(j));
    }
  }

  const size_t layer_size = static_cast<size_t>(bs) * d * ss;
  std::vector<double> layer_next(layer_size), layer_cur(layer_size);
  std::vector<double> lin(d);
  if (n > 1) {
    t.policy_.assign(static_cast<size_t>(n - 1) * layer_size, int16_t{-1});
  }

  auto linear_cost = [&](int cell, int level) {
    double s = 0.0;
    const auto g = inst.gradient.row(cell);
    const auto& nu = V.value(level);
    for (int m = 0; m < M; ++m) s += g[m] * nu[m];
    return dt * s;
  };

  // Base layer: the last cell consumes its own deviation exactly.
  std::fill(layer_next.begin(), layer_next.end(), kUnreachable);
  for (int l = 0; l < d; ++l) {
    const int dev = t.deviation_[static_cast<size_t>(n - 1) * d + l];
    if (dev > B) continue;
    const double value = linear_cost(n - 1, l);
    for (int s = 0; s < ss; ++s) {
      layer_next[(static_cast<size_t>(dev) * d + l) * ss + s] = value;
    }
  }

  for (int i = n - 2; i >= 0; --i) {
    for (int l = 0; l < d; ++l) lin[l] = linear_cost(i, l);
    int16_t* policy_layer = t.policy_.data() + static_cast<size_t>(i) * layer_size;
    const double* swc_rows = switch_cost.data();
    for (int b = 0; b <= B; ++b) {
      for (int l = 0; l < d; ++l) {
        const int dev = t.deviation_[static_cast<size_t>(i) * d + l];
        const double* swc = swc_rows + static_cast<size_t>(l) * d;
        for (int s = 0; s < ss; ++s) {
          const size_t at = (static_cast<size_t>(b) * d + l) * ss + s;
          if (dev > b) {
            layer_cur[at] = kUnreachable;
            continue;
          }
          const double* next_row = layer_next.data() + static_cast<size_t>(b - dev) * d * ss;
          double best = kUnreachable;
          int best_lp = -1;
          if (!bounded) {
            for (int lp = 0; lp < d; ++lp) {
              const double next = next_row[lp];
              if (next == kUnreachable) continue;
              const double cand = swc[lp] + next;
              if (cand < best) {
                best = cand;
                best_lp = lp;
              }
            }
          } else {
            for (int lp = 0; lp < d; ++lp) {
              const int s_next = (lp == l) ? s : s - 1;
              if (s_next < 0) continue;
              const double next = next_row[static_cast<size_t>(lp) * ss + s_next];
              if (next == kUnreachable) continue;
              const double cand = swc[lp] + next;
              if (cand < best) {
                best = cand;
                best_lp = lp;
              }
            }
          }
          if (best_lp < 0) {
            layer_cur[at] = kUnreachable;
          } else {
            layer_cur[at] = lin[l] + best;
            policy_layer[at] = static_cast<int16_t>(best_lp);
          }
        }
      }
    }
    layer_cur.swap(layer_next);
  }

  t.first_layer_ = std::move(layer_next);
  SolveResult result{reconstruct(t, B), std::move(t)};
  return result;
}

SubproblemSolution dp_detail::reconstruct(const DPTables& t, int budget) {
  const int d = t.levels_;
  const int ss = t.sigma_slots_;
  const int top = ss - 1;  // the full switch allowance dominates

  double best = kUnreachable;
  int best_l = -1;
  int best_b = -1;
  for (int l = 0; l < d; ++l) {
    for (int b = 0; b <= budget; ++b) {
      const double value = t.first_layer_[(static_cast<size_t>(b) * d + l) * ss + top];
      if (value < best) {
        best = value;
        best_l = l;
        best_b = b;
      }
    }
  }
  if (best_l < 0) {
    throw std::runtime_error(
        "infeasible subproblem: no control meets the switch bound within the budget");
  }

  std::vector<int> indices(t.cells_);
  indices[0] = best_l;
  int b = best_b;
  int s = top;
  const size_t layer_size = static_cast<size_t>(t.budget_ + 1) * d * ss;
  for (int i = 0; i + 1 < t.cells_; ++i) {
    const int l = indices[i];
    const int16_t next = t.policy_[static_cast<size_t>(i) * layer_size +
                                   (static_cast<size_t>(b) * d + l) * ss + s];
    if (next < 0) throw std::logic_error("policy table has no successor for a finite state");
    b -= t.deviation_[static_cast<size_t>(i) * d + l];
    if (t.bounded_ && next != l) --s;
    indices[i + 1] = next;
  }
  return SubproblemSolution{ControlGrid(t.alphabet_, t.horizon_, std::move(indices)), best};
}

SolveResult solve(const SubproblemInstance& inst) { return dp_detail::run(inst); }

SubproblemSolution resolve_at_budget(const DPTables& tables, int budget) {
  if (budget < 0 || budget > tables.budget()) {
    throw std::invalid_argument("resolve budget must lie in [0, B]");
  }
  return dp_detail::reconstruct(tables, budget);
}

}  // namespace tvopt
