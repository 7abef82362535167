#ifndef TVOPT_DP_SUBPROBLEM_HPP
#define TVOPT_DP_SUBPROBLEM_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "tvopt/control_grid.hpp"
#include "tvopt/matrix.hpp"
#include "tvopt/tvp.hpp"

namespace tvopt {

/// One discretized trust-region subproblem: minimize
///   dt * sum_j g_j . u_j  +  beta * sum_j ||u_{j+1} - u_j||_p
/// over alphabet-valued grids u whose integer L1 deviation from the current
/// iterate stays within `budget`, optionally with at most `max_switches`
/// index changes.
struct SubproblemInstance {
  ControlGrid current;            // v, the iterate the budget is measured from
  RowMatrix gradient;             // cells x M cell means of the gradient
  PNorm p = PNorm::finite(2.0);
  double beta = 0.0;
  int budget = 0;                 // B
  std::optional<int> max_switches;  // sigma_max
};

/// Value/argmin tables of the budgeted Bellman recursion. The value function
/// itself is rolled over two time layers during the build; only the first
/// layer survives here (it is all the budget-reuse path needs), together with
/// the full argmin table used for reconstruction.
class DPTables {
 public:
  int cells() const { return cells_; }
  int budget() const { return budget_; }
  bool switch_bounded() const { return sigma_slots_ > 1 || bounded_; }

 private:
  friend struct dp_detail;

  AlphabetPtr alphabet_;
  double horizon_ = 0.0;
  int cells_ = 0;        // n
  int levels_ = 0;       // d
  int budget_ = 0;       // B
  int sigma_slots_ = 1;  // sigma_max + 1, or 1 when unbounded
  bool bounded_ = false;
  std::vector<double> first_layer_;   // phi at the first cell: [b][l][sigma]
  std::vector<int16_t> policy_;       // argmin successor: [i][b][l][sigma], -1 = none
  std::vector<int> deviation_;        // ||nu_l - v_j||_1: [j][l]
};

struct SubproblemSolution {
  ControlGrid control;  // u*
  double value;         // optimal objective of the instance
};

struct SolveResult {
  SubproblemSolution best;
  DPTables tables;
};

/// Exact solve by backward induction over (cell, exact budget[, remaining
/// switches]). Ties in the inner minimum take the smallest successor index;
/// ties in the final argmin take the smallest (level, budget) pair. Throws
/// std::runtime_error when no feasible control exists (possible only with a
/// switch bound, since u = v is always budget-feasible).
SolveResult solve(const SubproblemInstance& inst);

/// Re-runs only the final argmin and the reconstruction at a smaller budget;
/// no recursion work. Throws std::invalid_argument unless 0 <= budget <= B.
SubproblemSolution resolve_at_budget(const DPTables& tables, int budget);

}  // namespace tvopt

#endif  // TVOPT_DP_SUBPROBLEM_HPP
