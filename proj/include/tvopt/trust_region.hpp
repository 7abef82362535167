#ifndef TVOPT_TRUST_REGION_HPP
#define TVOPT_TRUST_REGION_HPP

#include <iosfwd>
#include <optional>
#include <vector>

#include "tvopt/dp_subproblem.hpp"
#include "tvopt/model.hpp"
#include "tvopt/tvp.hpp"

namespace tvopt {

struct TrustRegionConfig {
  double initial_radius = 2.0;    // Delta^0, reset every outer iteration
  double acceptance_ratio = 0.5;  // a step needs ared >= ratio * pred
  int max_outer = 1000;
  double pred_tol = 0.0;  // termination threshold on pred; a 1e-12 floor
                          // absorbs summation-order noise
};

enum class SolveStatus {
  Converged,         // pred <= tol: the iterate solves its own subproblem
  RadiusExhausted,   // budget shrank to zero cells: stationary at this resolution
  IterationLimit,    // max_outer hit; best iterate so far returned
};

struct TraceRow {
  int outer = 0;
  int inner = 0;
  double radius = 0.0;
  int budget = 0;
  double pred = 0.0;
  double ared = 0.0;
  double objective = 0.0;  // F + beta*TV of the candidate (current iterate on exit rows)
  double tv = 0.0;
  bool accepted = false;
  int step_l1 = 0;  // integer L1 deviation of the candidate from the iterate
};

struct MinimizeResult {
  explicit MinimizeResult(ControlGrid c) : control(std::move(c)) {}

  ControlGrid control;
  double objective = 0.0;  // F + beta*TV at the final iterate
  double tracking = 0.0;   // F alone
  double tv = 0.0;
  SolveStatus status = SolveStatus::Converged;
  std::vector<TraceRow> trace;
  int outer_iterations = 0;
  long objective_calls = 0;
  long gradient_calls = 0;
  long dp_builds = 0;
  long dp_resolves = 0;
  double seconds_total = 0.0;
  double seconds_model = 0.0;  // objective + gradient evaluations
  double seconds_dp = 0.0;     // subproblem builds + budget re-solves
};

/// Outer trust-region loop on F(u) + beta*TV_p(u). Per outer iteration: one
/// gradient evaluation and one DP table build; radius halvings reuse the
/// tables through resolve_at_budget; one objective evaluation per inner
/// acceptance test. Throws only what the model or subproblem throws.
MinimizeResult minimize(const Model& model, const ControlGrid& start,
                        const TrustRegionConfig& cfg, const PNorm& p, double beta,
                        std::optional<int> max_switches = {});

/// Trace rows as CSV with the stable header
/// outer_iter,inner_iter,radius,budget,pred,ared,objective,tv,accepted.
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace);

}  // namespace tvopt

#endif  // TVOPT_TRUST_REGION_HPP
