#include "tvopt/trust_region.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace tvopt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double linear_term(const RowMatrix& g, const ControlGrid& u) {
  double sum = 0.0;
  for (int j = 0; j < u.cells(); ++j) {
    const auto row = g.row(j);
    const auto value = u.value(j);
    for (size_t m = 0; m < value.size(); ++m) sum += row[m] * value[m];
  }
  return u.dt() * sum;
}

}  // namespace

MinimizeResult minimize(const Model& model, const ControlGrid& start,
                        const TrustRegionConfig& cfg, const PNorm& p, double beta,
                        std::optional<int> max_switches) {
  const GridSpec grid = model.grid();
  if (start.cells() != grid.cells) {
    throw std::invalid_argument("start control does not live on the model grid");
  }
  if (!(cfg.initial_radius > 0.0)) throw std::invalid_argument("initial radius must be positive");
  if (!(cfg.acceptance_ratio > 0.0) || !(cfg.acceptance_ratio < 1.0)) {
    throw std::invalid_argument("acceptance ratio must lie in (0,1)");
  }
  const double tol = std::max(cfg.pred_tol, 1e-12);
  const double dt = grid.dt();
  const auto t0 = Clock::now();

  MinimizeResult res{start};
  {
    const auto tm = Clock::now();
    res.tracking = model.objective(res.control);
    res.seconds_model += seconds_since(tm);
    ++res.objective_calls;
  }
  res.tv = tvp(res.control, p);
  res.objective = res.tracking + beta * res.tv;
  res.status = SolveStatus::IterationLimit;

  for (int outer = 1; outer <= cfg.max_outer; ++outer) {
    res.outer_iterations = outer;

    const auto tg = Clock::now();
    const RowMatrix g = model.gradient(res.control);
    res.seconds_model += seconds_since(tg);
    ++res.gradient_calls;

    // Subproblem objective of the current iterate; pred is measured against it.
    const double current_cost = linear_term(g, res.control) + beta * res.tv;

    double radius = cfg.initial_radius;
    int budget = static_cast<int>(std::floor(radius / dt + 1e-9));
    std::optional<DPTables> tables;

    for (int inner = 1;; ++inner) {
      if (budget <= 0) {
        // No admissible deviation fits the radius anymore; the iterate is
        // stationary at this grid resolution.
        res.status = SolveStatus::RadiusExhausted;
        res.seconds_total = seconds_since(t0);
        return res;
      }

      SubproblemSolution sol{res.control, 0.0};
      const auto td = Clock::now();
      if (!tables) {
        SolveResult built = solve(SubproblemInstance{res.control, g, p, beta, budget, max_switches});
        res.seconds_dp += seconds_since(td);
        ++res.dp_builds;
        sol = std::move(built.best);
        tables.emplace(std::move(built.tables));
      } else {
        sol = resolve_at_budget(*tables, budget);
        res.seconds_dp += seconds_since(td);
        ++res.dp_resolves;
      }

      const double pred = current_cost - sol.value;
      if (pred <= tol) {
        res.trace.push_back(TraceRow{outer, inner, radius, budget, pred, 0.0, res.objective,
                                     res.tv, false, 0});
        res.status = SolveStatus::Converged;
        res.seconds_total = seconds_since(t0);
        return res;
      }

      const auto tm = Clock::now();
      const double tracking_w = model.objective(sol.control);
      res.seconds_model += seconds_since(tm);
      ++res.objective_calls;
      const double tv_w = tvp(sol.control, p);
      const double objective_w = tracking_w + beta * tv_w;
      const double ared = res.objective - objective_w;
      const bool accepted = ared >= cfg.acceptance_ratio * pred;
      res.trace.push_back(TraceRow{outer, inner, radius, budget, pred, ared, objective_w, tv_w,
                                   accepted, ControlGrid::l1_deviation(res.control, sol.control)});

      if (accepted) {
        res.control = std::move(sol.control);
        res.tracking = tracking_w;
        res.tv = tv_w;
        res.objective = objective_w;
        break;
      }
      radius *= 0.5;
      budget /= 2;  // floor(floor(x)/2) == floor(x/2)
    }
  }

  res.seconds_total = seconds_since(t0);
  return res;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
  out << "outer_iter,inner_iter,radius,budget,pred,ared,objective,tv,accepted\n";
  out << std::setprecision(17);
  for (const auto& row : trace) {
    out << row.outer << ',' << row.inner << ',' << row.radius << ',' << row.budget << ','
        << row.pred << ',' << row.ared << ',' << row.objective << ',' << row.tv << ','
        << (row.accepted ? 1 : 0) << '\n';
  }
}

}  // namespace tvopt
