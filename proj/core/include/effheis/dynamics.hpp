#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "effheis/matrix.hpp"
#include "effheis/perturbation.hpp"
#include "effheis/projector.hpp"

namespace effheis {

/// Uniform grid t_i = i·t_end/steps, i = 0…steps.
class TimeGrid {
 public:
  TimeGrid(double t_end, std::size_t steps);

  double t_end() const noexcept { return t_end_; }
  std::size_t steps() const noexcept { return steps_; }
  std::size_t size() const noexcept { return steps_ + 1; }
  double spacing() const noexcept { return t_end_ / static_cast<double>(steps_); }
  double at(std::size_t i) const { return spacing() * static_cast<double>(i); }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double t_end_;
  std::size_t steps_;
};

enum class SeriesLabel { exact, timelocal_order1, timelocal_order2 };
std::string_view to_string(SeriesLabel label);

struct PropagatorSeries {
  TimeGrid grid;
  std::vector<ComplexMatrix> values;
  SeriesLabel label = SeriesLabel::exact;
};

/// P(e^{ht_i}) at every grid point. `jobs` > 1 spreads grid points over threads;
/// the result does not depend on it.
PropagatorSeries exact_series(const MomentModel& model, const TimeGrid& grid, std::size_t jobs = 1);

/// Fixed-step RK4 for dΨ/dt = l(t)Ψ, Ψ(0) = I, with l truncated at λ^order.
/// The free part is factored out exactly (Ψ = e^{h₀t}Φ, dΦ/dt = l_I(t)Φ),
/// which is exact because every κ_k commutes with h₀. Each grid interval is
/// subdivided so the step is at most min(1e-2, t_end/200).
/// Throws StepTooLarge if the grid has fewer than 10 steps or ‖l(t)‖_max·Δt > 1.
PropagatorSeries integrate_time_local(const TimeLocalGenerator& gen, int order, const TimeGrid& grid);

struct SeriesComparison {
  double sup_error = 0.0;
  std::vector<double> errors;
};

/// Max-entry difference per grid point, and its supremum.
SeriesComparison compare(const PropagatorSeries& a, const PropagatorSeries& b);

struct OrderStudy {
  std::vector<double> couplings;
  std::vector<double> errors;
  double slope = 0.0;
};

/// Least-squares slope of log(sup error) vs log λ between the order-`order`
/// time-local series and the exact projected propagator. Needs ≥ 3 couplings
/// in geometric progression; throws DegenerateFit when all errors < 1e-13.
OrderStudy order_estimate(const MomentModel& model, const TimeGrid& grid, const std::vector<double>& couplings,
                          int order, std::size_t jobs = 1);

/// Least-squares slope of log y against log x.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace effheis
