#include "effheis/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "effheis/error.hpp"
#include "parallel.hpp"

namespace effheis {

TimeGrid::TimeGrid(double t_end, std::size_t steps) : t_end_(t_end), steps_(steps) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw Error(ErrorKind::InvalidArgument, "grid needs finite t_end > 0");
  if (steps == 0) throw Error(ErrorKind::InvalidArgument, "grid needs at least one step");
}

std::string_view to_string(SeriesLabel label) {
  switch (label) {
    case SeriesLabel::exact: return "exact";
    case SeriesLabel::timelocal_order1: return "timelocal-order1";
    case SeriesLabel::timelocal_order2: return "timelocal-order2";
  }
  return "unknown";
}

PropagatorSeries exact_series(const MomentModel& model, const TimeGrid& grid, std::size_t jobs) {
  PropagatorSeries series{grid, std::vector<ComplexMatrix>(grid.size()), SeriesLabel::exact};
  detail::parallel_for(grid.size(), jobs, [&](std::size_t i) {
    series.values[i] = i == 0 ? ComplexMatrix::identity(model.h0.dim()) : effective_propagator(model, grid.at(i));
  });
  return series;
}

PropagatorSeries integrate_time_local(const TimeLocalGenerator& gen, int order, const TimeGrid& grid) {
  if (order != 1 && order != 2) throw Error(ErrorKind::UnsupportedOrder, "time-local integration order must be 1 or 2");
  if (grid.steps() < 10) {
    throw Error(ErrorKind::StepTooLarge, "time-local integration needs at least 10 grid steps, got " +
                                             std::to_string(grid.steps()));
  }
  const double max_step = std::min(1e-2, grid.t_end() / 200.0);
  const auto substeps = static_cast<std::size_t>(std::ceil(grid.spacing() / max_step - 1e-12));
  const double dt = grid.spacing() / static_cast<double>(substeps);
  const std::size_t dim = gen.h0().dim();

  PropagatorSeries series{grid, {}, order == 1 ? SeriesLabel::timelocal_order1 : SeriesLabel::timelocal_order2};
  series.values.reserve(grid.size());
  series.values.push_back(ComplexMatrix::identity(dim));

  ComplexMatrix phi = ComplexMatrix::identity(dim);
  double t = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    for (std::size_t s = 0; s < substeps; ++s) {
      const ComplexMatrix l_start = gen.interaction_part(t, order);
      const double norm = max_abs(gen.h0() + l_start);
      if (norm * dt > 1.0) {
        throw Error(ErrorKind::StepTooLarge, "‖l(t)‖·Δt = " + std::to_string(norm * dt) + " at t = " + std::to_string(t));
      }
      const ComplexMatrix l_mid = gen.interaction_part(t + 0.5 * dt, order);
      const ComplexMatrix l_end = gen.interaction_part(t + dt, order);
      const ComplexMatrix k1 = l_start * phi;
      const ComplexMatrix k2 = l_mid * (phi + (0.5 * dt) * k1);
      const ComplexMatrix k3 = l_mid * (phi + (0.5 * dt) * k2);
      const ComplexMatrix k4 = l_end * (phi + dt * k3);
      phi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t = grid.at(i - 1) + static_cast<double>(s + 1) * dt;
    }
    t = grid.at(i);
    series.values.push_back(matrix_exponential(t * gen.h0()) * phi);
  }
  return series;
}

SeriesComparison compare(const PropagatorSeries& a, const PropagatorSeries& b) {
  if (!(a.grid == b.grid) || a.values.size() != b.values.size()) {
    throw Error(ErrorKind::GridMismatch, "series live on different time grids");
  }
  SeriesComparison out;
  out.errors.reserve(a.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    out.errors.push_back(max_abs_diff(a.values[i], b.values[i]));
    out.sup_error = std::max(out.sup_error, out.errors.back());
  }
  return out;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorKind::InvalidArgument, "slope needs >= 2 paired points");
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw Error(ErrorKind::DegenerateFit, "all abscissae coincide");
  return sxy / sxx;
}

OrderStudy order_estimate(const MomentModel& model, const TimeGrid& grid, const std::vector<double>& couplings,
                          int order, std::size_t jobs) {
  if (couplings.size() < 3) throw Error(ErrorKind::InvalidArgument, "order study needs at least 3 couplings");
  for (double c : couplings)
    if (!(c > 0.0)) throw Error(ErrorKind::InvalidArgument, "order study couplings must be positive");
  const double ratio = couplings[1] / couplings[0];
  for (std::size_t i = 2; i < couplings.size(); ++i) {
    if (std::abs(couplings[i] / couplings[i - 1] - ratio) > 1e-6 * std::abs(ratio)) {
      throw Error(ErrorKind::InvalidArgument, "order study couplings must form a geometric progression");
    }
  }

  OrderStudy study{couplings, std::vector<double>(couplings.size()), 0.0};
  detail::parallel_for(couplings.size(), jobs, [&](std::size_t i) {
    const MomentModel at = model.with_coupling(couplings[i]);
    const PropagatorSeries exact = exact_series(at, grid);
    const PropagatorSeries local = integrate_time_local(kappa12(at), order, grid);
    study.errors[i] = compare(exact, local).sup_error;
  });
  if (std::all_of(study.errors.begin(), study.errors.end(), [](double e) { return e < 1e-13; })) {
    throw Error(ErrorKind::DegenerateFit, "all truncation errors are at round-off level");
  }
  if (std::any_of(study.errors.begin(), study.errors.end(), [](double e) { return !(e > 0.0); })) {
    throw Error(ErrorKind::DegenerateFit, "a truncation error is exactly zero");
  }
  study.slope = log_log_slope(study.couplings, study.errors);
  return study;
}

}  // namespace effheis
