#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "chmetric/peakon.hpp"
#include "chmetric/transform.hpp"

namespace chm {

struct DistanceBreakdown {
  double dY = 0.0;
  double dU = 0.0;
  double dP = 0.0;
  double dA = 0.0;
  double total = 0.0;
};

// Midpoint-rule L2(0,1) norm of f - g; `grid` must be the midpoint grid both live on.
double l2_gap(const std::vector<double>& f, const std::vector<double>& g, const std::vector<double>& grid);

DistanceBreakdown distance(const ScaledSnapshot& a, const ScaledSnapshot& b);

struct SeriesPoint {
  double t;
  DistanceBreakdown d;
};

// Closed-form scaled fields of both peakon pairs at every time.
std::vector<SeriesPoint> distance_series(const PeakonParams& p1, const PeakonParams& p2,
                                         const std::vector<double>& times, std::size_t N);

// Generic form: each source returns the scaled snapshot at time t on an N-point grid.
using ScaledSource = std::function<ScaledSnapshot(double t)>;
std::vector<SeriesPoint> distance_series(const ScaledSource& a, const ScaledSource& b,
                                         const std::vector<double>& times);

// K = max over later samples of (ln d(t) - ln d(t_first)) / (t - t_first).
// Returns 0 for an identically zero series and +inf if d(t_first) = 0 < d(t).
double fit_growth_rate(const std::vector<SeriesPoint>& series);

void write_csv(std::ostream& os, const std::vector<SeriesPoint>& series);

}  // namespace chm
