#include "chmetric/metric.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "chmetric/error.hpp"
#include "chmetric/numeric.hpp"

namespace chm {

namespace {

void check_grid(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::GridMismatch, "grids differ in length");
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a[k] - b[k]) > 1e-14) throw Error(ErrorKind::GridMismatch, "grids differ at index " + std::to_string(k));
}

}  // namespace

double l2_gap(const std::vector<double>& f, const std::vector<double>& g, const std::vector<double>& grid) {
  if (f.size() != g.size() || f.size() != grid.size() || f.empty())
    throw Error(ErrorKind::GridMismatch, "arrays and grid must share one nonzero length");
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += (f[k] - g[k]) * (f[k] - g[k]);
  return std::sqrt(s / static_cast<double>(f.size()));
}

DistanceBreakdown distance(const ScaledSnapshot& a, const ScaledSnapshot& b) {
  check_grid(a.eta, b.eta);
  DistanceBreakdown d;
  d.dY = l2_gap(a.tY, b.tY, a.eta);
  d.dU = l2_gap(a.tU, b.tU, a.eta);
  d.dP = l2_gap(a.tPsqrt, b.tPsqrt, a.eta);
  d.dA = std::abs(a.A - b.A);
  d.total = d.dY + d.dU + d.dP + d.dA;
  return d;
}

std::vector<SeriesPoint> distance_series(const PeakonParams& p1, const PeakonParams& p2,
                                         const std::vector<double>& times, std::size_t N) {
  return distance_series([&](double t) { return scaled_snapshot_exact(p1, t, N); },
                         [&](double t) { return scaled_snapshot_exact(p2, t, N); }, times);
}

std::vector<SeriesPoint> distance_series(const ScaledSource& a, const ScaledSource& b,
                                         const std::vector<double>& times) {
  std::vector<SeriesPoint> out(times.size());
  parallel_for(times.size(), [&](std::size_t i) {
    const double t = times[i];
    out[i] = {t, distance(a(t), b(t))};
  });
  return out;
}

double fit_growth_rate(const std::vector<SeriesPoint>& series) {
  if (series.size() < 2) return 0.0;
  const double t0 = series.front().t, d0 = series.front().d.total;
  double K = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < series.size(); ++i) {
    const double d = series[i].d.total;
    if (d == 0.0) continue;
    if (d0 == 0.0) return std::numeric_limits<double>::infinity();
    K = std::max(K, (std::log(d) - std::log(d0)) / (series[i].t - t0));
  }
  return std::isinf(K) ? 0.0 : K;
}

void write_csv(std::ostream& os, const std::vector<SeriesPoint>& series) {
  os << "t,dY,dU,dP,dA,total\n";
  for (const SeriesPoint& s : series)
    os << fmt_num(s.t) << ',' << fmt_num(s.d.dY) << ',' << fmt_num(s.d.dU) << ',' << fmt_num(s.d.dP) << ','
       << fmt_num(s.d.dA) << ',' << fmt_num(s.d.total) << '\n';
}

}  // namespace chm
