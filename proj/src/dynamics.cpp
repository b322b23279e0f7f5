#include "chmetric/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "chmetric/error.hpp"
#include "chmetric/numeric.hpp"
#include "json.hpp"

namespace chm {

OperatorFields compute_operators(const ScaledSnapshot& ss) {
  const double A = ss.A;
  if (!(A > 0.0)) throw Error(ErrorKind::ZeroEnergy, "operators need A > 0");
  const std::size_t n = ss.eta.size();
  const double h = 1.0 / static_cast<double>(n);
  const EtaDerivatives d = derivatives(ss);
  const double A5 = std::pow(A, 5), A6 = A5 * A;

  std::vector<double> fq(n), g(n), r(n), m(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double U = ss.tU[j], P = ss.tPsqrt[j] * ss.tPsqrt[j];
    fq[j] = (2.0 * (U * U - P) * d.Y_eta[j] + A5) * h;
  }
  OperatorFields ops;
  ops.Qt.resize(n);
  ops.Dt.resize(n);
  ops.Et.resize(n);
  const SweepSums sq = exp_sweeps(ss.tY, fq, A);
  for (std::size_t k = 0; k < n; ++k) {
    ops.Dt[k] = 0.5 * (sq.left[k] + 0.5 * fq[k]);
    ops.Et[k] = 0.5 * (sq.right[k] + 0.5 * fq[k]);
    ops.Qt[k] = 0.25 * (sq.right[k] - sq.left[k]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double U = ss.tU[j], P = ss.tPsqrt[j] * ss.tPsqrt[j], Ye = d.Y_eta[j];
    g[j] = (2.0 / 3.0 * U * U * U * Ye - d.U_eta[j] * ops.Qt[j] - 2.0 * P * U * Ye) * h;
    r[j] = (2.0 / 3.0 * A * U * U * U * Ye + A6 * U) * h;
    m[j] = U * ops.Qt[j] * Ye * h;
  }
  const SweepSums ssum = exp_sweeps(ss.tY, g, A);
  const SweepSums rs = exp_sweeps(ss.tY, r, A);
  const SweepSums ms = exp_sweeps(ss.tY, m, A);
  ops.St.resize(n);
  ops.Rt.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    ops.St[k] = ssum.left[k] + g[k] + ssum.right[k];
    ops.Rt[k] = 0.25 * (rs.left[k] - rs.right[k]) - 0.5 * (ms.left[k] + m[k] + ms.right[k]);
  }
  return ops;
}

SystemRhs system_rhs(const ScaledSnapshot& ss, const OperatorFields& ops) {
  const double A = ss.A;
  if (!(A > 0.0)) throw Error(ErrorKind::ZeroEnergy, "system_rhs needs A > 0");
  const std::size_t n = ss.eta.size();
  const double A2 = A * A, A3 = A2 * A, A5 = A3 * A2, A6 = A5 * A;
  const double floor = 1e-12 * A2 * A2;
  for (std::size_t k = 0; k < n; ++k)
    if (ss.tPsqrt[k] * ss.tPsqrt[k] < floor)
      throw Error(ErrorKind::DegeneratePressure, "P below floor at eta = " + fmt_num(ss.eta[k]));
  const EtaDerivatives d = derivatives(ss);
  SystemRhs out{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    const double U = ss.tU[k], Ps = ss.tPsqrt[k];
    const double v = 2.0 / (3.0 * A5) * U * U * U + ops.St[k] / A6;
    const double Ps_eta = d.P_eta[k] / (2.0 * Ps);
    out.v[k] = v;
    out.Y_t[k] = U - v * d.Y_eta[k];
    out.U_t[k] = -ops.Qt[k] / A2 - v * d.U_eta[k];
    out.Psqrt_t[k] = (ops.Qt[k] * U / (2.0 * A2) + ops.Rt[k] / (2.0 * A3)) / Ps - v * Ps_eta;
  }
  return out;
}

std::vector<double> left_kernel_integral(const ScaledSnapshot& ss, const std::vector<double>& f, double lambda) {
  const std::size_t n = ss.eta.size();
  const double A = ss.A;
  if (!(A > 0.0)) throw Error(ErrorKind::ZeroEnergy, "kernel integral needs A > 0");
  if (f.size() != n) throw Error(ErrorKind::GridMismatch, "kernel integrand size differs from grid");
  std::vector<double> out(n, 0.0);
  if (n == 0) return out;
  // tY = A (ln eta - ln(1 - eta)) + r with r and f linear between nodes
  auto logpart = [&](double e) { return A * (std::log(e) - std::log1p(-e)); };
  std::vector<double> r(n);
  for (std::size_t k = 0; k < n; ++k) r[k] = ss.tY[k] - logpart(ss.eta[k]);
  static constexpr double gx[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                   -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                   0.7966664774136267,  0.9602898564975363};
  static constexpr double gw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                   0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                   0.2223810344533745, 0.1012285362903763};
  // integral over [a, b] seen from node k, with the linear pieces anchored at nodes i, i+1
  auto piece = [&](double a, double b, std::size_t i, std::size_t k) {
    const double e0 = ss.eta[i], e1 = ss.eta[i + 1];
    double acc = 0.0;
    for (int q = 0; q < 8; ++q) {
      const double th = 0.5 * (a + b) + 0.5 * (b - a) * gx[q];
      const double s = (th - e0) / (e1 - e0);
      const double y = logpart(th) + (1.0 - s) * r[i] + s * r[i + 1];
      const double fv = (1.0 - s) * f[i] + s * f[i + 1];
      acc += gw[q] * std::exp(-lambda * (ss.tY[k] - y) / A) * fv;
    }
    return 0.5 * (b - a) * acc;
  };
  if (n == 1) {
    out[0] = f[0] * ss.eta[0];
    return out;
  }
  out[0] = piece(0.0, ss.eta[0], 0, 0);
  for (std::size_t k = 1; k < n; ++k)
    out[k] = std::exp(-lambda * (ss.tY[k] - ss.tY[k - 1]) / A) * out[k - 1] + piece(ss.eta[k - 1], ss.eta[k], k - 1, k);
  return out;
}

namespace {

double l2(const std::vector<double>& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s / static_cast<double>(a.size()));
}

ScaledSnapshot without_derivatives(ScaledSnapshot ss) {
  ss.deriv.reset();
  return ss;
}

}  // namespace

ResidualReport residual_against_exact(const PeakonParams& p, double t, std::size_t N, double dt) {
  const ScaledSnapshot now = without_derivatives(scaled_snapshot_exact(p, t, N));
  const ScaledSnapshot before = scaled_snapshot_exact(p, t - dt, N);
  const ScaledSnapshot after = scaled_snapshot_exact(p, t + dt, N);
  const SystemRhs r = system_rhs(now, compute_operators(now));
  std::vector<double> fy(N), fu(N), fp(N), ry(N), ru(N), rp(N);
  for (std::size_t k = 0; k < N; ++k) {
    fy[k] = (after.tY[k] - before.tY[k]) / (2.0 * dt);
    fu[k] = (after.tU[k] - before.tU[k]) / (2.0 * dt);
    fp[k] = (after.tPsqrt[k] - before.tPsqrt[k]) / (2.0 * dt);
    ry[k] = fy[k] - r.Y_t[k];
    ru[k] = fu[k] - r.U_t[k];
    rp[k] = fp[k] - r.Psqrt_t[k];
  }
  ResidualReport rep;
  rep.N = N;
  rep.dt = dt;
  rep.residY = l2(ry);
  rep.residU = l2(ru);
  rep.residP = l2(rp);
  const double num = std::hypot(rep.residY, rep.residU, rep.residP);
  const double den = std::hypot(l2(fy), l2(fu), l2(fp));
  rep.relative = den > 0.0 ? num / den : num;
  return rep;
}

void write_json(std::ostream& os, const ResidualReport& r) {
  nlohmann::json j;
  j["N"] = r.N;
  j["dt"] = r.dt;
  j["residY"] = r.residY;
  j["residU"] = r.residU;
  j["residP"] = r.residP;
  j["relative"] = r.relative;
  os << j.dump() << '\n';
}

namespace {

// Linear interpolation on the midpoint grid with linear extrapolation past the ends.
double sample(const std::vector<double>& f, double eta) {
  const std::size_t n = f.size();
  const double pos = eta * static_cast<double>(n) - 0.5;
  const auto k = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, static_cast<double>(n - 2)));
  const double s = pos - static_cast<double>(k);
  return (1.0 - s) * f[k] + s * f[k + 1];
}

}  // namespace

ScaledSnapshot step_semi_lagrangian(const ScaledSnapshot& ss, double dt) {
  const std::size_t n = ss.eta.size();
  const double A = ss.A;
  const double h = 1.0 / static_cast<double>(n);
  const OperatorFields ops = compute_operators(ss);
  const SystemRhs r = system_rhs(ss, ops);
  double vmax = 0.0;
  for (double v : r.v) vmax = std::max(vmax, std::abs(v));
  if (dt * vmax > 0.5 * h)
    throw Error(ErrorKind::CflViolation, "dt * max|v| = " + fmt_num(dt * vmax) + " exceeds half a cell");

  const double A2 = A * A, A3 = A2 * A;
  auto singular = [A](double eta) { return A * (std::log(eta) - std::log1p(-eta)); };
  std::vector<double> fy(n), fu(n), fp(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double U = ss.tU[k], Ps = ss.tPsqrt[k];
    const double src_p = (ops.Qt[k] * U / (2.0 * A2) + ops.Rt[k] / (2.0 * A3)) / Ps;
    fy[k] = ss.tY[k] + dt * U - singular(ss.eta[k]);
    fu[k] = ss.tU[k] - dt * ops.Qt[k] / A2;
    fp[k] = ss.tPsqrt[k] + dt * src_p;
  }
  ScaledSnapshot out;
  out.t = ss.t + dt;
  out.A = A;
  out.eta = ss.eta;
  out.tY.resize(n);
  out.tU.resize(n);
  out.tPsqrt.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double eta = ss.eta[k];
    const double mid = eta - 0.5 * dt * r.v[k];
    const double foot = std::clamp(eta - dt * sample(r.v, mid), 1e-3 * h, 1.0 - 1e-3 * h);
    out.tY[k] = sample(fy, foot) + singular(foot);
    out.tU[k] = sample(fu, foot);
    out.tPsqrt[k] = std::max(sample(fp, foot), 0.0);
  }
  return out;
}

}  // namespace chm
