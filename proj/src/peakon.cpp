#include "chmetric/peakon.hpp"

#include <algorithm>
#include <cmath>

#include "chmetric/error.hpp"
#include "chmetric/numeric.hpp"

namespace chm {

namespace {

struct Phase {
  double s;      // sinh(E tau / 2)
  double c;      // cosh(E tau / 2)
  double gamma;  // ln c, computed without cancellation
  bool breaking;
};

Phase phase(const PeakonParams& p, double t) {
  const double h = 0.5 * p.E * (t - p.t0);
  Phase ph;
  ph.s = std::sinh(h);
  ph.c = std::cosh(h);
  ph.gamma = std::log1p(ph.s * ph.s / (1.0 + ph.c));
  ph.breaking = ph.s == 0.0;
  return ph;
}

void check_eta(const PeakonParams& p, double eta) {
  if (!(eta > 0.0 && eta < 2.0 * p.C()))
    throw Error(ErrorKind::EtaOutOfRange, "eta " + fmt_num(eta) + " outside (0, 2E^2)");
}

// Label x + F(x) inverted by bisection: sup{x : x + F(x) < xi}.
double invert_label(const PeakonParams& p, double t, double xi) {
  double lo = xi - p.C() - 1.0, hi = xi + 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid + F_exact(p, t, mid) < xi) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double peakon_alpha(const PeakonParams& p, double t) { return 0.5 * p.E * phase(p, t).s; }

double peakon_beta(const PeakonParams& p, double t) {
  const Phase ph = phase(p, t);
  if (ph.breaking) throw Error(ErrorKind::BetaUndefinedAtBreaking, "beta is unbounded at t = t0");
  return p.E / ph.s;
}

double peakon_gamma(const PeakonParams& p, double t) { return phase(p, t).gamma; }

PeakonCoefficients abc(const PeakonParams& p, double t) {
  return {peakon_alpha(p, t), peakon_beta(p, t), peakon_gamma(p, t)};
}

double u_exact(const PeakonParams& p, double t, double x) {
  const Phase ph = phase(p, t);
  if (ph.breaking) return 0.0;
  const double a = 0.5 * p.E * ph.s;
  if (x <= -ph.gamma) return -a * std::exp(x);
  if (x >= ph.gamma) return a * std::exp(-x);
  return p.E * std::sinh(x) / ph.s;
}

double ux_exact(const PeakonParams& p, double t, double x) {
  const Phase ph = phase(p, t);
  if (ph.breaking) return 0.0;
  const double a = 0.5 * p.E * ph.s;
  if (x < -ph.gamma) return -a * std::exp(x);
  if (x > ph.gamma) return -a * std::exp(-x);
  return p.E * std::cosh(x) / ph.s;
}

double mu_exact_density(const PeakonParams& p, double t, double x) {
  const Phase ph = phase(p, t);
  if (ph.breaking) return 0.0;
  const double a = 0.5 * p.E * ph.s;
  if (std::abs(x) > ph.gamma) return 2.0 * a * a * std::exp(-2.0 * std::abs(x));
  return p.E * p.E / (ph.s * ph.s) * std::cosh(2.0 * x);
}

std::vector<Atom> atoms_exact(const PeakonParams& p, double t) {
  if (phase(p, t).breaking) return {Atom{0.0, p.C()}};
  return {};
}

double F_exact(const PeakonParams& p, double t, double x) {
  const Phase ph = phase(p, t);
  const double E2 = p.C();
  if (ph.breaking) return x <= 0.0 ? 0.0 : E2;
  const double a = 0.5 * p.E * ph.s;
  if (x <= -ph.gamma) return a * a * std::exp(2.0 * x);
  if (x >= ph.gamma) return E2 - a * a * std::exp(-2.0 * x);
  return 0.5 * E2 + 0.5 * E2 / (ph.s * ph.s) * std::sinh(2.0 * x);
}

double p_exact(const PeakonParams& p, double t, double x) {
  const Phase ph = phase(p, t);
  const double E2 = p.C();
  if (ph.breaking) return 0.25 * E2 * std::exp(-std::abs(x));
  if (std::abs(x) >= ph.gamma) {
    const double a = 0.5 * p.E * ph.s;
    const double e = std::exp(-std::abs(x));
    return 0.25 * E2 * ph.c * e - 0.5 * a * a * e * e;
  }
  const double sh = std::sinh(0.5 * x);
  return 0.5 * E2 * std::cosh(x) * (1.0 / (ph.c + 1.0) - 2.0 * sh * sh / (ph.s * ph.s));
}

double px_exact(const PeakonParams& p, double t, double x) {
  const Phase ph = phase(p, t);
  const double E2 = p.C();
  if (ph.breaking) {
    if (x == 0.0) return 0.0;
    return (x < 0.0 ? 0.25 : -0.25) * E2 * std::exp(-std::abs(x));
  }
  const double a = 0.5 * p.E * ph.s;
  const double ap = 0.25 * E2 * ph.c;
  if (x <= -ph.gamma) return ap * std::exp(x) - a * a * std::exp(2.0 * x);
  if (x >= ph.gamma) return -ap * std::exp(-x) + a * a * std::exp(-2.0 * x);
  return 0.5 * E2 / (ph.s * ph.s) * std::sinh(x) * (ph.c - 2.0 * std::cosh(x));
}

double G_exact(const PeakonParams& p, double t, double x) {
  const Phase ph = phase(p, t);
  const double E2 = p.C();
  if (ph.breaking) return x <= 0.0 ? 0.5 * E2 * std::exp(x) : 2.0 * E2 - 0.5 * E2 * std::exp(-x);
  if (x <= -ph.gamma) return 0.5 * E2 * ph.c * std::exp(x);
  if (x >= ph.gamma) return 2.0 * E2 - 0.5 * E2 * ph.c * std::exp(-x);
  return E2 + E2 * ph.c / (ph.s * ph.s) * std::sinh(x);
}

// In eta the three branches meet at E^2/2 and 3E^2/2. With k = tanh(E tau/2)/E
// U is piecewise linear with slopes -k, k, -k; the middle Y is asinh(w) with
// w = -(E^2 - eta) s^2 / (E^2 c). Everything stays finite as s -> 0.

double Y_exact(const PeakonParams& p, double t, double eta) {
  check_eta(p, eta);
  const Phase ph = phase(p, t);
  const double E2 = p.C();
  if (eta <= 0.5 * E2) return std::log(2.0 * eta / (E2 * ph.c));
  if (eta >= 1.5 * E2) return -std::log(2.0 * (2.0 * E2 - eta) / (E2 * ph.c));
  const double w = -(E2 - eta) * ph.s * ph.s / (E2 * ph.c);
  return std::asinh(w);
}

double U_exact(const PeakonParams& p, double t, double eta) {
  check_eta(p, eta);
  const Phase ph = phase(p, t);
  const double E2 = p.C();
  const double k = ph.s / (p.E * ph.c);
  if (eta <= 0.5 * E2) return -k * eta;
  if (eta >= 1.5 * E2) return k * (2.0 * E2 - eta);
  return k * (eta - E2);
}

double P_exact(const PeakonParams& p, double t, double eta) {
  check_eta(p, eta);
  const Phase ph = phase(p, t);
  const double E2 = p.C();
  const double q = ph.s * ph.s / (2.0 * E2 * ph.c * ph.c);
  if (eta <= 0.5 * E2) return 0.5 * eta - q * eta * eta;
  if (eta >= 1.5 * E2) {
    const double r = 2.0 * E2 - eta;
    return 0.5 * r - q * r * r;
  }
  const double d = E2 - eta;
  const double w = -d * ph.s * ph.s / (E2 * ph.c);
  const double root = std::sqrt(1.0 + w * w);
  return 0.5 * E2 / (1.0 + ph.c) + d * d * ph.s * ph.s / (2.0 * E2 * ph.c) * (1.0 / (root + 1.0) - 1.0 / ph.c);
}

double Y_eta_exact(const PeakonParams& p, double t, double eta) {
  check_eta(p, eta);
  const Phase ph = phase(p, t);
  const double E2 = p.C();
  if (eta <= 0.5 * E2) return 1.0 / eta;
  if (eta >= 1.5 * E2) return 1.0 / (2.0 * E2 - eta);
  const double ws = ph.s * ph.s / (E2 * ph.c);
  const double w = -(E2 - eta) * ws;
  return ws / std::sqrt(1.0 + w * w);
}

double U_eta_exact(const PeakonParams& p, double t, double eta) {
  check_eta(p, eta);
  const Phase ph = phase(p, t);
  const double E2 = p.C();
  const double k = ph.s / (p.E * ph.c);
  if (eta <= 0.5 * E2 || eta >= 1.5 * E2) return -k;
  return k;
}

double P_eta_exact(const PeakonParams& p, double t, double eta) {
  check_eta(p, eta);
  const Phase ph = phase(p, t);
  const double E2 = p.C();
  const double q = ph.s * ph.s / (E2 * ph.c * ph.c);
  if (eta <= 0.5 * E2) return 0.5 - q * eta;
  if (eta >= 1.5 * E2) return -0.5 + q * (2.0 * E2 - eta);
  const double w = -(E2 - eta) * ph.s * ph.s / (E2 * ph.c);
  return w / (2.0 * std::sqrt(1.0 + w * w)) - w / ph.c;
}

ScaledPoint scaled_exact(const PeakonParams& p, double t, double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw Error(ErrorKind::EtaOutOfRange, "eta " + fmt_num(eta) + " outside (0, 1)");
  const double A = std::sqrt(2.0 * p.C());
  const double e = A * A * eta;
  return {A * Y_exact(p, t, e), A * U_exact(p, t, e), A * std::sqrt(P_exact(p, t, e))};
}

TransformedSnapshot transformed_exact(const PeakonParams& p, double t, std::size_t n) {
  TransformedSnapshot ts;
  ts.t = t;
  ts.C = p.C();
  ts.eta = midpoint_grid(n, 2.0 * ts.C);
  ts.Y.resize(n);
  ts.U.resize(n);
  ts.Psqrt.resize(n);
  EtaDerivatives d{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    const double e = ts.eta[k];
    ts.Y[k] = Y_exact(p, t, e);
    ts.U[k] = U_exact(p, t, e);
    ts.Psqrt[k] = std::sqrt(P_exact(p, t, e));
    d.Y_eta[k] = Y_eta_exact(p, t, e);
    d.U_eta[k] = U_eta_exact(p, t, e);
    d.P_eta[k] = P_eta_exact(p, t, e);
  }
  ts.deriv = std::move(d);
  return ts;
}

ScaledSnapshot scaled_snapshot_exact(const PeakonParams& p, double t, std::size_t n) {
  ScaledSnapshot ss = rescale(transformed_exact(p, t, n));
  // recompute on the (0,1) grid directly so the samples do not carry the
  // rounding of the (0, 2C) grid
  for (std::size_t k = 0; k < n; ++k) {
    const ScaledPoint sp = scaled_exact(p, t, ss.eta[k]);
    ss.tY[k] = sp.tY;
    ss.tU[k] = sp.tU;
    ss.tPsqrt[k] = sp.tPsqrt;
  }
  return ss;
}

EulerianSnapshot sample_snapshot(const PeakonParams& p, double t, std::size_t n, double half_width,
                                 SampleGrid grid) {
  if (n < 12) throw Error(ErrorKind::InvalidInput, "need at least 12 sample points");
  const Phase ph = phase(p, t);
  const double L = half_width;
  // Each density jump becomes a node pair kink -/+ eps, so the jump sits in a
  // cell of negligible width and no node has to carry an ambiguous value.
  std::vector<double> kinks;
  if (!ph.breaking && ph.gamma > 0.0) kinks = {-ph.gamma, ph.gamma};
  const double eps = 1e-10 * std::max(1.0, ph.gamma);

  std::vector<double> xs;
  if (grid == SampleGrid::Uniform || kinks.empty()) {
    xs.resize(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = -L + 2.0 * L * static_cast<double>(i) / static_cast<double>(n - 1);
    std::vector<double> targets;
    if (ph.breaking) targets = {0.0};
    for (double kx : kinks) {
      targets.push_back(kx - eps);
      targets.push_back(kx + eps);
    }
    std::vector<bool> used(n, false);
    used[0] = used[n - 1] = true;
    for (double kx : targets) {
      std::size_t best = 0;
      double dist = HUGE_VAL;
      for (std::size_t i = 1; i + 1 < n; ++i)
        if (!used[i] && std::abs(xs[i] - kx) < dist) dist = std::abs(xs[i] - kx), best = i;
      used[best] = true;
      xs[best] = kx;
    }
    std::sort(xs.begin(), xs.end());
  } else {
    const double xa = -L + F_exact(p, t, -L);
    const double xb = L + F_exact(p, t, L);
    const double xm = -ph.gamma + F_exact(p, t, -ph.gamma);
    const double xp = ph.gamma + F_exact(p, t, ph.gamma);
    const std::size_t cells = n - 3;
    std::size_t m2 = static_cast<std::size_t>(std::llround(static_cast<double>(cells) * (xp - xm) / (xb - xa)));
    m2 = std::clamp<std::size_t>(m2, 2, cells - 2);
    std::size_t m1 = static_cast<std::size_t>(
        std::llround(static_cast<double>(cells - m2) * (xm - xa) / ((xm - xa) + (xb - xp))));
    m1 = std::clamp<std::size_t>(m1, 1, cells - m2 - 1);
    const std::size_t m3 = cells - m2 - m1;
    auto fill = [&](double a, double b, std::size_t m) {
      for (std::size_t j = 1; j < m; ++j)
        xs.push_back(invert_label(p, t, a + (b - a) * static_cast<double>(j) / static_cast<double>(m)));
    };
    xs.push_back(-L);
    fill(xa, xm, m1);
    xs.push_back(-ph.gamma - eps);
    xs.push_back(-ph.gamma + eps);
    fill(xm, xp, m2);
    xs.push_back(ph.gamma - eps);
    xs.push_back(ph.gamma + eps);
    fill(xp, xb, m3);
    xs.push_back(L);
  }
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    if (!(xs[i + 1] > xs[i])) throw Error(ErrorKind::InvalidInput, "sample grid degenerated; raise n");

  EulerianSnapshot s;
  s.t = t;
  s.x = xs;
  s.u.resize(xs.size());
  s.dens.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    s.u[i] = u_exact(p, t, xs[i]);
    s.dens[i] = mu_exact_density(p, t, xs[i]);
  }
  s.atoms = atoms_exact(p, t);
  s.C = measure_total(s);
  return s;
}

LagrangianState lagrangian_initial(const PeakonParams& p, double t, std::size_t n, double half_width) {
  if (n < 8) throw Error(ErrorKind::InvalidInput, "need at least 8 labels");
  const Phase ph = phase(p, t);
  const double C = p.C();
  const double xm = ph.breaking ? 0.0 : -ph.gamma + F_exact(p, t, -ph.gamma);
  const double xp = C - xm;
  const double D = xp - xm;
  const std::size_t cells = n - 1;
  const double h0 = (C + 2.0 * half_width) / static_cast<double>(cells);
  std::size_t m = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(D / h0)));
  if ((cells - m) % 2 != 0) ++m;
  const double h = D / static_cast<double>(m);
  const std::size_t k = (cells - m) / 2;
  const double L = static_cast<double>(k) * h - xm;

  LagrangianState st;
  st.t = t;
  st.C = C;
  st.xi.resize(n);
  st.y.resize(n);
  st.U.resize(n);
  st.H.resize(n);
  for (std::size_t j = 0; j < n; ++j) st.xi[j] = -L + static_cast<double>(j) * h;
  st.xi[k] = xm;
  st.xi[k + m] = xp;
  parallel_for(n, [&](std::size_t j) {
    double y;
    if (j == k) y = -ph.gamma;
    else if (j == k + m) y = ph.gamma;
    else if (ph.breaking && j > k && j < k + m) y = 0.0;
    else y = invert_label(p, t, st.xi[j]);
    st.y[j] = y;
    st.U[j] = u_exact(p, t, y);
    st.H[j] = st.xi[j] - y;
  });
  return st;
}

}  // namespace chm
