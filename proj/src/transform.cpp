#include "chmetric/transform.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "chmetric/error.hpp"
#include "chmetric/numeric.hpp"
#include "json.hpp"

namespace chm {

namespace {

double invert_one(const std::vector<double>& xs, const std::vector<double>& gs, double target) {
  if (!(target > gs.front()) || target > gs.back())
    throw Error(ErrorKind::TargetOutOfRange, "target " + fmt_num(target) + " outside (" + fmt_num(gs.front()) +
                                                 ", " + fmt_num(gs.back()) + "]");
  const std::size_t j = static_cast<std::size_t>(std::lower_bound(gs.begin(), gs.end(), target) - gs.begin());
  const double g0 = gs[j - 1], g1 = gs[j];
  const double x0 = xs[j - 1], x1 = xs[j];
  if (x1 == x0) return x0;
  return x0 + (target - g0) / (g1 - g0) * (x1 - x0);
}

// Safeguarded Newton on ev.G inside [lo, hi], where G(lo) < target <= G(hi).
double refine_root(const FieldEvaluator& ev, double target, double x, double lo, double hi) {
  for (int it = 0; it < 40; ++it) {
    const double g = ev.G(x) - target;
    if (g < 0.0) lo = x; else hi = x;
    const double gx = 2.0 * ev.p(x) - ev.u(x) * ev.u(x) + ev.dens(x);
    double next = gx > 0.0 ? x - g / gx : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * (1.0 + std::abs(x))) return next;
    x = next;
  }
  return x;
}

}  // namespace

std::vector<double> pseudo_inverse(const std::vector<double>& xs, const std::vector<double>& gs,
                                   const std::vector<double>& targets) {
  if (xs.size() != gs.size() || xs.size() < 2)
    throw Error(ErrorKind::InvalidInput, "pseudo_inverse needs matching arrays of length >= 2");
  std::vector<double> out(targets.size());
  for (std::size_t k = 0; k < targets.size(); ++k) out[k] = invert_one(xs, gs, targets[k]);
  return out;
}

TransformedSnapshot build_transformed(const EulerianSnapshot& s, std::size_t n_eta) {
  if (!(s.C > 0.0)) throw Error(ErrorKind::ZeroSolution, "build_transformed needs C > 0");
  const FieldEvaluator ev(s);

  // G at the nodes; each atom becomes a repeated abscissa carrying the jump.
  std::vector<double> xs, gs;
  std::vector<Atom> atoms(s.atoms);
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.loc < b.loc; });
  std::size_t ia = 0;
  auto push_atom = [&](double loc) {
    xs.push_back(loc);
    gs.push_back(ev.G(loc));
    xs.push_back(loc);
    gs.push_back(ev.G_right(loc));
  };
  for (double x : s.x) {
    while (ia < atoms.size() && atoms[ia].loc < x) push_atom(atoms[ia++].loc);
    if (ia < atoms.size() && atoms[ia].loc == x) {
      push_atom(atoms[ia++].loc);
      continue;
    }
    xs.push_back(x);
    gs.push_back(ev.G(x));
  }
  while (ia < atoms.size()) push_atom(atoms[ia++].loc);
  for (std::size_t i = 1; i < gs.size(); ++i) gs[i] = std::max(gs[i], gs[i - 1]);

  TransformedSnapshot ts;
  ts.t = s.t;
  ts.C = s.C;
  ts.eta = midpoint_grid(n_eta, 2.0 * s.C);
  ts.Y = pseudo_inverse(xs, gs, ts.eta);
  ts.U.resize(n_eta);
  ts.Psqrt.resize(n_eta);
  EtaDerivatives d{std::vector<double>(n_eta), std::vector<double>(n_eta), std::vector<double>(n_eta)};

  parallel_for(n_eta, [&](std::size_t k) {
    const double eta = ts.eta[k];
    double y = ts.Y[k];
    const std::size_t j = static_cast<std::size_t>(std::lower_bound(gs.begin(), gs.end(), eta) - gs.begin());
    const bool on_jump = xs[j] == xs[j - 1];
    if (!on_jump) {
      y = refine_root(ev, eta, y, xs[j - 1], xs[j]);
      ts.Y[k] = y;
    }
    ts.U[k] = ev.u(y);
    ts.Psqrt[k] = std::sqrt(std::max(ev.p(y), 0.0));
    if (on_jump) {
      d.Y_eta[k] = d.U_eta[k] = d.P_eta[k] = 0.0;
    } else {
      const double gx = 2.0 * ev.p(y) - ev.u(y) * ev.u(y) + ev.dens(y);
      d.Y_eta[k] = 1.0 / gx;
      d.U_eta[k] = ev.ux(y) / gx;
      d.P_eta[k] = ev.px(y) / gx;
    }
  });
  ts.deriv = std::move(d);
  return ts;
}

ScaledSnapshot rescale(const TransformedSnapshot& ts) {
  const double A = std::sqrt(2.0 * ts.C);
  const std::size_t n = ts.eta.size();
  ScaledSnapshot ss;
  ss.t = ts.t;
  ss.A = A;
  ss.eta = midpoint_grid(n, 1.0);
  ss.tY.resize(n);
  ss.tU.resize(n);
  ss.tPsqrt.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    ss.tY[k] = A * ts.Y[k];
    ss.tU[k] = A * ts.U[k];
    ss.tPsqrt[k] = A * ts.Psqrt[k];
  }
  if (ts.deriv) {
    const double A3 = A * A * A;
    EtaDerivatives d = *ts.deriv;
    for (std::size_t k = 0; k < n; ++k) {
      d.Y_eta[k] *= A3;
      d.U_eta[k] *= A3;
      d.P_eta[k] *= A3 * A;
    }
    ss.deriv = std::move(d);
  }
  return ss;
}

ScaledSnapshot zero_scaled(std::size_t n) {
  ScaledSnapshot ss;
  ss.eta = midpoint_grid(n, 1.0);
  ss.tY.assign(n, 0.0);
  ss.tU.assign(n, 0.0);
  ss.tPsqrt.assign(n, 0.0);
  ss.A = 0.0;
  return ss;
}

namespace {

EtaDerivatives discrete(const std::vector<double>& Y, const std::vector<double>& U,
                        const std::vector<double>& Psqrt, double length, double log_weight) {
  std::vector<double> P(Psqrt.size());
  for (std::size_t k = 0; k < P.size(); ++k) P[k] = Psqrt[k] * Psqrt[k];
  return {midpoint_derivative(Y, length, log_weight), midpoint_derivative(U, length),
          midpoint_derivative(P, length)};
}

}  // namespace

EtaDerivatives derivatives(const TransformedSnapshot& ts) {
  if (ts.deriv) return *ts.deriv;
  return discrete(ts.Y, ts.U, ts.Psqrt, 2.0 * ts.C, 1.0);
}

EtaDerivatives derivatives(const ScaledSnapshot& ss) {
  if (ss.deriv) return *ss.deriv;
  return discrete_derivatives(ss);
}

EtaDerivatives discrete_derivatives(const ScaledSnapshot& ss) {
  return discrete(ss.tY, ss.tU, ss.tPsqrt, 1.0, ss.A);
}

void write_json(std::ostream& os, const TransformedSnapshot& ts) {
  nlohmann::json j;
  j["t"] = ts.t;
  j["eta"] = ts.eta;
  j["Y"] = ts.Y;
  j["U"] = ts.U;
  j["Psqrt"] = ts.Psqrt;
  j["C"] = ts.C;
  os << j.dump() << '\n';
}

void write_json(std::ostream& os, const ScaledSnapshot& ss) {
  nlohmann::json j;
  j["t"] = ss.t;
  j["eta"] = ss.eta;
  j["tY"] = ss.tY;
  j["tU"] = ss.tU;
  j["tPsqrt"] = ss.tPsqrt;
  j["A"] = ss.A;
  os << j.dump() << '\n';
}

void write_csv(std::ostream& os, const TransformedSnapshot& ts) {
  os << "eta,Y,U,Psqrt\n";
  for (std::size_t k = 0; k < ts.eta.size(); ++k)
    os << fmt_num(ts.eta[k]) << ',' << fmt_num(ts.Y[k]) << ',' << fmt_num(ts.U[k]) << ','
       << fmt_num(ts.Psqrt[k]) << '\n';
}

void write_csv(std::ostream& os, const ScaledSnapshot& ss) {
  os << "eta,tY,tU,tPsqrt\n";
  for (std::size_t k = 0; k < ss.eta.size(); ++k)
    os << fmt_num(ss.eta[k]) << ',' << fmt_num(ss.tY[k]) << ',' << fmt_num(ss.tU[k]) << ','
       << fmt_num(ss.tPsqrt[k]) << '\n';
}

}  // namespace chm
