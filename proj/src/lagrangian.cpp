#include "chmetric/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "chmetric/error.hpp"
#include "chmetric/numeric.hpp"
#include "json.hpp"

namespace chm {

namespace {

double spacing(const LagrangianState& st) {
  return st.xi.size() > 1 ? (st.xi.back() - st.xi.front()) / static_cast<double>(st.xi.size() - 1) : 1.0;
}

void check_cells(const LagrangianState& st) {
  for (std::size_t i = 0; i + 1 < st.xi.size(); ++i)
    if (!((st.y[i + 1] - st.y[i]) + (st.H[i + 1] - st.H[i]) > 0.0))
      throw Error(ErrorKind::StepRejected, "y_xi + H_xi <= 0 on cell " + std::to_string(i) + " at t = " + fmt_num(st.t));
}

}  // namespace

LagrangianState init_from_eulerian(const EulerianSnapshot& s, std::size_t N, std::optional<double> half_width) {
  if (!(s.C > 0.0)) throw Error(ErrorKind::ZeroSolution, "init_from_eulerian needs C > 0");
  if (N < 3) throw Error(ErrorKind::InvalidInput, "need at least 3 labels");
  const FieldEvaluator ev(s);
  const double L = half_width.value_or(std::min(-s.x.front(), s.x.back()));

  std::vector<double> xs, gs;
  std::vector<Atom> atoms(s.atoms);
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.loc < b.loc; });
  std::size_t ia = 0;
  auto push_atom = [&](double loc) {
    const double f = ev.F(loc);
    double m = 0.0;
    while (ia < atoms.size() && atoms[ia].loc == loc) m += atoms[ia++].mass;
    xs.push_back(loc);
    gs.push_back(loc + f);
    xs.push_back(loc);
    gs.push_back(loc + f + m);
  };
  for (double x : s.x) {
    while (ia < atoms.size() && atoms[ia].loc <= x) push_atom(atoms[ia].loc);
    if (!xs.empty() && xs.back() == x) continue;
    xs.push_back(x);
    gs.push_back(x + ev.F(x));
  }
  while (ia < atoms.size()) push_atom(atoms[ia].loc);

  LagrangianState st;
  st.t = s.t;
  st.C = s.C;
  st.xi.resize(N);
  const double h = (s.C + 2.0 * L) / static_cast<double>(N - 1);
  for (std::size_t j = 0; j < N; ++j) st.xi[j] = -L + static_cast<double>(j) * h;
  st.y.resize(N);
  st.U.resize(N);
  st.H.resize(N);
  for (std::size_t j = 0; j < N; ++j) {
    const double xi = st.xi[j];
    double y;
    if (xi <= gs.front()) y = xi - (gs.front() - xs.front());
    else if (xi > gs.back()) y = xi - (gs.back() - xs.back());
    else y = pseudo_inverse(xs, gs, {xi})[0];
    st.y[j] = y;
    st.U[j] = ev.u(y);
    st.H[j] = xi - y;
  }
  return st;
}

namespace {

// phi0(d) = int_0^1 r e^{-d r} dr,  phi1(d) = int_0^1 (1 - r) e^{-d r} dr
void kernel_moments(double d, double& phi0, double& phi1) {
  if (std::abs(d) < 1e-3) {
    phi0 = 0.5 - d / 3.0 + d * d / 8.0 - d * d * d / 30.0;
    phi1 = 0.5 - d / 6.0 + d * d / 24.0 - d * d * d / 120.0;
    return;
  }
  const double e = std::exp(-d);
  phi0 = (1.0 - e * (1.0 + d)) / (d * d);
  phi1 = -std::expm1(-d) / d - phi0;
}

}  // namespace

// Cells carry y and U^2 linearly and y_xi, H_xi as cell differences; the
// kernel is integrated exactly over each cell, then accumulated by two sweeps.
PressurePair compute_PQ(const LagrangianState& st) {
  const std::size_t n = st.xi.size();
  PressurePair pq{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  if (n < 2) return pq;
  std::vector<double> to_left(n - 1), to_right(n - 1), decay(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double dy = st.y[j + 1] - st.y[j];
    const double dH = st.H[j + 1] - st.H[j];
    const double g0 = st.U[j] * st.U[j] * dy + dH;
    const double g1 = st.U[j + 1] * st.U[j + 1] * dy + dH;
    double phi0, phi1;
    kernel_moments(dy, phi0, phi1);
    to_right[j] = g0 * phi0 + g1 * phi1;  // seen from node j+1
    to_left[j] = g0 * phi1 + g1 * phi0;   // seen from node j
    decay[j] = std::exp(-dy);
  }
  std::vector<double> left(n, 0.0), right(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) left[i] = decay[i - 1] * left[i - 1] + to_right[i - 1];
  for (std::size_t i = n - 1; i-- > 0;) right[i] = decay[i] * right[i + 1] + to_left[i];
  for (std::size_t i = 0; i < n; ++i) {
    pq.P[i] = 0.25 * (left[i] + right[i]);
    pq.Q[i] = 0.25 * (right[i] - left[i]);
  }
  return pq;
}

LagrangianRhs rhs(const LagrangianState& st) {
  const std::size_t n = st.xi.size();
  const PressurePair pq = compute_PQ(st);
  LagrangianRhs r{st.U, std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double U = st.U[i];
    r.U_t[i] = -pq.Q[i];
    r.H_t[i] = U * U * U - 2.0 * pq.P[i] * U;
  }
  return r;
}

LagrangianState evolve(LagrangianState st, double t_end, double dt,
                       const std::function<void(const LagrangianState&)>& observer) {
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidInput, "dt must be positive");
  if (t_end < st.t) throw Error(ErrorKind::InvalidInput, "evolve integrates forward only");
  const std::size_t n = st.xi.size();
  const double t_start = st.t;
  const auto steps = static_cast<long long>(std::ceil((t_end - t_start) / dt - 1e-9));
  auto axpy = [n](const LagrangianState& base, const LagrangianRhs& k, double a, double t) {
    LagrangianState s = base;
    s.t = t;
    for (std::size_t i = 0; i < n; ++i) {
      s.y[i] += a * k.y_t[i];
      s.U[i] += a * k.U_t[i];
      s.H[i] += a * k.H_t[i];
    }
    return s;
  };
  for (long long step = 0; step < steps; ++step) {
    const double t0 = t_start + static_cast<double>(step) * dt;
    const double t1 = step + 1 == steps ? t_end : t_start + static_cast<double>(step + 1) * dt;
    const double h = t1 - t0;
    const LagrangianRhs k1 = rhs(st);
    const LagrangianRhs k2 = rhs(axpy(st, k1, 0.5 * h, t0 + 0.5 * h));
    const LagrangianRhs k3 = rhs(axpy(st, k2, 0.5 * h, t0 + 0.5 * h));
    const LagrangianRhs k4 = rhs(axpy(st, k3, h, t1));
    for (std::size_t i = 0; i < n; ++i) {
      st.y[i] += h / 6.0 * (k1.y_t[i] + 2.0 * k2.y_t[i] + 2.0 * k3.y_t[i] + k4.y_t[i]);
      st.U[i] += h / 6.0 * (k1.U_t[i] + 2.0 * k2.U_t[i] + 2.0 * k3.U_t[i] + k4.U_t[i]);
      st.H[i] += h / 6.0 * (k1.H_t[i] + 2.0 * k2.H_t[i] + 2.0 * k3.H_t[i] + k4.H_t[i]);
    }
    st.t = t1;
    check_cells(st);
    if (observer) observer(st);
  }
  return st;
}

TransformedSnapshot relabel_to_new(const LagrangianState& st, std::size_t n_eta) {
  if (!(st.C > 0.0)) throw Error(ErrorKind::ZeroSolution, "relabel_to_new needs C > 0");
  const PressurePair pq = compute_PQ(st);
  const std::size_t n = st.xi.size();
  std::vector<double> J(n);
  for (std::size_t i = 0; i < n; ++i) J[i] = 2.0 * pq.Q[i] + 2.0 * st.H[i];
  for (std::size_t i = 1; i < n; ++i) J[i] = std::max(J[i], J[i - 1]);

  TransformedSnapshot ts;
  ts.t = st.t;
  ts.C = st.C;
  ts.eta = midpoint_grid(n_eta, 2.0 * st.C);
  const std::vector<double> l = pseudo_inverse(st.xi, J, ts.eta);
  ts.Y.resize(n_eta);
  ts.U.resize(n_eta);
  ts.Psqrt.resize(n_eta);
  for (std::size_t k = 0; k < n_eta; ++k) {
    ts.Y[k] = interp_linear(st.xi, st.y, l[k]);
    ts.U[k] = interp_linear(st.xi, st.U, l[k]);
    ts.Psqrt[k] = std::sqrt(std::max(interp_linear(st.xi, pq.P, l[k]), 0.0));
  }
  return ts;
}

double xavier_residual(const LagrangianState& st) {
  const double h = spacing(st);
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < st.xi.size(); ++i) {
    const double yx = (st.y[i + 1] - st.y[i]) / h;
    const double Ux = (st.U[i + 1] - st.U[i]) / h;
    const double Hx = (st.H[i + 1] - st.H[i]) / h;
    const double U = 0.5 * (st.U[i] + st.U[i + 1]);
    worst = std::max(worst, std::abs(U * U * yx * yx + Ux * Ux - yx * Hx));
  }
  return worst;
}

double energy(const LagrangianState& st) { return st.H.empty() ? 0.0 : st.H.back() - st.H.front(); }

double second_moment(const LagrangianState& st) {
  const std::size_t n = st.xi.size();
  if (n < 2) return 0.0;
  const PressurePair pq = compute_PQ(st);
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double dy = st.y[i + 1] - st.y[i];
    const double dH = st.H[i + 1] - st.H[i];
    m += 0.5 * (st.y[i] * st.y[i] * (pq.P[i] * dy + dH) + st.y[i + 1] * st.y[i + 1] * (pq.P[i + 1] * dy + dH));
  }
  return m;
}

void write_json(std::ostream& os, const LagrangianState& st) {
  nlohmann::json j;
  j["t"] = st.t;
  j["xi"] = st.xi;
  j["y"] = st.y;
  j["U"] = st.U;
  j["H"] = st.H;
  j["C"] = st.C;
  os << j.dump() << '\n';
}

LagrangianState read_lagrangian_json(std::istream& is) {
  LagrangianState st;
  try {
    const nlohmann::json j = nlohmann::json::parse(is);
    st.t = j.at("t").get<double>();
    st.xi = j.at("xi").get<std::vector<double>>();
    st.y = j.at("y").get<std::vector<double>>();
    st.U = j.at("U").get<std::vector<double>>();
    st.H = j.at("H").get<std::vector<double>>();
    st.C = j.at("C").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, e.what());
  }
  return st;
}

}  // namespace chm
