// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chmetric/dynamics.hpp"
#include "chmetric/experiments.hpp"
#include "chmetric/lagrangian.hpp"
#include "chmetric/metric.hpp"
#include "chmetric/numeric.hpp"
#include "chmetric/peakon.hpp"
#include "chmetric/transform.hpp"
#include "oracles.hpp"

using namespace chm;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Verdict {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string num(double v) { return fmt_num(v); }

// Scaled fields straight from the oracle, no stored derivatives.
ScaledSnapshot oracle_scaled(double E, double t, double t0, std::size_t n) {
  const oracle::Peakon pk(E, t, t0);
  ScaledSnapshot ss;
  ss.t = t;
  ss.A = std::sqrt(2.0) * E;
  const long double A = ss.A;
  for (std::size_t k = 0; k < n; ++k) {
    const long double eta = (k + 0.5L) / n;
    ss.eta.push_back(static_cast<double>(eta));
    ss.tY.push_back(static_cast<double>(A * pk.Y(A * A * eta)));
    ss.tU.push_back(static_cast<double>(A * pk.U(A * A * eta)));
    ss.tPsqrt.push_back(static_cast<double>(A * std::sqrt(pk.P(A * A * eta))));
  }
  return ss;
}

// 1. Eulerian samples -> (Y, U, P^1/2) against the oracle pseudo-inverse.
Verdict transform_agreement() {
  Verdict v;
  double worst_gap = 0.0, worst_ratio = 1e300, worst_time = 0.0;
  for (double E : {1.0, 2.0, 4.0})
    for (double tau : {-2.0, -0.5, -0.05, 0.05, 0.5, 2.0}) {
      const PeakonParams p{E, 0.0};
      const oracle::Peakon pk(E, tau, 0.0);
      auto gap_at = [&](std::size_t N) {
        const auto s = sample_snapshot(p, tau, N, 15.0, SampleGrid::EnergyAdapted);
        const auto ts = build_transformed(s, N);
        double g = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
          const long double eta = (k + 0.5L) * 2 * E * E / N;
          g = std::max({g, std::abs(ts.Y[k] - static_cast<double>(pk.Y(eta))),
                        std::abs(ts.U[k] - static_cast<double>(pk.U(eta))),
                        std::abs(ts.Psqrt[k] - static_cast<double>(std::sqrt(pk.P(eta))))});
        }
        return g;
      };
      const auto start = Clock::now();
      const double g4 = gap_at(4096);
      const double secs = seconds_since(start);
      const double g2 = gap_at(2048);
      const double ratio = g2 / g4;
      worst_gap = std::max(worst_gap, g4);
      worst_ratio = std::min(worst_ratio, ratio);
      worst_time = std::max(worst_time, secs);
      const std::string cell = "E=" + num(E) + " t-t0=" + num(tau);
      if (!(g4 <= 1e-3)) v.fail(cell + " gap " + num(g4));
      if (!(ratio >= 3.0)) v.fail(cell + " refinement ratio " + num(ratio));
      if (!(secs <= 10.0)) v.fail(cell + " took " + num(secs) + " s");
    }
  if (v.pass)
    v.detail = "18 cells, worst gap " + num(worst_gap) + ", worst ratio " + num(worst_ratio) + ", slowest cell " +
               num(worst_time) + " s";
  return v;
}

// 2. Oracle fields plugged into the scaled system.
Verdict system_residual() {
  Verdict v;
  const double E = 2.0, t0 = 0.0, dt = 1e-4;
  std::ostringstream det;
  for (double tau : {1.0, -0.5}) {
    std::vector<double> rel;
    for (std::size_t N : {1024u, 2048u, 4096u}) {
      const ScaledSnapshot now = oracle_scaled(E, t0 + tau, t0, N);
      const ScaledSnapshot before = oracle_scaled(E, t0 + tau - dt, t0, N);
      const ScaledSnapshot after = oracle_scaled(E, t0 + tau + dt, t0, N);
      const SystemRhs r = system_rhs(now, compute_operators(now));
      long double res = 0, den = 0;
      for (std::size_t k = 0; k < N; ++k) {
        const double fy = (after.tY[k] - before.tY[k]) / (2 * dt), fu = (after.tU[k] - before.tU[k]) / (2 * dt),
                     fp = (after.tPsqrt[k] - before.tPsqrt[k]) / (2 * dt);
        res += std::pow(fy - r.Y_t[k], 2) + std::pow(fu - r.U_t[k], 2) + std::pow(fp - r.Psqrt_t[k], 2);
        den += fy * fy + fu * fu + fp * fp;
      }
      rel.push_back(static_cast<double>(std::sqrt(res / den)));
    }
    det << "t-t0=" << num(tau) << ": " << num(rel[0]) << ", " << num(rel[1]) << ", " << num(rel[2]) << "; ";
    const std::string cell = "t-t0=" + num(tau);
    if (!(rel[2] <= 1e-2)) v.fail(cell + " residual " + num(rel[2]) + " at N=4096");
    for (int i = 0; i < 2; ++i)
      if (!(rel[i] / rel[i + 1] >= 1.5)) v.fail(cell + " reduction " + num(rel[i] / rel[i + 1]));
  }
  if (v.pass) v.detail = "relative residual at N=1024/2048/4096, " + det.str();
  return v;
}

// 3. Lagrangian evolution through the collision.
Verdict lagrangian_evolution() {
  Verdict v;
  const double E = 2.0, t0 = 0.0;
  auto st = lagrangian_initial(PeakonParams{E, t0}, t0 - 1.0, 1024);
  const double C = E * E, X0 = xavier_residual(st), H0 = energy(st);
  double gap = 0.0, drift = 0.0, xmax = X0;
  auto watch = [&](const LagrangianState& s) {
    const oracle::Peakon pk(E, s.t, t0);
    for (std::size_t i = 0; i < s.y.size(); ++i)
      gap = std::max(gap, std::abs(s.U[i] - static_cast<double>(pk.u(s.y[i]))));
    drift = std::max(drift, std::abs(energy(s) - H0));
    xmax = std::max(xmax, xavier_residual(s));
  };
  watch(st);
  st = evolve(st, t0 + 1.0, 1e-3, watch);
  if (!(gap <= 1e-3)) v.fail("velocity gap " + num(gap));
  if (!(drift <= 1e-6 * C)) v.fail("energy drift " + num(drift));
  if (!(xmax <= 5.0 * X0)) v.fail("Xavier residual grew " + num(xmax / X0) + "x");
  if (v.pass)
    v.detail = "velocity gap " + num(gap) + ", energy drift " + num(drift) + ", Xavier growth " + num(xmax / X0);
  return v;
}

Verdict from_report(const Report& r) {
  Verdict v;
  for (const auto& row : r.rows)
    if (!row.pass) v.fail(row.tag + " [" + row.context + "] " + num(row.value) + " " + row.relation + " " + num(row.threshold));
  if (v.pass) v.detail = std::to_string(r.rows.size()) + " rows";
  else v.detail += " (" + std::to_string(r.failures()) + " of " + std::to_string(r.rows.size()) + " rows fail)";
  return v;
}

// 4. Inequality catalog over the (E, t) grid.
Verdict inequality_catalog() {
  Config cfg = Config::defaults();
  cfg.set("energies", "1,2,4");
  cfg.set("offsets", "-2,-0.5,-0.05,0.05,0.5,2");
  cfg.set("N", "4096");
  cfg.set("tolerance", "1e-6");
  Verdict v = from_report(run_invariants(cfg));
  // the discrete-derivative pass is the default; the analytic one must hold as well
  cfg.set("derivatives", "analytic");
  const Verdict w = from_report(run_invariants(cfg));
  if (!w.pass) v.fail("analytic derivatives: " + w.detail);
  else if (v.pass) v.detail += " with discrete and " + w.detail + " with analytic derivatives";
  return v;
}

// 5. Metric axioms, growth bound, continuity and the peakon-vs-zero contrast.
Verdict lipschitz() {
  Config cfg = Config::defaults();
  cfg.set("pairs", "2 2 2.2 2; 2 2 2 2.1; 1 2 4 2");
  cfg.set("tmin", "0");
  cfg.set("tmax", "4");
  cfg.set("samples", "33");
  cfg.set("lipschitz_N", "4096");
  cfg.set("continuity_tol", "0.01");
  cfg.set("axiom_triples", "100");
  Verdict v = from_report(run_lipschitz(cfg));

  // contrast, recomputed from the oracle: Eulerian L2 gap to zero vanishes at t0
  const double E = 2.0, t0 = 2.0;
  const oracle::Peakon at(E, t0, t0);
  const long double l2 = std::sqrt(oracle::gauss([&](oracle::real x) { return at.u(x) * at.u(x); }, -40, 40, 200));
  if (!(l2 == 0.0L)) v.fail("Eulerian gap at t0 is " + num(static_cast<double>(l2)));
  double dmin = 1e300;
  for (int i = 0; i <= 32; ++i) {
    const double t = 4.0 * i / 32.0;
    const ScaledSnapshot s = oracle_scaled(E, t, t0, 2048);
    // the zero solution has all fields 0 and A = 0
    const std::vector<double> zero(s.eta.size(), 0.0);
    const double d = l2_gap(s.tY, zero, s.eta) + l2_gap(s.tU, zero, s.eta) + l2_gap(s.tPsqrt, zero, s.eta) + s.A;
    dmin = std::min(dmin, d);
  }
  if (!(dmin >= std::sqrt(2.0) * E)) v.fail("oracle distance to zero dips to " + num(dmin));
  if (v.pass) v.detail += ", oracle distance to zero >= " + num(dmin) + " >= sqrt(2C)";
  return v;
}

// 6. Figure data against the oracle closed forms.
Verdict figures() {
  Verdict v;
  const fs::path dir = fs::temp_directory_path() / "chmetric_acceptance_figures";
  fs::remove_all(dir);
  const Config cfg = Config::defaults();
  if (cfg.num("figure_C") != 4.0 || cfg.num("figure_t0") != 2.0 || cfg.list("figure_times") != std::vector<double>{0, 1.5, 2, 4} ||
      cfg.list("resc_C") != std::vector<double>{1, 0.5, 0.25})
    v.fail("default figure parameters differ from C=4, t0=2, t in {0,1.5,2,4}, C in {1,0.5,0.25}");
  const double t0 = 2.0;
  std::size_t files = 0, values = 0;
  double worst = 0.0;
  for (const auto& id : figure_ids()) {
    for (const auto& path : emit_figures(id, cfg, dir)) {
      ++files;
      const std::string stem = path.stem().string();
      double E = 2.0, t = 0.0;
      std::string field = id;
      if (id == "resc") {
        const auto c = stem.find("_C");
        E = std::sqrt(std::stod(stem.substr(c + 2)));
        field = stem.substr(5, c - 5);  // u, G or Y
        t = cfg.num("resc_t");
      } else {
        t = std::stod(stem.substr(stem.rfind("_t") + 2));
      }
      const oracle::Peakon pk(E, t, t0);
      const long double A = std::sqrt(2.0L) * E;
      std::ifstream is(path);
      std::string line;
      std::getline(is, line);
      while (std::getline(is, line)) {
        std::stringstream ls(line);
        std::string a, b, branch;
        std::getline(ls, a, ',');
        std::getline(ls, b, ',');
        std::getline(ls, branch);
        const long double x = std::stold(a);
        const double got = std::stod(b);
        // left-continuous G; atom rows carry the right limit
        const long double xl = branch == "atom" ? x + 1e-30L : x - 1e-30L;
        long double ref = 0;
        if (id == "resc") {
          if (field == "u") ref = pk.u(x);
          else if (field == "G") ref = pk.G(xl / A) / (A * A);
          else ref = A * pk.Y(A * A * x);
        } else if (id == "u") ref = pk.u(x);
        else if (id == "G") ref = pk.G(xl);
        else if (id == "p") ref = pk.p(x);
        else if (id == "psqrt") ref = std::sqrt(pk.p(x));
        else if (id == "Y") ref = pk.Y(x);
        else if (id == "U") ref = pk.U(x);
        else if (id == "P") ref = pk.P(x);
        else if (id == "Psqrt") ref = std::sqrt(pk.P(x));
        else if (id == "tY") ref = A * pk.Y(A * A * x);
        else if (id == "tU") ref = A * pk.U(A * A * x);
        else if (id == "tP") ref = A * A * pk.P(A * A * x);
        else if (id == "tPsqrt") ref = A * std::sqrt(pk.P(A * A * x));
        const double err = static_cast<double>(std::fabs(got - ref) / std::max<long double>(1, std::fabs(ref)));
        worst = std::max(worst, err);
        ++values;
        if (!(err <= 1e-12)) v.fail(path.filename().string() + " at " + a + ": " + b + " vs " + num(static_cast<double>(ref)));
      }
    }
  }
  if (files != 12 * 4 + 9) v.fail("expected 57 files, got " + std::to_string(files));
  if (v.pass)
    v.detail = std::to_string(figure_ids().size()) + " ids, " + std::to_string(files) + " files, " +
               std::to_string(values) + " values, worst relative error " + num(worst);
  fs::remove_all(dir);
  return v;
}

double rel_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double g = 0.0, s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    g = std::max(g, std::abs(a[k] - b[k]));
    s = std::max(s, std::abs(b[k]));
  }
  return s > 0.0 ? g / s : g;
}

// Random admissible scaled state: increasing tY with the endpoint logarithms,
// bounded tU and tPsqrt bounded away from zero.
ScaledSnapshot random_state(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  ScaledSnapshot ss;
  ss.A = 0.5 + 3.5 * uni(rng);
  ss.eta = midpoint_grid(n, 1.0);
  const double w1 = uni(rng), w2 = uni(rng), ph = 6.28 * uni(rng);
  double r = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double e = ss.eta[k];
    r += 0.5 * ss.A * uni(rng) / static_cast<double>(n);
    ss.tY.push_back(ss.A * (std::log(e) - std::log1p(-e)) + r);
    ss.tU.push_back(ss.A / std::sqrt(2.0) * (w1 * std::sin(6.0 * e + ph) + 0.1 * (uni(rng) - 0.5)));
    ss.tPsqrt.push_back(ss.A * (0.6 + 0.3 * w2 * std::cos(4.0 * e) + 0.05 * uni(rng)));
  }
  return ss;
}

// 7. O(N) sweeps against direct quadrature, and timing at N = 1e5.
Verdict algorithmic_equivalence() {
  Verdict v;
  std::mt19937_64 rng(11);
  double worst = 0.0;
  int states = 0;
  for (std::size_t n : {8u, 33u, 128u, 257u, 512u})
    for (int rep = 0; rep < 4; ++rep) {
      const ScaledSnapshot ss = random_state(rng, n);
      const auto d = derivatives(ss);
      const auto ops = compute_operators(ss);
      const auto ref = oracle::direct_operators(ss.tY, ss.tU, ss.tPsqrt, d.Y_eta, d.U_eta, ss.A);
      for (double g : {rel_gap(ops.Qt, ref.Q), rel_gap(ops.St, ref.S), rel_gap(ops.Rt, ref.R), rel_gap(ops.Dt, ref.D),
                       rel_gap(ops.Et, ref.E)})
        worst = std::max(worst, g);
      ++states;
    }
  // Lagrangian pressure: exact per-cell integrals against 16-point Gauss on every cell pair
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (std::size_t n : {16u, 200u, 512u}) {
    auto st = lagrangian_initial(PeakonParams{0.5 + 3.0 * uni(rng), 0.0}, 4.0 * uni(rng) - 2.0, n);
    const auto pq = compute_PQ(st);
    std::vector<double> P, Q;
    oracle::direct_PQ(st.y, st.U, st.H, P, Q);
    worst = std::max({worst, rel_gap(pq.P, P), rel_gap(pq.Q, Q)});
    ++states;
  }
  if (!(worst <= 1e-10)) v.fail("sweep vs direct relative gap " + num(worst));

  const std::size_t big = 100000;
  const ScaledSnapshot ss = scaled_snapshot_exact(PeakonParams{2.0, 0.0}, 0.5, big);
  auto start = Clock::now();
  const auto ops = compute_operators(ss);
  const double t_ops = seconds_since(start);
  start = Clock::now();
  system_rhs(ss, ops);
  const double t_rhs = seconds_since(start);
  const auto st = lagrangian_initial(PeakonParams{2.0, 0.0}, 0.5, big);
  start = Clock::now();
  compute_PQ(st);
  const double t_pq = seconds_since(start);
  const double slowest = std::max({t_ops, t_rhs, t_pq});
  if (!(slowest <= 2.0)) v.fail("N=1e5 evaluation took " + num(slowest) + " s");
  if (v.pass)
    v.detail = std::to_string(states) + " random states, worst relative gap " + num(worst) + "; N=1e5: operators " +
               num(t_ops) + " s, rhs " + num(t_rhs) + " s, Lagrangian P/Q " + num(t_pq) + " s";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"1 transform agreement", transform_agreement},
      {"2 system residual", system_residual},
      {"3 lagrangian evolution", lagrangian_evolution},
      {"4 inequality catalog", inequality_catalog},
      {"5 metric and lipschitz", lipschitz},
      {"6 figure data", figures},
      {"7 sweep equivalence", algorithmic_equivalence},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = Clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    failed += !v.pass;
    std::printf("%s criterion %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str(),
                seconds_since(start));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria pass\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
