#include "chmetric/experiments.hpp"

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <tuple>

#include "chmetric/dynamics.hpp"
#include "chmetric/error.hpp"
#include "chmetric/lagrangian.hpp"
#include "chmetric/metric.hpp"
#include "chmetric/numeric.hpp"
#include "chmetric/peakon.hpp"
#include "json.hpp"

namespace chm {

// ---------------------------------------------------------------- config

Config Config::defaults() {
  Config c;
  c.set("energies", "1, 2, 4");
  c.set("offsets", "-2, -0.5, -0.05, 0.05, 0.5, 2");
  c.set("t0", "2");
  c.set("N", "4096");
  c.set("derivatives", "discrete");
  c.set("tolerance", "1e-6");
  c.set("residual_E", "2");
  c.set("residual_offset", "1");
  c.set("residual_N", "1024, 2048, 4096");
  c.set("residual_dt", "1e-4");
  c.set("residual_max", "1e-2");
  c.set("residual_min_ratio", "1.5");
  // E1 t01 E2 t02, pairs separated by ';'
  c.set("pairs", "2 2 2.2 2; 2 2 2 2.1; 1 2 4 2");
  c.set("tmin", "0");
  c.set("tmax", "4");
  c.set("samples", "33");
  c.set("lipschitz_N", "4096");
  c.set("continuity_tol", "0.01");
  c.set("lipschitz_dt", "1e-3");
  c.set("axiom_triples", "100");
  c.set("axiom_N", "512");
  c.set("seed", "1");
  c.set("figure_C", "4");
  c.set("figure_t0", "2");
  c.set("figure_times", "0, 1.5, 2, 4");
  c.set("figure_points", "401");
  c.set("figure_xmax", "6");
  c.set("resc_C", "1, 0.5, 0.25");
  c.set("resc_t", "0");
  return c;
}

Config Config::parse(std::istream& is) {
  Config c;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::InvalidInput, "config line " + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw Error(ErrorKind::InvalidInput, "config line " + std::to_string(lineno) + ": empty key");
    c.set(key, trim(line.substr(eq + 1)));
  }
  return c;
}

Config Config::load(const std::string& path_or_default) {
  Config c = defaults();
  if (path_or_default == "default") return c;
  std::ifstream in(path_or_default);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open config " + path_or_default);
  c.merge(parse(in));
  return c;
}

void Config::merge(const Config& other) {
  for (const auto& [k, v] : other.kv_) kv_[k] = v;
}

std::string Config::str(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw Error(ErrorKind::InvalidInput, "missing config key " + key);
  return it->second;
}

double Config::num(const std::string& key) const {
  const std::string s = str(key);
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || s.find_first_not_of(" \t", pos) != std::string::npos)
    throw Error(ErrorKind::InvalidInput, "config key " + key + " is not a number: " + s);
  return v;
}

std::size_t Config::count(const std::string& key) const {
  const double v = num(key);
  if (!(v >= 0.0) || v != std::floor(v)) throw Error(ErrorKind::InvalidInput, "config key " + key + " must be a count");
  return static_cast<std::size_t>(v);
}

std::vector<double> Config::list(const std::string& key) const {
  std::string s = str(key);
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream is(s);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != tok.size()) throw Error(ErrorKind::InvalidInput, "config key " + key + ": bad entry " + tok);
    out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------- reports

bool Report::pass() const { return failures() == 0; }

std::size_t Report::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const ReportRow& r) { return !r.pass; }));
}

void write_json(std::ostream& os, const Report& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["pass"] = r.pass();
  j["failures"] = r.failures();
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json o;
    o["tag"] = row.tag;
    o["context"] = row.context;
    o["value"] = fmt_num(row.value);
    o["relation"] = row.relation;
    o["threshold"] = fmt_num(row.threshold);
    o["pass"] = row.pass;
    rows.push_back(o);
  }
  j["rows"] = rows;
  os << j.dump(1) << '\n';
}

void write_text(std::ostream& os, const Report& r) {
  for (const auto& row : r.rows) {
    os << (row.pass ? "PASS " : "FAIL ") << row.tag;
    if (!row.context.empty()) os << " [" << row.context << "]";
    os << "  " << fmt_num(row.value) << ' ' << row.relation << ' ' << fmt_num(row.threshold) << '\n';
  }
  os << r.name << ": " << r.rows.size() - r.failures() << '/' << r.rows.size() << " rows pass\n";
}

namespace {

ReportRow make_row(std::string tag, std::string context, double value, const char* relation, double threshold) {
  ReportRow r{std::move(tag), std::move(context), value, relation, threshold, false};
  if (r.relation == "<=") r.pass = value <= threshold;
  else r.pass = value >= threshold;
  return r;
}

std::string cell_name(double E, double t0, double t) {
  return "E=" + fmt_num(E) + " t0=" + fmt_num(t0) + " t=" + fmt_num(t);
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

}  // namespace

// ---------------------------------------------------------------- inequalities

std::vector<ReportRow> check_inequalities(const ScaledSnapshot& ss, double tol, const std::string& context) {
  const std::size_t n = ss.eta.size();
  const double A = ss.A;
  std::vector<ReportRow> rows;

  struct Row {
    const char* tag;
    int power;
    double worst = INFINITY;
  };
  std::vector<Row> table = {
      {"pressure_times_Y_eta_at_most_half", 0},
      {"velocity_times_U_eta_at_most_half", 0},
      {"velocity_sq_times_Y_eta_at_most_one", 0},
      {"twice_pressure_dominates_velocity_sq", 2},
      {"velocity_bounded_by_root_energy", 1},
      {"pressure_bounded_by_half_energy", 2},
      {"scaled_pressure_in_range", 4},
      {"scaled_velocity_bound", 2},
      {"scaled_Q_bounded_by_pressure", 5},
      {"scaled_velocity_sq_by_pressure", 4},
      {"scaled_pressure_Y_eta_bound", 5},
      {"scaled_U_U_eta_bound", 4},
      {"scaled_U_sq_Y_eta_in_range", 5},
      {"scaled_U_eta_sq_by_Y_eta", 4},
      {"scaled_U_root_P_Y_eta_bound", 5},
      {"scaled_R_bounded_by_pressure", 7},
      {"scaled_energy_density_in_range", 5},
      {"scaled_Y_eta_nonnegative", 1},
      {"scaled_U_eta_sq_by_energy_density", 6},
      {"scaled_left_part_in_range", 5},
      {"scaled_right_part_in_range", 5},
      {"scaled_pressure_U_eta_bound", 6},
      {"scaled_pressure_U_eta_sq_bound", 8},
      {"scaled_pressure_U_eta_sq_by_Y_eta", 8},
      {"root_pressure_slope_by_Y_eta", 2},
      {"velocity_times_root_pressure_slope", 4},
      {"root_pressure_slope_sq_by_Y_eta", 4},
      {"root_pressure_slope_sq_by_Y_eta_sq", 4},
      {"left_integral_U_sq", 4},
      {"left_integral_P_sq_Y_eta", 9},
      {"left_integral_U_sq_Y_eta", 5},
      {"left_integral_energy_density", 5},
      {"left_integral_P_Y_eta_rate_3_2", 5},
      {"left_integral_energy_density_rate_3_2", 5},
      {"left_integral_P_Y_eta_rate_5_4", 5},
      {"left_integral_P_rate_3_2", 4},
      {"left_integral_P_pow_3_2_Y_eta", 7},
  };

  if (!(A > 0.0)) {
    // Zero solution: every field vanishes and every row holds trivially.
    for (const auto& r : table) rows.push_back(make_row(r.tag, context + " zero solution", 0.0, ">=", -tol));
    return rows;
  }

  const EtaDerivatives d = derivatives(ss);
  const OperatorFields ops = compute_operators(ss);
  const double A2 = A * A, A3 = A2 * A, A4 = A2 * A2, A5 = A4 * A, A6 = A5 * A, A7 = A6 * A, A8 = A7 * A;
  const double C = 0.5 * A2;
  const double K = std::sqrt(C) + 5.5;

  std::vector<double> P(n), H_eta(n), Ps_eta(n);
  for (std::size_t k = 0; k < n; ++k) {
    P[k] = ss.tPsqrt[k] * ss.tPsqrt[k];
    H_eta[k] = A5 - 2.0 * P[k] * d.Y_eta[k] + ss.tU[k] * ss.tU[k] * d.Y_eta[k];
    Ps_eta[k] = ss.tPsqrt[k] > 0.0 ? d.P_eta[k] / (2.0 * ss.tPsqrt[k]) : 0.0;
  }

  auto weighted = [&](auto f) {
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k) w[k] = f(k);
    return w;
  };
  const auto I_U2 = left_kernel_integral(ss, weighted([&](std::size_t k) { return ss.tU[k] * ss.tU[k]; }), 1.0);
  const auto I_P2Y =
      left_kernel_integral(ss, weighted([&](std::size_t k) { return P[k] * P[k] * d.Y_eta[k]; }), 1.0);
  const auto I_U2Y =
      left_kernel_integral(ss, weighted([&](std::size_t k) { return ss.tU[k] * ss.tU[k] * d.Y_eta[k]; }), 1.0);
  const auto I_H = left_kernel_integral(ss, H_eta, 1.0);
  const auto PY = weighted([&](std::size_t k) { return P[k] * d.Y_eta[k]; });
  const auto I_PY32 = left_kernel_integral(ss, PY, 1.5);
  const auto I_H32 = left_kernel_integral(ss, H_eta, 1.5);
  const auto I_PY54 = left_kernel_integral(ss, PY, 1.25);
  const auto I_P32 = left_kernel_integral(ss, P, 1.5);
  const auto I_P32Y =
      left_kernel_integral(ss, weighted([&](std::size_t k) { return std::pow(P[k], 1.5) * d.Y_eta[k]; }), 1.0);
  // general power bound with exponent 1/2: 3 (1 + b)/b A^{1+4b} / 4^b
  const double general = 3.0 * 1.5 / 0.5 * A3 / 2.0;

  double R_ratio = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double U = ss.tU[k], Ps = ss.tPsqrt[k], Pk = P[k];
    const double Ye = d.Y_eta[k], Ue = d.U_eta[k], He = H_eta[k], Pse = Ps_eta[k];
    const double m[] = {
        A5 / 2.0 - Pk * Ye,
        A4 / 2.0 - std::abs(U * Ue),
        A5 - U * U * Ye,
        2.0 * Pk - U * U,
        A2 / std::sqrt(2.0) - std::abs(U),
        A4 / 4.0 - Pk,
        std::min(4.0 * Pk, A4 - 4.0 * Pk),
        A2 - std::sqrt(2.0) * std::abs(U),
        A * Pk - std::abs(ops.Qt[k]),
        2.0 * Pk - U * U,
        A5 - 2.0 * Pk * Ye,
        A4 - 2.0 * std::abs(U * Ue),
        std::min(U * U * Ye, A5 - U * U * Ye),
        A3 * Ye - Ue * Ue,
        A5 - std::sqrt(2.0) * std::abs(U) * Ps * Ye,
        K * A3 * Pk - std::abs(ops.Rt[k]),
        std::min(He, A5 - He),
        Ye,
        He * Ye - A2 * Ue * Ue,
        std::min(ops.Dt[k], 2.0 * A * Pk - ops.Dt[k]),
        std::min(ops.Et[k], 2.0 * A * Pk - ops.Et[k]),
        A6 - 2.0 * std::sqrt(2.0) * Pk * std::abs(Ue),
        A8 - 2.0 * Pk * Ue * Ue,
        A7 * Ye - 4.0 * Pk * Ue * Ue,
        Ps * Ye / (2.0 * A) - std::abs(Pse),
        0.375 * A4 - std::abs(U * Pse),
        A3 * Ye / 8.0 - Pse * Pse,
        A2 * Ye * Ye / 16.0 - Pse * Pse,
        6.0 * Pk - I_U2[k],
        1.5 * A5 * Pk - I_P2Y[k],
        4.0 * A * Pk - I_U2Y[k],
        4.0 * A * Pk - I_H[k],
        2.0 * A * Pk - I_PY32[k],
        4.0 * A * Pk - I_H32[k],
        4.0 * A * Pk - I_PY54[k],
        7.0 * Pk - I_P32[k],
        general * Pk - I_P32Y[k],
    };
    // the first six rows are unscaled: P = tP/A^2, U = tU/A, Y_eta = tY_eta/A^3, U_eta = tU_eta/A^3
    const double unscale[] = {A5, A4, A5, A2, A, A2};
    for (std::size_t r = 0; r < table.size(); ++r) {
      const double margin = r < 6 ? m[r] / unscale[r] : m[r];
      table[r].worst = std::min(table[r].worst, margin);
    }
    if (Pk > 0.0) R_ratio = std::max(R_ratio, std::abs(ops.Rt[k]) / (A3 * Pk));
  }
  // Unscaled rows live at scale C^{p/2} ~ A^p; scaled rows at A^p.
  for (std::size_t r = 0; r < table.size(); ++r) {
    const double scale = std::pow(A, table[r].power);
    rows.push_back(make_row(table[r].tag, context, table[r].worst / scale, ">=", -tol));
  }
  rows.push_back(make_row("scaled_R_observed_constant", context, R_ratio, "<=", K));
  return rows;
}

Report run_invariants(const Config& cfg) {
  Report rep;
  rep.name = "invariants";
  const auto energies = cfg.list("energies");
  const auto offsets = cfg.list("offsets");
  const double t0 = cfg.num("t0");
  const std::size_t N = cfg.count("N");
  const double tol = cfg.num("tolerance");
  const std::string mode = cfg.str("derivatives");
  if (mode != "discrete" && mode != "analytic")
    throw Error(ErrorKind::InvalidInput, "derivatives must be discrete or analytic");

  std::vector<std::pair<double, double>> cells;
  for (double E : energies)
    for (double o : offsets) cells.emplace_back(E, o);
  std::vector<std::vector<ReportRow>> out(cells.size());
  parallel_for(cells.size(), [&](std::size_t i) {
    const PeakonParams p{cells[i].first, t0};
    const double t = t0 + cells[i].second;
    ScaledSnapshot ss = scaled_snapshot_exact(p, t, N);
    if (mode == "discrete") ss.deriv.reset();
    out[i] = check_inequalities(ss, tol, cell_name(p.E, t0, t));
  });
  for (auto& rows : out) rep.rows.insert(rep.rows.end(), rows.begin(), rows.end());
  return rep;
}

// ---------------------------------------------------------------- residual

Report run_residual(const Config& cfg) {
  Report rep;
  rep.name = "residual";
  const double t0 = cfg.num("t0");
  const PeakonParams p{cfg.num("residual_E"), t0};
  const double t = t0 + cfg.num("residual_offset");
  const double dt = cfg.num("residual_dt");
  const double max_rel = cfg.num("residual_max");
  const double min_ratio = cfg.num("residual_min_ratio");
  std::vector<double> Ns = cfg.list("residual_N");
  std::vector<ResidualReport> res(Ns.size());
  parallel_for(Ns.size(), [&](std::size_t i) {
    res[i] = residual_against_exact(p, t, static_cast<std::size_t>(Ns[i]), dt);
  });
  const std::string ctx = cell_name(p.E, t0, t) + " dt=" + fmt_num(dt);
  for (std::size_t i = 0; i < res.size(); ++i)
    rep.rows.push_back(make_row("relative_residual", ctx + " N=" + fmt_num(Ns[i]), res[i].relative, "<=", max_rel));
  for (std::size_t i = 0; i + 1 < res.size(); ++i)
    rep.rows.push_back(make_row("residual_reduction_per_refinement",
                                ctx + " N=" + fmt_num(Ns[i]) + "->" + fmt_num(Ns[i + 1]),
                                res[i].relative / res[i + 1].relative, ">=", min_ratio));

  // At the collision u vanishes identically, so the transport velocity and Y_t vanish.
  const std::size_t Nmax = static_cast<std::size_t>(*std::max_element(Ns.begin(), Ns.end()));
  {
    ScaledSnapshot ss = scaled_snapshot_exact(p, t0, Nmax);
    ss.deriv.reset();
    const SystemRhs r = system_rhs(ss, compute_operators(ss));
    double vmax = 0.0, ytmax = 0.0;
    for (std::size_t k = 0; k < r.v.size(); ++k) {
      vmax = std::max(vmax, std::abs(r.v[k]));
      ytmax = std::max(ytmax, std::abs(r.Y_t[k]));
    }
    const std::string c0 = cell_name(p.E, t0, t0) + " N=" + fmt_num(static_cast<double>(Nmax));
    rep.rows.push_back(make_row("zero_velocity_transport", c0, vmax, "<=", 0.0));
    rep.rows.push_back(make_row("zero_velocity_Y_t", c0, ytmax, "<=", 0.0));
  }
  // Odd grid: the centre node sits at eta = 1/2 where Q vanishes by antisymmetry.
  {
    ScaledSnapshot ss = scaled_snapshot_exact(p, t, Nmax + 1);
    ss.deriv.reset();
    const OperatorFields ops = compute_operators(ss);
    const double q = std::abs(ops.Qt[Nmax / 2]) / std::pow(ss.A, 5);
    rep.rows.push_back(make_row("centre_Q_vanishes", ctx + " N=" + fmt_num(static_cast<double>(Nmax + 1)), q, "<=",
                                1e-12));
  }
  return rep;
}

// ---------------------------------------------------------------- lipschitz

namespace {

std::vector<std::array<double, 4>> parse_pairs(const std::string& s) {
  std::vector<std::array<double, 4>> out;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream it(item);
    std::array<double, 4> a{};
    for (double& v : a)
      if (!(it >> v)) throw Error(ErrorKind::InvalidInput, "pairs entry needs E1 t01 E2 t02: " + item);
    out.push_back(a);
  }
  return out;
}

double eulerian_l2(const PeakonParams& p, double t) {
  const std::size_t n = 40001;
  const double L = 40.0, dx = 2.0 * L / static_cast<double>(n - 1);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = u_exact(p, t, -L + dx * static_cast<double>(i));
    s += (i == 0 || i + 1 == n ? 0.5 : 1.0) * u * u;
  }
  return std::sqrt(s * dx);
}

// Lagrangian evolution from times.front(), relabelled and rescaled at every sample time.
std::vector<ScaledSnapshot> evolved_scaled(const PeakonParams& p, const std::vector<double>& times, std::size_t N,
                                           double dt) {
  LagrangianState st = lagrangian_initial(p, times.front(), N);
  std::vector<ScaledSnapshot> out;
  out.reserve(times.size());
  for (double t : times) {
    if (t > st.t) st = evolve(std::move(st), t, dt);
    out.push_back(rescale(relabel_to_new(st, N)));
  }
  return out;
}

}  // namespace

Report run_lipschitz(const Config& cfg) {
  Report rep;
  rep.name = "lipschitz";
  const auto pairs = parse_pairs(cfg.str("pairs"));
  const double tmin = cfg.num("tmin"), tmax = cfg.num("tmax");
  const std::size_t samples = cfg.count("samples");
  const std::size_t N = cfg.count("lipschitz_N");
  const double cont_tol = cfg.num("continuity_tol");
  if (samples < 2) throw Error(ErrorKind::InvalidInput, "samples must be at least 2");
  const auto times = linspace(tmin, tmax, samples);
  const double dt = cfg.num("lipschitz_dt");

  // evolved series for every pair at dt and dt/2, all solutions in parallel
  std::vector<std::vector<ScaledSnapshot>> evolved(pairs.size() * 4);
  parallel_for(evolved.size(), [&](std::size_t i) {
    const auto& pr = pairs[i / 4];
    const bool second = (i % 2) == 1;
    const double step = (i % 4) < 2 ? dt : 0.5 * dt;
    evolved[i] = evolved_scaled(second ? PeakonParams{pr[2], pr[3]} : PeakonParams{pr[0], pr[1]}, times, N, step);
  });

  for (std::size_t ip = 0; ip < pairs.size(); ++ip) {
    const auto& pr = pairs[ip];
    const PeakonParams a{pr[0], pr[1]}, b{pr[2], pr[3]};
    const std::string ctx = "E=" + fmt_num(a.E) + "/" + fmt_num(b.E) + " t0=" + fmt_num(a.t0) + "/" + fmt_num(b.t0);
    const auto coarse = distance_series(a, b, times, N);
    const double K = fit_growth_rate(coarse);
    rep.rows.push_back(make_row("fitted_growth_rate_finite", ctx, K, "<=", DBL_MAX));
    const double d0 = coarse.front().d.total;
    double excess = 0.0;
    for (const auto& sp : coarse)
      excess = std::max(excess, (sp.d.total - std::exp(K * (sp.t - coarse.front().t)) * d0) / d0);
    rep.rows.push_back(make_row("distance_within_exponential_bound", ctx, excess, "<=", 1e-12));

    double refine = 0.0, vs_closed = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      const double d1 = distance(evolved[4 * ip][k], evolved[4 * ip + 1][k]).total;
      const double d2 = distance(evolved[4 * ip + 2][k], evolved[4 * ip + 3][k]).total;
      refine = std::max(refine, std::abs(d1 - d2) / d2);
      vs_closed = std::max(vs_closed, std::abs(d2 - coarse[k].d.total) / coarse[k].d.total);
    }
    const std::string ectx = ctx + " dt=" + fmt_num(dt) + "/" + fmt_num(0.5 * dt);
    rep.rows.push_back(make_row("evolved_distance_stable_under_step_halving", ectx, refine, "<=", cont_tol));
    rep.rows.push_back(make_row("evolved_distance_matches_closed_form", ectx, vs_closed, "<=", cont_tol));
  }

  {
    const PeakonParams p{2.0, cfg.num("t0")};
    const auto same = distance_series(p, p, times, N);
    double worst = 0.0;
    for (const auto& sp : same) worst = std::max(worst, sp.d.total);
    rep.rows.push_back(make_row("identical_pair_zero_distance", "E=2 t0=" + fmt_num(p.t0), worst, "<=", 0.0));

    const ScaledSource peak = [&](double t) { return scaled_snapshot_exact(p, t, N); };
    const ScaledSource zero = [&](double) { return zero_scaled(N); };
    const auto contrast = distance_series(peak, zero, times);
    double dmin = INFINITY;
    for (const auto& sp : contrast) dmin = std::min(dmin, sp.d.total);
    const std::string c = "E=2 t0=" + fmt_num(p.t0) + " against zero";
    rep.rows.push_back(make_row("eulerian_gap_vanishes_at_collision", c, eulerian_l2(p, p.t0), "<=", 1e-12));
    rep.rows.push_back(make_row("distance_to_zero_at_least_A", c, dmin / std::sqrt(2.0 * p.C()), ">=", 1.0));
  }

  {
    const std::size_t triples = cfg.count("axiom_triples");
    const std::size_t n = cfg.count("axiom_N");
    std::mt19937_64 rng(static_cast<std::uint64_t>(cfg.count("seed")));
    std::uniform_real_distribution<double> Ed(0.5, 4.0), td(0.0, 4.0), coin(0.0, 1.0);
    auto draw = [&]() {
      if (coin(rng) < 0.1) return zero_scaled(n);
      const PeakonParams p{Ed(rng), td(rng)};
      return scaled_snapshot_exact(p, td(rng), n);
    };
    double identity = 0.0, asym = 0.0, tri = 0.0, neg = 0.0;
    for (std::size_t i = 0; i < triples; ++i) {
      const ScaledSnapshot x = draw(), y = draw(), z = draw();
      identity = std::max(identity, distance(x, x).total);
      const DistanceBreakdown xy = distance(x, y), yx = distance(y, x), yz = distance(y, z), xz = distance(x, z);
      asym = std::max({asym, std::abs(xy.dY - yx.dY), std::abs(xy.dU - yx.dU), std::abs(xy.dP - yx.dP),
                       std::abs(xy.dA - yx.dA), std::abs(xy.total - yx.total)});
      tri = std::max(tri, (xz.total - xy.total - yz.total) / std::max(1.0, xy.total + yz.total));
      neg = std::max({neg, -xy.dY, -xy.dU, -xy.dP, -xy.dA});
    }
    const std::string c = fmt_num(static_cast<double>(triples)) + " random triples N=" + fmt_num(static_cast<double>(n));
    rep.rows.push_back(make_row("pseudometric_identity", c, identity, "<=", 0.0));
    rep.rows.push_back(make_row("pseudometric_symmetry", c, asym, "<=", 0.0));
    rep.rows.push_back(make_row("pseudometric_nonnegative", c, neg, "<=", 0.0));
    rep.rows.push_back(make_row("pseudometric_triangle", c, tri, "<=", 1e-14));
  }
  return rep;
}

// ---------------------------------------------------------------- figures

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = {"u", "G", "p", "psqrt", "Y", "U", "P",
                                               "Psqrt", "tY", "tU", "tP", "tPsqrt", "resc"};
  return ids;
}

namespace {

std::string x_branch(const PeakonParams& p, double t, double x) {
  const double g = peakon_gamma(p, t);
  if (x < -g || (g == 0.0 && x == 0.0)) return "left";
  if (x > g) return "right";
  return "middle";
}

std::string eta_branch(double eta, double length) {
  if (eta <= 0.25 * length) return "left";
  if (eta >= 0.75 * length) return "right";
  return "middle";
}

void write_rows(const std::filesystem::path& file, const char* head,
                const std::vector<std::tuple<double, double, std::string>>& rows) {
  std::ofstream os(file);
  if (!os) throw Error(ErrorKind::InvalidInput, "cannot write " + file.string());
  os << head << ",value,branch\n";
  for (const auto& [x, v, b] : rows) os << fmt_exact(x) << ',' << fmt_exact(v) << ',' << b << '\n';
}

}  // namespace

std::vector<std::filesystem::path> emit_figures(const std::string& id, const Config& cfg,
                                                const std::filesystem::path& out_dir) {
  const auto& ids = figure_ids();
  if (std::find(ids.begin(), ids.end(), id) == ids.end()) throw Error(ErrorKind::UnknownFigure, "unknown figure " + id);
  std::filesystem::create_directories(out_dir);
  const std::size_t npts = cfg.count("figure_points");
  const double xmax = cfg.num("figure_xmax");
  const double t0 = cfg.num("figure_t0");
  std::vector<std::filesystem::path> files;
  const auto xs = linspace(-xmax, xmax, npts);

  if (id == "resc") {
    const double t = cfg.num("resc_t");
    for (double C : cfg.list("resc_C")) {
      const PeakonParams p{std::sqrt(C), t0};
      const double A = std::sqrt(2.0 * C);
      std::vector<std::tuple<double, double, std::string>> u, G, Y;
      for (double x : xs) {
        u.emplace_back(x, u_exact(p, t, x), x_branch(p, t, x));
        G.emplace_back(x, G_exact(p, t, x / A) / (A * A), x_branch(p, t, x / A));
      }
      for (double eta : midpoint_grid(npts, 1.0))
        Y.emplace_back(eta, scaled_exact(p, t, eta).tY, eta_branch(eta, 1.0));
      const std::string tag = "_C" + fmt_num(C) + ".csv";
      files.push_back(out_dir / ("resc_u" + tag));
      write_rows(files.back(), "x", u);
      files.push_back(out_dir / ("resc_G" + tag));
      write_rows(files.back(), "x", G);
      files.push_back(out_dir / ("resc_Y" + tag));
      write_rows(files.back(), "eta", Y);
    }
    return files;
  }

  const PeakonParams p{std::sqrt(cfg.num("figure_C")), t0};
  const double E2 = p.C();
  for (double t : cfg.list("figure_times")) {
    std::vector<std::tuple<double, double, std::string>> rows;
    const char* head = "x";
    if (id == "u" || id == "G" || id == "p" || id == "psqrt") {
      auto field = [&](double x) {
        if (id == "u") return u_exact(p, t, x);
        if (id == "G") return G_exact(p, t, x);
        if (id == "p") return p_exact(p, t, x);
        return std::sqrt(p_exact(p, t, x));
      };
      for (double x : xs) rows.emplace_back(x, field(x), x_branch(p, t, x));
      // the atom row carries the right limit at the atom
      for (const Atom& a : atoms_exact(p, t)) {
        double v = field(a.loc);
        if (id == "G") v = G_exact(p, t, a.loc) + a.mass;
        rows.emplace_back(a.loc, v, "atom");
      }
    } else if (id[0] == 't') {
      head = "eta";
      for (double eta : midpoint_grid(npts, 1.0)) {
        const ScaledPoint s = scaled_exact(p, t, eta);
        double v = s.tPsqrt;
        if (id == "tY") v = s.tY;
        else if (id == "tU") v = s.tU;
        else if (id == "tP") v = s.tPsqrt * s.tPsqrt;
        rows.emplace_back(eta, v, eta_branch(eta, 1.0));
      }
    } else {
      head = "eta";
      for (double eta : midpoint_grid(npts, 2.0 * E2)) {
        double v = 0.0;
        if (id == "Y") v = Y_exact(p, t, eta);
        else if (id == "U") v = U_exact(p, t, eta);
        else if (id == "P") v = P_exact(p, t, eta);
        else v = std::sqrt(P_exact(p, t, eta));
        rows.emplace_back(eta, v, eta_branch(eta, 2.0 * E2));
      }
    }
    files.push_back(out_dir / (id + "_t" + fmt_num(t) + ".csv"));
    write_rows(files.back(), head, rows);
  }
  return files;
}

}  // namespace chm
