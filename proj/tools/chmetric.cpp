#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "chmetric/dynamics.hpp"
#include "chmetric/error.hpp"
#include "chmetric/experiments.hpp"
#include "chmetric/lagrangian.hpp"
#include "chmetric/metric.hpp"
#include "chmetric/numeric.hpp"
#include "chmetric/peakon.hpp"
#include "chmetric/transform.hpp"

namespace fs = std::filesystem;
using namespace chm;

namespace {

struct Options {
  double E = 2.0, E2 = NAN, t0 = 2.0, t02 = NAN, t = 1.0, tmax = NAN, dt = 1e-3;
  std::size_t N = 1024;
  std::string out, config = "default", id;
  unsigned threads = 0;
};

std::ofstream open_out(const Options& o, const std::string& name) {
  fs::create_directories(o.out);
  std::ofstream os(fs::path(o.out) / name);
  if (!os) throw Error(ErrorKind::InvalidInput, "cannot write into " + o.out);
  return os;
}

void line(const std::string& key, double v) { std::cout << key << " = " << fmt_num(v) << '\n'; }

int finish(const Report& r, const Options& o) {
  if (!o.out.empty()) {
    auto js = open_out(o, r.name + ".json");
    write_json(js, r);
    auto tx = open_out(o, r.name + ".txt");
    write_text(tx, r);
  }
  write_text(std::cout, r);
  return r.pass() ? 0 : 1;
}

int cmd_fields(const Options& o) {
  const PeakonParams p{o.E, o.t0};
  const EulerianSnapshot s = sample_snapshot(p, o.t, o.N, 15.0, SampleGrid::EnergyAdapted);
  const FieldEvaluator ev(s);
  line("C", s.C);
  line("p(0)", ev.p(0.0));
  line("G(0)", ev.G(0.0));
  line("u_max", *std::max_element(s.u.begin(), s.u.end()));
  if (!o.out.empty()) {
    auto os = open_out(o, "fields.json");
    write_json(os, s);
  }
  return 0;
}

int cmd_transform(const Options& o) {
  const PeakonParams p{o.E, o.t0};
  const EulerianSnapshot s = sample_snapshot(p, o.t, o.N, 15.0, SampleGrid::EnergyAdapted);
  const TransformedSnapshot ts = build_transformed(s, o.N);
  const ScaledSnapshot ss = rescale(ts);
  const ScaledSnapshot ex = scaled_snapshot_exact(p, o.t, o.N);
  double gap = 0.0;
  for (std::size_t k = 0; k < o.N; ++k)
    gap = std::max({gap, std::abs(ss.tY[k] - ex.tY[k]), std::abs(ss.tU[k] - ex.tU[k]),
                    std::abs(ss.tPsqrt[k] - ex.tPsqrt[k])});
  line("C", ts.C);
  line("A", ss.A);
  line("scaled_sup_gap_to_closed_form", gap);
  if (!o.out.empty()) {
    auto a = open_out(o, "transformed.json");
    write_json(a, ts);
    auto b = open_out(o, "transformed.csv");
    write_csv(b, ts);
    auto c = open_out(o, "scaled.json");
    write_json(c, ss);
    auto d = open_out(o, "scaled.csv");
    write_csv(d, ss);
  }
  return 0;
}

int cmd_evolve(const Options& o) {
  const PeakonParams p{o.E, o.t0};
  const double t_end = std::isnan(o.tmax) ? o.t + 2.0 : o.tmax;
  LagrangianState st = lagrangian_initial(p, o.t, o.N);
  const double C0 = energy(st), X0 = xavier_residual(st);
  double gap = 0.0, drift = 0.0, xmax = X0;
  const auto fin = evolve(st, t_end, o.dt, [&](const LagrangianState& s) {
    for (std::size_t i = 0; i < s.y.size(); ++i) gap = std::max(gap, std::abs(s.U[i] - u_exact(p, s.t, s.y[i])));
    drift = std::max(drift, std::abs(energy(s) - C0));
    xmax = std::max(xmax, xavier_residual(s));
  });
  const double ratio = X0 > 0.0 ? xmax / X0 : (xmax > 0.0 ? INFINITY : 1.0);
  line("t_end", fin.t);
  line("energy", C0);
  line("sup_velocity_gap", gap);
  line("energy_drift", drift);
  line("xavier_initial", X0);
  line("xavier_growth", ratio);
  if (!o.out.empty()) {
    auto a = open_out(o, "lagrangian.json");
    write_json(a, fin);
    auto b = open_out(o, "transformed.csv");
    write_csv(b, relabel_to_new(fin, o.N));
  }
  const bool ok = gap <= 1e-3 && drift <= 1e-6 * C0 && ratio <= 5.0;
  std::cout << (ok ? "PASS" : "FAIL") << " evolution checks\n";
  return ok ? 0 : 1;
}

int cmd_residual(const Options& o, bool suite) {
  if (suite) return finish(run_residual(Config::load(o.config)), o);
  const PeakonParams p{o.E, o.t0};
  const double dt = o.dt;
  const ResidualReport r = residual_against_exact(p, o.t, o.N, dt);
  line("N", static_cast<double>(r.N));
  line("dt", r.dt);
  line("residY", r.residY);
  line("residU", r.residU);
  line("residP", r.residP);
  line("relative", r.relative);
  if (!o.out.empty()) {
    auto os = open_out(o, "residual.json");
    write_json(os, r);
  }
  return r.relative <= 1e-2 ? 0 : 1;
}

int cmd_metric(const Options& o) {
  const PeakonParams a{o.E, o.t0};
  const PeakonParams b{std::isnan(o.E2) ? o.E : o.E2, std::isnan(o.t02) ? o.t0 : o.t02};
  auto snap = [&](const PeakonParams& p, double t) {
    return p.E == 0.0 ? zero_scaled(o.N) : scaled_snapshot_exact(p, t, o.N);
  };
  const DistanceBreakdown d = distance(snap(a, o.t), snap(b, o.t));
  line("dY", d.dY);
  line("dU", d.dU);
  line("dP", d.dP);
  line("dA", d.dA);
  line("total", d.total);
  if (!o.out.empty() && !std::isnan(o.tmax)) {
    std::vector<double> times(33);
    for (std::size_t i = 0; i < times.size(); ++i) times[i] = o.t + (o.tmax - o.t) * static_cast<double>(i) / 32.0;
    const auto series = distance_series([&](double t) { return snap(a, t); }, [&](double t) { return snap(b, t); }, times);
    auto os = open_out(o, "series.csv");
    write_csv(os, series);
    line("fitted_growth_rate", fit_growth_rate(series));
  }
  return 0;
}

int cmd_figures(const Options& o) {
  const Config cfg = Config::load(o.config);
  const std::string dir = o.out.empty() ? "." : o.out;
  for (const auto& f : emit_figures(o.id, cfg, dir)) std::cout << f.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Peakon-antipeakon solutions, transformed coordinates and the Lipschitz metric"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* c) {
    c->add_option("--E", o.E, "energy parameter (C = E^2)");
    c->add_option("--t0", o.t0, "collision time");
    c->add_option("--t", o.t, "time (start time for evolve)");
    c->add_option("--N", o.N, "grid size")->check(CLI::PositiveNumber);
    c->add_option("--out", o.out, "output directory");
    c->add_option("--threads", o.threads, "worker threads (default CHMETRIC_THREADS or hardware)");
  };
  auto* fields = app.add_subcommand("fields", "sample u and the energy density");
  auto* transform = app.add_subcommand("transform", "Eulerian samples to (Y, U, P^1/2) and scaled fields");
  auto* evolve_c = app.add_subcommand("evolve", "Lagrangian evolution through the collision");
  auto* residual = app.add_subcommand("residual", "scaled system residual of the closed form");
  auto* metric = app.add_subcommand("metric", "distance between two solutions");
  auto* lipschitz = app.add_subcommand("lipschitz", "distance growth study");
  auto* invariants = app.add_subcommand("invariants", "inequality catalog");
  auto* figures = app.add_subcommand("figures", "figure data as CSV");
  for (auto* c : {fields, transform, evolve_c, residual, metric, lipschitz, invariants, figures}) common(c);
  evolve_c->add_option("--tmax", o.tmax, "end time (default t + 2)");
  evolve_c->add_option("--dt", o.dt, "time step")->check(CLI::PositiveNumber);
  residual->add_option("--dt", o.dt, "central difference step")->check(CLI::PositiveNumber);
  auto* suite = residual->add_option("--config", o.config, "run the convergence table from a config file or 'default'");
  metric->add_option("--E2", o.E2, "energy parameter of the second solution (0 for the zero solution)");
  metric->add_option("--t02", o.t02, "collision time of the second solution");
  metric->add_option("--tmax", o.tmax, "also write the series from t to tmax");
  for (auto* c : {lipschitz, invariants, figures}) c->add_option("--config", o.config, "config file or 'default'");
  figures->add_option("--id", o.id, "figure id")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (o.threads) set_thread_count(o.threads);

  try {
    if (*fields) return cmd_fields(o);
    if (*transform) return cmd_transform(o);
    if (*evolve_c) return cmd_evolve(o);
    if (*residual) return cmd_residual(o, suite->count() > 0);
    if (*metric) return cmd_metric(o);
    if (*lipschitz) return finish(run_lipschitz(Config::load(o.config)), o);
    if (*invariants) return finish(run_invariants(Config::load(o.config)), o);
    if (*figures) return cmd_figures(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    const bool usage = e.kind() == ErrorKind::InvalidInput || e.kind() == ErrorKind::UnknownFigure;
    return usage ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
