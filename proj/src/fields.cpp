#include "chmetric/fields.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "chmetric/error.hpp"
#include "chmetric/numeric.hpp"
#include "json.hpp"

namespace chm {

double measure_total(const EulerianSnapshot& s) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < s.x.size(); ++i)
    total += 0.5 * (s.x[i + 1] - s.x[i]) * (s.dens[i] + s.dens[i + 1]);
  for (const Atom& a : s.atoms) total += a.mass;
  return total;
}

void validate(const EulerianSnapshot& s) {
  const std::size_t n = s.x.size();
  if (s.u.size() != n || s.dens.size() != n)
    throw Error(ErrorKind::InvalidInput, "x, u, dens must have equal length");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(s.x[i + 1] > s.x[i])) throw Error(ErrorKind::InvalidInput, "grid not strictly increasing");
  for (double d : s.dens)
    if (!(d >= 0.0)) throw Error(ErrorKind::InvalidInput, "negative energy density");
  for (const Atom& a : s.atoms)
    if (!(a.mass > 0.0)) throw Error(ErrorKind::InvalidInput, "atom mass must be positive");
  if (std::abs(measure_total(s) - s.C) > 1e-8 * std::max(s.C, 1e-300) && !(s.C == 0.0 && measure_total(s) == 0.0))
    throw Error(ErrorKind::InvalidInput, "total energy does not match C");
  const double umax = std::sqrt(s.C) * (1.0 + 1e-8);
  for (double v : s.u)
    if (std::abs(v) > umax) throw Error(ErrorKind::InvalidInput, "sup|u| exceeds sqrt(C)");
}

FieldEvaluator::FieldEvaluator(const EulerianSnapshot& s) : s_(s) {
  const std::size_t n = s.x.size();
  f_.resize(n);
  for (std::size_t i = 0; i < n; ++i) f_[i] = s.u[i] * s.u[i] + s.dens[i];
  cf_.assign(n, 0.0);
  left_.assign(n, 0.0);
  right_.assign(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double h = s.x[i] - s.x[i - 1];
    cf_[i] = cf_[i - 1] + 0.5 * h * (s.dens[i - 1] + s.dens[i]);
    const double e = std::exp(-h);
    left_[i] = e * left_[i - 1] + 0.5 * h * (e * f_[i - 1] + f_[i]);
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    const double h = s.x[i + 1] - s.x[i];
    const double e = std::exp(-h);
    right_[i] = e * right_[i + 1] + 0.5 * h * (f_[i] + e * f_[i + 1]);
  }
}

double FieldEvaluator::u(double x) const {
  if (s_.x.empty() || x < s_.x.front() || x > s_.x.back()) return 0.0;
  return interp_linear(s_.x, s_.u, x);
}

double FieldEvaluator::dens(double x) const {
  if (s_.x.empty() || x < s_.x.front() || x > s_.x.back()) return 0.0;
  return interp_linear(s_.x, s_.dens, x);
}

double FieldEvaluator::ux(double x) const {
  if (s_.x.size() < 2 || x < s_.x.front() || x > s_.x.back()) return 0.0;
  const std::size_t k = locate_cell(s_.x, x);
  const double uu = u(x);
  const double mag = std::sqrt(std::max(dens(x) - uu * uu, 0.0));
  const double du = s_.u[k + 1] - s_.u[k];
  return du > 0.0 ? mag : (du < 0.0 ? -mag : 0.0);
}

FieldEvaluator::Sums FieldEvaluator::kernel_sums(double x) const {
  const auto& xs = s_.x;
  const std::size_t n = xs.size();
  if (n == 0) return {0.0, 0.0};
  if (x <= xs.front()) return {0.0, std::exp(x - xs.front()) * right_.front()};
  if (x >= xs.back()) return {std::exp(xs.back() - x) * left_.back(), 0.0};
  const std::size_t k = locate_cell(xs, x);
  const double fx = u(x) * u(x) + dens(x);
  const double sl = x - xs[k];
  const double sr = xs[k + 1] - x;
  const double el = std::exp(-sl);
  const double er = std::exp(-sr);
  const double left = el * left_[k] + 0.5 * sl * (el * f_[k] + fx);
  const double right = er * right_[k + 1] + 0.5 * sr * (fx + er * f_[k + 1]);
  return {left, right};
}

double FieldEvaluator::atom_p(double x) const {
  double v = 0.0;
  for (const Atom& a : s_.atoms) v += 0.25 * a.mass * std::exp(-std::abs(x - a.loc));
  return v;
}

double FieldEvaluator::atom_px(double x, bool left_limit) const {
  double v = 0.0;
  for (const Atom& a : s_.atoms) {
    double sg = x > a.loc ? 1.0 : (x < a.loc ? -1.0 : (left_limit ? -1.0 : 0.0));
    v -= 0.25 * a.mass * sg * std::exp(-std::abs(x - a.loc));
  }
  return v;
}

double FieldEvaluator::F(double x) const {
  const auto& xs = s_.x;
  double v = 0.0;
  if (!xs.empty() && x > xs.front()) {
    if (x >= xs.back()) {
      v = cf_.back();
    } else {
      const std::size_t k = locate_cell(xs, x);
      v = cf_[k] + 0.5 * (x - xs[k]) * (s_.dens[k] + dens(x));
    }
  }
  for (const Atom& a : s_.atoms)
    if (a.loc < x) v += a.mass;
  return v;
}

double FieldEvaluator::p(double x) const {
  const Sums k = kernel_sums(x);
  return 0.25 * (k.left + k.right) + atom_p(x);
}

double FieldEvaluator::px(double x) const {
  const Sums k = kernel_sums(x);
  return 0.25 * (k.right - k.left) + atom_px(x, false);
}

double FieldEvaluator::G(double x) const {
  const Sums k = kernel_sums(x);
  return 0.5 * (k.right - k.left) + 2.0 * atom_px(x, true) + 2.0 * F(x);
}

double FieldEvaluator::G_right(double x) const {
  double jump = 0.0;
  for (const Atom& a : s_.atoms)
    if (a.loc == x) jump += a.mass;
  return G(x) + jump;
}

double eval_F(const EulerianSnapshot& s, double x) { return FieldEvaluator(s).F(x); }
double eval_p(const EulerianSnapshot& s, double x) { return FieldEvaluator(s).p(x); }
double eval_px(const EulerianSnapshot& s, double x) { return FieldEvaluator(s).px(x); }
double eval_G(const EulerianSnapshot& s, double x) { return FieldEvaluator(s).G(x); }

void write_json(std::ostream& os, const EulerianSnapshot& s) {
  nlohmann::json j;
  j["t"] = s.t;
  j["x"] = s.x;
  j["u"] = s.u;
  j["dens"] = s.dens;
  j["atoms"] = nlohmann::json::array();
  for (const Atom& a : s.atoms) j["atoms"].push_back({a.loc, a.mass});
  j["C"] = s.C;
  os << j.dump() << '\n';
}

EulerianSnapshot read_eulerian_json(std::istream& is) {
  EulerianSnapshot s;
  try {
    const nlohmann::json j = nlohmann::json::parse(is);
    s.t = j.at("t").get<double>();
    s.x = j.at("x").get<std::vector<double>>();
    s.u = j.at("u").get<std::vector<double>>();
    s.dens = j.at("dens").get<std::vector<double>>();
    for (const auto& a : j.at("atoms")) s.atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
    s.C = j.at("C").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, e.what());
  }
  return s;
}

}  // namespace chm
