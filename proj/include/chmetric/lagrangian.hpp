#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "chmetric/fields.hpp"
#include "chmetric/transform.hpp"

namespace chm {

// (y, U, H) on a uniform label grid xi.
struct LagrangianState {
  double t = 0.0;
  std::vector<double> xi;
  std::vector<double> y;
  std::vector<double> U;
  std::vector<double> H;
  double C = 0.0;
};

// y(xi) = sup{x : x + F(x) < xi}, H = xi - y, U = u(y) on a uniform grid of N
// labels spanning [-L, C + L]. L defaults to the largest value the snapshot grid covers.
LagrangianState init_from_eulerian(const EulerianSnapshot& s, std::size_t N,
                                   std::optional<double> half_width = std::nullopt);

struct PressurePair {
  std::vector<double> P;
  std::vector<double> Q;
};
PressurePair compute_PQ(const LagrangianState& st);

struct LagrangianRhs {
  std::vector<double> y_t;
  std::vector<double> U_t;
  std::vector<double> H_t;
};
LagrangianRhs rhs(const LagrangianState& st);

// Fixed-step classical RK4. The last step is shortened to land on t_end.
// `observer` (optional) sees the state after every step.
LagrangianState evolve(LagrangianState st, double t_end, double dt,
                       const std::function<void(const LagrangianState&)>& observer = {});

// Y = y(l(eta)) with l the inverse of J = 2Q + 2H, on the midpoint grid of (0, 2C).
TransformedSnapshot relabel_to_new(const LagrangianState& st, std::size_t n_eta);

// max over cells of |U^2 y_xi^2 + U_xi^2 - y_xi H_xi| with cell differences and midpoint U.
double xavier_residual(const LagrangianState& st);
// H(last) - H(first)
double energy(const LagrangianState& st);
// Trapezoid of y^2 (P y_xi + H_xi).
double second_moment(const LagrangianState& st);

void write_json(std::ostream& os, const LagrangianState& st);
LagrangianState read_lagrangian_json(std::istream& is);

}  // namespace chm
