#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "chmetric/peakon.hpp"
#include "chmetric/transform.hpp"

namespace chm {

// Nonlocal operators of the scaled system on the snapshot grid. Kernel
// exp(-|tY(eta) - tY(theta)|/A), midpoint rule in theta, sign(0) = 0.
struct OperatorFields {
  std::vector<double> Qt;
  std::vector<double> St;
  std::vector<double> Rt;
  std::vector<double> Dt;  // contribution of theta < eta to A * P
  std::vector<double> Et;  // contribution of theta > eta to A * P
};

OperatorFields compute_operators(const ScaledSnapshot& ss);

struct SystemRhs {
  std::vector<double> Y_t;
  std::vector<double> U_t;
  std::vector<double> Psqrt_t;
  std::vector<double> v;  // transport velocity in eta
};

SystemRhs system_rhs(const ScaledSnapshot& ss, const OperatorFields& ops);

// int_0^eta exp(-lambda (tY(eta) - tY(theta))/A) f(theta) dtheta at every grid node.
// Between nodes tY is A (ln eta - ln(1 - eta)) plus a linear remainder and f is
// linear; each cell uses 8-point Gauss-Legendre.
std::vector<double> left_kernel_integral(const ScaledSnapshot& ss, const std::vector<double>& f, double lambda);

struct ResidualReport {
  std::size_t N = 0;
  double dt = 0.0;
  double residY = 0.0;  // L2 norm of (central difference in t) - rhs, per field
  double residU = 0.0;
  double residP = 0.0;
  double relative = 0.0;  // combined residual over combined norm of the time differences
};

// Closed-form peakon sampled at t - dt, t, t + dt; spatial derivatives are discrete.
ResidualReport residual_against_exact(const PeakonParams& p, double t, std::size_t N, double dt);

void write_json(std::ostream& os, const ResidualReport& r);

// One step: values carried back along eta_t = v from the departure point, with
// the sources added explicitly. Throws CflViolation if dt * max|v| > 0.5 d_eta.
ScaledSnapshot step_semi_lagrangian(const ScaledSnapshot& ss, double dt);

}  // namespace chm
