#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "chmetric/fields.hpp"

namespace chm {

// eta-derivatives of (Y, U, P) sampled on the same grid as the fields.
struct EtaDerivatives {
  std::vector<double> Y_eta;
  std::vector<double> U_eta;
  std::vector<double> P_eta;
};

// (Y, U, P^{1/2}) on the midpoint grid of (0, 2C).
struct TransformedSnapshot {
  double t = 0.0;
  std::vector<double> eta;
  std::vector<double> Y;
  std::vector<double> U;
  std::vector<double> Psqrt;
  double C = 0.0;
  // Pointwise derivatives when the producer knows them; otherwise empty and
  // derivatives() falls back to differencing.
  std::optional<EtaDerivatives> deriv;
};

// Energy-normalized fields on the midpoint grid of (0, 1), A = sqrt(2C).
struct ScaledSnapshot {
  double t = 0.0;
  std::vector<double> eta;
  std::vector<double> tY;
  std::vector<double> tU;
  std::vector<double> tPsqrt;
  double A = 0.0;
  std::optional<EtaDerivatives> deriv;
};

// sup{x : g(x) < eta} for the piecewise-linear interpolant of (xs, gs).
// xs nondecreasing; a repeated x encodes a jump of g at that point.
std::vector<double> pseudo_inverse(const std::vector<double>& xs, const std::vector<double>& gs,
                                   const std::vector<double>& targets);

TransformedSnapshot build_transformed(const EulerianSnapshot& s, std::size_t n_eta);

ScaledSnapshot rescale(const TransformedSnapshot& ts);
ScaledSnapshot zero_scaled(std::size_t n);

// Stored derivatives if present, else log-corrected discrete differences.
EtaDerivatives derivatives(const TransformedSnapshot& ts);
EtaDerivatives derivatives(const ScaledSnapshot& ss);
// Always the discrete version (ignores stored derivatives).
EtaDerivatives discrete_derivatives(const ScaledSnapshot& ss);

void write_json(std::ostream& os, const TransformedSnapshot& ts);
void write_json(std::ostream& os, const ScaledSnapshot& ss);
void write_csv(std::ostream& os, const TransformedSnapshot& ts);
void write_csv(std::ostream& os, const ScaledSnapshot& ss);

}  // namespace chm
