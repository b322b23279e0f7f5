#pragma once

#include <cstddef>
#include <vector>

#include "chmetric/fields.hpp"
#include "chmetric/lagrangian.hpp"
#include "chmetric/transform.hpp"

namespace chm {

// Antisymmetric peakon-antipeakon pair with H^1 energy E^2 colliding at t0.
struct PeakonParams {
  double E = 2.0;
  double t0 = 0.0;
  double C() const { return E * E; }
};

struct PeakonCoefficients {
  double alpha;
  double beta;
  double gamma;
};

double peakon_alpha(const PeakonParams& p, double t);
double peakon_beta(const PeakonParams& p, double t);  // throws at t0
double peakon_gamma(const PeakonParams& p, double t);
PeakonCoefficients abc(const PeakonParams& p, double t);  // throws at t0

// Eulerian closed forms. At t0 the density vanishes and the whole energy sits
// in one atom at the origin; F and G are left-continuous there.
double u_exact(const PeakonParams& p, double t, double x);
double ux_exact(const PeakonParams& p, double t, double x);
double mu_exact_density(const PeakonParams& p, double t, double x);
std::vector<Atom> atoms_exact(const PeakonParams& p, double t);
double F_exact(const PeakonParams& p, double t, double x);
double p_exact(const PeakonParams& p, double t, double x);
double px_exact(const PeakonParams& p, double t, double x);
double G_exact(const PeakonParams& p, double t, double x);

// Transformed closed forms on eta in (0, 2E^2); at t0 the limits are used.
double Y_exact(const PeakonParams& p, double t, double eta);
double U_exact(const PeakonParams& p, double t, double eta);
double P_exact(const PeakonParams& p, double t, double eta);
double Y_eta_exact(const PeakonParams& p, double t, double eta);
double U_eta_exact(const PeakonParams& p, double t, double eta);
double P_eta_exact(const PeakonParams& p, double t, double eta);

struct ScaledPoint {
  double tY;
  double tU;
  double tPsqrt;
};
ScaledPoint scaled_exact(const PeakonParams& p, double t, double eta);

// Midpoint-grid samples of the closed forms, with analytic derivatives attached.
TransformedSnapshot transformed_exact(const PeakonParams& p, double t, std::size_t n);
ScaledSnapshot scaled_snapshot_exact(const PeakonParams& p, double t, std::size_t n);

enum class SampleGrid {
  Uniform,        // equispaced on [-L, L]; peak positions replace their nearest nodes
  EnergyAdapted,  // equispaced in x + F(x) between the peak positions
};

// Samples u and the energy density on n points. Each peak position x_p is
// represented by the pair x_p -/+ 1e-10 so the density jump falls inside one
// negligible cell. C is the discrete total of the samples.
EulerianSnapshot sample_snapshot(const PeakonParams& p, double t, std::size_t n, double half_width = 15.0,
                                 SampleGrid grid = SampleGrid::Uniform);

// Lagrangian data with y(xi) = sup{x : x + F(x) < xi} solved from the closed
// forms, on a uniform label grid whose spacing puts the two peak labels on nodes.
LagrangianState lagrangian_initial(const PeakonParams& p, double t, std::size_t n, double half_width = 12.0);

}  // namespace chm
