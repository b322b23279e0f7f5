#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "chmetric/dynamics.hpp"
#include "chmetric/error.hpp"
#include "chmetric/lagrangian.hpp"
#include "chmetric/metric.hpp"
#include "chmetric/numeric.hpp"
#include "chmetric/peakon.hpp"
#include "chmetric/transform.hpp"
#include "oracles.hpp"

using namespace chm;

namespace {

const std::vector<double> kOffsets = {-2.0, -0.5, -0.05, 0.05, 0.5, 2.0};

double discrete_sq_norm(const std::vector<double>& f, double length) {
  long double s = 0;
  for (double v : f) s += static_cast<long double>(v) * v;
  return static_cast<double>(s * length / f.size());
}

}  // namespace

TEST(FieldBounds, HoldOnSampledPeakons) {
  for (double E : {1.0, 2.0})
    for (double tau : kOffsets) {
      const auto s = sample_snapshot(PeakonParams{E, 0.0}, tau, 2048);
      const FieldEvaluator ev(s);
      double prevG = -1.0, prevF = -1.0;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double x = s.x[i], p = ev.p(x), px = ev.px(x), G = ev.G(x), F = ev.F(x);
        EXPECT_GE(G, prevG - 1e-12);
        EXPECT_GE(F, prevF - 1e-12);
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, s.C / 2 + 1e-8);
        EXPECT_LE(std::abs(px), p + 1e-8);
        EXPECT_GE(2.0 * p - s.u[i] * s.u[i], -1e-8);
        prevG = G;
        prevF = F;
      }
      EXPECT_NEAR(ev.G(1e3), 2.0 * s.C, 1e-9);
      EXPECT_NEAR(ev.G(-1e3), 0.0, 1e-9);
    }
}

TEST(FieldBounds, PressureQuadratureIsSecondOrder) {
  const PeakonParams p{2.0, 0.0};
  const oracle::Peakon pk(2.0, 0.7, 0.0);
  auto err = [&](std::size_t n) {
    const auto s = sample_snapshot(p, 0.7, n);
    const FieldEvaluator ev(s);
    double e = 0.0;
    for (double x : {-3.0, -1.0, 0.0, 0.25, 2.0}) e = std::max(e, std::abs(ev.p(x) - static_cast<double>(pk.p(x))));
    return e;
  };
  EXPECT_GE(err(1024) / err(2048), 3.0);
}

TEST(FieldBounds, ZeroAndPointMass) {
  EulerianSnapshot z;
  z.x = {-1.0, 0.0, 1.0};
  z.u = z.dens = {0.0, 0.0, 0.0};
  const FieldEvaluator ez(z);
  EXPECT_EQ(ez.F(0.3), 0.0);
  EXPECT_EQ(ez.p(0.3), 0.0);
  EXPECT_EQ(ez.px(0.3), 0.0);

  auto a = z;
  a.atoms.push_back({0.0, 4.0});
  a.C = 4.0;
  const FieldEvaluator ea(a);
  EXPECT_EQ(ea.F(0.0), 0.0);
  EXPECT_EQ(ea.F(1e-12), 4.0);
  for (double x : {-2.0, 0.5, 3.0}) EXPECT_NEAR(ea.p(x), std::exp(-std::abs(x)), 1e-15);
  EXPECT_NEAR(ea.px(-1.0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(ea.px(0.0), 0.0, 1e-15);
  EXPECT_NEAR(FieldEvaluator(sample_snapshot(PeakonParams{2.0, 0.0}, 1.0, 2048)).px(0.0), 0.0, 1e-12);
}

TEST(PeakonProperties, ParityAndCentre) {
  const PeakonParams p{2.0, 3.0};
  EXPECT_NEAR(peakon_alpha(p, 4.0), -peakon_alpha(p, 2.0), 1e-15);
  EXPECT_NEAR(peakon_gamma(p, 4.0), peakon_gamma(p, 2.0), 1e-15);
  EXPECT_EQ(peakon_alpha(p, 3.0), 0.0);
  EXPECT_EQ(peakon_gamma(p, 3.0), 0.0);
  for (double t : {1.0, 3.0, 4.5}) {
    EXPECT_EQ(u_exact(p, t, 0.0), 0.0);
    EXPECT_NEAR(U_exact(p, t, 4.0), 0.0, 1e-15);
    EXPECT_NEAR(Y_exact(p, t, 4.0), 0.0, 1e-15);
  }
  EXPECT_NEAR(Y_exact(p, 4.0, 2.0), -0.43378083048303, 1e-12);
}

TEST(PeakonProperties, EnergyIsConstant) {
  for (double tau : kOffsets) {
    const PeakonParams p{2.0, 0.0};
    const oracle::Peakon pk(2.0, tau, 0.0);
    const double g = static_cast<double>(pk.g);
    auto dens = [&](oracle::real x) { return static_cast<oracle::real>(mu_exact_density(p, tau, static_cast<double>(x))); };
    const long double total = oracle::gauss(dens, -40, -g, 200) + oracle::gauss(dens, -g, g, 50) + oracle::gauss(dens, g, 40, 200);
    EXPECT_NEAR(static_cast<double>(total), 4.0, 1e-8) << tau;
  }
}

TEST(PeakonProperties, PressureDominatesVelocityAndInverseRoundTrips) {
  for (double tau : kOffsets) {
    const PeakonParams p{2.0, 0.0};
    for (double eta = 0.01; eta < 8.0; eta += 0.0731) {
      const double U = U_exact(p, tau, eta);
      EXPECT_GE(2.0 * P_exact(p, tau, eta) - U * U, -1e-14);
      EXPECT_NEAR(G_exact(p, tau, Y_exact(p, tau, eta)), eta, 1e-10);
    }
  }
}

TEST(PeakonProperties, BreakingLimitIsContinuous) {
  const PeakonParams p{2.0, 0.0};
  const oracle::Peakon at(2.0, 0.0, 0.0);
  for (double tau : {-1e-4, 1e-4})
    for (double eta = 0.05; eta < 8.0; eta += 0.1)
      EXPECT_NEAR(Y_exact(p, tau, eta), static_cast<double>(at.Y(eta)), 1e-3) << tau << " " << eta;
}

TEST(PressureRelations, DerivativeIdentitiesAreSecondOrder) {
  auto err = [](std::size_t n) {
    const auto st = lagrangian_initial(PeakonParams{2.0, 0.0}, 0.8, n);
    const auto pq = compute_PQ(st);
    double e = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double dy = st.y[i + 1] - st.y[i], dH = st.H[i + 1] - st.H[i];
      const double Qm = 0.5 * (pq.Q[i] + pq.Q[i + 1]), Pm = 0.5 * (pq.P[i] + pq.P[i + 1]);
      const double U2 = 0.5 * (st.U[i] * st.U[i] + st.U[i + 1] * st.U[i + 1]);
      e = std::max({e, std::abs(pq.P[i + 1] - pq.P[i] - Qm * dy),
                    std::abs(pq.Q[i + 1] - pq.Q[i] - ((Pm - 0.5 * U2) * dy - 0.5 * dH))});
    }
    return e * static_cast<double>(n);  // per unit label length
  };
  const double e1 = err(512), e2 = err(1024);
  EXPECT_LT(e2, 1e-3);
  EXPECT_GE(e1 / e2, 3.0);
}

TEST(PressureRelations, BoundsAndReferenceValue) {
  const auto st = lagrangian_initial(PeakonParams{2.0, 0.0}, 1.0, 2049);
  const auto pq = compute_PQ(st);
  for (std::size_t i = 0; i < st.y.size(); ++i) {
    EXPECT_LE(std::abs(pq.Q[i]), pq.P[i] + 1e-12);
    EXPECT_LE(pq.P[i], st.C / 2);
  }
  const std::size_t mid = locate_cell(st.y, 0.0);
  const double s = (0.0 - st.y[mid]) / (st.y[mid + 1] - st.y[mid]);
  EXPECT_NEAR((1 - s) * pq.P[mid] + s * pq.P[mid + 1], 0.786447732966, 1e-4);

  LagrangianState zero = st;
  std::fill(zero.U.begin(), zero.U.end(), 0.0);
  std::fill(zero.H.begin(), zero.H.end(), 0.0);
  const auto z = compute_PQ(zero);
  const auto r = rhs(zero);
  for (std::size_t i = 0; i < st.y.size(); ++i) {
    EXPECT_EQ(z.P[i], 0.0);
    EXPECT_EQ(z.Q[i], 0.0);
    EXPECT_EQ(r.U_t[i], 0.0);
    EXPECT_EQ(r.H_t[i], 0.0);
  }
  const auto moved = evolve(zero, 0.1 + zero.t, 0.05);
  EXPECT_EQ(moved.y, zero.y);
}

TEST(PressureRelations, AntisymmetricStateConservesEnergy) {
  const auto st = lagrangian_initial(PeakonParams{2.0, 0.0}, -0.7, 1001);
  const auto r = rhs(st);
  const std::size_t n = st.y.size();
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(r.H_t[i], -r.H_t[n - 1 - i], 1e-10);
  EXPECT_NEAR(r.H_t[n - 1] - r.H_t[0], 0.0, 1e-9);  // domain truncated near |y| = 12
}

TEST(PressureRelations, PointMassBecomesALabelPlateau) {
  EulerianSnapshot s;
  for (int i = -40; i <= 40; ++i) s.x.push_back(0.1 * i);
  s.u.assign(s.x.size(), 0.0);
  s.dens.assign(s.x.size(), 0.0);
  s.atoms.push_back({0.0, 2.0});
  s.C = 2.0;
  const auto st = init_from_eulerian(s, 401, 4.0);
  int on_plateau = 0;
  for (std::size_t i = 0; i < st.xi.size(); ++i)
    if (st.xi[i] > 1e-9 && st.xi[i] < 2.0 - 1e-9) {
      EXPECT_NEAR(st.y[i], 0.0, 1e-12);
      ++on_plateau;
    }
  EXPECT_GT(on_plateau, 50);
  const auto pq = compute_PQ(st);
  for (std::size_t i = 0; i < st.xi.size(); i += 20) EXPECT_NEAR(pq.P[i], 0.5 * std::exp(-std::abs(st.y[i])), 1e-12);
}

TEST(Relabel, MatchesClosedFormAfterCollision) {
  const auto st = lagrangian_initial(PeakonParams{2.0, 0.0}, 1.0, 2048);
  const auto ts = relabel_to_new(st, 2048);
  const oracle::Peakon pk(2.0, 1.0, 0.0);
  double worst = 0.0;
  for (std::size_t k = 0; k < ts.eta.size(); ++k) {
    const double eta = ts.eta[k];
    worst = std::max({worst, std::abs(ts.Y[k] - static_cast<double>(pk.Y(eta))),
                      std::abs(ts.U[k] - static_cast<double>(pk.U(eta))),
                      std::abs(ts.Psqrt[k] - static_cast<double>(std::sqrt(pk.P(eta))))});
    if (k) EXPECT_GE(ts.Y[k], ts.Y[k - 1]);
  }
  EXPECT_LE(worst, 2e-3);
}

TEST(Relabel, PlateauAtBreaking) {
  const auto st = lagrangian_initial(PeakonParams{2.0, 0.0}, 0.0, 1024);
  const auto ts = relabel_to_new(st, 512);
  for (std::size_t k = 0; k < ts.eta.size(); ++k)
    if (ts.eta[k] > 2.05 && ts.eta[k] < 5.95) EXPECT_NEAR(ts.Y[k], 0.0, 1e-9);
}

TEST(Relabel, SecondMomentGrowsAtMostExponentially) {
  auto st = lagrangian_initial(PeakonParams{2.0, 0.0}, -2.0, 512);
  const double m0 = second_moment(st) + st.C, t_start = st.t;
  double K = 0.0;
  evolve(st, 2.0, 1e-2, [&](const LagrangianState& s) {
    K = std::max(K, std::log((second_moment(s) + s.C) / m0) / (s.t - t_start));
  });
  EXPECT_LE(K, 5.0);
}

TEST(TransformProperties, AffineAndJumpInversion) {
  const auto y = pseudo_inverse({-1.0, 3.0}, {0.0, 8.0}, {2.0, 4.0, 6.0});
  EXPECT_DOUBLE_EQ(y[0], 0.0);
  EXPECT_DOUBLE_EQ(y[1], 1.0);
  EXPECT_DOUBLE_EQ(y[2], 2.0);
  const auto j = pseudo_inverse({-1.0, 0.0, 0.0, 1.0}, {0.0, 2.0, 6.0, 8.0}, {4.0});
  EXPECT_EQ(j[0], 0.0);
}

TEST(TransformProperties, RandomMonotoneComposition) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(0.01, 1.0);
  std::vector<double> xs = {0.0}, gs = {0.0};
  for (int i = 0; i < 200; ++i) {
    xs.push_back(xs.back() + uni(rng));
    gs.push_back(gs.back() + uni(rng));
  }
  std::vector<double> targets;
  for (int i = 0; i < 500; ++i) targets.push_back(gs.back() * (i + 0.5) / 500.0);
  const auto y = pseudo_inverse(xs, gs, targets);
  for (std::size_t i = 0; i < targets.size(); ++i) EXPECT_NEAR(interp_linear(xs, gs, y[i]), targets[i], 1e-10);
}

TEST(TransformProperties, DefiningIdentityAndSquareIntegrability) {
  const PeakonParams p{2.0, 0.0};
  const auto s = sample_snapshot(p, 1.0, 4096, 15.0, SampleGrid::EnergyAdapted);
  const FieldEvaluator ev(s);
  const auto ts = build_transformed(s, 1024);
  for (std::size_t k = 0; k < ts.eta.size(); ++k) EXPECT_NEAR(ev.G(ts.Y[k]), ts.eta[k], 1e-6);
  const double n1 = discrete_sq_norm(build_transformed(s, 2048).Y, 8.0);
  const double n2 = discrete_sq_norm(build_transformed(s, 4096).Y, 8.0);
  EXPECT_NEAR(n1, n2, 0.01 * n2);

  EulerianSnapshot z;
  z.x = {0.0, 1.0};
  z.u = z.dens = {0.0, 0.0};
  EXPECT_THROW(build_transformed(z, 8), Error);
}

TEST(TransformProperties, RescalePreservesNorms) {
  const auto ts = transformed_exact(PeakonParams{2.0, 0.0}, -0.5, 4096);
  const auto ss = rescale(ts);
  const double L = 2.0 * ts.C;
  EXPECT_NEAR(discrete_sq_norm(ss.tY, 1.0), discrete_sq_norm(ts.Y, L), 1e-10 * discrete_sq_norm(ts.Y, L));
  EXPECT_NEAR(discrete_sq_norm(ss.tU, 1.0), discrete_sq_norm(ts.U, L), 1e-10 * discrete_sq_norm(ts.U, L));
  EXPECT_NEAR(discrete_sq_norm(ss.tPsqrt, 1.0), discrete_sq_norm(ts.Psqrt, L), 1e-10 * discrete_sq_norm(ts.Psqrt, L));
}

TEST(OperatorProperties, SidedPartsAndCentre) {
  const auto ss = scaled_snapshot_exact(PeakonParams{2.0, 0.0}, 1.0, 1025);
  const auto ops = compute_operators(ss);
  const double A = ss.A;
  for (std::size_t k = 0; k < ss.eta.size(); ++k) {
    const double P = ss.tPsqrt[k] * ss.tPsqrt[k];
    EXPECT_GE(ops.Dt[k], 0.0);
    EXPECT_GE(ops.Et[k], 0.0);
    EXPECT_LE(ops.Dt[k], 2.0 * A * P * (1 + 1e-8));
    EXPECT_LE(ops.Et[k], 2.0 * A * P * (1 + 1e-8));
    EXPECT_NEAR(ops.Qt[k], 0.5 * (ops.Et[k] - ops.Dt[k]), 1e-8 * std::pow(A, 4));
    EXPECT_LE(std::abs(ops.Qt[k]), A * P * (1 + 1e-8));
  }
  const auto r = system_rhs(ss, ops);
  const auto d = derivatives(ss);
  EXPECT_NEAR(r.Y_t[512], -r.v[512] * d.Y_eta[512], 1e-12);
}

TEST(MetricProperties, ScaledYGapIsGridStable) {
  auto gap = [](std::size_t n) {
    const auto a = scaled_snapshot_exact(PeakonParams{2.0, 2.0}, 1.0, n);
    const auto b = scaled_snapshot_exact(PeakonParams{2.2, 2.0}, 1.0, n);
    return l2_gap(a.tY, b.tY, a.eta);
  };
  const double g1 = gap(4096), g2 = gap(8192);
  EXPECT_NEAR(g1, g2, 0.01 * g2);
}

TEST(MetricProperties, DistanceToZeroIsTheFieldNorms) {
  const auto a = scaled_snapshot_exact(PeakonParams{2.0, 0.0}, 1.0, 1024);
  const auto d = distance(a, zero_scaled(1024));
  EXPECT_NEAR(d.dY, std::sqrt(discrete_sq_norm(a.tY, 1.0)), 1e-12);
  EXPECT_NEAR(d.dU, std::sqrt(discrete_sq_norm(a.tU, 1.0)), 1e-12);
  EXPECT_NEAR(d.dP, std::sqrt(discrete_sq_norm(a.tPsqrt, 1.0)), 1e-12);
}
