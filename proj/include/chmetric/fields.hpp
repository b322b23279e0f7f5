#pragma once

#include <iosfwd>
#include <vector>

namespace chm {

struct Atom {
  double loc = 0.0;
  double mass = 0.0;
};

// Sampled (u, mu) at one time: mu = dens dx + sum of atoms.
struct EulerianSnapshot {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> u;
  std::vector<double> dens;
  std::vector<Atom> atoms;
  double C = 0.0;
};

// Trapezoid integral of dens plus atom masses.
double measure_total(const EulerianSnapshot& s);

// Throws Error(InvalidInput) if the snapshot breaks its invariants.
void validate(const EulerianSnapshot& s);

// Evaluates F, p, p_x and G at arbitrary points. Construction is O(N); each
// evaluation is O(log N + #atoms). The convolution is the composite trapezoid
// rule on the snapshot grid with x inserted as an extra node; u and dens are
// linearly interpolated inside the grid and zero outside.
class FieldEvaluator {
 public:
  explicit FieldEvaluator(const EulerianSnapshot& s);

  double u(double x) const;
  double dens(double x) const;
  double F(double x) const;   // mu((-inf, x))
  double p(double x) const;
  double px(double x) const;  // atoms at x contribute nothing
  // 2 p_x + 2 F, left-continuous: an atom at x counts as lying to the right.
  double G(double x) const;
  // Right limit of G (differs from G only at atoms).
  double G_right(double x) const;
  // u_x on the cell containing x, from dens = u^2 + u_x^2 and the cell slope sign.
  double ux(double x) const;

  const EulerianSnapshot& snapshot() const { return s_; }

 private:
  struct Sums {
    double left, right;
  };
  Sums kernel_sums(double x) const;
  double atom_p(double x) const;
  double atom_px(double x, bool left_limit) const;

  const EulerianSnapshot& s_;
  std::vector<double> f_;   // u^2 + dens at nodes
  std::vector<double> cf_;  // cumulative trapezoid of dens
  std::vector<double> left_, right_;
};

double eval_F(const EulerianSnapshot& s, double x);
double eval_p(const EulerianSnapshot& s, double x);
double eval_px(const EulerianSnapshot& s, double x);
double eval_G(const EulerianSnapshot& s, double x);

void write_json(std::ostream& os, const EulerianSnapshot& s);
EulerianSnapshot read_eulerian_json(std::istream& is);

}  // namespace chm
