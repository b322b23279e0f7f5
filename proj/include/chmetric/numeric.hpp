#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace chm {

// eta_k = (k - 1/2) * length / n, k = 1..n
std::vector<double> midpoint_grid(std::size_t n, double length);

// Index k with xs[k] <= x < xs[k+1], clamped to [0, n-2]. xs nondecreasing.
std::size_t locate_cell(const std::vector<double>& xs, double x);

// Piecewise-linear interpolation, constant extension outside [xs.front(), xs.back()].
double interp_linear(const std::vector<double>& xs, const std::vector<double>& fs, double x);

// Kernel sums over a nondecreasing position array y:
//   left[i]  = sum_{j<i} exp(-(y[i]-y[j])/scale) w[j]
//   right[i] = sum_{j>i} exp(-(y[j]-y[i])/scale) w[j]
// Each step multiplies by a factor <= 1, so nothing overflows on wide grids.
struct SweepSums {
  std::vector<double> left;
  std::vector<double> right;
};
SweepSums exp_sweeps(const std::vector<double>& y, const std::vector<double>& w, double scale = 1.0);

// Derivative of samples f on a uniform midpoint grid of the interval (0, length).
// `log_weight` subtracts w*(ln eta - ln(length - eta)) before differencing and adds
// its exact derivative back; use it for fields with logarithmic endpoint growth.
// Fourth-order five-point stencils, picked per node by the smallest fourth
// difference (centered unless twice as rough), so kinks are not smeared.
std::vector<double> midpoint_derivative(const std::vector<double>& f, double length,
                                        double log_weight = 0.0);

// Thread count used by parallel_for. 0 means: CHMETRIC_THREADS, else hardware.
void set_thread_count(unsigned n);
unsigned thread_count();
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// "%.12g"
std::string fmt_num(double v);
// "%.17g", round-trips a double
std::string fmt_exact(double v);

}  // namespace chm
