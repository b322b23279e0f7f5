#include "chmetric/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <thread>

namespace chm {

std::vector<double> midpoint_grid(std::size_t n, double length) {
  std::vector<double> eta(n);
  for (std::size_t k = 0; k < n; ++k) eta[k] = (static_cast<double>(k) + 0.5) * length / static_cast<double>(n);
  return eta;
}

std::size_t locate_cell(const std::vector<double>& xs, double x) {
  const std::size_t n = xs.size();
  if (n < 2) return 0;
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t k = it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
  return std::min(k, n - 2);
}

double interp_linear(const std::vector<double>& xs, const std::vector<double>& fs, double x) {
  if (xs.empty()) return 0.0;
  if (x <= xs.front()) return fs.front();
  if (x >= xs.back()) return fs.back();
  const std::size_t k = locate_cell(xs, x);
  const double h = xs[k + 1] - xs[k];
  if (h <= 0.0) return fs[k + 1];
  const double s = (x - xs[k]) / h;
  return (1.0 - s) * fs[k] + s * fs[k + 1];
}

SweepSums exp_sweeps(const std::vector<double>& y, const std::vector<double>& w, double scale) {
  const std::size_t n = y.size();
  SweepSums out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  if (n == 0) return out;
  const double inv = 1.0 / scale;
  for (std::size_t i = 1; i < n; ++i)
    out.left[i] = std::exp(-(y[i] - y[i - 1]) * inv) * (out.left[i - 1] + w[i - 1]);
  for (std::size_t i = n - 1; i-- > 0;)
    out.right[i] = std::exp(-(y[i + 1] - y[i]) * inv) * (out.right[i + 1] + w[i + 1]);
  return out;
}

std::vector<double> midpoint_derivative(const std::vector<double>& f, double length, double log_weight) {
  const std::size_t n = f.size();
  std::vector<double> d(n, 0.0);
  if (n < 3) return d;
  const double h = length / static_cast<double>(n);
  auto eta = [&](std::size_t k) { return (static_cast<double>(k) + 0.5) * h; };
  std::vector<double> r(f);
  if (log_weight != 0.0)
    for (std::size_t k = 0; k < n; ++k)
      r[k] -= log_weight * (std::log(eta(k)) - std::log(length - eta(k)));

  if (n < 5) {
    d[0] = (-3.0 * r[0] + 4.0 * r[1] - r[2]) / (2.0 * h);
    for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (r[k + 1] - r[k - 1]) / (2.0 * h);
    d[n - 1] = (3.0 * r[n - 1] - 4.0 * r[n - 2] + r[n - 3]) / (2.0 * h);
  } else {
    // derivative at position j of the quartic through five equispaced values, times 12h
    static constexpr double weights[5][5] = {{-25, 48, -36, 16, -3},
                                            {-3, -10, 18, -6, 1},
                                            {1, -8, 0, 8, -1},
                                            {-1, 6, -18, 10, 3},
                                            {3, -16, 36, -48, 25}};
    auto fourth = [&](std::size_t s) {
      return std::abs(r[s] - 4.0 * r[s + 1] + 6.0 * r[s + 2] - 4.0 * r[s + 3] + r[s + 4]);
    };
    for (std::size_t k = 0; k < n; ++k) {
      // stencils [k-j, k-j+4] that fit in the grid; centered (j = 2) unless clearly rougher
      double best = HUGE_VAL, centered = HUGE_VAL;
      std::size_t best_j = 5;
      for (std::size_t j = 0; j < 5; ++j) {
        if (k < j || k - j + 4 >= n) continue;
        const double v = fourth(k - j);
        if (j == 2) centered = v;
        if (v < best) {
          best = v;
          best_j = j;
        }
      }
      const std::size_t j = centered <= 2.0 * best ? 2 : best_j;
      const std::size_t s0 = k - j;
      double acc = 0.0;
      for (std::size_t i = 0; i < 5; ++i) acc += weights[j][i] * r[s0 + i];
      d[k] = acc / (12.0 * h);
    }
  }
  if (log_weight != 0.0)
    for (std::size_t k = 0; k < n; ++k)
      d[k] += log_weight * (1.0 / eta(k) + 1.0 / (length - eta(k)));
  return d;
}

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_thread_count(unsigned n) { g_threads = n; }

unsigned thread_count() {
  if (unsigned n = g_threads.load(); n > 0) return n;
  if (const char* env = std::getenv("CHMETRIC_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const unsigned nt = static_cast<unsigned>(std::min<std::size_t>(thread_count(), n));
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  for (unsigned t = 0; t < nt; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n && !failed;) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace chm
