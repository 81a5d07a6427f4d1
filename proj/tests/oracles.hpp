// Copyright 2026 The iccd Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Test-side reference computations. Nothing here calls into the library's
// numerics; maps are re-typed from their equations and roots are found by
// bisection, so agreement with the library is a real cross-check.

#ifndef ICCD_TESTS_ORACLES_HPP
#define ICCD_TESTS_ORACLES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using V3 = std::array<double, 3>;
using M3 = std::array<double, 9>;  // row-major
using Rule = std::function<V3(const V3&)>;

inline V3 mira(double a, double b, double c, const V3& s) {
  return {s[1], s[2], b * s[0] + c * s[1] + a * s[2] - s[1] * s[1]};
}

inline void kamiyama_xy(double R, double theta_deg, const V3& s, double* x, double* y) {
  const double t = theta_deg * std::numbers::pi / 180.0;
  const double q = (R - 0.9) * (s[0] * s[0] + s[1] * s[1]);
  *x = R * std::cos(t) * s[0] - R * std::sin(t) * s[1] - q;
  *y = R * std::sin(t) * s[0] + R * std::cos(t) * s[1] - q;
}

inline V3 kamiyama_a(double R, double E, double theta, const V3& s) {
  double x, y;
  kamiyama_xy(R, theta, s, &x, &y);
  return {x + E * s[2], y, s[0]};
}

inline V3 kamiyama_b(double R, double E, double theta, double C, double D, const V3& s) {
  double x, y;
  kamiyama_xy(R, theta, s, &x, &y);
  return {x + E * s[2], y, C * std::tanh(s[2]) + D};
}

inline V3 iterate(const Rule& f, V3 s, int n) {
  for (int i = 0; i < n; ++i) s = f(s);
  return s;
}

// Central differences of f^n.
inline M3 fd_jacobian(const Rule& f, const V3& s, int n = 1, double h = 1e-6) {
  M3 J{};
  for (int k = 0; k < 3; ++k) {
    V3 lo = s, hi = s;
    lo[k] -= h;
    hi[k] += h;
    const V3 a = iterate(f, lo, n), b = iterate(f, hi, n);
    for (int r = 0; r < 3; ++r) J[3 * r + k] = (b[r] - a[r]) / (2 * h);
  }
  return J;
}

inline double det(const M3& m) {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

inline double max_abs(const M3& m) {
  double r = 0;
  for (double v : m) r = std::max(r, std::abs(v));
  return r;
}

// Roots of lambda^3 - tau lambda^2 + sigma lambda - delta: every real root is
// bracketed between the critical points and found by bisection; a complex
// pair comes from deflating by the one real root.
inline std::vector<std::complex<double>> cubic_roots(double tau, double sigma, double delta) {
  auto p = [&](double x) { return ((x - tau) * x + sigma) * x - delta; };
  const double bound = 1 + std::max({std::abs(tau), std::abs(sigma), std::abs(delta)});
  std::vector<double> knots{-bound};
  const double disc = 4 * tau * tau - 12 * sigma;  // of 3x^2 - 2 tau x + sigma
  if (disc > 0) {
    knots.push_back((2 * tau - std::sqrt(disc)) / 6);
    knots.push_back((2 * tau + std::sqrt(disc)) / 6);
  }
  knots.push_back(bound);
  auto bisect = [&](double lo, double hi) {
    double flo = p(lo);
    for (int it = 0; it < 200 && hi - lo > 0; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      const double fm = p(mid);
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  std::vector<double> real;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double a = knots[i], b = knots[i + 1];
    const double fa = p(a), fb = p(b);
    if (fa == 0) real.push_back(a);
    else if ((fa < 0) != (fb < 0)) real.push_back(bisect(a, b));
  }
  if (real.empty()) real.push_back(bisect(-bound, bound));
  std::vector<std::complex<double>> out;
  if (real.size() >= 3) {
    for (double r : real) out.emplace_back(r, 0);
    return out;
  }
  // Deflate by the first real root: p = (x - r)(x^2 + B x + Cc).
  const double r = real[0];
  const double B = r - tau, Cc = sigma + r * B;
  const double d = B * B - 4 * Cc;
  out.emplace_back(r, 0);
  if (d >= 0) {
    out.emplace_back((-B - std::sqrt(d)) / 2, 0);
    out.emplace_back((-B + std::sqrt(d)) / 2, 0);
  } else {
    out.emplace_back(-B / 2, std::sqrt(-d) / 2);
    out.emplace_back(-B / 2, -std::sqrt(-d) / 2);
  }
  return out;
}

// Best fraction by exhaustive search over denominators 1..p_max.
struct Fraction {
  long q, p;
};
inline Fraction best_fraction(double rho, long p_max) {
  Fraction best{0, 1};
  double err = std::abs(rho);
  for (long p = 1; p <= p_max; ++p) {
    const long q = std::lround(rho * p);
    if (std::abs(rho - static_cast<double>(q) / p) < err - 1e-15) {
      err = std::abs(rho - static_cast<double>(q) / p);
      best = {q, p};
    }
  }
  return best;
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

}  // namespace oracle

#endif  // ICCD_TESTS_ORACLES_HPP
