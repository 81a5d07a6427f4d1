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

#include "core/linalg3.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

#include "core/error.hpp"

namespace iccd {

Matrix3 operator*(const Matrix3& x, const Matrix3& y) {
  Matrix3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r(i, j) = x(i, 0) * y(0, j) + x(i, 1) * y(1, j) + x(i, 2) * y(2, j);
  return r;
}

Matrix3 operator+(const Matrix3& x, const Matrix3& y) {
  Matrix3 r;
  for (std::size_t i = 0; i < 9; ++i) r.a[i] = x.a[i] + y.a[i];
  return r;
}

Matrix3 operator-(const Matrix3& x, const Matrix3& y) {
  Matrix3 r;
  for (std::size_t i = 0; i < 9; ++i) r.a[i] = x.a[i] - y.a[i];
  return r;
}

Matrix3 operator*(double s, const Matrix3& x) {
  Matrix3 r;
  for (std::size_t i = 0; i < 9; ++i) r.a[i] = s * x.a[i];
  return r;
}

double trace(const Matrix3& m) { return m(0, 0) + m(1, 1) + m(2, 2); }

double second_trace(const Matrix3& m) {
  return (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) +
         (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) +
         (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1));
}

double determinant(const Matrix3& m) { return dot(m.row(0), cross(m.row(1), m.row(2))); }

double frobenius_norm(const Matrix3& m) {
  double s = 0;
  for (double v : m.a) s += v * v;
  return std::sqrt(s);
}

Matrix3 transpose(const Matrix3& m) {
  Matrix3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = m(j, i);
  return r;
}

bool is_finite(const Matrix3& m) {
  return std::all_of(m.a.begin(), m.a.end(), [](double v) { return std::isfinite(v); });
}

std::optional<Matrix3> inverse(const Matrix3& m) {
  const double det = determinant(m);
  const double scale = frobenius_norm(m);
  if (det == 0 || !std::isfinite(det) ||
      std::abs(det) < std::numeric_limits<double>::min() * (1 + scale * scale * scale))
    return std::nullopt;
  // Columns of the inverse are cross products of rows.
  const Vec3 c0 = cross(m.row(1), m.row(2));
  const Vec3 c1 = cross(m.row(2), m.row(0));
  const Vec3 c2 = cross(m.row(0), m.row(1));
  Matrix3 r;
  for (int i = 0; i < 3; ++i) {
    r(i, 0) = c0[i] / det;
    r(i, 1) = c1[i] / det;
    r(i, 2) = c2[i] / det;
  }
  return r;
}

std::optional<Vec3> solve(const Matrix3& m, const Vec3& rhs) {
  const auto inv = inverse(m);
  if (!inv) return std::nullopt;
  return *inv * rhs;
}

double condition_estimate(const Matrix3& m) {
  const auto inv = inverse(m);
  if (!inv) return std::numeric_limits<double>::infinity();
  return frobenius_norm(m) * frobenius_norm(*inv);
}

std::complex<double> char_poly(const SpectralSummary& s, std::complex<double> z) {
  return ((z - s.trace) * z + s.second_trace) * z - s.determinant;
}

std::vector<double> SpectralSummary::real_eigenvalues() const {
  std::vector<double> out;
  for (const auto& e : eigenvalues)
    if (e.imag() == 0) out.push_back(e.real());
  return out;
}

namespace {

using cplx = std::complex<double>;

// Newton on the characteristic polynomial; a step is kept only if it lowers
// the residual, which protects clustered roots.
template <typename T>
T polish_root(const SpectralSummary& s, T z) {
  auto residual = [&](T w) { return std::abs(((w - s.trace) * w + s.second_trace) * w - s.determinant); };
  T best = z;
  double best_res = residual(z);
  for (int it = 0; it < 3 && best_res > 0; ++it) {
    const T p = ((best - s.trace) * best + s.second_trace) * best - s.determinant;
    const T dp = (3.0 * best - 2.0 * s.trace) * best + s.second_trace;
    if (std::abs(dp) == 0) break;
    const T next = best - p / dp;
    const double r = residual(next);
    if (!(r < best_res)) break;
    best = next;
    best_res = r;
  }
  return best;
}

std::array<cplx, 3> cubic_roots(double tau, double sigma, double delta) {
  // lambda^3 + a2 lambda^2 + a1 lambda + a0, shifted by lambda = t + tau / 3.
  const double a2 = -tau, a1 = sigma, a0 = -delta;
  const double shift = tau / 3.0;
  const double p = a1 - a2 * a2 / 3.0;
  const double q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
  const double disc = (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0);

  if (disc > 0) {
    const double sd = std::sqrt(disc);
    const double big = std::cbrt(std::abs(q) / 2.0 + sd);
    const double u = q > 0 ? -big : big;
    const double v = u != 0 ? -p / (3.0 * u) : 0.0;
    const double re = -(u + v) / 2.0 + shift;
    const double im = std::sqrt(3.0) / 2.0 * std::abs(u - v);
    return {cplx(u + v + shift, 0), cplx(re, im), cplx(re, -im)};
  }
  if (p == 0) return {cplx(shift, 0), cplx(shift, 0), cplx(shift, 0)};
  const double r = std::sqrt(-p / 3.0);
  const double arg = std::clamp((-q / 2.0) / (r * r * r), -1.0, 1.0);
  const double phi = std::acos(arg);
  std::array<cplx, 3> out;
  for (int k = 0; k < 3; ++k)
    out[k] = cplx(2.0 * r * std::cos((phi - 2.0 * std::numbers::pi * k) / 3.0) + shift, 0);
  return out;
}

}  // namespace

SpectralSummary eig3(const Matrix3& m) {
  if (!is_finite(m)) throw Error(ErrorCode::InvalidArgument, "eig3: matrix has non-finite entries");
  SpectralSummary s;
  s.trace = trace(m);
  s.second_trace = second_trace(m);
  s.determinant = determinant(m);

  auto roots = cubic_roots(s.trace, s.second_trace, s.determinant);
  for (auto& z : roots) {
    if (z.imag() == 0) {
      z = cplx(polish_root(s, z.real()), 0);
    }
  }
  if (roots[1].imag() != 0) {
    const cplx z = polish_root(s, roots[1]);
    if (z.imag() != 0) {
      roots[1] = cplx(z.real(), std::abs(z.imag()));
      roots[2] = std::conj(roots[1]);
    }
  }
  std::sort(roots.begin(), roots.end(), [](const cplx& x, const cplx& y) {
    const double ax = std::abs(x), ay = std::abs(y);
    if (ax != ay) return ax > ay;
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
  // Keep a conjugate pair adjacent, positive imaginary part first.
  for (int i = 0; i < 2; ++i) {
    if (roots[i].imag() != 0 && roots[i + 1] == std::conj(roots[i]) && roots[i].imag() < 0)
      std::swap(roots[i], roots[i + 1]);
  }
  s.eigenvalues = roots;

  for (std::size_t i = 0; i < 3; ++i) {
    if (roots[i].imag() != 0) continue;
    // Skip repeated real roots already handled.
    bool seen = false;
    for (std::size_t j = 0; j < i; ++j)
      if (roots[j] == roots[i]) seen = true;
    if (seen) continue;
    if (auto v = try_eigenvector(m, roots[i].real())) s.real_eigenvectors.push_back({roots[i].real(), *v});
  }

  s.condition = condition_estimate(m);
  s.ill_conditioned = !(s.condition <= kIllConditioned);
  return s;
}

std::optional<Vec3> try_eigenvector(const Matrix3& m, double lambda) {
  const Matrix3 shifted = m - lambda * Matrix3::identity();
  const Vec3 r0 = shifted.row(0), r1 = shifted.row(1), r2 = shifted.row(2);
  const std::array<Vec3, 3> candidates{cross(r0, r1), cross(r0, r2), cross(r1, r2)};
  const Vec3* best = &candidates[0];
  double best_norm = norm(candidates[0]);
  for (const auto& c : candidates) {
    const double n = norm(c);
    if (n > best_norm) {
      best = &c;
      best_norm = n;
    }
  }
  const double scale = frobenius_norm(m);
  if (!(best_norm > 1e-10 * scale * scale)) return std::nullopt;
  return *best / best_norm;
}

Vec3 eigenvector(const Matrix3& m, double lambda) {
  if (auto v = try_eigenvector(m, lambda)) return *v;
  throw Error(ErrorCode::DefectiveMatrix,
              "eigenvector: (M - lambda I) has rank < 2; eigenspace is not a unique line");
}

}  // namespace iccd
