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

// Dense 3x3 real linear algebra. Everything here is fixed-size and
// allocation-free except SpectralSummary::real_eigenvectors.

#ifndef ICCD_CORE_LINALG3_HPP
#define ICCD_CORE_LINALG3_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

namespace iccd {

struct Vec3 {
  std::array<double, 3> v{};

  constexpr Vec3() = default;
  constexpr Vec3(double x, double y, double z) : v{x, y, z} {}

  constexpr double& operator[](std::size_t i) { return v[i]; }
  constexpr double operator[](std::size_t i) const { return v[i]; }

  constexpr double x() const { return v[0]; }
  constexpr double y() const { return v[1]; }
  constexpr double z() const { return v[2]; }

  friend constexpr Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
  }
  friend constexpr Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
  }
  friend constexpr Vec3 operator-(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }
  friend constexpr Vec3 operator*(double s, const Vec3& a) {
    return {s * a[0], s * a[1], s * a[2]};
  }
  friend constexpr Vec3 operator*(const Vec3& a, double s) { return s * a; }
  friend constexpr Vec3 operator/(const Vec3& a, double s) {
    return {a[0] / s, a[1] / s, a[2] / s};
  }
  Vec3& operator+=(const Vec3& b) { return *this = *this + b; }
  Vec3& operator-=(const Vec3& b) { return *this = *this - b; }

  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

// A point of the 3D phase space.
using State3 = Vec3;

constexpr double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }
inline Vec3 normalized(const Vec3& a) { return a / norm(a); }
inline bool is_finite(const Vec3& a) {
  return std::isfinite(a[0]) && std::isfinite(a[1]) && std::isfinite(a[2]);
}

// Row-major 3x3 matrix.
struct Matrix3 {
  std::array<double, 9> a{};

  static constexpr Matrix3 identity() {
    Matrix3 m;
    m.a = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    return m;
  }
  static constexpr Matrix3 from_rows(const Vec3& r0, const Vec3& r1, const Vec3& r2) {
    Matrix3 m;
    m.a = {r0[0], r0[1], r0[2], r1[0], r1[1], r1[2], r2[0], r2[1], r2[2]};
    return m;
  }
  static constexpr Matrix3 diagonal(double d0, double d1, double d2) {
    Matrix3 m;
    m.a = {d0, 0, 0, 0, d1, 0, 0, 0, d2};
    return m;
  }

  constexpr double& operator()(int r, int c) { return a[3 * r + c]; }
  constexpr double operator()(int r, int c) const { return a[3 * r + c]; }

  constexpr Vec3 row(int r) const { return {a[3 * r], a[3 * r + 1], a[3 * r + 2]}; }
  constexpr Vec3 col(int c) const { return {a[c], a[3 + c], a[6 + c]}; }

  friend Matrix3 operator*(const Matrix3& x, const Matrix3& y);
  friend Vec3 operator*(const Matrix3& m, const Vec3& v) {
    return {dot(m.row(0), v), dot(m.row(1), v), dot(m.row(2), v)};
  }
  friend Matrix3 operator+(const Matrix3& x, const Matrix3& y);
  friend Matrix3 operator-(const Matrix3& x, const Matrix3& y);
  friend Matrix3 operator*(double s, const Matrix3& x);
  friend constexpr bool operator==(const Matrix3&, const Matrix3&) = default;
};

double trace(const Matrix3& m);
// Sum of the three principal 2x2 minors.
double second_trace(const Matrix3& m);
double determinant(const Matrix3& m);
double frobenius_norm(const Matrix3& m);
Matrix3 transpose(const Matrix3& m);
// Inverse via the adjugate; returns nullopt when |det| is not representable
// against the matrix scale.
std::optional<Matrix3> inverse(const Matrix3& m);
bool is_finite(const Matrix3& m);

// Solves m x = rhs by Cramer's rule; nullopt if m is singular.
std::optional<Vec3> solve(const Matrix3& m, const Vec3& rhs);

// ||M||_F * ||M^-1||_F; +inf for singular matrices.
double condition_estimate(const Matrix3& m);
inline constexpr double kIllConditioned = 1e12;

struct RealEigenpair {
  double value = 0;
  Vec3 vector;  // unit norm, sign arbitrary
};

struct SpectralSummary {
  double trace = 0;         // tau
  double second_trace = 0;  // sigma
  double determinant = 0;   // delta
  // Sorted by modulus, largest first. A complex pair, when present, is stored
  // with the positive imaginary part first.
  std::array<std::complex<double>, 3> eigenvalues{};
  // One entry per real eigenvalue whose eigenspace is a unique line.
  std::vector<RealEigenpair> real_eigenvectors;
  double condition = 0;
  bool ill_conditioned = false;

  bool has_complex_pair() const { return eigenvalues[0].imag() != 0 || eigenvalues[1].imag() != 0 || eigenvalues[2].imag() != 0; }
  // Real eigenvalues in the stored (modulus-descending) order.
  std::vector<double> real_eigenvalues() const;
};

// Characteristic polynomial lambda^3 - tau lambda^2 + sigma lambda - delta.
std::complex<double> char_poly(const SpectralSummary& s, std::complex<double> lambda);

// Closed-form cubic (trigonometric branch for three real roots, Cardano for
// one), Newton-polished, plus cross-product eigenvectors for real roots.
SpectralSummary eig3(const Matrix3& m);

// Unit eigenvector of m for real eigenvalue lambda from the largest cross
// product of two rows of (m - lambda I). nullopt when that cross product is
// below 1e-10 * ||m||^2 (eigenspace is not a unique line).
std::optional<Vec3> try_eigenvector(const Matrix3& m, double lambda);

// As try_eigenvector but throws Error(DefectiveMatrix).
Vec3 eigenvector(const Matrix3& m, double lambda);

}  // namespace iccd

#endif  // ICCD_CORE_LINALG3_HPP
