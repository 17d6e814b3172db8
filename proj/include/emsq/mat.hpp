#pragma once

#include <array>
#include <cstddef>

namespace emsq {

using Vec4 = std::array<double, 4>;

// Row-major 4x4 of doubles. Small enough that everything is done by direct
// formula or unrolled elimination; no external linear algebra needed.
struct Mat4 {
  std::array<double, 16> a{};

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(4 * i + j)]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(4 * i + j)]; }

  static Mat4 identity();
  static Mat4 diagonal(double d0, double d1, double d2, double d3);
};

bool operator==(const Mat4& x, const Mat4& y);

double det2(double a00, double a01, double a10, double a11);

// determinant by cofactor expansion along the first row
double det4(const Mat4& m);

// Gauss-Jordan with partial pivoting; throws NumericallyIllConditioned on a
// vanishing pivot
Mat4 inverse4(const Mat4& m);

// lower-triangular L with L L^T = m; throws CholeskyFailure if m is not
// positive definite
Mat4 cholesky4(const Mat4& m);

Vec4 matvec(const Mat4& m, const Vec4& x);

double dot(const Vec4& x, const Vec4& y);

}  // namespace emsq
