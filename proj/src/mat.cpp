#include "emsq/mat.hpp"

#include <cmath>
#include <utility>

#include "emsq/errors.hpp"

namespace emsq {

Mat4 Mat4::identity() {
  Mat4 m;
  for (int i = 0; i < 4; ++i) m(i, i) = 1.0;
  return m;
}

Mat4 Mat4::diagonal(double d0, double d1, double d2, double d3) {
  Mat4 m;
  m(0, 0) = d0;
  m(1, 1) = d1;
  m(2, 2) = d2;
  m(3, 3) = d3;
  return m;
}

bool operator==(const Mat4& x, const Mat4& y) { return x.a == y.a; }

double det2(double a00, double a01, double a10, double a11) {
  return a00 * a11 - a01 * a10;
}

double det4(const Mat4& m) {
  // 3x3 minors along the first row
  auto minor3 = [&m](int r0, int r1, int r2, int c0, int c1, int c2) {
    return m(r0, c0) * (m(r1, c1) * m(r2, c2) - m(r1, c2) * m(r2, c1)) -
           m(r0, c1) * (m(r1, c0) * m(r2, c2) - m(r1, c2) * m(r2, c0)) +
           m(r0, c2) * (m(r1, c0) * m(r2, c1) - m(r1, c1) * m(r2, c0));
  };
  return m(0, 0) * minor3(1, 2, 3, 1, 2, 3) - m(0, 1) * minor3(1, 2, 3, 0, 2, 3) +
         m(0, 2) * minor3(1, 2, 3, 0, 1, 3) - m(0, 3) * minor3(1, 2, 3, 0, 1, 2);
}

Mat4 inverse4(const Mat4& m) {
  // augmented [m | I], eliminate in place
  double w[4][8];
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      w[i][j] = m(i, j);
      w[i][j + 4] = (i == j) ? 1.0 : 0.0;
    }
  }
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r) {
      if (std::fabs(w[r][col]) > std::fabs(w[piv][col])) piv = r;
    }
    if (std::fabs(w[piv][col]) < 1e-300) {
      throw NumericallyIllConditioned("4x4 inversion hit a vanishing pivot");
    }
    if (piv != col) {
      for (int j = 0; j < 8; ++j) std::swap(w[piv][j], w[col][j]);
    }
    const double inv_p = 1.0 / w[col][col];
    for (int j = 0; j < 8; ++j) w[col][j] *= inv_p;
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const double f = w[r][col];
      if (f == 0.0) continue;
      for (int j = 0; j < 8; ++j) w[r][j] -= f * w[col][j];
    }
  }
  Mat4 out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out(i, j) = w[i][j + 4];
  }
  return out;
}

Mat4 cholesky4(const Mat4& m) {
  Mat4 l;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = m(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (s <= 0.0) {
          throw CholeskyFailure("matrix is not positive definite");
        }
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return l;
}

Vec4 matvec(const Mat4& m, const Vec4& x) {
  Vec4 y{};
  for (int i = 0; i < 4; ++i) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j) s += m(i, j) * x[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = s;
  }
  return y;
}

double dot(const Vec4& x, const Vec4& y) {
  return x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3];
}

}  // namespace emsq
