#include "emsq/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include "emsq/constants.hpp"
#include "emsq/errors.hpp"

namespace emsq {

namespace {

constexpr double kRadicandTol = 1e-9;

// (nu-, nu+) from the two-mode invariant Delta = det A + det B + 2 det C.
// pt flips the sign of det C, which is the partial transpose on mode 2.
std::pair<double, double> symplectic_pair(const Mat4& m, bool pt) {
  const double det_a = det2(m(0, 0), m(0, 1), m(1, 0), m(1, 1));
  const double det_b = det2(m(2, 2), m(2, 3), m(3, 2), m(3, 3));
  const double det_c = det2(m(0, 2), m(0, 3), m(1, 2), m(1, 3));
  const double delta = det_a + det_b + (pt ? -2.0 : 2.0) * det_c;
  const double det_v = det4(m);

  double disc = delta * delta - 4.0 * det_v;
  if (disc < 0.0) {
    if (disc < -kRadicandTol) {
      throw NumericallyIllConditioned("symplectic radicand negative beyond tolerance");
    }
    disc = 0.0;
  }
  const double root = std::sqrt(disc);
  auto eig = [](double val) {
    if (val < 0.0) {
      if (val < -kRadicandTol) {
        throw NumericallyIllConditioned("negative squared symplectic eigenvalue");
      }
      val = 0.0;
    }
    return std::sqrt(val);
  };
  return {eig(0.5 * (delta - root)), eig(0.5 * (delta + root))};
}

}  // namespace

CovMat4 CovMat4::vacuum() {
  CovMat4 v;
  v.v = Mat4::diagonal(0.5, 0.5, 0.5, 0.5);
  return v;
}

CovMat4 CovMat4::from_normal_form(double v11, double v33, double v13) {
  CovMat4 v;
  v.v(0, 0) = v.v(1, 1) = v11;
  v.v(2, 2) = v.v(3, 3) = v33;
  v.set_sym(0, 2, v13);
  v.set_sym(1, 3, -v13);
  return v;
}

CovMat4 CovMat4::from_matrix(const Mat4& m) {
  CovMat4 v;
  for (int i = 0; i < 4; ++i) {
    v.v(i, i) = m(i, i);
    for (int j = i + 1; j < 4; ++j) {
      const double s = 0.5 * (m(i, j) + m(j, i));
      v.v(i, j) = s;
      v.v(j, i) = s;
    }
  }
  return v;
}

void CovMat4::set_sym(int i, int j, double value) {
  v(i, j) = value;
  v(j, i) = value;
}

void CovMat4::validate(double tol) const {
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (v(i, j) != v(j, i)) {
        throw Unphysical("covariance matrix is not symmetric");
      }
    }
    if (v(i, i) < 0.5 - tol) {
      throw Unphysical("diagonal variance below the vacuum floor");
    }
  }
  // a symmetric matrix with no real symplectic spectrum is not positive
  // semidefinite, hence not a covariance matrix at all
  double nu_minus = 0.0;
  try {
    nu_minus = symplectic_pair(v, false).first;
  } catch (const NumericallyIllConditioned&) {
    throw Unphysical("no real symplectic spectrum; matrix is not positive semidefinite");
  }
  if (nu_minus < 0.5 - tol) {
    throw Unphysical("symplectic eigenvalue below 1/2");
  }
}

bool CovMat4::is_normal_form(double tol) const {
  return std::fabs(v(0, 1)) <= tol && std::fabs(v(0, 3)) <= tol &&
         std::fabs(v(1, 2)) <= tol && std::fabs(v(2, 3)) <= tol &&
         std::fabs(v(0, 0) - v(1, 1)) <= tol && std::fabs(v(2, 2) - v(3, 3)) <= tol &&
         std::fabs(v(0, 2) + v(1, 3)) <= tol;
}

double CovMat4::determinant() const { return det4(v); }

std::pair<double, double> CovMat4::symplectic_eigenvalues() const {
  return symplectic_pair(v, false);
}

std::pair<double, double> CovMat4::pt_symplectic_eigenvalues() const {
  return symplectic_pair(v, true);
}

void TmstParams::validate() const {
  if (!(r >= 0.0)) throw Unphysical("squeezing parameter must be >= 0");
  if (!(n1 >= 0.0) || !(n2 >= 0.0)) throw Unphysical("thermal inputs must be >= 0");
  if (!(phi >= 0.0) || !(phi < two_pi)) throw Unphysical("angle must lie in [0, 2pi)");
}

CovMat4 cm_from_tmst(const TmstParams& p) {
  p.validate();
  const double pref = 1.0 + p.n1 + p.n2;
  const double ch = std::cosh(2.0 * p.r);
  const double sh = std::sinh(2.0 * p.r);
  const double a = 0.5 * (pref * ch + (p.n1 - p.n2));
  const double b = 0.5 * (pref * ch - (p.n1 - p.n2));
  const double c = 0.5 * pref * sh;
  const CovMat4 base = CovMat4::from_normal_form(a, b, c);
  if (p.phi == 0.0) return base;
  return rotate_mode1_cm(base, p.phi);
}

TmstParams tmst_from_cm(const CovMat4& v, double tol) {
  if (!v.is_normal_form(tol)) {
    throw NotNormalForm("inversion needs the (V11, V33, V13) normal form");
  }
  const double a = v(0, 0);
  const double b = v(2, 2);
  const double c = v(0, 2);
  if (c < -tol) {
    throw NotNormalForm("V13 must be nonnegative; fold the sign into the detector angle");
  }

  const double s = a + b;
  const double d = a - b;
  const double c2 = 2.0 * std::max(c, 0.0);
  if (c2 >= s) throw Unphysical("correlations exceed the two-mode variance budget");

  TmstParams p;
  p.r = 0.5 * std::atanh(c2 / s);
  p.phi = 0.0;
  double n_sum = std::sqrt(s * s - c2 * c2) - 1.0;
  if (n_sum < 0.0) {
    if (n_sum < -tol) throw Unphysical("implied total occupation is negative");
    n_sum = 0.0;
  }
  double n1 = 0.5 * (n_sum + d);
  double n2 = 0.5 * (n_sum - d);
  if (n1 < 0.0) {
    if (n1 < -tol) throw Unphysical("implied n1 is negative");
    n1 = 0.0;
  }
  if (n2 < 0.0) {
    if (n2 < -tol) throw Unphysical("implied n2 is negative");
    n2 = 0.0;
  }
  p.n1 = n1;
  p.n2 = n2;
  return p;
}

double wigner_density(const CovMat4& v, const Vec4& psi) {
  v.validate();
  const double det = det4(v.v);
  if (det < 1e-300) throw SingularCovariance("covariance determinant underflow");
  const Mat4 inv = inverse4(v.v);
  const double q = dot(psi, matvec(inv, psi));
  return std::exp(-0.5 * q) / (4.0 * pi * pi * std::sqrt(det));
}

std::array<std::array<double, 2>, 2> marginal_cm(const CovMat4& v, int keep_i, int keep_j) {
  return {{{v(keep_i, keep_i), v(keep_i, keep_j)},
           {v(keep_j, keep_i), v(keep_j, keep_j)}}};
}

double squeezing_vs_angle(const TmstParams& p, double phi) {
  const double pref = 1.0 + p.n1 + p.n2;
  return 0.5 * pref * (std::cosh(2.0 * p.r) - std::sinh(2.0 * p.r) * std::cos(phi));
}

CovMat4 rotate_mode1_cm(const CovMat4& v, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  // The diagonal 2x2 congruence is expanded with sin^2 eliminated via
  // sin^2 = 1 - cos^2, so a block equal to w*I maps to itself with no
  // rounding at all (the vacuum stays exactly vacuum at every angle).
  const double a11 = v(0, 0), a22 = v(1, 1), a12 = v(0, 1);
  CovMat4 out = v;
  out.v(0, 0) = a22 + (a11 - a22) * c * c + 2.0 * c * s * a12;
  out.v(1, 1) = a11 + (a22 - a11) * c * c - 2.0 * c * s * a12;
  out.set_sym(0, 1, (a22 - a11) * c * s + (c * c - s * s) * a12);
  out.set_sym(0, 2, c * v(0, 2) + s * v(1, 2));
  out.set_sym(0, 3, c * v(0, 3) + s * v(1, 3));
  out.set_sym(1, 2, c * v(1, 2) - s * v(0, 2));
  out.set_sym(1, 3, c * v(1, 3) - s * v(0, 3));
  return out;
}

DuanResult epr_duan(const CovMat4& v, double phi) {
  v.validate();
  const CovMat4 r = rotate_mode1_cm(v, phi);
  DuanResult out;
  // var[(X1 - X2)/sqrt(2)] and var[(P1 + P2)/sqrt(2)]
  out.x_minus_var = 0.5 * (r(0, 0) + r(2, 2)) - r(0, 2);
  out.p_plus_var = 0.5 * (r(1, 1) + r(3, 3)) + r(1, 3);
  out.delta_epr = out.x_minus_var + out.p_plus_var;
  out.squeezing_db_x = ratio_to_db(out.x_minus_var / 0.5);
  out.squeezing_db_p = ratio_to_db(out.p_plus_var / 0.5);
  return out;
}

std::pair<double, double> negativity(const CovMat4& v, double tol) {
  if (!v.is_normal_form(tol)) {
    throw NotNormalForm("log-negativity closed form needs the normal form");
  }
  const auto [zeta_minus, zeta_plus] = v.pt_symplectic_eigenvalues();
  (void)zeta_plus;
  const double e_n = std::max(0.0, -std::log2(2.0 * zeta_minus));
  return {zeta_minus, e_n};
}

double entropy_h(double x) {
  if (x <= 0.5 + 1e-12) return 0.0;
  return (x + 0.5) * std::log2(x + 0.5) - (x - 0.5) * std::log2(x - 0.5);
}

double quantum_discord(const CovMat4& v, double tol) {
  if (!v.is_normal_form(tol)) {
    throw NotNormalForm("discord closed form needs the normal form");
  }
  const double a = v(0, 0);
  const double b = v(2, 2);
  const double c = v(0, 2);
  if (b * b <= 1.0 + 1e-12) {
    throw DegenerateState("conditional-variance formula has a pole at V33^2 = 1");
  }
  const auto [nu_minus, nu_plus] = v.symplectic_eigenvalues();
  // conditional variance after a heterodyne-optimal measurement on mode 2;
  // the c^2 (1 - b) / (b^2 - 1) form is simplified with the pole factored out
  const double cond = a - c * c / (b + 1.0);
  return entropy_h(b) - entropy_h(nu_minus) - entropy_h(nu_plus) + entropy_h(cond);
}

double entropy_of_formation(double e_n) {
  if (e_n <= 0.0) return 0.0;
  const double theta = std::exp2(-e_n);
  const double root = std::sqrt(theta);
  const double sig_p = 0.25 * (1.0 / root + root) * (1.0 / root + root);
  const double sig_m = 0.25 * (1.0 / root - root) * (1.0 / root - root);
  double e_f = sig_p * std::log2(sig_p);
  if (sig_m > 0.0) e_f -= sig_m * std::log2(sig_m);
  return e_f;
}

double ebit_rate(double e_f, double bandwidth_hz) { return e_f * bandwidth_hz; }

double optimal_angle(const CovMat4& v) {
  const double y = v(1, 2) + v(0, 3);
  const double x = v(0, 2) - v(1, 3);
  if (x == 0.0 && y == 0.0) return 0.0;
  double phi = std::atan2(y, x);
  if (phi < 0.0) phi += two_pi;
  return phi;
}

EntanglementReport full_report(const CovMat4& v) {
  v.validate();
  const double phi = optimal_angle(v);
  const DuanResult duan = epr_duan(v, phi);
  const CovMat4 r = rotate_mode1_cm(v, phi);

  // After the optimal rotation any residual off-pattern entries are
  // estimation noise; averaging the symmetric pairs is the projection onto
  // the normal form, which the closed-form metrics require.
  const CovMat4 nf = CovMat4::from_normal_form(
      0.5 * (r(0, 0) + r(1, 1)), 0.5 * (r(2, 2) + r(3, 3)),
      0.5 * (r(0, 2) - r(1, 3)));

  EntanglementReport rep;
  rep.delta_epr = duan.delta_epr;
  rep.squeezing_db_x = duan.squeezing_db_x;
  rep.squeezing_db_p = duan.squeezing_db_p;
  const auto [zeta_minus, e_n] = negativity(nf);
  rep.zeta_minus = zeta_minus;
  rep.e_n = e_n;
  const auto [nu_minus, nu_plus] = nf.symplectic_eigenvalues();
  rep.nu_minus = nu_minus;
  rep.nu_plus = nu_plus;
  if (std::fabs(nf(0, 2)) <= 1e-12) {
    rep.discord = 0.0;  // uncorrelated state, analytic value
  } else {
    rep.discord = quantum_discord(nf);
  }
  rep.e_f = entropy_of_formation(rep.e_n);
  return rep;
}

}  // namespace emsq
