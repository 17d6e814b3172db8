#pragma once

#include <utility>

#include "emsq/mat.hpp"

namespace emsq {

// Two-mode Gaussian state covariance matrix, quadrature order (X1, P1, X2, P2),
// vacuum variance 1/2 on the diagonal. Values are plain data; ops that need a
// physical state call validate() and throw on violation, because estimators
// legitimately produce matrices a few standard errors outside the physical
// cone and must still be representable.
struct CovMat4 {
  Mat4 v;

  static CovMat4 vacuum();
  // normal form: V11=V22, V33=V44, V13=-V24, all other off-diagonals zero
  static CovMat4 from_normal_form(double v11, double v33, double v13);
  static CovMat4 from_matrix(const Mat4& m);  // symmetrizes exactly: (m+m^T)/2

  double operator()(int i, int j) const { return v(i, j); }
  void set_sym(int i, int j, double value);  // writes both (i,j) and (j,i)

  // symmetry is structural; physicality means nu- >= 1/2 - tol and every
  // diagonal >= 1/2 - tol
  void validate(double tol = 1e-9) const;
  bool is_normal_form(double tol = 1e-9) const;

  double determinant() const;
  // ordinary and partially transposed symplectic eigenvalues, ascending
  std::pair<double, double> symplectic_eigenvalues() const;
  std::pair<double, double> pt_symplectic_eigenvalues() const;
};

// Two-mode squeezed thermal state parameters: squeezing r, detector angle phi,
// thermal inputs n1, n2.
struct TmstParams {
  double r = 0.0;
  double phi = 0.0;
  double n1 = 0.0;
  double n2 = 0.0;

  void validate() const;  // r >= 0, n_i >= 0, phi in [0, 2pi)
};

struct DuanResult {
  double x_minus_var = 0.0;
  double p_plus_var = 0.0;
  double delta_epr = 0.0;
  double squeezing_db_x = 0.0;
  double squeezing_db_p = 0.0;
};

struct EntanglementReport {
  double delta_epr = 0.0;
  double squeezing_db_x = 0.0;
  double squeezing_db_p = 0.0;
  double zeta_minus = 0.0;
  double e_n = 0.0;
  double discord = 0.0;
  double e_f = 0.0;
  double nu_minus = 0.0;
  double nu_plus = 0.0;
};

CovMat4 cm_from_tmst(const TmstParams& p);

// Inversion fixes phi = 0; (r, phi) are not separately identifiable from the
// normal form. Throws NotNormalForm / Unphysical.
TmstParams tmst_from_cm(const CovMat4& v, double tol = 1e-9);

// W(psi) = exp(-psi^T V^-1 psi / 2) / ((2 pi)^2 sqrt(det V)); normalized so the
// 4-D integral is 1. Throws SingularCovariance when det V < 1e-300.
double wigner_density(const CovMat4& v, const Vec4& psi);

// Gaussian marginal over two quadratures is plain submatrix selection.
std::array<std::array<double, 2>, 2> marginal_cm(const CovMat4& v, int keep_i, int keep_j);

// S(phi) = (1 + n1 + n2)(cosh 2r - sinh 2r cos phi) / 2
double squeezing_vs_angle(const TmstParams& p, double phi);

// Rotates the (X1, P1) block by phi, then evaluates the joint-quadrature
// variances and the Duan sum. Vacuum gives exactly 1 at any angle.
DuanResult epr_duan(const CovMat4& v, double phi);

// (zeta_minus, e_n); log base 2, E_N = max(0, -log2(2 zeta-)). Normal form
// required.
std::pair<double, double> negativity(const CovMat4& v, double tol = 1e-9);

// Gaussian discord D(2|1), log base 2, normal form required; throws
// DegenerateState at the V33^2 <= 1 formula pole.
double quantum_discord(const CovMat4& v, double tol = 1e-9);

double entropy_of_formation(double e_n);

double ebit_rate(double e_f, double bandwidth_hz);

// Detector rotation on mode 1 as a congruence on the (X1, P1) block, written
// so that a block proportional to the identity passes through bit-exactly.
// R(phi) = [[cos, sin], [-sin, cos]].
CovMat4 rotate_mode1_cm(const CovMat4& v, double phi);

// angle that minimizes the Duan sum over mode-1 rotations; 0 for normal form
double optimal_angle(const CovMat4& v);

// One-stop evaluation at the optimal angle. Discord of an uncorrelated state
// is reported as its analytic value 0 instead of tripping the formula pole,
// so vacuum input yields an all-zero report.
EntanglementReport full_report(const CovMat4& v);

// entropy term h(x) = (x+1/2)log2(x+1/2) - (x-1/2)log2(x-1/2), clamped to 0
// for x <= 1/2 + 1e-12
double entropy_h(double x);

}  // namespace emsq
