#pragma once

#include <cstdint>
#include <vector>

#include "emsq/gaussian.hpp"

namespace emsq {

// ---------------------------------------------------------------------------
// measurement-chain description
// ---------------------------------------------------------------------------

// One amplification chain from the device output to digitized quadratures.
// zeta converts one quantum of variance into V^2 at the ADC:
// zeta = G R B hbar omega_c with G the linear power gain.
struct RfChain {
  double gain_db = 0.0;
  double n_add = 0.0;
  double r_ohm = 50.0;
  double bandwidth_hz = 0.0;
  double omega_c = 0.0;  // rad/s
  double zeta = 0.0;     // V^2 per quantum

  static RfChain from_gain(double gain_db, double n_add, double r_ohm,
                           double bandwidth_hz, double omega_c);
  static RfChain from_zeta(double zeta, double n_add, double r_ohm,
                           double bandwidth_hz, double omega_c);
  void validate() const;  // zeta tie within 1e-12 relative
};

// Unitless quadrature samples, row-major (X1, P1, X2, P2) per row. Voltages
// exist only at export time via sqrt(zeta).
struct QuadratureBatch {
  std::vector<double> samples;
  bool pumps_on = false;
  std::uint64_t seed = 0;

  std::size_t n() const { return samples.size() / 4; }
  double at(std::size_t row, int q) const {
    return samples[row * 4 + static_cast<std::size_t>(q)];
  }
};

struct CalibrationPoint {
  double temp_k = 0.0;
  double noise_density_v2hz = 0.0;  // measured N
  double sigma = 0.0;               // spread over repeats, reporting only
};

struct CmEstimate {
  CovMat4 cm;
  Mat4 se;  // per-element standard errors
  std::size_t n_on = 0;
  std::size_t n_off = 0;
};

struct CalibrationFit {
  double gain_db = 0.0;
  double n_add = 0.0;
  double gain_db_se = 0.0;
  double n_add_se = 0.0;
  double zeta = 0.0;
  double zeta_se = 0.0;
};

struct Histogram2D {
  int bins = 0;
  int q_first = 0, q_second = 0;
  double lo_first = 0.0, hi_first = 0.0;
  double lo_second = 0.0, hi_second = 0.0;
  std::size_t n_on = 0, n_off = 0;
  // per-sample-normalized difference counts, row-major: rows walk the first
  // quadrature's bins, columns the second's
  std::vector<double> diff;
};

// ---------------------------------------------------------------------------
// operations
// ---------------------------------------------------------------------------

// 1/2 coth(hbar omega / (2 k_B T)); the input-referred quantum+thermal noise
// of one channel. Returns exactly 0.5 at T = 0.
double half_coth(double omega, double temp_k);

// Draws n i.i.d. samples from the detected Gaussian. Pumps on: covariance is
// true_cm plus diag(n_add1, n_add1, n_add2, n_add2). Pumps off: the signal is
// vacuum, diag(n_add_i + 1/2) per channel. Deterministic for a fixed seed and
// independent of how generation is chunked.
QuadratureBatch sample_quadratures(const CovMat4& true_cm, const RfChain& ch1,
                                   const RfChain& ch2, std::size_t n,
                                   std::uint64_t seed, bool pumps_on);

// On/off moment subtraction: diagonal V_ii = <u_i^2>_on - <u_i^2>_off +
// half_coth(omega_i, T_i); off-diagonals use the pumps-on covariances alone.
// Standard errors ride along per element.
CmEstimate estimate_cm(const QuadratureBatch& on, const QuadratureBatch& off,
                       const std::array<double, 2>& temps_k,
                       const std::array<double, 2>& omegas);

// R(phi) on every sample's (X1, P1); channel 2 is copied bit-for-bit.
QuadratureBatch rotate_detector(const QuadratureBatch& batch, double phi);

// forward model N(T) = zeta (half_coth + n_add), V^2/Hz
double noise_density(double temp_k, const RfChain& chain);

// Linear least squares of N against x = half_coth(omega_c, T): slope zeta,
// intercept zeta n_add. Needs >= 3 points and a spread of x values. Standard
// errors come from the residual-based regression covariance.
CalibrationFit calibrate_chain(const std::vector<CalibrationPoint>& points,
                               double omega_c, double r_ohm, double bandwidth_hz);

// counts_on/n_on - counts_off/n_off over a bins x bins grid
Histogram2D difference_histogram(const QuadratureBatch& on, const QuadratureBatch& off,
                                 int q_first, int q_second, int bins,
                                 double lo_first, double hi_first,
                                 double lo_second, double hi_second);

// convenience: symmetric range at +-6 on-batch standard deviations
Histogram2D difference_histogram_auto(const QuadratureBatch& on,
                                      const QuadratureBatch& off, int q_first,
                                      int q_second, int bins = 64);

}  // namespace emsq
