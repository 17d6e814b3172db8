#include "emsq/lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "emsq/constants.hpp"
#include "emsq/errors.hpp"
#include "emsq/numerics.hpp"

namespace emsq {

namespace {

double zeta_of(double gain_db, double r_ohm, double bandwidth_hz, double omega_c) {
  return db_to_ratio(gain_db) * r_ohm * bandwidth_hz * hbar * omega_c;
}

}  // namespace

RfChain RfChain::from_gain(double gain_db, double n_add, double r_ohm,
                           double bandwidth_hz, double omega_c) {
  RfChain c;
  c.gain_db = gain_db;
  c.n_add = n_add;
  c.r_ohm = r_ohm;
  c.bandwidth_hz = bandwidth_hz;
  c.omega_c = omega_c;
  c.zeta = zeta_of(gain_db, r_ohm, bandwidth_hz, omega_c);
  c.validate();
  return c;
}

RfChain RfChain::from_zeta(double zeta, double n_add, double r_ohm,
                           double bandwidth_hz, double omega_c) {
  RfChain c;
  c.zeta = zeta;
  c.n_add = n_add;
  c.r_ohm = r_ohm;
  c.bandwidth_hz = bandwidth_hz;
  c.omega_c = omega_c;
  c.gain_db = ratio_to_db(zeta / (r_ohm * bandwidth_hz * hbar * omega_c));
  c.validate();
  return c;
}

void RfChain::validate() const {
  if (!(r_ohm > 0.0) || !(bandwidth_hz > 0.0) || !(omega_c > 0.0)) {
    throw Unphysical("chain constants must be positive");
  }
  if (!(n_add >= 0.0)) throw Unphysical("added noise must be >= 0");
  const double expected = zeta_of(gain_db, r_ohm, bandwidth_hz, omega_c);
  if (std::fabs(zeta - expected) > 1e-12 * std::fabs(expected)) {
    throw Unphysical("zeta disagrees with gain_db R B hbar omega_c");
  }
}

double half_coth(double omega, double temp_k) {
  if (!(omega > 0.0)) throw Unphysical("noise term needs a positive frequency");
  if (temp_k < 0.0) throw Unphysical("temperature must be >= 0");
  if (temp_k == 0.0) return 0.5;
  const double x = hbar * omega / (2.0 * k_boltzmann * temp_k);
  return 0.5 / std::tanh(x);
}

QuadratureBatch sample_quadratures(const CovMat4& true_cm, const RfChain& ch1,
                                   const RfChain& ch2, std::size_t n,
                                   std::uint64_t seed, bool pumps_on) {
  if (n < 2) throw BatchMismatch("need at least two samples");
  ch1.validate();
  ch2.validate();

  Mat4 detected;
  if (pumps_on) {
    true_cm.validate();
    detected = true_cm.v;
    detected(0, 0) += ch1.n_add;
    detected(1, 1) += ch1.n_add;
    detected(2, 2) += ch2.n_add;
    detected(3, 3) += ch2.n_add;
  } else {
    detected = Mat4::diagonal(ch1.n_add + 0.5, ch1.n_add + 0.5,
                              ch2.n_add + 0.5, ch2.n_add + 0.5);
  }
  const Mat4 l = cholesky4(detected);

  QuadratureBatch batch;
  batch.pumps_on = pumps_on;
  batch.seed = seed;
  batch.samples.resize(n * 4);

  // fixed-size chunks with derived seeds; the stream for chunk k never
  // depends on how many chunks ran before it
  const std::size_t n_chunks = (n + rng_chunk_size - 1) / rng_chunk_size;
  for (std::size_t c = 0; c < n_chunks; ++c) {
    GaussianStream g(chunk_seed(seed, c));
    const std::size_t begin = c * rng_chunk_size;
    const std::size_t end = std::min(n, begin + rng_chunk_size);
    for (std::size_t row = begin; row < end; ++row) {
      const double z0 = g.next(), z1 = g.next(), z2 = g.next(), z3 = g.next();
      double* out = &batch.samples[row * 4];
      out[0] = l(0, 0) * z0;
      out[1] = l(1, 0) * z0 + l(1, 1) * z1;
      out[2] = l(2, 0) * z0 + l(2, 1) * z1 + l(2, 2) * z2;
      out[3] = l(3, 0) * z0 + l(3, 1) * z1 + l(3, 2) * z2 + l(3, 3) * z3;
    }
  }
  return batch;
}

namespace {

// mean-subtracted second moments, divisor n - 1
Mat4 sample_covariance(const QuadratureBatch& b) {
  const std::size_t n = b.n();
  double mean[4] = {0, 0, 0, 0};
  for (std::size_t r = 0; r < n; ++r) {
    for (int q = 0; q < 4; ++q) mean[q] += b.at(r, q);
  }
  for (double& m : mean) m /= static_cast<double>(n);

  Mat4 cov;
  for (std::size_t r = 0; r < n; ++r) {
    double d[4];
    for (int q = 0; q < 4; ++q) d[q] = b.at(r, q) - mean[q];
    for (int i = 0; i < 4; ++i) {
      for (int j = i; j < 4; ++j) cov(i, j) += d[i] * d[j];
    }
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      cov(i, j) /= static_cast<double>(n - 1);
      cov(j, i) = cov(i, j);
    }
  }
  return cov;
}

}  // namespace

CmEstimate estimate_cm(const QuadratureBatch& on, const QuadratureBatch& off,
                       const std::array<double, 2>& temps_k,
                       const std::array<double, 2>& omegas) {
  if (!on.pumps_on || off.pumps_on) {
    throw BatchMismatch("need one pumps-on and one pumps-off batch, in that order");
  }
  if (on.n() < 2 || off.n() < 2) throw BatchMismatch("batches are too small");

  const Mat4 cov_on = sample_covariance(on);
  const Mat4 cov_off = sample_covariance(off);
  const double fn_on = static_cast<double>(on.n());
  const double fn_off = static_cast<double>(off.n());
  const double rel_on = std::sqrt(2.0 / (fn_on - 1.0));
  const double rel_off = std::sqrt(2.0 / (fn_off - 1.0));

  CmEstimate est;
  est.n_on = on.n();
  est.n_off = off.n();
  for (int i = 0; i < 4; ++i) {
    const int ch = i / 2;
    const double quantum = half_coth(omegas[static_cast<std::size_t>(ch)],
                                     temps_k[static_cast<std::size_t>(ch)]);
    est.cm.v(i, i) = cov_on(i, i) - cov_off(i, i) + quantum;
    const double se_on = cov_on(i, i) * rel_on;
    const double se_off = cov_off(i, i) * rel_off;
    est.se(i, i) = std::sqrt(se_on * se_on + se_off * se_off);
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      est.cm.set_sym(i, j, cov_on(i, j));
      // Gaussian covariance estimator: var = (V_ii V_jj + V_ij^2)/(n - 1)
      const double se = std::sqrt(
          (cov_on(i, i) * cov_on(j, j) + cov_on(i, j) * cov_on(i, j)) / (fn_on - 1.0));
      est.se(i, j) = se;
      est.se(j, i) = se;
    }
  }
  return est;
}

QuadratureBatch rotate_detector(const QuadratureBatch& batch, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  QuadratureBatch out;
  out.pumps_on = batch.pumps_on;
  out.seed = batch.seed;
  out.samples.resize(batch.samples.size());
  const std::size_t n = batch.n();
  for (std::size_t r = 0; r < n; ++r) {
    const double x = batch.at(r, 0);
    const double p = batch.at(r, 1);
    double* o = &out.samples[r * 4];
    o[0] = c * x + s * p;
    o[1] = c * p - s * x;
    o[2] = batch.at(r, 2);
    o[3] = batch.at(r, 3);
  }
  return out;
}

double noise_density(double temp_k, const RfChain& chain) {
  chain.validate();
  return chain.zeta * (half_coth(chain.omega_c, temp_k) + chain.n_add);
}

CalibrationFit calibrate_chain(const std::vector<CalibrationPoint>& points,
                               double omega_c, double r_ohm, double bandwidth_hz) {
  const std::size_t m = points.size();
  if (m < 3) throw InsufficientPoints("calibration needs at least three points");

  std::vector<double> x(m), y(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(points[i].temp_k > 0.0)) throw Unphysical("calibration temperatures must be > 0");
    if (!(points[i].noise_density_v2hz > 0.0)) {
      throw Unphysical("calibration noise densities must be > 0");
    }
    x[i] = half_coth(omega_c, points[i].temp_k);
    y[i] = points[i].noise_density_v2hz;
  }

  double x_min = x[0], x_max = x[0];
  for (double v : x) {
    x_min = std::min(x_min, v);
    x_max = std::max(x_max, v);
  }
  if (x_max - x_min < 1e-12) {
    throw DegenerateDesign("all calibration abscissae coincide");
  }

  // ordinary least squares y = slope x + intercept
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double fm = static_cast<double>(m);
  const double det = fm * sxx - sx * sx;
  const double slope = (fm * sxy - sx * sy) / det;
  const double intercept = (sy * sxx - sx * sxy) / det;

  double rss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double resid = y[i] - (slope * x[i] + intercept);
    rss += resid * resid;
  }
  const double s2 = rss / (fm - 2.0);
  const double var_slope = s2 * fm / det;
  const double var_intercept = s2 * sxx / det;
  const double cov_si = -s2 * sx / det;

  if (!(slope > 0.0)) {
    throw DegenerateDesign("fitted gain is not positive; sweep does not constrain it");
  }

  CalibrationFit fit;
  fit.zeta = slope;
  fit.zeta_se = std::sqrt(std::max(var_slope, 0.0));
  fit.gain_db = ratio_to_db(slope / (r_ohm * bandwidth_hz * hbar * omega_c));
  // d(gain_db)/d(zeta) = 10 / (ln 10 zeta)
  fit.gain_db_se = 10.0 / std::log(10.0) * fit.zeta_se / slope;
  fit.n_add = intercept / slope;
  // delta method for the ratio, covariance term included
  const double var_ratio =
      var_intercept / (slope * slope) +
      intercept * intercept * var_slope / (slope * slope * slope * slope) -
      2.0 * intercept * cov_si / (slope * slope * slope);
  fit.n_add_se = std::sqrt(std::max(var_ratio, 0.0));
  return fit;
}

Histogram2D difference_histogram(const QuadratureBatch& on, const QuadratureBatch& off,
                                 int q_first, int q_second, int bins,
                                 double lo_first, double hi_first,
                                 double lo_second, double hi_second) {
  if (bins < 1) throw EmptyRange("need at least one bin");
  if (!(hi_first > lo_first) || !(hi_second > lo_second)) {
    throw EmptyRange("histogram range has no width");
  }
  if (on.n() == 0 || off.n() == 0) throw BatchMismatch("empty batch");

  Histogram2D h;
  h.bins = bins;
  h.q_first = q_first;
  h.q_second = q_second;
  h.lo_first = lo_first;
  h.hi_first = hi_first;
  h.lo_second = lo_second;
  h.hi_second = hi_second;
  h.n_on = on.n();
  h.n_off = off.n();
  h.diff.assign(static_cast<std::size_t>(bins) * static_cast<std::size_t>(bins), 0.0);

  const double sx = bins / (hi_first - lo_first);
  const double sy = bins / (hi_second - lo_second);
  auto accumulate = [&](const QuadratureBatch& b, double weight) {
    const std::size_t n = b.n();
    for (std::size_t r = 0; r < n; ++r) {
      const double u = b.at(r, q_first);
      const double w = b.at(r, q_second);
      const int bi = static_cast<int>(std::floor((u - lo_first) * sx));
      const int bj = static_cast<int>(std::floor((w - lo_second) * sy));
      if (bi < 0 || bi >= bins || bj < 0 || bj >= bins) continue;
      h.diff[static_cast<std::size_t>(bi) * static_cast<std::size_t>(bins) +
             static_cast<std::size_t>(bj)] += weight;
    }
  };
  accumulate(on, 1.0 / static_cast<double>(on.n()));
  accumulate(off, -1.0 / static_cast<double>(off.n()));
  return h;
}

Histogram2D difference_histogram_auto(const QuadratureBatch& on,
                                      const QuadratureBatch& off, int q_first,
                                      int q_second, int bins) {
  if (on.n() < 2) throw BatchMismatch("on batch too small for a range estimate");
  double m2[2] = {0.0, 0.0};
  double mean[2] = {0.0, 0.0};
  const std::size_t n = on.n();
  for (std::size_t r = 0; r < n; ++r) {
    mean[0] += on.at(r, q_first);
    mean[1] += on.at(r, q_second);
  }
  mean[0] /= static_cast<double>(n);
  mean[1] /= static_cast<double>(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double d0 = on.at(r, q_first) - mean[0];
    const double d1 = on.at(r, q_second) - mean[1];
    m2[0] += d0 * d0;
    m2[1] += d1 * d1;
  }
  const double sd0 = std::sqrt(m2[0] / static_cast<double>(n - 1));
  const double sd1 = std::sqrt(m2[1] / static_cast<double>(n - 1));
  return difference_histogram(on, off, q_first, q_second, bins, -6.0 * sd0, 6.0 * sd0,
                              -6.0 * sd1, 6.0 * sd1);
}

}  // namespace emsq
