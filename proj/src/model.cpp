#include "emsq/model.hpp"

#include <cmath>
#include <complex>

#include "emsq/constants.hpp"
#include "emsq/errors.hpp"
#include "emsq/numerics.hpp"

namespace emsq {

namespace {

using cplx = std::complex<double>;

// |E|^2 = P kappa_ex / (hbar omega_drive), photons/s^2
double drive_amp_sq(double power_w, double kappa_ex, double drive_freq) {
  return power_w * kappa_ex / (hbar * drive_freq);
}

}  // namespace

// ---------------------------------------------------------------------------
// device description
// ---------------------------------------------------------------------------

MechanicalMode MechanicalMode::from_bath_temperature(double omega_m, double gamma_m,
                                                     double t_bath_k) {
  MechanicalMode m;
  m.omega_m = omega_m;
  m.gamma_m = gamma_m;
  m.t_bath_k = t_bath_k;
  m.n_bar_m = thermal_occupation(omega_m, t_bath_k);
  m.validate();
  return m;
}

MechanicalMode MechanicalMode::with_occupation(double omega_m, double gamma_m,
                                               double n_bar_m) {
  MechanicalMode m;
  m.omega_m = omega_m;
  m.gamma_m = gamma_m;
  m.n_bar_m = n_bar_m;
  m.t_bath_k = bath_temperature_for(omega_m, n_bar_m);
  m.validate();
  return m;
}

void MechanicalMode::validate() const {
  if (!(omega_m > 0.0)) throw Unphysical("mechanical frequency must be positive");
  if (!(gamma_m > 0.0)) throw Unphysical("mechanical damping must be positive");
  if (!(n_bar_m >= 0.0)) throw Unphysical("bath occupation must be >= 0");
  if (t_bath_k > 0.0) {
    const double bose = thermal_occupation(omega_m, t_bath_k);
    if (std::fabs(n_bar_m - bose) > 1e-12 * std::max(1.0, std::fabs(n_bar_m))) {
      throw Unphysical("stored occupation disagrees with the bath temperature");
    }
  }
}

void CavityMode::validate() const {
  if (!(omega_c > 0.0)) throw Unphysical("cavity frequency must be positive");
  if (!(kappa > 0.0)) throw Unphysical("cavity linewidth must be positive");
  if (!(eta > 0.0) || eta > 1.0) throw Unphysical("coupling ratio must lie in (0, 1]");
  if (!(g0 >= 0.0)) throw Unphysical("vacuum coupling must be >= 0");
  if (!(n_bar_in >= 0.0) || !(n_bar_ex >= 0.0)) {
    throw Unphysical("cavity bath occupations must be >= 0");
  }
}

DriveState DeviceParams::blue_drive() const {
  return drive_to_cooperativity(dbm_to_watt(p_blue_dbm), cav1, mech,
                                cav1.omega_c + mech.omega_m, -mech.omega_m);
}

DriveState DeviceParams::red_drive() const {
  return drive_to_cooperativity(dbm_to_watt(p_red_dbm), cav2, mech,
                                cav2.omega_c - mech.omega_m, +mech.omega_m);
}

SystemPoint DeviceParams::operating_point() const {
  SystemPoint s;
  s.c1 = blue_drive().coop;
  s.c2 = red_drive().coop;
  s.eta1 = cav1.eta;
  s.eta2 = cav2.eta;
  s.kappa1 = cav1.kappa;
  s.kappa2 = cav2.kappa;
  s.gamma_m = mech.gamma_m;
  s.n_m = mech.n_bar_m;
  s.n_t1 = cav1.n_bar_ex;
  s.n_t2 = cav2.n_bar_ex;
  const double p_red_w = dbm_to_watt(p_red_dbm);
  s.n_in1 = cav1.n_bar_in + pump_noise_a1 * p_red_w;
  s.n_in2 = cav2.n_bar_in + pump_noise_a2 * p_red_w;
  return s;
}

// ---------------------------------------------------------------------------
// operations
// ---------------------------------------------------------------------------

double thermal_occupation(double omega, double temp_k) {
  if (!(omega > 0.0)) throw Unphysical("occupation needs a positive frequency");
  if (temp_k < 0.0) throw Unphysical("temperature must be >= 0");
  if (temp_k == 0.0) return 0.0;
  const double x = hbar * omega / (k_boltzmann * temp_k);
  return 1.0 / std::expm1(x);
}

double bath_temperature_for(double omega, double n_bar) {
  if (!(omega > 0.0)) throw Unphysical("temperature inversion needs a positive frequency");
  if (n_bar < 0.0) throw Unphysical("occupation must be >= 0");
  if (n_bar == 0.0) return 0.0;
  return hbar * omega / (k_boltzmann * std::log1p(1.0 / n_bar));
}

DriveState drive_to_cooperativity(double power_w, const CavityMode& cavity,
                                  const MechanicalMode& mech, double drive_freq,
                                  double detuning) {
  cavity.validate();
  if (power_w < 0.0) throw Unphysical("drive power must be >= 0");

  DriveState d;
  d.power_w = power_w;
  d.detuning = detuning;
  const double e_sq = drive_amp_sq(power_w, cavity.kappa_ex(), drive_freq);
  d.e_amp = std::sqrt(e_sq);
  d.n_photons = e_sq / (cavity.kappa * cavity.kappa + detuning * detuning);
  d.g_eff = cavity.g0 * std::sqrt(d.n_photons);
  d.coop = 4.0 * d.g_eff * d.g_eff / (cavity.kappa * mech.gamma_m);
  return d;
}

StabilityReport stability_check(double c1, double c2, double kappa1, double kappa2,
                                double gamma_m) {
  if (!(kappa1 > 0.0) || !(kappa2 > 0.0) || !(gamma_m > 0.0)) {
    throw Unphysical("stability check needs positive rates");
  }
  StabilityReport r;
  r.lhs = kappa2 * c2 - kappa1 * c1;
  r.c_tilde = c2 / (1.0 + kappa1 / kappa2) + c1 / (1.0 + kappa2 / kappa1);
  const double asym = std::max(
      kappa2 - kappa1,
      (kappa1 * kappa1 - kappa2 * kappa2) / (2.0 * gamma_m + kappa1 + kappa2));
  r.rhs = r.c_tilde * asym;
  r.gamma_eff = gamma_m * (1.0 + c2 - c1);
  r.stable = (r.lhs > r.rhs) && (r.gamma_eff > 0.0);
  return r;
}

ScatterCoeffs scattering_coefficients(double omega, const SystemPoint& s) {
  const cplx i(0.0, 1.0);
  const cplx w1 = 1.0 - i * (omega / s.kappa1);
  const cplx w2 = 1.0 - i * (omega / s.kappa2);
  const cplx wb = 1.0 - i * (omega / s.gamma_m);
  const cplx den = w1 * s.c2 + w2 * (w1 * wb - s.c1);
  if (std::abs(den) <= 1e-12) {
    throw DenominatorSingular("scattering denominator vanished");
  }

  // mode-1 branch amplifies (blue pump), mode-2 converts (red pump)
  const cplx common1 = (w2 * wb + s.c2) / den;
  const cplx common2 = (w1 * wb - s.c1) / den;
  const double cc = std::sqrt(s.c1 * s.c2);

  ScatterCoeffs a;
  a.omega = omega;
  a.a1 = -1.0 + 2.0 * s.eta1 * common1;
  a.a12 = 2.0 * std::sqrt(s.eta1 * s.eta2) * cc / den;
  a.a1m = 2.0 * i * std::sqrt(s.eta1 * s.c1) * w2 / den;
  a.a1in = 2.0 * std::sqrt(s.eta1 * (1.0 - s.eta1)) * common1;
  a.a12in = 2.0 * std::sqrt(s.eta1 * (1.0 - s.eta2)) * cc / den;
  a.a2 = -1.0 + 2.0 * s.eta2 * common2;
  a.a21 = -a.a12;
  a.a2m = -2.0 * i * std::sqrt(s.eta2 * s.c2) * w1 / den;
  a.a2in = 2.0 * std::sqrt(s.eta2 * (1.0 - s.eta2)) * common2;
  a.a21in = -2.0 * std::sqrt(s.eta2 * (1.0 - s.eta1)) * cc / den;
  return a;
}

CovMat4 output_spectral_cm(double omega, const SystemPoint& s) {
  const ScatterCoeffs a = scattering_coefficients(omega, s);
  const double wm = s.n_m + 0.5;
  const double wt1 = s.n_t1 + 0.5;
  const double wt2 = s.n_t2 + 0.5;
  const double wi1 = s.n_in1 + 0.5;
  const double wi2 = s.n_in2 + 0.5;

  const double v11 = std::norm(a.a1) * wt1 + std::norm(a.a12) * wt2 +
                     std::norm(a.a1m) * wm + std::norm(a.a1in) * wi1 +
                     std::norm(a.a12in) * wi2;
  const double v33 = std::norm(a.a2) * wt2 + std::norm(a.a21) * wt1 +
                     std::norm(a.a2m) * wm + std::norm(a.a2in) * wi2 +
                     std::norm(a.a21in) * wi1;

  // Channel 2 is phase-flipped (d2 -> -d2) before quadratures are formed,
  // which puts the squeezing into (X1 - X2, P1 + P2) and makes V13 positive.
  // The flip is the leading minus sign. Each term pairs the two coefficients
  // that ride the same input line.
  const double v13 = -(std::real(a.a1 * std::conj(a.a21)) * wt1 +
                       std::real(a.a12 * std::conj(a.a2)) * wt2 +
                       std::real(a.a1m * std::conj(a.a2m)) * wm +
                       std::real(a.a1in * std::conj(a.a21in)) * wi1 +
                       std::real(a.a12in * std::conj(a.a2in)) * wi2);

  return CovMat4::from_normal_form(v11, v33, v13);
}

namespace {

// the density is real and even in omega; the band average is built on that,
// so it is spot-checked here before halving the domain
void assert_even_density(const SystemPoint& s, double upper) {
  for (int k = 1; k <= 4; ++k) {
    const double om = upper * k / 4.0;
    const CovMat4 p = output_spectral_cm(om, s);
    const CovMat4 m = output_spectral_cm(-om, s);
    for (int idx : {0, 2}) {
      const double scale = std::max(1.0, std::fabs(p(idx, idx)));
      if (std::fabs(p(idx, idx) - m(idx, idx)) > 1e-12 * scale) {
        throw NumericallyIllConditioned("spectral density lost its evenness");
      }
    }
    const double scale = std::max(1.0, std::fabs(p(0, 2)));
    if (std::fabs(p(0, 2) - m(0, 2)) > 1e-12 * scale) {
      throw NumericallyIllConditioned("spectral density lost its evenness");
    }
  }
}

}  // namespace

CovMat4 filtered_output_cm(const SystemPoint& s, double bandwidth_hz, FilterKind kind) {
  if (!(bandwidth_hz > 0.0)) throw Unphysical("filter bandwidth must be positive");

  const double half_width = pi * bandwidth_hz;  // rectangle: full width 2 pi B
  double upper = half_width;
  double sigma = 0.0;
  if (kind == FilterKind::gaussian) {
    // |f|^2 has FWHM 2 pi B
    sigma = two_pi * bandwidth_hz / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    const double gamma_eff = s.gamma_m * (1.0 + s.c2 - s.c1);
    upper = std::max(8.0 * sigma, 20.0 * std::max(gamma_eff, 0.0));
  }
  assert_even_density(s, upper);

  std::array<double, 3> avg{};
  if (kind == FilterKind::rectangle) {
    // |f|^2 = 1/(2 pi B) on the support; even integrand folded onto [0, u]
    auto f = [&s](double om) -> std::array<double, 3> {
      const CovMat4 v = output_spectral_cm(om, s);
      return {v(0, 0), v(2, 2), v(0, 2)};
    };
    const auto integral = adaptive_simpson<3>(f, 0.0, upper, 1e-9);
    for (std::size_t i = 0; i < 3; ++i) avg[i] = integral[i] / half_width;
  } else {
    const double norm = 1.0 / (sigma * std::sqrt(two_pi));
    auto f = [&s, sigma, norm](double om) -> std::array<double, 3> {
      const CovMat4 v = output_spectral_cm(om, s);
      const double g = norm * std::exp(-0.5 * om * om / (sigma * sigma));
      return {v(0, 0) * g, v(2, 2) * g, v(0, 2) * g};
    };
    const auto integral = adaptive_simpson<3>(f, 0.0, upper, 1e-9);
    for (std::size_t i = 0; i < 3; ++i) avg[i] = 2.0 * integral[i];
  }
  return CovMat4::from_normal_form(avg[0], avg[1], avg[2]);
}

std::vector<SweepRow> power_sweep(const DeviceParams& dev,
                                  const std::vector<double>& p_r_dbm_grid) {
  const SystemPoint base = dev.operating_point();
  std::vector<SweepRow> rows;
  rows.reserve(p_r_dbm_grid.size());

  for (double p_dbm : p_r_dbm_grid) {
    SweepRow row;
    row.p_r_dbm = p_dbm;
    const double p_w = dbm_to_watt(p_dbm);

    SystemPoint s = base;
    s.c2 = drive_to_cooperativity(p_w, dev.cav2, dev.mech,
                                  dev.cav2.omega_c - dev.mech.omega_m,
                                  dev.mech.omega_m)
               .coop;
    s.n_in1 = dev.cav1.n_bar_in + dev.pump_noise_a1 * p_w;
    s.n_in2 = dev.cav2.n_bar_in + dev.pump_noise_a2 * p_w;
    row.c2_minus_c1 = s.c2 - s.c1;

    const StabilityReport st = stability_check(s.c1, s.c2, s.kappa1, s.kappa2, s.gamma_m);
    row.stable = st.stable;
    if (!st.stable) {
      row.note = "unstable";
      rows.push_back(row);
      continue;
    }
    try {
      const CovMat4 cm = filtered_output_cm(s, dev.bandwidth_hz, dev.filter);
      row.delta_epr = epr_duan(cm, 0.0).delta_epr;
      row.e_n = negativity(cm).second;
      row.discord = quantum_discord(cm);
    } catch (const Error& e) {
      row.note = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

double coupling_from_geometry(double beta, double omega_c, double c_mod,
                              double dc_dx, double x_zpf) {
  if (!(beta > 0.0) || !(omega_c > 0.0) || !(c_mod > 0.0) || !(x_zpf > 0.0)) {
    throw Unphysical("coupling formula needs positive magnitudes");
  }
  return beta * (omega_c / (2.0 * c_mod)) * std::fabs(dc_dx) * x_zpf;
}

double gap_scaling(double g0_ref, double x0_ref, double x0) {
  if (!(g0_ref > 0.0) || !(x0_ref > 0.0) || !(x0 > 0.0)) {
    throw Unphysical("gap scaling needs positive magnitudes");
  }
  return g0_ref * std::pow(x0 / x0_ref, -1.5);
}

}  // namespace emsq
