#pragma once

#include <complex>
#include <string>
#include <vector>

#include "emsq/gaussian.hpp"

namespace emsq {

// ---------------------------------------------------------------------------
// device description
// ---------------------------------------------------------------------------

struct MechanicalMode {
  double omega_m = 0.0;    // rad/s
  double gamma_m = 0.0;    // rad/s
  double t_bath_k = 0.0;   // K
  double n_bar_m = 0.0;

  // n_bar_m always equals the Bose occupation at (omega_m, t_bath_k); the two
  // factories keep that tie from either starting point.
  static MechanicalMode from_bath_temperature(double omega_m, double gamma_m, double t_bath_k);
  static MechanicalMode with_occupation(double omega_m, double gamma_m, double n_bar_m);

  void validate() const;
};

struct CavityMode {
  double omega_c = 0.0;    // rad/s
  double kappa = 0.0;      // total linewidth, rad/s
  double eta = 1.0;        // kappa_ex / kappa, in (0, 1]
  double g0 = 0.0;         // vacuum coupling, rad/s
  double n_bar_in = 0.0;   // internal-loss bath occupation
  double n_bar_ex = 0.0;   // input-port occupation

  double kappa_ex() const { return eta * kappa; }
  double kappa_in() const { return (1.0 - eta) * kappa; }

  void validate() const;
};

struct DriveState {
  double power_w = 0.0;
  double detuning = 0.0;   // rad/s; -omega_m on the blue side, +omega_m red
  double e_amp = 0.0;      // drive strength, rad/s
  double n_photons = 0.0;  // intracavity photons
  double g_eff = 0.0;      // g0 sqrt(n), rad/s
  double coop = 0.0;       // 4 g_eff^2 / (kappa gamma_m)
};

struct ScatterCoeffs {
  std::complex<double> a1, a12, a1m, a1in, a12in;
  std::complex<double> a2, a21, a2m, a2in, a21in;
  double omega = 0.0;  // offset from resonance, rad/s
};

struct StabilityReport {
  bool stable = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double c_tilde = 0.0;
  double gamma_eff = 0.0;  // gamma_m (1 + C2 - C1)
};

// one fully resolved operating point of the two-pump system
struct SystemPoint {
  double c1 = 0.0, c2 = 0.0;
  double eta1 = 1.0, eta2 = 1.0;
  double kappa1 = 0.0, kappa2 = 0.0;  // rad/s
  double gamma_m = 0.0;               // rad/s
  double n_m = 0.0;                   // mechanical bath occupation
  double n_t1 = 0.0, n_t2 = 0.0;      // pump-port occupations
  double n_in1 = 0.0, n_in2 = 0.0;    // internal-loss occupations
};

enum class FilterKind { rectangle, gaussian };

// everything the config file describes
struct DeviceParams {
  MechanicalMode mech;
  CavityMode cav1, cav2;
  double p_blue_dbm = 0.0;
  double p_red_dbm = 0.0;
  double bandwidth_hz = 100.0;
  FilterKind filter = FilterKind::rectangle;
  double pump_noise_a1 = 0.0;  // occupation per watt of red-pump power
  double pump_noise_a2 = 0.0;

  DriveState blue_drive() const;  // cav1, detuning -omega_m
  DriveState red_drive() const;   // cav2, detuning +omega_m
  // operating point at the configured powers; pump-noise coefficients fold
  // red-pump power into the loss-bath occupations
  SystemPoint operating_point() const;
};

// ---------------------------------------------------------------------------
// operations
// ---------------------------------------------------------------------------

// Bose-Einstein occupation; 0 at zero temperature.
double thermal_occupation(double omega, double temp_k);

// temperature at which the Bose occupation equals n_bar
double bath_temperature_for(double omega, double n_bar);

// drive chain E -> n -> G = g0 sqrt(n) -> C = 4G^2/(kappa gamma_m), with
// E = sqrt(P kappa_ex / (hbar omega_drive)) and n = E^2/(kappa^2 + Delta^2)
DriveState drive_to_cooperativity(double power_w, const CavityMode& cavity,
                                  const MechanicalMode& mech, double drive_freq,
                                  double detuning);

// kappa2 C2 - kappa1 C1 > C~ max{kappa2 - kappa1, (k1^2 - k2^2)/(2 gamma_m + k1 + k2)}
// with C~ = C2/(1 + k1/k2) + C1/(1 + k2/k1); gamma_eff > 0 is required as well
StabilityReport stability_check(double c1, double c2, double kappa1, double kappa2,
                                double gamma_m);

// Input-output coefficients at offset omega from resonance. Mode 1 rides the
// blue pump (amplifier side), mode 2 the red (beam-splitter side). Throws
// DenominatorSingular when the common denominator vanishes.
ScatterCoeffs scattering_coefficients(double omega, const SystemPoint& s);

// spectral covariance density at offset omega; normal-form pattern with
// V11 = sum_k |a1k|^2 (n_k + 1/2) over the five input lines, V13 from the
// same-line cross terms
CovMat4 output_spectral_cm(double omega, const SystemPoint& s);

// band average of the spectral density against a unit-L2 filter centered on
// resonance; rectangle of full width 2 pi B, or a Gaussian of FWHM 2 pi B
CovMat4 filtered_output_cm(const SystemPoint& s, double bandwidth_hz, FilterKind kind);

struct SweepRow {
  double p_r_dbm = 0.0;
  double c2_minus_c1 = 0.0;
  double delta_epr = 0.0;
  double e_n = 0.0;
  double discord = 0.0;
  bool stable = false;
  std::string note;  // empty on success; reason when metrics are omitted
};

// one row per grid power; unstable rows carry the flag and no metrics
std::vector<SweepRow> power_sweep(const DeviceParams& dev,
                                  const std::vector<double>& p_r_dbm_grid);

// |g0| = beta (omega_c / 2 C_mod) |dC/dx| x_zpf
double coupling_from_geometry(double beta, double omega_c, double c_mod,
                              double dc_dx, double x_zpf);

// g0 scales with the vacuum-gap size as x0^(-1.5)
double gap_scaling(double g0_ref, double x0_ref, double x0);

}  // namespace emsq
