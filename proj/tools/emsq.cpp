// emsq: command-line front end for the electromechanical squeezer toolkit.
//
// Subcommands: metrics, sweep, angle, experiment, calibrate. Exit codes are a
// stable contract: 0 success, 1 usage or parse failure, 2 physics or domain
// failure, 3 numeric failure.

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "emsq/constants.hpp"
#include "emsq/errors.hpp"
#include "emsq/gaussian.hpp"
#include "emsq/io.hpp"
#include "emsq/lab.hpp"
#include "emsq/model.hpp"
#include "emsq/numerics.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace emsq;

namespace {

// ---------------------------------------------------------------------------
// shared plumbing
// ---------------------------------------------------------------------------

struct GlobalOpts {
  std::string config;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
  }
}

std::string hex64(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

json cm_json_value(const CovMat4& v) {
  json rows = json::array();
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int k = 0; k < 4; ++k) row.push_back(v(i, k));
    rows.push_back(row);
  }
  return rows;
}

json mat_json_value(const Mat4& m) {
  json rows = json::array();
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int k = 0; k < 4; ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

json report_json(const EntanglementReport& r, double phi_opt) {
  return json{{"delta_epr", r.delta_epr},
              {"squeezing_db_x", r.squeezing_db_x},
              {"squeezing_db_p", r.squeezing_db_p},
              {"zeta_minus", r.zeta_minus},
              {"e_n", r.e_n},
              {"discord", r.discord},
              {"e_f", r.e_f},
              {"nu_minus", r.nu_minus},
              {"nu_plus", r.nu_plus},
              {"phi_opt_rad", phi_opt}};
}

// stable device config -> filtered output-field covariance matrix
CovMat4 cm_from_config(const DeviceParams& dev) {
  const SystemPoint op = dev.operating_point();
  const StabilityReport stab =
      stability_check(op.c1, op.c2, op.kappa1, op.kappa2, op.gamma_m);
  if (!stab.stable) {
    json reason{{"error", "unstable operating point"},
                {"lhs", stab.lhs},
                {"rhs", stab.rhs},
                {"gamma_eff_hz", rad_to_hz(stab.gamma_eff)}};
    std::cerr << reason.dump() << "\n";
    throw Unphysical("unstable operating point");
  }
  return filtered_output_cm(op, dev.bandwidth_hz, dev.filter);
}

// ---------------------------------------------------------------------------
// metrics
// ---------------------------------------------------------------------------

int run_metrics(const GlobalOpts& g, const std::string& cm_path) {
  CovMat4 cm = CovMat4::vacuum();
  double rate_bandwidth_hz = 0.0;
  bool have_rate = false;

  if (!cm_path.empty()) {
    cm = load_cm(cm_path);
  } else if (!g.config.empty()) {
    const DeviceParams dev = load_device_config(g.config);
    const SystemPoint op = dev.operating_point();
    cm = cm_from_config(dev);
    rate_bandwidth_hz = rad_to_hz(op.gamma_m * (1.0 + op.c2 - op.c1));
    have_rate = true;
  } else {
    std::cerr << "metrics needs --cm or --config\n";
    return 1;
  }

  try {
    cm.validate();
  } catch (const Unphysical& e) {
    throw Unphysical(std::string("unphysical covariance: ") + e.what());
  }

  const EntanglementReport rep = full_report(cm);
  json j = report_json(rep, optimal_angle(cm));
  if (have_rate) {
    j["gamma_eff_hz"] = rate_bandwidth_hz;
    j["ebits_per_s"] = ebit_rate(rep.e_f, rate_bandwidth_hz);
  }

  if (g.format == "csv") {
    std::ostringstream head, vals;
    bool first = true;
    for (const auto& [key, val] : j.items()) {
      head << (first ? "" : ",") << key;
      vals << (first ? "" : ",") << format_double(val.get<double>());
      first = false;
    }
    emit(head.str() + "\n" + vals.str() + "\n", g.out);
  } else {
    emit(j.dump(2) + "\n", g.out);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

int run_sweep(const GlobalOpts& g, double from_dbm, double to_dbm, int points) {
  if (g.config.empty()) {
    std::cerr << "sweep needs --config\n";
    return 1;
  }
  if (points < 2 || !(to_dbm > from_dbm)) {
    std::cerr << "sweep grid must be monotone with at least 2 points\n";
    return 1;
  }
  const DeviceParams dev = load_device_config(g.config);

  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] =
        from_dbm + (to_dbm - from_dbm) * i / (points - 1);
  }
  const std::vector<SweepRow> rows = power_sweep(dev, grid);

  if (g.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      json o{{"p_r_dbm", r.p_r_dbm},
             {"c2_minus_c1", r.c2_minus_c1},
             {"stable", r.stable},
             {"note", r.note}};
      if (r.stable) {
        o["delta_epr"] = r.delta_epr;
        o["e_n"] = r.e_n;
        o["discord"] = r.discord;
      } else {
        o["delta_epr"] = nullptr;
        o["e_n"] = nullptr;
        o["discord"] = nullptr;
      }
      arr.push_back(o);
    }
    emit(arr.dump(2) + "\n", g.out);
    return 0;
  }

  std::ostringstream out;
  out << "# red-pump power sweep; metrics empty when the point is unstable\n";
  out << "p_r_dbm,c2_minus_c1,delta_epr,e_n,discord,stable,note\n";
  for (const auto& r : rows) {
    out << format_double(r.p_r_dbm) << ',' << format_double(r.c2_minus_c1) << ',';
    if (r.stable) {
      out << format_double(r.delta_epr) << ',' << format_double(r.e_n) << ','
          << format_double(r.discord);
    } else {
      out << ",,";
    }
    out << ',' << (r.stable ? 1 : 0) << ',' << csv_escape(r.note) << '\n';
  }
  emit(out.str(), g.out);
  return 0;
}

// ---------------------------------------------------------------------------
// angle
// ---------------------------------------------------------------------------

int run_angle(const GlobalOpts& g, const std::string& cm_path, int n_angles) {
  if (n_angles < 2) {
    std::cerr << "angle sweep needs at least 2 angles\n";
    return 1;
  }
  CovMat4 cm = CovMat4::vacuum();
  if (!cm_path.empty()) {
    cm = load_cm(cm_path);
  } else if (!g.config.empty()) {
    cm = cm_from_config(load_device_config(g.config));
  } else {
    std::cerr << "angle needs --cm or --config\n";
    return 1;
  }
  cm.validate();

  if (g.format == "json") {
    json arr = json::array();
    for (int k = 0; k < n_angles; ++k) {
      const double phi = two_pi * k / n_angles;
      const DuanResult d = epr_duan(cm, phi);
      arr.push_back(json{{"phi_rad", phi},
                         {"x_minus_var", d.x_minus_var},
                         {"p_plus_var", d.p_plus_var},
                         {"delta_epr", d.delta_epr},
                         {"squeezing_db_x", d.squeezing_db_x}});
    }
    emit(arr.dump(2) + "\n", g.out);
    return 0;
  }

  std::ostringstream out;
  out << "# detector-angle sweep of the joint quadrature variances\n";
  out << "phi_rad,x_minus_var,p_plus_var,delta_epr,squeezing_db_x\n";
  for (int k = 0; k < n_angles; ++k) {
    const double phi = two_pi * k / n_angles;
    const DuanResult d = epr_duan(cm, phi);
    out << format_double(phi) << ',' << format_double(d.x_minus_var) << ','
        << format_double(d.p_plus_var) << ',' << format_double(d.delta_epr) << ','
        << format_double(d.squeezing_db_x) << '\n';
  }
  emit(out.str(), g.out);
  return 0;
}

// ---------------------------------------------------------------------------
// calibrate
// ---------------------------------------------------------------------------

struct CalOpts {
  std::string points_path;
  double gain_db = 83.20;
  double n_add = 8.3;
  double noise_pct = 1.0;
  int n_points = 24;
  double t_min_k = 0.007;
  double t_max_k = 6.0;
  double carrier_hz = 10.17e9;
  double r_ohm = 50.0;
  double bandwidth_hz = 100.0;
  std::string save_sweep;
};

std::vector<CalibrationPoint> synthesize_sweep(const CalOpts& c, std::uint64_t seed) {
  const RfChain truth = RfChain::from_gain(c.gain_db, c.n_add, c.r_ohm,
                                           c.bandwidth_hz, hz_to_rad(c.carrier_hz));
  GaussianStream z(chunk_seed(seed, 0xCA11));
  std::vector<CalibrationPoint> pts;
  const double lo = std::log(c.t_min_k), hi = std::log(c.t_max_k);
  for (int i = 0; i < c.n_points; ++i) {
    const double t = std::exp(lo + (hi - lo) * i / (c.n_points - 1));
    const double clean = noise_density(t, truth);
    const double frac = c.noise_pct / 100.0;
    pts.push_back({t, clean * (1.0 + frac * z.next()), clean * frac});
  }
  return pts;
}

int run_calibrate(const GlobalOpts& g, const CalOpts& c) {
  std::vector<CalibrationPoint> pts;
  bool synthetic = c.points_path.empty();
  if (synthetic) {
    if (c.n_points < 2 || !(c.t_max_k > c.t_min_k)) {
      std::cerr << "synthetic sweep needs a monotone temperature grid\n";
      return 1;
    }
    pts = synthesize_sweep(c, g.seed);
    if (!c.save_sweep.empty()) save_calibration_csv(pts, c.save_sweep);
  } else {
    pts = load_calibration_csv(c.points_path);
  }

  const CalibrationFit fit =
      calibrate_chain(pts, hz_to_rad(c.carrier_hz), c.r_ohm, c.bandwidth_hz);
  json j{{"gain_db", fit.gain_db},     {"gain_db_se", fit.gain_db_se},
         {"n_add", fit.n_add},         {"n_add_se", fit.n_add_se},
         {"zeta", fit.zeta},           {"zeta_se", fit.zeta_se},
         {"n_points", pts.size()}};
  if (synthetic) {
    j["true"] = json{{"gain_db", c.gain_db}, {"n_add", c.n_add}, {"seed", g.seed}};
  }
  emit(j.dump(2) + "\n", g.out);
  return 0;
}

// ---------------------------------------------------------------------------
// experiment
// ---------------------------------------------------------------------------

struct ExpOpts {
  std::size_t n_on = 216000;
  std::size_t n_off = 604800;
  double gain1_db = 83.20, nadd1 = 8.3;
  double gain2_db = 79.99, nadd2 = 11.5;
  double r_ohm = 50.0;
  int cal_points = 24;
  double cal_tmin_k = 0.007;
  double cal_tmax_k = 6.0;
  double cal_noise_pct = 1.0;
};

// a variance SE propagated through delta_epr at phi = 0, elements independent
double delta_epr_se(const Mat4& se) {
  const double sx = 0.25 * (se(0, 0) * se(0, 0) + se(2, 2) * se(2, 2)) +
                    se(0, 2) * se(0, 2);
  const double sp = 0.25 * (se(1, 1) * se(1, 1) + se(3, 3) * se(3, 3)) +
                    se(1, 3) * se(1, 3);
  return std::sqrt(sx + sp);
}

void save_histogram(const Histogram2D& h, const fs::path& csv_path,
                    const fs::path& meta_path) {
  std::ostringstream grid;
  for (int i = 0; i < h.bins; ++i) {
    for (int k = 0; k < h.bins; ++k) {
      grid << (k ? "," : "")
           << format_double(h.diff[static_cast<std::size_t>(i * h.bins + k)]);
    }
    grid << '\n';
  }
  write_text_file(csv_path.string(), grid.str());

  auto edges = [&h](double lo, double hi) {
    json e = json::array();
    for (int i = 0; i <= h.bins; ++i) e.push_back(lo + (hi - lo) * i / h.bins);
    return e;
  };
  json meta{{"bins", h.bins},
            {"pair", {h.q_first, h.q_second}},
            {"edges_first", edges(h.lo_first, h.hi_first)},
            {"edges_second", edges(h.lo_second, h.hi_second)},
            {"n_on", h.n_on},
            {"n_off", h.n_off}};
  write_text_file(meta_path.string(), meta.dump(2) + "\n");
}

int run_experiment(const GlobalOpts& g, const ExpOpts& e) {
  if (g.config.empty()) {
    std::cerr << "experiment needs --config\n";
    return 1;
  }
  const fs::path dir = g.out.empty() ? fs::path("emsq_run") : fs::path(g.out);
  fs::create_directories(dir);

  std::string current_stage = "setup";
  auto stage = [&current_stage](const char* name) { current_stage = name; };

  try {
    // model: device -> stability gate -> true output covariance
    stage("model");
    const std::string config_text = read_text_file(g.config);
    const DeviceParams dev = parse_device_config(config_text);
    const SystemPoint op = dev.operating_point();
    const CovMat4 true_cm = cm_from_config(dev);
    save_cm(true_cm, (dir / "true_cm.json").string());

    const RfChain ch1 = RfChain::from_gain(e.gain1_db, e.nadd1, e.r_ohm,
                                           dev.bandwidth_hz, dev.cav1.omega_c);
    const RfChain ch2 = RfChain::from_gain(e.gain2_db, e.nadd2, e.r_ohm,
                                           dev.bandwidth_hz, dev.cav2.omega_c);

    // calibration: synthetic 50-ohm temperature sweeps, one fit per channel
    stage("calibration");
    json cal_report;
    std::array<const RfChain*, 2> chains = {&ch1, &ch2};
    for (int ch = 0; ch < 2; ++ch) {
      CalOpts c;
      c.gain_db = chains[ch]->gain_db;
      c.n_add = chains[ch]->n_add;
      c.noise_pct = e.cal_noise_pct;
      c.n_points = e.cal_points;
      c.t_min_k = e.cal_tmin_k;
      c.t_max_k = e.cal_tmax_k;
      c.carrier_hz = rad_to_hz(chains[ch]->omega_c);
      c.r_ohm = e.r_ohm;
      c.bandwidth_hz = dev.bandwidth_hz;
      const auto pts = synthesize_sweep(c, chunk_seed(g.seed, 3 + ch));
      const std::string csv_name = "calibration_ch" + std::to_string(ch + 1) + ".csv";
      save_calibration_csv(pts, (dir / csv_name).string());
      const CalibrationFit fit =
          calibrate_chain(pts, chains[ch]->omega_c, e.r_ohm, dev.bandwidth_hz);
      cal_report["ch" + std::to_string(ch + 1)] =
          json{{"gain_db", fit.gain_db},       {"gain_db_se", fit.gain_db_se},
               {"n_add", fit.n_add},           {"n_add_se", fit.n_add_se},
               {"true_gain_db", c.gain_db},    {"true_n_add", c.n_add}};
    }
    write_text_file((dir / "calibration_report.json").string(),
                    cal_report.dump(2) + "\n");

    // sampling: pumps-on and pumps-off batches through the chains
    stage("sampling");
    const QuadratureBatch on =
        sample_quadratures(true_cm, ch1, ch2, e.n_on, chunk_seed(g.seed, 1), true);
    const QuadratureBatch off =
        sample_quadratures(true_cm, ch1, ch2, e.n_off, chunk_seed(g.seed, 2), false);
    save_batch(on, (dir / "batch_on.emsq").string());
    save_batch(off, (dir / "batch_off.emsq").string());

    // estimation: on/off moment subtraction with per-element standard errors
    stage("estimation");
    constexpr std::size_t kMinSamples = 1000;
    if (e.n_on < kMinSamples || e.n_off < kMinSamples) {
      throw InsufficientPoints(
          "estimation needs at least 1000 samples per batch for standard errors");
    }
    const CmEstimate est =
        estimate_cm(on, off, {0.007, 0.007}, {dev.cav1.omega_c, dev.cav2.omega_c});
    json est_json{{"v", cm_json_value(est.cm)},
                  {"convention", "half"},
                  {"se", mat_json_value(est.se)},
                  {"n_on", est.n_on},
                  {"n_off", est.n_off}};
    write_text_file((dir / "estimated_cm.json").string(), est_json.dump(2) + "\n");

    // metrics: on the model truth and on the estimate
    stage("metrics");
    const EntanglementReport true_rep = full_report(true_cm);
    const EntanglementReport est_rep = full_report(est.cm);
    json metrics{{"true", report_json(true_rep, optimal_angle(true_cm))},
                 {"estimated", report_json(est_rep, optimal_angle(est.cm))}};
    write_text_file((dir / "metrics.json").string(), metrics.dump(2) + "\n");

    // histograms: correlated quadrature pairs, on-off difference
    stage("histograms");
    save_histogram(difference_histogram_auto(on, off, 0, 2),
                   dir / "hist_x1x2.csv", dir / "hist_x1x2.json");
    save_histogram(difference_histogram_auto(on, off, 1, 3),
                   dir / "hist_p1p2.csv", dir / "hist_p1p2.json");

    // manifest: every input and the hash of every written artifact
    stage("manifest");
    json manifest;
    manifest["command"] = "experiment";
    manifest["inputs"] = json{
        {"config_path", g.config},
        {"config_hash", hex64(fnv1a64(config_text.data(), config_text.size()))},
        {"seed", g.seed},
        {"n_on", e.n_on},
        {"n_off", e.n_off},
        {"chains",
         {{"ch1", {{"gain_db", e.gain1_db}, {"n_add", e.nadd1}}},
          {"ch2", {{"gain_db", e.gain2_db}, {"n_add", e.nadd2}}},
          {"r_ohm", e.r_ohm}}},
        {"calibration",
         {{"points", e.cal_points},
          {"t_min_k", e.cal_tmin_k},
          {"t_max_k", e.cal_tmax_k},
          {"noise_pct", e.cal_noise_pct}}}};
    manifest["operating_point"] = json{{"c1", op.c1},
                                       {"c2", op.c2},
                                       {"gamma_eff_hz",
                                        rad_to_hz(op.gamma_m * (1.0 + op.c2 - op.c1))}};
    json outputs;
    for (const char* name :
         {"true_cm.json", "calibration_ch1.csv", "calibration_ch2.csv",
          "calibration_report.json", "batch_on.emsq", "batch_off.emsq",
          "estimated_cm.json", "metrics.json", "hist_x1x2.csv", "hist_x1x2.json",
          "hist_p1p2.csv", "hist_p1p2.json"}) {
      outputs[name] = hex64(fnv1a64_file((dir / name).string()));
    }
    manifest["outputs"] = outputs;
    manifest["summary"] = json{{"delta_epr_true", true_rep.delta_epr},
                               {"delta_epr_estimated", est_rep.delta_epr},
                               {"delta_epr_se", delta_epr_se(est.se)}};
    const std::string manifest_text = manifest.dump(2) + "\n";
    write_text_file((dir / "manifest.json").string(), manifest_text);

    std::cout << "wrote " << dir.string() << " (manifest "
              << hex64(fnv1a64(manifest_text.data(), manifest_text.size())) << ")\n";
    return 0;
  } catch (const Error&) {
    std::cerr << json{{"stage", current_stage}}.dump() << "\n";
    throw;
  }
}

// ---------------------------------------------------------------------------
// entry point
// ---------------------------------------------------------------------------

int classify(const Error& e) {
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const BatchMismatch*>(&e) ||
      dynamic_cast<const InsufficientPoints*>(&e) ||
      dynamic_cast<const EmptyRange*>(&e)) {
    return 1;
  }
  if (dynamic_cast<const Unphysical*>(&e) || dynamic_cast<const NotNormalForm*>(&e) ||
      dynamic_cast<const DegenerateState*>(&e) ||
      dynamic_cast<const DenominatorSingular*>(&e) ||
      dynamic_cast<const DegenerateDesign*>(&e)) {
    return 2;
  }
  return 3;  // IntegrationFailure, CholeskyFailure, ill-conditioning, singular CM
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"electromechanical squeezer: model, virtual lab, and analysis"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--config", g.config, "device config file")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "RNG seed");
  app.add_option("--out", g.out, "output file (or directory for experiment)");
  app.add_option("--format", g.format, "table format")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* metrics = app.add_subcommand("metrics", "entanglement metrics of one state");
  std::string cm_path;
  metrics->add_option("--cm", cm_path, "covariance JSON file")
      ->check(CLI::ExistingFile);

  auto* sweep = app.add_subcommand("sweep", "metrics across a red-pump power grid");
  double from_dbm = -90.0, to_dbm = -76.0;
  int points = 29;
  sweep->add_option("--from", from_dbm, "grid start, dBm");
  sweep->add_option("--to", to_dbm, "grid end, dBm");
  sweep->add_option("--points", points, "grid size");

  auto* angle = app.add_subcommand("angle", "joint variances vs detector angle");
  std::string angle_cm_path;
  int n_angles = 360;
  angle->add_option("--cm", angle_cm_path, "covariance JSON file")
      ->check(CLI::ExistingFile);
  angle->add_option("--angles", n_angles, "number of angles over [0, 2pi)");

  auto* experiment =
      app.add_subcommand("experiment", "full synthetic pipeline into a directory");
  ExpOpts e;
  experiment->add_option("--n-on", e.n_on, "pumps-on sample count");
  experiment->add_option("--n-off", e.n_off, "pumps-off sample count");
  experiment->add_option("--gain1-db", e.gain1_db, "channel-1 chain gain, dB");
  experiment->add_option("--nadd1", e.nadd1, "channel-1 added noise photons");
  experiment->add_option("--gain2-db", e.gain2_db, "channel-2 chain gain, dB");
  experiment->add_option("--nadd2", e.nadd2, "channel-2 added noise photons");
  experiment->add_option("--cal-points", e.cal_points, "calibration temperatures");
  experiment->add_option("--cal-noise-pct", e.cal_noise_pct,
                         "calibration noise, percent");

  auto* calibrate =
      app.add_subcommand("calibrate", "fit chain gain and added noise from a sweep");
  CalOpts c;
  calibrate->add_option("--points", c.points_path, "calibration CSV")
      ->check(CLI::ExistingFile);
  calibrate->add_option("--gain-db", c.gain_db, "synthetic true gain, dB");
  calibrate->add_option("--n-add", c.n_add, "synthetic true added noise");
  calibrate->add_option("--noise-pct", c.noise_pct, "synthetic noise, percent");
  calibrate->add_option("--n-points", c.n_points, "synthetic sweep size");
  calibrate->add_option("--t-min-k", c.t_min_k, "sweep start, K");
  calibrate->add_option("--t-max-k", c.t_max_k, "sweep end, K");
  calibrate->add_option("--carrier-hz", c.carrier_hz, "carrier frequency, Hz");
  calibrate->add_option("--r-ohm", c.r_ohm, "input impedance, ohm");
  calibrate->add_option("--bandwidth-hz", c.bandwidth_hz, "detection bandwidth, Hz");
  calibrate->add_option("--save-sweep", c.save_sweep, "write the synthetic CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int rc = app.exit(ex);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (metrics->parsed()) return run_metrics(g, cm_path);
    if (sweep->parsed()) return run_sweep(g, from_dbm, to_dbm, points);
    if (angle->parsed()) return run_angle(g, angle_cm_path, n_angles);
    if (experiment->parsed()) return run_experiment(g, e);
    if (calibrate->parsed()) return run_calibrate(g, c);
  } catch (const Error& ex) {
    const int code = classify(ex);
    std::cerr << json{{"error", ex.what()}, {"exit", code}}.dump() << "\n";
    return code;
  } catch (const std::exception& ex) {
    std::cerr << json{{"error", ex.what()}, {"exit", 3}}.dump() << "\n";
    return 3;
  }
  return 0;
}
