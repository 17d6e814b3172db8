#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "emsq/constants.hpp"
#include "emsq/errors.hpp"
#include "emsq/gaussian.hpp"
#include "emsq/io.hpp"
#include "emsq/lab.hpp"
#include "emsq/model.hpp"

using namespace emsq;
namespace fs = std::filesystem;

namespace {

// scratch path that will not collide between test cases
std::string tmp_path(const std::string& stem) {
  static int counter = 0;
  return (fs::temp_directory_path() / (stem + "_" + std::to_string(counter++))).string();
}

std::string minimal_config() {
  return "omega_m_hz = 2.81e6\n"
         "gamma_m_hz = 6.0\n"
         "omega_c1_hz = 10.17e9\n"
         "kappa1_hz = 0.52e6\n"
         "eta1 = 0.76\n"
         "g01_hz = 152\n"
         "omega_c2_hz = 12.13e9\n"
         "kappa2_hz = 0.48e6\n"
         "eta2 = 0.67\n"
         "g02_hz = 170\n"
         "p_blue_dbm = -87.1\n"
         "p_red_dbm = -84.4\n";
}

}  // namespace

TEST_CASE("covariance JSON round trips bit for bit") {
  const CovMat4 messy = rotate_mode1_cm(CovMat4::from_normal_form(12.83, 13.89, 13.13), 0.7123);
  const CovMat4 back = cm_from_json(cm_to_json(messy));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(back(i, j) == messy(i, j));
    }
  }

  const std::string path = tmp_path("cm") + ".json";
  save_cm(messy, path);
  const CovMat4 loaded = load_cm(path);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(loaded(i, j) == messy(i, j));
    }
  }
  fs::remove(path);
}

TEST_CASE("covariance JSON rejects malformed input") {
  const std::string good = cm_to_json(CovMat4::vacuum());

  SUBCASE("wrong convention") {
    std::string t = good;
    const auto pos = t.find("\"half\"");
    t.replace(pos, 6, "\"full\"");
    CHECK_THROWS_AS(cm_from_json(t), ParseError);
  }
  SUBCASE("not json at all") {
    CHECK_THROWS_AS(cm_from_json("covariance: nope"), ParseError);
  }
  SUBCASE("missing v") {
    CHECK_THROWS_AS(cm_from_json("{\"convention\": \"half\"}"), ParseError);
  }
  SUBCASE("wrong shape") {
    CHECK_THROWS_AS(
        cm_from_json("{\"convention\": \"half\", \"v\": [[1,0,0],[0,1,0],[0,0,1]]}"),
        ParseError);
  }
  SUBCASE("non-numeric cell") {
    CHECK_THROWS_AS(
        cm_from_json("{\"convention\": \"half\", \"v\": [[\"a\",0,0,0],[0,1,0,0],"
                     "[0,0,1,0],[0,0,0,1]]}"),
        ParseError);
  }
  SUBCASE("asymmetric beyond tolerance") {
    CHECK_THROWS_AS(
        cm_from_json("{\"convention\": \"half\", \"v\": [[1,0.01,0,0],[0,1,0,0],"
                     "[0,0,1,0],[0,0,0,1]]}"),
        ParseError);
  }
}

TEST_CASE("shipped device config parses to the frozen parameter set") {
  const char* root = std::getenv("EMSQ_ROOT");
  REQUIRE(root != nullptr);
  const DeviceParams dev =
      load_device_config(std::string(root) + "/configs/reference_device.cfg");

  CHECK(dev.mech.omega_m == doctest::Approx(hz_to_rad(2.81e6)).epsilon(1e-12));
  CHECK(dev.mech.gamma_m == doctest::Approx(hz_to_rad(6.0)).epsilon(1e-12));
  CHECK(dev.mech.n_bar_m == 60.0);
  // occupation 60 overrides the cryostat reading; the stored bath temperature
  // reproduces it
  CHECK(thermal_occupation(dev.mech.omega_m, dev.mech.t_bath_k) ==
        doctest::Approx(60.0).epsilon(1e-9));

  CHECK(dev.cav1.omega_c == doctest::Approx(hz_to_rad(10.17e9)).epsilon(1e-12));
  CHECK(dev.cav1.kappa == doctest::Approx(hz_to_rad(0.52e6)).epsilon(1e-12));
  CHECK(dev.cav1.eta == 0.76);
  CHECK(dev.cav1.g0 == doctest::Approx(hz_to_rad(152.0)).epsilon(1e-12));
  CHECK(dev.cav2.omega_c == doctest::Approx(hz_to_rad(12.13e9)).epsilon(1e-12));
  CHECK(dev.cav2.kappa == doctest::Approx(hz_to_rad(0.48e6)).epsilon(1e-12));
  CHECK(dev.cav2.eta == 0.67);
  CHECK(dev.cav2.g0 == doctest::Approx(hz_to_rad(170.0)).epsilon(1e-12));

  CHECK(dev.p_blue_dbm == -87.1);
  CHECK(dev.p_red_dbm == -84.4);
  CHECK(dev.bandwidth_hz == 100.0);
  CHECK(dev.filter == FilterKind::rectangle);
  CHECK(dev.pump_noise_a1 == 0.0);
  CHECK(dev.pump_noise_a2 == 0.0);
}

TEST_CASE("config defaults and overrides") {
  SUBCASE("no n_bar_m: occupation follows the default 7 mK bath") {
    const DeviceParams dev = parse_device_config(minimal_config());
    CHECK(dev.mech.t_bath_k == 0.007);
    CHECK(dev.mech.n_bar_m == doctest::Approx(51.4077741175712).epsilon(1e-12));
  }
  SUBCASE("explicit bath temperature") {
    const DeviceParams dev = parse_device_config(minimal_config() + "t_bath_k = 0.014\n");
    CHECK(dev.mech.t_bath_k == 0.014);
    CHECK(dev.mech.n_bar_m > 100.0);
  }
  SUBCASE("gauss filter accepted") {
    const DeviceParams dev = parse_device_config(minimal_config() + "filter = gauss\n");
    CHECK(dev.filter == FilterKind::gaussian);
  }
  SUBCASE("pump noise coefficients") {
    const DeviceParams dev =
        parse_device_config(minimal_config() + "pump_noise_a1 = 1e11\npump_noise_a2 = 1e11\n");
    CHECK(dev.pump_noise_a1 == 1e11);
    CHECK(dev.pump_noise_a2 == 1e11);
  }
  SUBCASE("comments and blank lines are ignored") {
    const DeviceParams dev = parse_device_config(
        "# device\n\n" + minimal_config() + "bandwidth_hz = 50 # narrow\n");
    CHECK(dev.bandwidth_hz == 50.0);
  }
}

TEST_CASE("config rejects unknown keys, bad numbers, bad filters, missing keys") {
  CHECK_THROWS_AS(parse_device_config(minimal_config() + "omega_q_hz = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_device_config(minimal_config() + "eta1 = strong\n"), ParseError);
  CHECK_THROWS_AS(parse_device_config(minimal_config() + "filter = box\n"), ParseError);
  CHECK_THROWS_AS(parse_device_config(minimal_config() + "just a line\n"), ParseError);
  CHECK_THROWS_AS(parse_device_config("omega_m_hz = 2.81e6\n"), ParseError);
  CHECK_THROWS_AS(parse_device_config(minimal_config() + "eta1 = 0.9 extra\n"), ParseError);
}

TEST_CASE("binary batch round trip is exact") {
  const RfChain c1 = RfChain::from_gain(83.20, 8.3, 50.0, 100.0, hz_to_rad(10.17e9));
  const RfChain c2 = RfChain::from_gain(79.99, 11.5, 50.0, 100.0, hz_to_rad(12.13e9));
  const QuadratureBatch b = sample_quadratures(
      CovMat4::from_normal_form(12.83, 13.89, 13.13), c1, c2, 257, 31337, true);

  const std::string path = tmp_path("batch") + ".emsq";
  save_batch(b, path);
  const QuadratureBatch back = load_batch(path);
  CHECK(back.pumps_on == b.pumps_on);
  CHECK(back.seed == b.seed);
  CHECK(back.samples == b.samples);

  SUBCASE("truncated file") {
    std::error_code ec;
    fs::resize_file(path, 40, ec);
    REQUIRE_FALSE(ec);
    CHECK_THROWS_AS(load_batch(path), ParseError);
  }
  SUBCASE("corrupted magic") {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.put('X');
    f.close();
    CHECK_THROWS_AS(load_batch(path), ParseError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_batch(path + ".nope"), ParseError);
  }
  fs::remove(path);
}

TEST_CASE("batch CSV export") {
  QuadratureBatch b;
  b.pumps_on = true;
  b.seed = 5;
  b.samples = {0.125, -1.5, 2.0, -0.0625, 3.25, 4.5, -5.75, 6.0};

  const std::string path = tmp_path("batch") + ".csv";
  save_batch_csv(b, path);
  std::ifstream f(path);
  std::string line;
  REQUIRE(std::getline(f, line));
  CHECK(line == "x1,p1,x2,p2");
  REQUIRE(std::getline(f, line));
  CHECK(line == "0.125,-1.5,2,-0.0625");
  REQUIRE(std::getline(f, line));
  CHECK(line == "3.25,4.5,-5.75,6");
  CHECK_FALSE(std::getline(f, line));
  f.close();
  fs::remove(path);
}

TEST_CASE("calibration CSV round trip and header handling") {
  std::vector<CalibrationPoint> pts = {{0.007, 6.2e-11, 1e-13},
                                       {0.1, 6.3e-11, 1.1e-13},
                                       {4.0, 1.2e-10, 2e-13}};
  const std::string path = tmp_path("cal") + ".csv";
  save_calibration_csv(pts, path);
  const auto back = load_calibration_csv(path);
  REQUIRE(back.size() == pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(back[i].temp_k == pts[i].temp_k);
    CHECK(back[i].noise_density_v2hz == pts[i].noise_density_v2hz);
    CHECK(back[i].sigma == pts[i].sigma);
  }
  fs::remove(path);

  SUBCASE("headerless file with optional sigma") {
    write_text_file(path, "0.01,5e-11\n0.02,5.1e-11,1e-13\n");
    const auto loaded = load_calibration_csv(path);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].sigma == 0.0);
    CHECK(loaded[1].sigma == 1e-13);
    fs::remove(path);
  }
  SUBCASE("bad cell") {
    write_text_file(path, "temp_k,noise_v2hz,sigma\n0.01,warm\n");
    CHECK_THROWS_AS(load_calibration_csv(path), ParseError);
    fs::remove(path);
  }
  SUBCASE("too few cells") {
    write_text_file(path, "0.01\n");
    CHECK_THROWS_AS(load_calibration_csv(path), ParseError);
    fs::remove(path);
  }
}

TEST_CASE("double formatting survives the shortest-round-trip contract") {
  auto round_trip = [](double x) { return std::stod(format_double(x)) == x; };
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-1.5) == "-1.5");
  CHECK(round_trip(0.1));
  CHECK(round_trip(1.0 / 3.0));
  CHECK(round_trip(1e300));
  CHECK(round_trip(-1e-300));
  CHECK(round_trip(12.834567890123456));

  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> e(-250, 250);
  for (int i = 0; i < 100; ++i) {
    const double x = u(gen) * std::pow(10.0, e(gen));
    CHECK(round_trip(x));
  }
}
