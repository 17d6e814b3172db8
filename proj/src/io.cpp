#include "emsq/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "emsq/constants.hpp"

static_assert(std::endian::native == std::endian::little,
              "batch files are little-endian; this build assumes a matching host");

namespace emsq {

using nlohmann::json;

// ---------------------------------------------------------------------------
// misc
// ---------------------------------------------------------------------------

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open for writing: " + path);
  f << content;
  if (!f) throw ParseError("short write: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// covariance matrices
// ---------------------------------------------------------------------------

std::string cm_to_json(const CovMat4& v) {
  json j;
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int k = 0; k < 4; ++k) row.push_back(v(i, k));
    j["v"].push_back(row);
  }
  j["convention"] = "half";
  return j.dump(2) + "\n";
}

CovMat4 cm_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad covariance JSON: ") + e.what());
  }
  if (!j.contains("convention") || j["convention"] != "half") {
    throw ParseError("covariance JSON must declare convention \"half\"");
  }
  if (!j.contains("v") || !j["v"].is_array() || j["v"].size() != 4) {
    throw ParseError("covariance JSON needs a 4x4 \"v\" array");
  }
  Mat4 m;
  for (int i = 0; i < 4; ++i) {
    const auto& row = j["v"][static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != 4) {
      throw ParseError("covariance JSON needs a 4x4 \"v\" array");
    }
    for (int k = 0; k < 4; ++k) {
      const auto& cell = row[static_cast<std::size_t>(k)];
      if (!cell.is_number()) throw ParseError("covariance entries must be numbers");
      m(i, k) = cell.get<double>();
    }
  }
  for (int i = 0; i < 4; ++i) {
    for (int k = i + 1; k < 4; ++k) {
      const double scale = std::max({1.0, std::fabs(m(i, k)), std::fabs(m(k, i))});
      if (std::fabs(m(i, k) - m(k, i)) > 1e-9 * scale) {
        throw ParseError("covariance matrix is not symmetric");
      }
    }
  }
  return CovMat4::from_matrix(m);
}

CovMat4 load_cm(const std::string& path) { return cm_from_json(read_text_file(path)); }

void save_cm(const CovMat4& v, const std::string& path) {
  write_text_file(path, cm_to_json(v));
}

// ---------------------------------------------------------------------------
// device config
// ---------------------------------------------------------------------------

namespace {

struct RawConfig {
  std::map<std::string, double> nums;
  std::map<std::string, std::string> strs;
};

RawConfig tokenize_config(const std::string& text) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) {
      throw ParseError("config line " + std::to_string(line_no) + ": empty key or value");
    }
    if (key == "filter") {
      raw.strs[key] = val;
      continue;
    }
    try {
      std::size_t used = 0;
      const double num = std::stod(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
      raw.nums[key] = num;
    } catch (const std::exception&) {
      throw ParseError("config line " + std::to_string(line_no) + ": bad number '" + val + "'");
    }
  }
  return raw;
}

}  // namespace

DeviceParams parse_device_config(const std::string& text) {
  RawConfig raw = tokenize_config(text);

  auto take = [&raw](const std::string& key) -> std::optional<double> {
    const auto it = raw.nums.find(key);
    if (it == raw.nums.end()) return std::nullopt;
    const double v = it->second;
    raw.nums.erase(it);
    return v;
  };
  auto require = [&take](const std::string& key) {
    const auto v = take(key);
    if (!v) throw ParseError("config is missing required key '" + key + "'");
    return *v;
  };

  DeviceParams dev;

  const double omega_m = hz_to_rad(require("omega_m_hz"));
  const double gamma_m = hz_to_rad(require("gamma_m_hz"));
  const auto n_bar_m = take("n_bar_m");
  const double t_bath = take("t_bath_k").value_or(0.007);
  dev.mech = n_bar_m ? MechanicalMode::with_occupation(omega_m, gamma_m, *n_bar_m)
                     : MechanicalMode::from_bath_temperature(omega_m, gamma_m, t_bath);

  auto cavity = [&](int idx) {
    const std::string sfx = std::to_string(idx);
    CavityMode c;
    c.omega_c = hz_to_rad(require("omega_c" + sfx + "_hz"));
    c.kappa = hz_to_rad(require("kappa" + sfx + "_hz"));
    c.eta = require("eta" + sfx);
    c.g0 = hz_to_rad(require("g0" + sfx + "_hz"));
    c.n_bar_ex = take("n_bar_t" + sfx).value_or(0.0);
    c.n_bar_in = take("n_bar_in" + sfx).value_or(0.0);
    c.validate();
    return c;
  };
  dev.cav1 = cavity(1);
  dev.cav2 = cavity(2);

  dev.p_blue_dbm = require("p_blue_dbm");
  dev.p_red_dbm = require("p_red_dbm");
  dev.bandwidth_hz = take("bandwidth_hz").value_or(100.0);
  dev.pump_noise_a1 = take("pump_noise_a1").value_or(0.0);
  dev.pump_noise_a2 = take("pump_noise_a2").value_or(0.0);

  if (const auto it = raw.strs.find("filter"); it != raw.strs.end()) {
    if (it->second == "rect") {
      dev.filter = FilterKind::rectangle;
    } else if (it->second == "gauss") {
      dev.filter = FilterKind::gaussian;
    } else {
      throw ParseError("filter must be 'rect' or 'gauss', got '" + it->second + "'");
    }
    raw.strs.erase(it);
  }

  if (!raw.nums.empty()) {
    throw ParseError("unknown config key '" + raw.nums.begin()->first + "'");
  }
  if (!raw.strs.empty()) {
    throw ParseError("unknown config key '" + raw.strs.begin()->first + "'");
  }
  return dev;
}

DeviceParams load_device_config(const std::string& path) {
  return parse_device_config(read_text_file(path));
}

// ---------------------------------------------------------------------------
// quadrature batches
// ---------------------------------------------------------------------------

namespace {
constexpr char kBatchMagic[5] = {'E', 'M', 'S', 'Q', '1'};
}

void save_batch(const QuadratureBatch& b, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open for writing: " + path);
  f.write(kBatchMagic, 5);
  const std::uint8_t on = b.pumps_on ? 1 : 0;
  const std::uint16_t reserved = 0;
  const std::uint64_t n = b.n();
  f.write(reinterpret_cast<const char*>(&on), 1);
  f.write(reinterpret_cast<const char*>(&reserved), 2);
  f.write(reinterpret_cast<const char*>(&n), 8);
  f.write(reinterpret_cast<const char*>(&b.seed), 8);
  f.write(reinterpret_cast<const char*>(b.samples.data()),
          static_cast<std::streamsize>(b.samples.size() * sizeof(double)));
  if (!f) throw ParseError("short write: " + path);
}

QuadratureBatch load_batch(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open: " + path);
  char magic[5];
  std::uint8_t on = 0;
  std::uint16_t reserved = 0;
  std::uint64_t n = 0, seed = 0;
  f.read(magic, 5);
  f.read(reinterpret_cast<char*>(&on), 1);
  f.read(reinterpret_cast<char*>(&reserved), 2);
  f.read(reinterpret_cast<char*>(&n), 8);
  f.read(reinterpret_cast<char*>(&seed), 8);
  if (!f || std::memcmp(magic, kBatchMagic, 5) != 0 || reserved != 0) {
    throw ParseError("not a quadrature batch file: " + path);
  }
  QuadratureBatch b;
  b.pumps_on = on != 0;
  b.seed = seed;
  b.samples.resize(n * 4);
  f.read(reinterpret_cast<char*>(b.samples.data()),
         static_cast<std::streamsize>(b.samples.size() * sizeof(double)));
  if (!f) throw ParseError("batch file truncated: " + path);
  return b;
}

void save_batch_csv(const QuadratureBatch& b, const std::string& path) {
  std::ostringstream out;
  out << "x1,p1,x2,p2\n";
  const std::size_t n = b.n();
  for (std::size_t r = 0; r < n; ++r) {
    out << format_double(b.at(r, 0)) << ',' << format_double(b.at(r, 1)) << ','
        << format_double(b.at(r, 2)) << ',' << format_double(b.at(r, 3)) << '\n';
  }
  write_text_file(path, out.str());
}

// ---------------------------------------------------------------------------
// calibration points
// ---------------------------------------------------------------------------

std::vector<CalibrationPoint> load_calibration_csv(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::vector<CalibrationPoint> pts;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (line_no == 1 && line.find("temp_k") != std::string::npos) continue;
    std::istringstream row(line);
    std::string cell;
    double vals[3] = {0.0, 0.0, 0.0};
    int got = 0;
    while (std::getline(row, cell, ',') && got < 3) {
      try {
        vals[got] = std::stod(cell);
      } catch (const std::exception&) {
        throw ParseError("calibration CSV line " + std::to_string(line_no) +
                         ": bad number '" + cell + "'");
      }
      ++got;
    }
    if (got < 2) {
      throw ParseError("calibration CSV line " + std::to_string(line_no) +
                       ": need temp_k,noise_v2hz[,sigma]");
    }
    pts.push_back({vals[0], vals[1], vals[2]});
  }
  return pts;
}

void save_calibration_csv(const std::vector<CalibrationPoint>& pts, const std::string& path) {
  std::ostringstream out;
  out << "temp_k,noise_v2hz,sigma\n";
  for (const auto& p : pts) {
    out << format_double(p.temp_k) << ',' << format_double(p.noise_density_v2hz) << ','
        << format_double(p.sigma) << '\n';
  }
  write_text_file(path, out.str());
}

}  // namespace emsq
