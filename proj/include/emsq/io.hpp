#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emsq/errors.hpp"
#include "emsq/gaussian.hpp"
#include "emsq/lab.hpp"
#include "emsq/model.hpp"

namespace emsq {

// thrown for malformed files and unknown keys; the CLI maps it to exit 1
struct ParseError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// covariance matrices: JSON {"v": [[...]], "convention": "half"}
// ---------------------------------------------------------------------------

std::string cm_to_json(const CovMat4& v);
CovMat4 cm_from_json(const std::string& text);
CovMat4 load_cm(const std::string& path);
void save_cm(const CovMat4& v, const std::string& path);

// ---------------------------------------------------------------------------
// device config: flat "key = value" lines, # comments
// ---------------------------------------------------------------------------
//
// Frequencies and rates in Hz, powers in dBm, temperatures in K. n_bar_m
// overrides the bath-temperature derivation when present; the stored bath
// temperature is then the one reproducing that occupation.

DeviceParams parse_device_config(const std::string& text);
DeviceParams load_device_config(const std::string& path);

// ---------------------------------------------------------------------------
// quadrature batches: binary, little-endian
// ---------------------------------------------------------------------------
//
// header: magic "EMSQ1" (5 bytes), pumps_on (u8), reserved (u16 = 0),
//         n (u64), seed (u64); then n rows of 4 float64 (X1, P1, X2, P2)

void save_batch(const QuadratureBatch& b, const std::string& path);
QuadratureBatch load_batch(const std::string& path);
void save_batch_csv(const QuadratureBatch& b, const std::string& path);

// ---------------------------------------------------------------------------
// calibration points: CSV temp_k,noise_v2hz,sigma
// ---------------------------------------------------------------------------

std::vector<CalibrationPoint> load_calibration_csv(const std::string& path);
void save_calibration_csv(const std::vector<CalibrationPoint>& pts, const std::string& path);

// ---------------------------------------------------------------------------
// misc
// ---------------------------------------------------------------------------

// shortest round-trip decimal (up to 17 significant digits)
std::string format_double(double x);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace emsq
