#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "emsq/errors.hpp"

namespace emsq {

// ---------------------------------------------------------------------------
// adaptive quadrature
// ---------------------------------------------------------------------------

// Adaptive Simpson over [a, b] for an integrand returning N components at
// once; every component must satisfy the relative tolerance before a segment
// is accepted. Tolerance is anchored against the coarse whole-interval
// estimate so that components passing through zero do not demand infinite
// refinement. Throws IntegrationFailure when max_depth is exhausted.
template <std::size_t N, class F>
std::array<double, N> adaptive_simpson(F&& f, double a, double b,
                                       double rel_tol = 1e-9,
                                       int max_depth = 48) {
  using V = std::array<double, N>;

  auto simpson = [](const V& fa, const V& fm, const V& fb, double h) {
    V s;
    for (std::size_t i = 0; i < N; ++i) s[i] = h / 6.0 * (fa[i] + 4.0 * fm[i] + fb[i]);
    return s;
  };

  const V fa = f(a);
  const V fb = f(b);
  const double mid = 0.5 * (a + b);
  const V fmid = f(mid);
  const V whole = simpson(fa, fmid, fb, b - a);

  // per-component absolute targets; the floor ties small components to the
  // scale of the largest so tolerance stays meaningful near zeros
  double scale = 0.0;
  for (std::size_t i = 0; i < N; ++i) scale = std::max(scale, std::fabs(whole[i]));
  V atol;
  for (std::size_t i = 0; i < N; ++i) {
    atol[i] = rel_tol * std::max(std::fabs(whole[i]), 1e-3 * scale + 1e-300);
  }

  struct Frame {
    double a, b;
    V fa, fm, fb, s;
    V tol;
    int depth;
  };

  V total{};
  std::vector<Frame> stack;
  stack.push_back({a, b, fa, fmid, fb, whole, atol, 0});

  while (!stack.empty()) {
    Frame fr = stack.back();
    stack.pop_back();

    const double m = 0.5 * (fr.a + fr.b);
    const double lm = 0.5 * (fr.a + m);
    const double rm = 0.5 * (m + fr.b);
    const V flm = f(lm);
    const V frm = f(rm);
    const V left = simpson(fr.fa, flm, fr.fm, m - fr.a);
    const V right = simpson(fr.fm, frm, fr.fb, fr.b - m);

    bool ok = true;
    V better;
    for (std::size_t i = 0; i < N; ++i) {
      const double two = left[i] + right[i];
      const double err = (two - fr.s[i]) / 15.0;
      better[i] = two + err;
      if (std::fabs(err) > fr.tol[i]) ok = false;
    }

    if (ok) {
      for (std::size_t i = 0; i < N; ++i) total[i] += better[i];
      continue;
    }
    if (fr.depth >= max_depth) {
      throw IntegrationFailure("adaptive quadrature did not converge");
    }

    V half_tol;
    for (std::size_t i = 0; i < N; ++i) half_tol[i] = 0.5 * fr.tol[i];
    stack.push_back({fr.a, m, fr.fa, flm, fr.fm, left, half_tol, fr.depth + 1});
    stack.push_back({m, fr.b, fr.fm, frm, fr.fb, right, half_tol, fr.depth + 1});
  }
  return total;
}

// ---------------------------------------------------------------------------
// fixed-order quadrature
// ---------------------------------------------------------------------------

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Nodes by Newton iteration on the Legendre recurrence; accurate to ~1e-15
// for the orders used here (<= 128).
GaussLegendreRule gauss_legendre(int n);

// ---------------------------------------------------------------------------
// deterministic random numbers
// ---------------------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t& state);

// Sub-stream seed for chunked sample generation. Chunks are fixed-size, so
// output is identical whether chunks are generated serially or in parallel.
std::uint64_t chunk_seed(std::uint64_t base_seed, std::uint64_t chunk_index);

inline constexpr std::size_t rng_chunk_size = 65536;

// Standard-normal stream: mt19937_64 under an explicit Box-Muller transform,
// so output depends only on the fixed mt19937_64 algorithm and not on any
// normal_distribution, which the standard leaves implementation-defined.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1], u2 in [0, 1)
    const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// ---------------------------------------------------------------------------
// hashing (manifests)
// ---------------------------------------------------------------------------

std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64_file(const std::string& path);

}  // namespace emsq
