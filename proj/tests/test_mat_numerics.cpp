#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "emsq/errors.hpp"
#include "emsq/mat.hpp"
#include "emsq/numerics.hpp"

using namespace emsq;

namespace {

Mat4 random_spd(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat4 a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = u(gen);
  // A^T A + I is symmetric positive definite
  Mat4 s = Mat4::identity();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) s(i, j) += a(k, i) * a(k, j);
  return s;
}

}  // namespace

TEST_CASE("det4 and inverse4 agree on random SPD matrices") {
  std::mt19937_64 gen(42);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat4 m = random_spd(gen);
    const Mat4 inv = inverse4(m);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        double s = 0.0;
        for (int k = 0; k < 4; ++k) s += m(i, k) * inv(k, j);
        CHECK(std::fabs(s - (i == j ? 1.0 : 0.0)) < 1e-11);
      }
    }
    CHECK(det4(m) * det4(inv) == doctest::Approx(1.0).epsilon(1e-11));
  }
}

TEST_CASE("det4 of a diagonal matrix is the product of the diagonal") {
  const Mat4 d = Mat4::diagonal(2.0, 3.0, 5.0, 7.0);
  CHECK(det4(d) == doctest::Approx(210.0).epsilon(1e-15));
}

TEST_CASE("inverse4 rejects a singular matrix") {
  Mat4 m = Mat4::diagonal(1.0, 1.0, 1.0, 0.0);
  CHECK_THROWS_AS(inverse4(m), NumericallyIllConditioned);
}

TEST_CASE("cholesky4 reconstructs the input and rejects indefinite input") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat4 m = random_spd(gen);
    const Mat4 l = cholesky4(m);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (j > i) CHECK(l(i, j) == 0.0);
        double s = 0.0;
        for (int k = 0; k < 4; ++k) s += l(i, k) * l(j, k);
        CHECK(s == doctest::Approx(m(i, j)).epsilon(1e-12));
      }
    }
  }
  CHECK_THROWS_AS(cholesky4(Mat4::diagonal(1.0, -1.0, 1.0, 1.0)), CholeskyFailure);
}

TEST_CASE("adaptive_simpson handles polynomial, trig, and Gaussian integrands") {
  const auto cubic = adaptive_simpson<1>(
      [](double x) { return std::array<double, 1>{x * x}; }, 0.0, 1.0);
  CHECK(cubic[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  // two components with different scales resolved in one pass
  const auto pair = adaptive_simpson<2>(
      [](double x) {
        return std::array<double, 2>{std::sin(x), 1000.0 * std::cos(x)};
      },
      0.0, 3.141592653589793);
  CHECK(pair[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(pair[1] == doctest::Approx(0.0).scale(1000.0).epsilon(1e-9));

  const double inv_sqrt_2pi = 0.3989422804014327;
  const auto gauss = adaptive_simpson<1>(
      [inv_sqrt_2pi](double x) {
        return std::array<double, 1>{inv_sqrt_2pi * std::exp(-0.5 * x * x)};
      },
      -8.0, 8.0);
  CHECK(gauss[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("adaptive_simpson reports failure instead of a silent bad value") {
  // a step cannot be resolved to near machine precision by refinement
  CHECK_THROWS_AS(adaptive_simpson<1>(
                      [](double x) {
                        return std::array<double, 1>{x > 1.0 / 3.0 ? 1.0 : 0.0};
                      },
                      0.0, 1.0, 1e-15),
                  IntegrationFailure);
}

TEST_CASE("gauss_legendre nodes integrate high-order polynomials exactly") {
  const GaussLegendreRule rule = gauss_legendre(5);
  double wsum = 0.0, x8 = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    wsum += rule.weights[i];
    x8 += rule.weights[i] * std::pow(rule.nodes[i], 8);
  }
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
  // degree 8 < 2n - 1 = 9, so the rule is exact up to roundoff
  CHECK(x8 == doctest::Approx(2.0 / 9.0).epsilon(1e-13));
}

TEST_CASE("splitmix64 matches the reference sequence") {
  std::uint64_t s = 0;
  CHECK(splitmix64(s) == 0xe220a8397b1dcdafULL);
  CHECK(splitmix64(s) == 0x6e789e6aa1b965f4ULL);
  s = 1234567;
  CHECK(splitmix64(s) == 0x599ed017fb08fc85ULL);
}

TEST_CASE("chunk_seed derivations do not collide over a long index range") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 2000; ++i) seen.insert(chunk_seed(99, i));
  CHECK(seen.size() == 2000);
  CHECK(chunk_seed(99, 5) != chunk_seed(100, 5));
}

TEST_CASE("GaussianStream is deterministic with sane moments") {
  GaussianStream a(314159), b(314159);
  for (int i = 0; i < 5; ++i) CHECK(a.next() == b.next());

  GaussianStream g(271828);
  const int n = 200000;
  double sum = 0.0, sq = 0.0, lag = 0.0, prev = g.next();
  sum += prev;
  sq += prev * prev;
  for (int i = 1; i < n; ++i) {
    const double x = g.next();
    sum += x;
    sq += x * x;
    lag += x * prev;
    prev = x;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::fabs(mean) < 0.01);
  CHECK(std::fabs(var - 1.0) < 0.02);
  CHECK(std::fabs(lag / n) < 0.01);
}

TEST_CASE("fnv1a64 matches the published test vectors") {
  CHECK(fnv1a64("", 0) == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a", 1) == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("hello", 5) == 0xa430d84680aabd0bULL);
}
