#include <doctest.h>

#include <cmath>
#include <random>

#include "emsq/constants.hpp"
#include "emsq/errors.hpp"
#include "emsq/gaussian.hpp"
#include "emsq/numerics.hpp"

using namespace emsq;

namespace {

// measured output-field covariance of the reference device, normal form
CovMat4 reference_cm() { return CovMat4::from_normal_form(12.83, 13.89, 13.13); }

}  // namespace

// Expected values below were computed with an independent high-precision
// evaluation of the closed forms before this library existed; they pin the
// implementation, not the other way around.

TEST_CASE("vacuum covariance basics") {
  const CovMat4 v = CovMat4::vacuum();
  CHECK_NOTHROW(v.validate());
  CHECK(v.determinant() == doctest::Approx(0.0625).epsilon(1e-15));
  const auto [nm, np] = v.symplectic_eigenvalues();
  CHECK(nm == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(np == doctest::Approx(0.5).epsilon(1e-15));
  // W(0) = 1/pi^2 for the vacuum
  CHECK(wigner_density(v, {0.0, 0.0, 0.0, 0.0}) ==
        doctest::Approx(0.101321183642338).epsilon(1e-12));
}

TEST_CASE("validate rejects broken covariance matrices") {
  CHECK_THROWS_AS(CovMat4::from_normal_form(0.1, 0.1, 0.0).validate(), Unphysical);
  // too much correlation for the diagonals
  CHECK_THROWS_AS(CovMat4::from_normal_form(1.0, 1.0, 5.0).validate(), Unphysical);
  Mat4 m = Mat4::diagonal(1.0, 1.0, 1.0, 1.0);
  m(0, 1) = 0.3;  // asymmetric entry, (1,0) stays 0
  CovMat4 v;
  v.v = m;
  CHECK_THROWS_AS(v.validate(), Unphysical);
  m(0, 1) = std::nan("");
  v.v = m;
  CHECK_THROWS_AS(v.validate(), Unphysical);
}

TEST_CASE("reference state: partial-transpose eigenvalues and negativity") {
  const CovMat4 v = reference_cm();
  const auto [zm, zp] = v.pt_symplectic_eigenvalues();
  CHECK(zm == doctest::Approx(0.219307476392414).epsilon(1e-12));
  const auto [z, en] = negativity(v);
  CHECK(z == doctest::Approx(0.219307476392414).epsilon(1e-12));
  CHECK(en == doctest::Approx(1.18897309924429).epsilon(1e-12));
  (void)zp;
}

TEST_CASE("reference state: symplectic spectrum, discord, determinant, Wigner peak") {
  const CovMat4 v = reference_cm();
  const auto [nm, np] = v.symplectic_eigenvalues();
  CHECK(nm == doctest::Approx(1.938339522837).epsilon(1e-11));
  CHECK(np == doctest::Approx(2.998339522837).epsilon(1e-11));
  CHECK(quantum_discord(v) == doctest::Approx(1.56360777722962).epsilon(1e-11));
  CHECK(v.determinant() == doctest::Approx(33.77701924).epsilon(1e-10));
  CHECK(wigner_density(v, {0.0, 0.0, 0.0, 0.0}) ==
        doctest::Approx(4.358425257336e-03).epsilon(1e-10));
}

TEST_CASE("reference state: Duan variance and squeezing") {
  const DuanResult d = epr_duan(reference_cm(), 0.0);
  CHECK(d.x_minus_var == doctest::Approx(0.23).epsilon(1e-12));
  CHECK(d.p_plus_var == doctest::Approx(0.23).epsilon(1e-12));
  CHECK(d.delta_epr == doctest::Approx(0.46).epsilon(1e-12));
  CHECK(d.squeezing_db_x == doctest::Approx(-3.37242168318428).epsilon(1e-10));
  // anti-squeezed joint quadrature at the orthogonal angle
  const DuanResult anti = epr_duan(reference_cm(), pi);
  CHECK(anti.x_minus_var == doctest::Approx(26.49).epsilon(1e-12));
}

TEST_CASE("Duan variance of the vacuum is exactly one at every angle") {
  const CovMat4 v = CovMat4::vacuum();
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, two_pi);
  for (int i = 0; i < 100; ++i) {
    const DuanResult d = epr_duan(v, u(gen));
    CHECK(d.delta_epr == 1.0);
    CHECK(d.squeezing_db_x == 0.0);
  }
}

TEST_CASE("TMST inversion of the reference state") {
  const TmstParams p = tmst_from_cm(reference_cm());
  CHECK(p.r == doctest::Approx(1.186610818336).epsilon(1e-11));
  CHECK(p.phi == 0.0);
  CHECK(p.n1 == doctest::Approx(1.438339522837).epsilon(1e-10));
  CHECK(p.n2 == doctest::Approx(2.498339522837).epsilon(1e-10));
}

TEST_CASE("TMST construction at rounded parameters") {
  const CovMat4 v = cm_from_tmst({1.19, 0.0, 1.43, 2.49});
  CHECK(v(0, 0) == doctest::Approx(12.8738677329732).epsilon(1e-12));
  CHECK(v(2, 2) == doctest::Approx(13.9338677329732).epsilon(1e-12));
  CHECK(v(0, 2) == doctest::Approx(13.1761933122977).epsilon(1e-12));
  CHECK(v(1, 3) == doctest::Approx(-13.1761933122977).epsilon(1e-12));
}

TEST_CASE("TMST round trip across the parameter space") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> ur(0.0, 3.0), un(0.0, 20.0);
  for (int i = 0; i < 200; ++i) {
    const TmstParams in{ur(gen), 0.0, un(gen), un(gen)};
    const TmstParams out = tmst_from_cm(cm_from_tmst(in));
    CHECK(out.r == doctest::Approx(in.r).epsilon(1e-9));
    CHECK(std::fabs(out.n1 - in.n1) < 1e-9 * (1.0 + in.n1));
    CHECK(std::fabs(out.n2 - in.n2) < 1e-9 * (1.0 + in.n2));
  }
}

TEST_CASE("tmst_from_cm rejects what is not a normal form") {
  CHECK_THROWS_AS(tmst_from_cm(rotate_mode1_cm(reference_cm(), 0.4)), NotNormalForm);
  // negative correlation belongs to the detector angle, not the normal form
  CHECK_THROWS_AS(tmst_from_cm(CovMat4::from_normal_form(12.83, 13.89, -13.13)),
                  NotNormalForm);
}

TEST_CASE("rotation congruence leaves the vacuum bit-exact and conserves energy") {
  const CovMat4 v = CovMat4::vacuum();
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, two_pi);
  for (int i = 0; i < 100; ++i) {
    const CovMat4 r = rotate_mode1_cm(v, u(gen));
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) CHECK(r(a, b) == v(a, b));
  }
  const CovMat4 ref = reference_cm();
  for (int i = 0; i < 50; ++i) {
    const double phi = u(gen);
    const CovMat4 r = rotate_mode1_cm(ref, phi);
    CHECK(r(0, 0) + r(1, 1) == doctest::Approx(ref(0, 0) + ref(1, 1)).epsilon(1e-13));
    // mode 2 untouched
    CHECK(r(2, 2) == ref(2, 2));
    CHECK(r(3, 3) == ref(3, 3));
  }
  const CovMat4 full_turn = rotate_mode1_cm(ref, two_pi);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      CHECK(full_turn(a, b) == doctest::Approx(ref(a, b)).epsilon(1e-12));
}

TEST_CASE("uncorrelated states carry no entanglement and no discord") {
  const CovMat4 v = CovMat4::from_normal_form(3.7, 5.2, 0.0);
  const auto [z, en] = negativity(v);
  CHECK(en == 0.0);
  CHECK(z >= 0.5);
  CHECK(quantum_discord(v) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("negativity is monotone under added symmetric noise") {
  double last = negativity(reference_cm()).second;
  for (double t : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    Mat4 m = reference_cm().v;
    for (int i = 0; i < 4; ++i) m(i, i) += t;
    CovMat4 noisy;
    noisy.v = m;
    const double en = negativity(noisy).second;
    CHECK(en <= last + 1e-9);
    last = en;
  }
}

TEST_CASE("discord refuses the degenerate conditioning mode") {
  // V33 at the vacuum floor leaves nothing to condition on
  CHECK_THROWS_AS(quantum_discord(CovMat4::from_normal_form(2.0, 0.5, 0.0)),
                  DegenerateState);
}

TEST_CASE("entropy helper clamps at the vacuum floor") {
  CHECK(entropy_h(0.5) == 0.0);
  CHECK(entropy_h(0.5 + 1e-13) == 0.0);
  CHECK(entropy_h(1.5) == doctest::Approx(2.0 * std::log2(2.0) - 1.0 * std::log2(1.0))
                              .epsilon(1e-12));
}

TEST_CASE("entanglement of formation at frozen negativity values") {
  CHECK(entropy_of_formation(0.0) == 0.0);
  CHECK(entropy_of_formation(-1.0) == 0.0);
  CHECK(entropy_of_formation(1.14) == doctest::Approx(0.683881093953329).epsilon(1e-12));
  CHECK(entropy_of_formation(1.07) == doctest::Approx(0.62445420472723).epsilon(1e-12));
  CHECK(entropy_of_formation(1.18897309924429) ==
        doctest::Approx(0.726071249100487).epsilon(1e-12));
  CHECK(ebit_rate(0.45, 282.0) == doctest::Approx(126.9).epsilon(1e-12));
}

TEST_CASE("squeezing_vs_angle agrees with the rotated Duan evaluation") {
  std::mt19937_64 gen(88);
  std::uniform_real_distribution<double> ur(0.0, 2.0), un(0.0, 5.0), up(0.0, two_pi);
  for (int i = 0; i < 50; ++i) {
    const TmstParams p{ur(gen), 0.0, un(gen), un(gen)};
    const CovMat4 v = cm_from_tmst(p);
    const double phi = up(gen);
    const double direct = squeezing_vs_angle(p, phi);
    const double via_cm = epr_duan(v, phi).x_minus_var;
    CHECK(std::fabs(direct - via_cm) < 1e-12 * (1.0 + direct));
  }
}

TEST_CASE("optimal_angle undoes a detector rotation") {
  const CovMat4 ref = reference_cm();
  for (double phi0 : {0.3, 1.2, 2.9, 4.4, 5.9}) {
    const CovMat4 rotated = rotate_mode1_cm(ref, phi0);
    const double back = optimal_angle(rotated);
    const DuanResult d = epr_duan(rotated, back);
    CHECK(d.delta_epr == doctest::Approx(0.46).epsilon(1e-9));
  }
  CHECK(optimal_angle(ref) == 0.0);
}

TEST_CASE("full_report composes the metrics at the optimal angle") {
  const EntanglementReport rep = full_report(rotate_mode1_cm(reference_cm(), 1.0));
  CHECK(rep.delta_epr == doctest::Approx(0.46).epsilon(1e-9));
  CHECK(rep.e_n == doctest::Approx(1.18897309924429).epsilon(1e-9));
  CHECK(rep.discord == doctest::Approx(1.56360777722962).epsilon(1e-9));
  CHECK(rep.e_f == doctest::Approx(0.726071249100487).epsilon(1e-9));

  const EntanglementReport vac = full_report(CovMat4::vacuum());
  CHECK(vac.delta_epr == 1.0);
  CHECK(vac.e_n == 0.0);
  CHECK(vac.discord == 0.0);
  CHECK(vac.e_f == 0.0);
}

TEST_CASE("wigner density normalizes over a product quadrature grid") {
  // V = L L^T maps a standard normal grid onto the state; the density is
  // still evaluated through its own inverse and determinant
  const GaussLegendreRule rule = gauss_legendre(32);
  auto integral = [&rule](const CovMat4& v) {
    const Mat4 l = cholesky4(v.v);
    const double jac = std::sqrt(det4(v.v));
    const double half = 8.0;
    double total = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      for (std::size_t j = 0; j < rule.nodes.size(); ++j)
        for (std::size_t k = 0; k < rule.nodes.size(); ++k)
          for (std::size_t m = 0; m < rule.nodes.size(); ++m) {
            const std::array<double, 4> y = {half * rule.nodes[i], half * rule.nodes[j],
                                             half * rule.nodes[k], half * rule.nodes[m]};
            Vec4 psi{};
            for (int r = 0; r < 4; ++r) {
              psi[r] = 0.0;
              for (int c = 0; c <= r; ++c) psi[r] += l(r, c) * y[c];
            }
            const double w = rule.weights[i] * rule.weights[j] * rule.weights[k] *
                             rule.weights[m] * half * half * half * half;
            total += w * wigner_density(v, psi) * jac;
          }
    return total;
  };
  CHECK(integral(CovMat4::vacuum()) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(integral(reference_cm()) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("marginal_cm extracts the pair block with signs intact") {
  const CovMat4 v = reference_cm();
  const auto xx = marginal_cm(v, 0, 2);
  CHECK(xx[0][0] == 12.83);
  CHECK(xx[1][1] == 13.89);
  CHECK(xx[0][1] == 13.13);
  const auto pp = marginal_cm(v, 1, 3);
  CHECK(pp[0][1] == -13.13);
}
