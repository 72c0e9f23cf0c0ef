#include <doctest.h>

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "bellconc/entanglement.hpp"
#include "bellconc/errors.hpp"
#include "bellconc/fits.hpp"
#include "bellconc/nlfrac.hpp"
#include "bellconc/qstate.hpp"

using namespace bellconc;

namespace {

constexpr double kDeg = kPi / 180.0;

std::vector<std::pair<double, double>> composition_points(double theta) {
  std::vector<std::pair<double, double>> pts;
  for (double pv = 0.5; pv <= 12.0 + 1e-9; pv += 0.05)
    pts.emplace_back(pv, concurrence_from_pv(theta, pv, ConcFamily::werner3_published));
  return pts;
}

}  // namespace

TEST_CASE("coefficient functions at reference angles") {
  const double t = kPi / 4;
  CHECK(f1(t) == doctest::Approx(0.0064255).epsilon(1e-4));
  CHECK(f2(t) == doctest::Approx(0.0037064).epsilon(1e-4));
  CHECK(f3(t) == doctest::Approx(1.7052e-5).epsilon(1e-3));
  CHECK(g1(t) == doctest::Approx(0.1114281).epsilon(1e-6));
  CHECK(g2(t) == doctest::Approx(-0.0042589).epsilon(1e-4));
  CHECK(g3(t) == doctest::Approx(6.7379e-5).epsilon(1e-3));
  CHECK(g1(35 * kDeg) == doctest::Approx(0.0993351).epsilon(1e-6));
  CHECK_THROWS_AS(f1(0.0), ParameterError);
  CHECK_THROWS_AS(f2(1.0), ParameterError);
}

TEST_CASE("maximal violations and critical visibilities") {
  CHECK(beta2(kPi / 4) == doctest::Approx(std::sqrt(2.0)));
  CHECK(v2cr(kPi / 4) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(beta3(kPi / 4) == doctest::Approx(std::sqrt(2.0)));
  CHECK(beta3(0.0) == 1.0);
  CHECK(beta3(20 * kDeg) == doctest::Approx(beta3_branches(20 * kDeg).middle));
  const auto at1 = beta3_branches(kBeta3Break1Deg * kDeg);
  const auto at2 = beta3_branches(kBeta3Break2Deg * kDeg);
  CHECK(std::abs(at1.polynomial - at1.middle) <= 2e-3);
  CHECK(std::abs(at2.middle - at2.upper) <= 2e-3);
  CHECK(at1.polynomial == doctest::Approx(1.0781479).epsilon(1e-6));
  CHECK(at2.upper == doctest::Approx(1.2122176).epsilon(1e-6));
}

TEST_CASE("visibility relations") {
  for (double deg : {10.0, 25.0, 35.0, 45.0}) {
    const double t = deg * kDeg;
    CHECK(v_from_pv_2q(t, 0.0) == v2cr(t));
    CHECK(v_from_pv_3q(t, 0.0) == v3cr(t));
    double prev = 0.0;
    for (double pv = 0.0; pv <= 30.0; pv += 0.5) {
      const double v = v_from_pv_3q(t, pv);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      if (deg >= 35.0) CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }
  CHECK_THROWS_AS(v_from_pv_2q(kPi / 4, -1.0), ParameterError);
  CHECK_THROWS_AS(v_from_pv_3q(kPi / 4, 101.0), ParameterError);
  // The coefficient functions grow far more slowly than the exact Werner
  // relation: p_V = 2(pi - 3) maps to v = 0.7421 instead of 1.
  CHECK(v_from_pv_2q(kPi / 4, 100 * pv_werner2_closed(1.0)) == doctest::Approx(0.742136).epsilon(1e-5));
  CHECK(v_from_pv_2q(kPi / 4, 100.0) == doctest::Approx(0.766195).epsilon(1e-5));
}

TEST_CASE("concurrence fits") {
  CHECK(c_lower_2q(1.0) == doctest::Approx(0.1987289).epsilon(1e-6));
  CHECK(c_gme_45_fit(0.0) == doctest::Approx(0.512));
  CHECK(c_gme_35_fit(0.0) == doctest::Approx(0.542));
  CHECK(c_gme_pure3_fit(11.7) == 1.0);
  CHECK(c_gme_pure3_fit(0.0) == 0.0);
  for (double pv = 0.0; pv <= 30.0; pv += 0.25)
    for (const auto& name : named_fits()) {
      const double y = evaluate_named_fit(name, pv, kPi / 4);
      CHECK(y >= 0.0);
      CHECK(y <= 1.0);
    }
  CHECK_THROWS_AS(evaluate_named_fit("nope", 1.0), ParameterError);
  CHECK(concurrence_from_pv(kPi / 4, 0.0, ConcFamily::werner2) == doctest::Approx(0.56066).epsilon(1e-5));
  CHECK(parse_conc_family("werner3-published") == ConcFamily::werner3_published);
  CHECK(parse_conc_family("werner3_xstate") == ConcFamily::werner3_xstate);
  CHECK_THROWS_AS(parse_conc_family("w"), ParameterError);
  for (double pv = 0.0; pv <= 12.0; pv += 0.5)
    CHECK(std::abs(concurrence_from_pv(kPi / 4, pv, ConcFamily::werner3_published) - c_gme_45_fit(pv)) <= 2e-3);
}

TEST_CASE("composed concurrence refits to the published coefficients") {
  const FitCurve c45 = refit(composition_points(kPi / 4), kBasis3q);
  CHECK(std::abs(c45.coefficients[0] - 0.512) <= 0.002);
  CHECK(std::abs(c45.coefficients[1] - 0.186) <= 0.002);
  const FitCurve c35 = refit(composition_points(35 * kDeg), kBasis3q);
  CHECK(std::abs(c35.coefficients[0] - 0.542) <= 0.001);
  CHECK(std::abs(c35.coefficients[1] - 0.155) <= 0.01);
}

TEST_CASE("refit") {
  const std::vector<double> truth{0.7, 0.02, -0.003, 1e-4};
  std::vector<std::pair<double, double>> pts;
  for (double pv = 0.5; pv <= 30.0; pv += 0.5) {
    double y = 0;
    for (std::size_t k = 0; k < 4; ++k) y += truth[k] * (kBasis2q[k] == 0.0 ? 1.0 : std::pow(pv, kBasis2q[k]));
    pts.emplace_back(pv, y);
  }
  const FitCurve c = refit(pts, kBasis2q);
  for (std::size_t k = 0; k < 4; ++k) CHECK(c.coefficients[k] == doctest::Approx(truth[k]).epsilon(1e-8));
  CHECK(c.rms <= 1e-12);
  CHECK(c.provenance == "refit");
  CHECK_THROWS_AS(refit(std::vector<std::pair<double, double>>{{1.0, 0.5}}, kBasis2q), FitError);
  std::vector<std::pair<double, double>> same(10, {2.0, 0.3});
  CHECK_THROWS_AS(refit(same, kBasis2q), FitError);

  std::vector<std::pair<double, double>> werner;
  for (int k = 0; k <= 56; ++k) werner.emplace_back(100 * pv_werner2_closed(0.72 + 0.005 * k), 0.72 + 0.005 * k);
  CHECK(refit(werner, kBasis2q).rms <= 5e-3);

  const FitCurve back = fit_curve_from_json(fit_curve_to_json(c));
  CHECK(back.coefficients == c.coefficients);
  CHECK(back.basis == c.basis);
  CHECK_THROWS_AS(fit_curve_from_json("{\"basis\":[0],\"coefficients\":[1],\"units\":\"fraction\"}"), ParseError);
}

TEST_CASE("theta and v0 recovery") {
  const auto curve_for = [](double theta, double v0, double noise, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::pair<double, double>> pts;
    for (double pv = 0.5; pv <= 20.0; pv += 0.5) pts.emplace_back(rescaled_visibility_model(theta, v0, pv) * (1 + noise * g(gen)), pv);
    return pts;
  };
  for (const auto& [deg, v0] : std::vector<std::pair<double, double>>{{45.0, 0.986}, {35.0, 0.95}, {40.0, 0.9}}) {
    const ThetaV0 r = estimate_theta_v0(curve_for(deg * kDeg, v0, 0.0, 1));
    CHECK(std::abs(r.theta / kDeg - deg) <= 0.3);
    CHECK(std::abs(r.v0 - v0) <= 0.003);
    CHECK(r.residual <= 1e-6);
  }
  const ThetaV0 noisy = estimate_theta_v0(curve_for(45 * kDeg, 0.986, 0.001, 2));
  CHECK(std::abs(noisy.v0 - 0.986) <= 0.01);
  CHECK_THROWS_AS(estimate_theta_v0(std::vector<std::pair<double, double>>{{0.9, 1.0}}), ParameterError);
  std::vector<std::pair<double, double>> flat{{0.9, 2.0}, {0.95, 2.0}, {1.0, 2.0}};
  CHECK_THROWS_AS(estimate_theta_v0(flat), FitError);
}
