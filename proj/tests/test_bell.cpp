#include <doctest.h>

#include <array>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "bellconc/bell.hpp"
#include "bellconc/errors.hpp"
#include "bellconc/qstate.hpp"
#include "oracles.hpp"

using namespace bellconc;

namespace {

const std::string kData = BELLCONC_TEST_DATA_DIR;

DensityMatrix random_state(int n, Rng& rng) {
  std::normal_distribution<double> g;
  const Eigen::Index d = Eigen::Index{1} << n;
  CMatrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = Complex(g(rng), g(rng));
  CMatrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

MeasurementSettings random_settings(int n, Rng& rng) {
  MeasurementSettings m;
  for (int p = 0; p < n; ++p) m.directions.push_back({random_bloch_vector(rng), random_bloch_vector(rng)});
  return m;
}

Vec3 xy(double phi) { return Vec3(std::cos(phi), std::sin(phi), 0.0); }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("behaviors agree with direct traces and are no-signaling") {
  Rng rng(1);
  for (int n : {2, 3})
    for (int i = 0; i < 25; ++i) {
      const DensityMatrix rho = random_state(n, rng);
      const MeasurementSettings m = random_settings(n, rng);
      const Behavior b = behavior_from_state(rho, m);
      const auto ref = oracle::direct_behavior(rho.matrix(), m.directions);
      for (std::size_t k = 0; k < ref.size(); ++k) CHECK(std::abs(b.table()[k] - ref[k]) <= 1e-13);
      CHECK(b.no_signaling_deviation() <= 1e-9);
    }
}

TEST_CASE("simple behaviors") {
  MeasurementSettings zz;
  zz.directions = {{Vec3::UnitZ(), Vec3::UnitX()}, {Vec3::UnitZ(), Vec3::UnitX()}};
  const Behavior b = behavior_from_state(werner_like(kPi / 4, 1.0, 2), zz);
  CHECK(b.p(0, 0) == doctest::Approx(0.5));
  CHECK(b.p(0, 3) == doctest::Approx(0.5));
  CHECK(std::abs(b.p(0, 1)) < 1e-15);
  CHECK(std::abs(b.p(0, 2)) < 1e-15);

  Rng rng(4);
  const DensityMatrix white(CMatrix::Identity(8, 8) / 8.0);
  const Behavior w = behavior_from_state(white, random_settings(3, rng));
  for (double p : w.table()) CHECK(p == doctest::Approx(0.125).epsilon(1e-14));

  CHECK_THROWS_AS(behavior_from_state(white, zz), ParameterError);
  MeasurementSettings bad = zz;
  bad.directions[0][0] = Vec3(1, 1, 0);
  CHECK_THROWS_AS(behavior_from_state(werner_like(kPi / 4, 1.0, 2), bad), ParameterError);
  CHECK_THROWS_AS(Behavior(2, std::vector<double>(16, 0.3)), ParameterError);
}

TEST_CASE("optimal settings reach the known quantum values") {
  MeasurementSettings tsirelson;
  tsirelson.directions = {{Vec3(1, 0, 0), Vec3(0, 0, 1)},
                          {Vec3(1, 0, 1) / std::sqrt(2.0), Vec3(1, 0, -1) / std::sqrt(2.0)}};
  const Behavior b = behavior_from_state(werner_like(kPi / 4, 1.0, 2), tsirelson);
  CHECK(std::abs(evaluate(chsh_inequality(), b) - std::sqrt(2.0)) <= 1e-12);
  const auto chsh_set = expand_relabelings(std::vector<BellInequality>{chsh_inequality()});
  CHECK(std::abs(max_violation(b, chsh_set) - std::sqrt(2.0)) <= 1e-12);

  const DensityMatrix ghz = werner_like(kPi / 4, 1.0, 3);
  MeasurementSettings svet;
  svet.directions = {{xy(0), xy(kPi / 2)}, {xy(-kPi / 4), xy(kPi / 4)}, {xy(0), xy(kPi / 2)}};
  CHECK(std::abs(evaluate(svetlichny_inequality(), behavior_from_state(ghz, svet)) - std::sqrt(2.0)) <= 1e-10);
  MeasurementSettings mer;
  mer.directions.assign(3, {xy(-kPi / 6), xy(kPi / 3)});
  CHECK(std::abs(evaluate(mermin_inequality(), behavior_from_state(ghz, mer)) - 2.0) <= 1e-10);

  Rng rng(8);
  const DensityMatrix white(CMatrix::Identity(4, 4) / 4.0);
  CHECK(max_violation(behavior_from_state(white, random_settings(2, rng)), chsh_set) <= 1.0);
}

TEST_CASE("relabeling orbits match breadth-first closure") {
  const auto chsh = expand_relabelings(std::vector<BellInequality>{chsh_inequality()});
  CHECK(chsh.members.size() == 8);
  CHECK(oracle::orbit_size(chsh_inequality().coefficients, 2) == 8);
  for (const auto& ineq : {mermin_inequality(), svetlichny_inequality()}) {
    const auto set = expand_relabelings(std::vector<BellInequality>{ineq});
    CHECK(set.members.size() == oracle::orbit_size(ineq.coefficients, 3));
    CHECK(set.full_correlation());
    for (const auto& m : set.members) CHECK(m.lhv_bound == 1.0);
  }
  CHECK(all_relabelings(2).size() == 2 * 4 * 16);
  CHECK(all_relabelings(3).size() == 6 * 8 * 64);

  BellInequality sym;
  sym.n_parties = 2;
  sym.coefficients.assign(16, 1.0);
  sym.lhv_bound = 4.0;
  CHECK(expand_relabelings(std::vector<BellInequality>{sym}).members.size() == 1);
}

TEST_CASE("expanded sets are closed and max_violation is relabeling invariant") {
  const auto set = expand_relabelings(std::vector<BellInequality>{svetlichny_inequality(), mermin_inequality()});
  const auto group = all_relabelings(3);
  std::set<std::vector<long long>> keys;
  for (const auto& m : set.members) {
    std::vector<long long> k;
    for (double c : m.coefficients) k.push_back(std::llround(c * 1e9));
    keys.insert(k);
  }
  for (std::size_t gi = 0; gi < group.size(); gi += 37)
    for (const auto& m : set.members) {
      const auto img = relabel(m, group[gi]);
      std::vector<long long> k;
      for (double c : img.coefficients) k.push_back(std::llround(c * 1e9));
      CHECK(keys.count(k) == 1);
    }

  Rng rng(12);
  const DensityMatrix rho = random_state(3, rng);
  for (int i = 0; i < 5; ++i) {
    const Behavior b = behavior_from_state(rho, random_settings(3, rng));
    const double ref = max_violation(b, set);
    for (std::size_t gi = 0; gi < group.size(); gi += 101) CHECK(max_violation(relabel(b, group[gi]), set) == doctest::Approx(ref).epsilon(1e-12));
  }
  CHECK_THROWS_AS(max_violation(behavior_from_state(rho, random_settings(3, rng)), InequalitySet{}), ParameterError);
}

TEST_CASE("evaluate is linear and scales with visibility") {
  Rng rng(21);
  const DensityMatrix r1 = random_state(3, rng), r2 = random_state(3, rng);
  const MeasurementSettings m = random_settings(3, rng);
  const Behavior b1 = behavior_from_state(r1, m), b2 = behavior_from_state(r2, m);
  const double lam = 0.37;
  std::vector<double> mix(64);
  for (std::size_t i = 0; i < 64; ++i) mix[i] = lam * b1.table()[i] + (1 - lam) * b2.table()[i];
  const auto ineq = svetlichny_inequality();
  CHECK(std::abs(evaluate(ineq, Behavior(3, mix)) - (lam * evaluate(ineq, b1) + (1 - lam) * evaluate(ineq, b2))) <= 1e-12);

  // Inequality with marginal terms: I(v) = v I(pure) + (1 - v) I(white).
  BellInequality marg = mermin_inequality();
  marg.coefficients[0] += 0.5;
  marg.coefficients[(3U << 3) | 5U] -= 0.25;
  const DensityMatrix white(CMatrix::Identity(8, 8) / 8.0);
  for (double theta : {0.4, kPi / 4})
    for (double v : {0.6, 0.85}) {
      const MeasurementSettings s = random_settings(3, rng);
      const Behavior pure = behavior_from_state(werner_like(theta, 1.0, 3), s);
      const Behavior noisy = behavior_from_state(werner_like(theta, v, 3), s);
      for (const auto& ineq2 : {mermin_inequality(), svetlichny_inequality()}) {
        CHECK(std::abs(evaluate(ineq2, noisy) - v * evaluate(ineq2, pure)) <= 1e-12);
      }
      const double expect = v * evaluate(marg, pure) + (1 - v) * evaluate(marg, behavior_from_state(white, s));
      CHECK(std::abs(evaluate(marg, noisy) - expect) <= 1e-12);
    }
}

TEST_CASE("correlation matrix and Horodecki form") {
  const Eigen::Matrix3d r = correlation_matrix(werner_like(kPi / 4, 1.0, 2));
  CHECK((r - Eigen::Vector3d(1, -1, 1).asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff() <= 1e-15);
  const Eigen::Matrix3d rv = correlation_matrix(werner_like(kPi / 4, 0.6, 2));
  CHECK((rv - Eigen::Vector3d(0.6, -0.6, 0.6).asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(correlation_matrix(DensityMatrix(CMatrix::Identity(4, 4) / 4.0)).cwiseAbs().maxCoeff() <= 1e-15);

  const Vec3 a0(1, 0, 0), a1(0, 0, 1), b0 = Vec3(1, 0, 1) / std::sqrt(2.0), b1 = Vec3(1, 0, -1) / std::sqrt(2.0);
  CHECK(chsh_horodecki(r, a0, a1, b0, b1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(chsh_horodecki(Eigen::Matrix3d::Zero(), a0, a1, b0, b1) == 0.0);

  Rng rng(31);
  for (int i = 0; i < 50; ++i) {
    const DensityMatrix rho = random_state(2, rng);
    const MeasurementSettings m = random_settings(2, rng);
    const Eigen::Matrix3d rr = correlation_matrix(rho);
    const double h = chsh_horodecki(rr, m.directions[0][0], m.directions[0][1], m.directions[1][0], m.directions[1][1]);
    CHECK(std::abs(h - std::abs(evaluate(chsh_inequality(), behavior_from_state(rho, m)))) <= 1e-10);
    const Eigen::Vector3d s = rr.jacobiSvd().singularValues();
    CHECK(h <= std::sqrt(s(0) * s(0) + s(1) * s(1)) + 1e-12);
  }
}

TEST_CASE("inequality text format") {
  const BellInequality chsh = load_inequality(kData + "/inequalities/chsh.bellineq");
  CHECK(chsh.coefficients.size() == 16);
  CHECK(chsh.lhv_bound == 2.0);
  CHECK(chsh.name == "chsh");
  CHECK(chsh.coefficients == chsh_inequality().coefficients);

  const std::string svet_text = slurp(kData + "/inequalities/svetlichny.bellineq");
  CHECK(serialize_inequality(parse_inequality(svet_text)) == svet_text);
  CHECK(svet_text == serialize_inequality(svetlichny_inequality()));
  CHECK(slurp(kData + "/inequalities/extra/mermin.bellineq") == serialize_inequality(mermin_inequality()));

  BellInequality odd = chsh_inequality();
  odd.coefficients[5] = 0.1 + 0.2;
  odd.lhv_bound = 2.0 / 3.0;
  const BellInequality back = parse_inequality(serialize_inequality(odd));
  CHECK(back.coefficients == odd.coefficients);
  CHECK(back.lhv_bound == odd.lhv_bound);
  CHECK(back.name == odd.name);

  // Separate-digit form is accepted too.
  const BellInequality spaced = parse_inequality("bellineq 1\nparties 2\ninputs 2\noutputs 2\nbound 1\nc 0 1 1 0 2.5\n");
  CHECK(spaced.coefficients[(1U << 2) | 2U] == 2.5);

  const auto line_of = [](const std::string& text) {
    try {
      parse_inequality(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{9999};
  };
  CHECK(line_of("bellineq 1\nparties 2\ninputs 2\noutputs 3\nbound 2\n") == 4);
  CHECK(line_of("bellineq 1\nparties 2\ninputs 2\noutputs 2\nc 00 00 1\n") == 5);
  CHECK(line_of("bellineq 1\nparties 2\ninputs 2\noutputs 2\nbound 2\nc 00 0 1\n") == 6);
  CHECK(line_of("bellineq 1\nparties 2\ninputs 2\noutputs 2\nbound 2\n# note\nc 00 00 x\n") == 7);
  CHECK(line_of("bellineq 1\nparties 2\ninputs 2\noutputs 2\nbound 2\nc 00 00 1\nc 00 00 2\n") == 7);
  CHECK(line_of("bellineq 2\n") == 1);
  CHECK_THROWS_AS(parse_inequality("bellineq 1\nparties 2\ninputs 2\noutputs 2\n"), ParseError);
  CHECK_THROWS_AS(parse_inequality("bellineq 1\nparties 2\ninputs 2\noutputs 2\nbound 2\n"), ParseError);
}

TEST_CASE("inequality directories") {
  const auto two = load_inequality_set(kData + "/inequalities", 2);
  CHECK(two.members.size() == 8);
  CHECK(two.complete);
  const auto three = load_inequality_set(kData + "/inequalities", 3);
  CHECK(three.tag == "svetlichny");
  CHECK_FALSE(three.complete);
  const auto extra = load_inequality_dir(kData + "/inequalities/extra", 3);
  CHECK(extra.size() == 1);
  CHECK(extra[0].name == "mermin");
  CHECK_THROWS_AS(load_inequality_dir(kData + "/inequalities/extra", 2), DataError);
  CHECK_THROWS_AS(load_inequality_dir(kData + "/no-such-dir", 2), DataError);
  CHECK(two.dedup_hash() == load_inequality_set(kData + "/inequalities", 2).dedup_hash());
}
