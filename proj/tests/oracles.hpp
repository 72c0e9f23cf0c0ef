#pragma once

// Reference computations used only by the tests. They favor directness over
// speed and share no code with the library paths they check.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <set>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using CMat = Eigen::MatrixXcd;
using V3 = Eigen::Vector3d;

inline CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline CMat sigma_dot(const V3& u) {
  using C = std::complex<double>;
  CMat m(2, 2);
  m << C(u.z(), 0), C(u.x(), -u.y()), C(u.x(), u.y()), C(-u.z(), 0);
  return m;
}

inline CMat projector(const V3& u, int r) {
  return (CMat::Identity(2, 2) + (r ? -1.0 : 1.0) * sigma_dot(u)) / 2.0;
}

/// P(r|S) = Tr(M_{r1|S1} x ... rho), laid out as (S << N) | r.
inline std::vector<double> direct_behavior(const CMat& rho, const std::vector<std::array<V3, 2>>& dirs) {
  const int n = static_cast<int>(dirs.size());
  const unsigned count = 1U << n;
  std::vector<double> out(count * count);
  for (unsigned s = 0; s < count; ++s)
    for (unsigned r = 0; r < count; ++r) {
      CMat op = CMat::Identity(1, 1);
      for (int p = 0; p < n; ++p) {
        const unsigned sp = (s >> (n - 1 - p)) & 1U;
        const int rp = static_cast<int>((r >> (n - 1 - p)) & 1U);
        op = kron(op, projector(dirs[static_cast<std::size_t>(p)][sp], rp));
      }
      out[(s << n) | r] = (op * rho).trace().real();
    }
  return out;
}

/// Wootters concurrence from the non-Hermitian product rho (sy sy) rho^* (sy sy).
inline double wootters(const CMat& rho) {
  using C = std::complex<double>;
  CMat sy(2, 2);
  sy << C(0, 0), C(0, -1), C(0, 1), C(0, 0);
  const CMat yy = kron(sy, sy);
  const CMat prod = rho * yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<CMat> es(prod);
  std::vector<double> lam;
  for (Eigen::Index i = 0; i < 4; ++i) lam.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i).real())));
  std::sort(lam.rbegin(), lam.rend());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

/// Eq-3 style X-state GME concurrence straight from the matrix entries.
inline double xstate_gme(const CMat& rho) {
  const Eigen::Index d = rho.rows();
  double best = 0.0;
  for (Eigen::Index i = 0; i < d / 2; ++i) {
    double chi = 0.0;
    for (Eigen::Index j = 0; j < d / 2; ++j)
      if (j != i) chi += std::sqrt(std::max(0.0, rho(j, j).real() * rho(d - 1 - j, d - 1 - j).real()));
    best = std::max(best, std::abs(rho(i, d - 1 - i)) - chi);
  }
  return 2.0 * best;
}

/// Orbit of a coefficient table under generators applied one at a time:
/// adjacent party transposition, input swap of one party, output flip of one
/// party for one input. Closure by breadth-first search; keys rounded to 1e-9.
inline std::size_t orbit_size(const std::vector<double>& table, int n) {
  const unsigned count = 1U << n;
  auto bitof = [n](unsigned w, int p) { return (w >> (n - 1 - p)) & 1U; };
  auto setbit = [n](unsigned w, int p, unsigned b) {
    const unsigned mask = 1U << (n - 1 - p);
    return b ? (w | mask) : (w & ~mask);
  };
  std::vector<std::function<std::vector<double>(const std::vector<double>&)>> gens;
  for (int p = 0; p + 1 < n; ++p)
    gens.push_back([=](const std::vector<double>& t) {
      std::vector<double> o(t.size());
      for (unsigned s = 0; s < count; ++s)
        for (unsigned r = 0; r < count; ++r) {
          unsigned s2 = setbit(setbit(s, p, bitof(s, p + 1)), p + 1, bitof(s, p));
          unsigned r2 = setbit(setbit(r, p, bitof(r, p + 1)), p + 1, bitof(r, p));
          o[(s2 << n) | r2] = t[(s << n) | r];
        }
      return o;
    });
  for (int p = 0; p < n; ++p) {
    gens.push_back([=](const std::vector<double>& t) {
      std::vector<double> o(t.size());
      for (unsigned s = 0; s < count; ++s)
        for (unsigned r = 0; r < count; ++r) o[((s ^ (1U << (n - 1 - p))) << n) | r] = t[(s << n) | r];
      return o;
    });
    for (unsigned input = 0; input < 2; ++input)
      gens.push_back([=](const std::vector<double>& t) {
        std::vector<double> o(t.size());
        for (unsigned s = 0; s < count; ++s)
          for (unsigned r = 0; r < count; ++r) {
            const unsigned r2 = bitof(s, p) == input ? (r ^ (1U << (n - 1 - p))) : r;
            o[(s << n) | r2] = t[(s << n) | r];
          }
        return o;
      });
  }
  auto key = [](const std::vector<double>& t) {
    std::vector<long long> k;
    for (double c : t) k.push_back(std::llround(c * 1e9));
    return k;
  };
  std::set<std::vector<long long>> seen{key(table)};
  std::vector<std::vector<double>> frontier{table};
  while (!frontier.empty()) {
    std::vector<std::vector<double>> next;
    for (const auto& t : frontier)
      for (const auto& g : gens) {
        auto img = g(t);
        if (seen.insert(key(img)).second) next.push_back(std::move(img));
      }
    frontier = std::move(next);
  }
  return seen.size();
}

/// Midpoint rule for the Werner cube integral in the variable t (x = sin t).
inline double werner_pv_midpoint(double v, int steps = 200000) {
  const double x2 = (2 * v * v - 1) / (v * v * v * v);
  if (x2 <= 0) return 0.0;
  const double tmax = std::asin(std::min(1.0, std::sqrt(x2)));
  const double h = 2 * tmax / steps;
  double acc = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double x = std::sin(-tmax + (i + 0.5) * h);
    const double g = std::sqrt(2.0) - v * (std::sqrt(1 - x) + std::sqrt(1 + x));
    acc += g * g / (8 * v * v);
  }
  return 4 * acc * h;
}

}  // namespace oracle
