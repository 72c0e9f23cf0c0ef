#include "bellconc/entanglement.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "bellconc/errors.hpp"

namespace bellconc {

namespace {

void require_theta_v(double theta, double v) {
  if (!(theta > 0.0 && theta <= kPi / 4 + 1e-15)) throw ParameterError("theta must lie in (0, pi/4]");
  if (!(v > 0.0 && v <= 1.0)) throw ParameterError("visibility must lie in (0, 1]");
}

Eigen::Matrix4cd spin_flip() {
  const Eigen::Matrix2cd& sy = pauli(2);
  Eigen::Matrix4cd yy;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) yy.block<2, 2>(2 * i, 2 * j) = sy(i, j) * sy;
  return yy;
}

}  // namespace

double concurrence2(const DensityMatrix& rho) {
  if (rho.n_qubits() != 2) throw ParameterError("concurrence2 needs a two-qubit state");
  // The square roots of the eigenvalues of rho (sy x sy) rho^* (sy x sy) are
  // the singular values of W^T (sy x sy) W with rho = W W^dag. Working with
  // singular values avoids taking square roots of eigenvalue noise.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho.matrix());
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < 4; ++i)
    if (es.eigenvalues()(i) > 1e-14) support.push_back(i);
  CMatrix w(4, static_cast<Eigen::Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) {
    const Eigen::Index i = support[k];
    w.col(static_cast<Eigen::Index>(k)) = std::sqrt(es.eigenvalues()(i)) * es.eigenvectors().col(i);
  }
  const CMatrix tau = w.transpose() * spin_flip() * w;
  const Eigen::VectorXd sv = Eigen::JacobiSVD<CMatrix>(tau).singularValues();

  std::array<double, 4> lam{};
  for (Eigen::Index i = 0; i < sv.size(); ++i) lam[static_cast<std::size_t>(i)] = sv(i);
  std::sort(lam.begin(), lam.end(), std::greater<>());
  return std::clamp(lam[0] - lam[1] - lam[2] - lam[3], 0.0, 1.0);
}

double concurrence_pure(const PureState& psi, std::span<const int> part) {
  const DensityMatrix reduced = partial_trace(DensityMatrix::from_pure(psi), part);
  return std::sqrt(std::max(0.0, 2.0 * (1.0 - purity(reduced))));
}

double gme_concurrence_pure(const PureState& psi) {
  if (psi.n_qubits() != 3) throw ParameterError("gme_concurrence_pure needs a three-qubit state");
  double best = 1.0;
  for (int q = 0; q < 3; ++q) {
    const std::array<int, 1> part{q};
    best = std::min(best, concurrence_pure(psi, part));
  }
  return best;
}

XStateDecomposition xstate_decompose(const DensityMatrix& rho) {
  const auto d = static_cast<Eigen::Index>(rho.dim());
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      if (j == i || j == d - 1 - i) continue;
      const double mag = std::abs(rho(i, j));
      if (mag > 1e-9) throw NotXStateError(static_cast<std::size_t>(i), static_cast<std::size_t>(j), mag);
    }
  XStateDecomposition dec;
  for (Eigen::Index j = 0; j < d / 2; ++j) {
    dec.a.push_back(rho(j, j).real());
    dec.b.push_back(rho(d - 1 - j, d - 1 - j).real());
    dec.z.push_back(rho(j, d - 1 - j));
  }
  return dec;
}

double gme_concurrence_xstate(const XStateDecomposition& dec) {
  const std::size_t n = dec.z.size();
  if (dec.a.size() != n || dec.b.size() != n) throw ParameterError("inconsistent X-state decomposition");
  std::vector<double> root(n);
  for (std::size_t j = 0; j < n; ++j) root[j] = std::sqrt(std::max(0.0, dec.a[j] * dec.b[j]));
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double chi = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) chi += root[j];
    best = std::max(best, std::abs(dec.z[i]) - chi);
  }
  return 2.0 * best;
}

double conc_closed_w2(double theta, double v) {
  require_theta_v(theta, v);
  return std::max(0.0, (v * (2.0 * std::sin(2.0 * theta) + 1.0) - 1.0) / 2.0);
}

double gme_closed_w3_published_raw(double theta, double v) {
  require_theta_v(theta, v);
  return ((3.0 * std::sin(2.0 * theta) + 2.0) * v - 2.0) / 3.0;
}

double gme_closed_w3_xstate_raw(double theta, double v) {
  require_theta_v(theta, v);
  return v * std::sin(2.0 * theta) - 3.0 * (1.0 - v) / 4.0;
}

double gme_closed_w3_published(double theta, double v) { return std::max(0.0, gme_closed_w3_published_raw(theta, v)); }

double gme_closed_w3_xstate(double theta, double v) { return std::max(0.0, gme_closed_w3_xstate_raw(theta, v)); }

double conc_gsms2(double x, double y) {
  const double s2 = std::sqrt(2.0);
  if (std::abs(y) > 1.0 / (2.0 * s2) + 1e-15 || std::abs(x) > (1.0 + 2.0 * s2 * y) / 4.0 + 1e-15) {
    throw ParameterError("gsms2 parameters outside the admissible triangle");
  }
  return std::max(0.0, 2.0 * std::abs(x) + s2 * y - 0.5);
}

double gme_gsms3(double x, double y) {
  const double s3 = std::sqrt(3.0);
  if (y < -1.0 / (4.0 * s3) - 1e-15 || y > s3 / 4.0 + 1e-15 || std::abs(x) > (1.0 + 4.0 * s3 * y) / 8.0 + 1e-15) {
    throw ParameterError("gsms3 parameters outside the admissible triangle");
  }
  return std::max(0.0, 2.0 * std::abs(x) + s3 * y - 0.75);
}

}  // namespace bellconc
