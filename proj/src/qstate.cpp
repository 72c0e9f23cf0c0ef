#include "bellconc/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "bellconc/errors.hpp"

namespace bellconc {

namespace {

int qubits_for_dim(Eigen::Index dim, int lo, int hi) {
  for (int n = lo; n <= hi; ++n) {
    if (dim == (Eigen::Index{1} << n)) return n;
  }
  throw ParameterError("dimension " + std::to_string(dim) + " is not 2^n for n in [" +
                       std::to_string(lo) + "," + std::to_string(hi) + "]");
}

void require_theta(double theta) {
  if (!(theta > 0.0 && theta <= kPi / 4 + 1e-15)) {
    throw ParameterError("theta must lie in (0, pi/4], got " + std::to_string(theta));
  }
}

void require_qubits(int n) {
  if (n != 2 && n != 3) throw ParameterError("n_qubits must be 2 or 3, got " + std::to_string(n));
}

CMatrix projector(const CVector& psi) { return psi * psi.adjoint(); }

CVector ghz_vector(int n, double sign) {
  const Eigen::Index d = Eigen::Index{1} << n;
  CVector v = CVector::Zero(d);
  v(0) = 1.0 / std::sqrt(2.0);
  v(d - 1) = sign / std::sqrt(2.0);
  return v;
}

}  // namespace

PureState::PureState(CVector amplitudes) : n_qubits_(qubits_for_dim(amplitudes.size(), 2, 3)) {
  if (std::abs(amplitudes.norm() - 1.0) > 1e-12) {
    throw ParameterError("pure state amplitudes must have unit norm");
  }
  amplitudes_ = std::move(amplitudes);
}

DensityMatrix::DensityMatrix(const CMatrix& entries) {
  if (entries.rows() != entries.cols()) throw ParameterError("density matrix must be square");
  n_qubits_ = qubits_for_dim(entries.rows(), 1, 3);
  const double herm = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12) throw ParameterError("density matrix is not Hermitian (deviation " + std::to_string(herm) + ")");
  CMatrix h = 0.5 * (entries + entries.adjoint());
  if (std::abs(h.trace().real() - 1.0) > 1e-12) {
    throw ParameterError("density matrix trace must be 1, got " + std::to_string(h.trace().real()));
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin < -kPsdTolerance) {
    throw ParameterError("density matrix is not positive semidefinite (min eigenvalue " + std::to_string(lmin) + ")");
  }
  // Eigen-solver noise on exact zero eigenvalues is left alone.
  if (lmin < -1e-14) {
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    h = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
    h /= h.trace().real();
  }
  entries_ = std::move(h);
}

DensityMatrix::DensityMatrix(CMatrix entries, int n_qubits, Trusted)
    : n_qubits_(n_qubits), entries_(std::move(entries)) {}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(projector(psi.amplitudes()), psi.n_qubits(), Trusted{});
}

LocalUnitary::LocalUnitary(const Eigen::Matrix2cd& u) : u_(u) {
  const double dev = (u.adjoint() * u - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
  if (dev > 1e-12) throw ParameterError("local operator is not unitary (deviation " + std::to_string(dev) + ")");
}

const Eigen::Matrix2cd& pauli(int index) {
  static const std::array<Eigen::Matrix2cd, 4> mats = [] {
    std::array<Eigen::Matrix2cd, 4> m;
    const Complex i(0.0, 1.0);
    m[0] << 1, 0, 0, 1;
    m[1] << 0, 1, 1, 0;
    m[2] << 0, -i, i, 0;
    m[3] << 1, 0, 0, -1;
    return m;
  }();
  return mats.at(static_cast<std::size_t>(index));
}

PureState gghz(double theta, int n_qubits) {
  require_theta(theta);
  require_qubits(n_qubits);
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  CVector v = CVector::Zero(d);
  v(0) = std::cos(theta);
  v(d - 1) = std::sin(theta);
  return PureState(std::move(v));
}

DensityMatrix werner_like(double theta, double v, int n_qubits) {
  if (!(v > 0.0 && v <= 1.0)) throw ParameterError("visibility must lie in (0, 1], got " + std::to_string(v));
  const PureState psi = gghz(theta, n_qubits);
  const auto d = static_cast<Eigen::Index>(psi.dim());
  CMatrix rho = v * projector(psi.amplitudes());
  rho.diagonal().array() += (1.0 - v) / static_cast<double>(d);
  return DensityMatrix(rho);
}

DensityMatrix gsms2(double x, double y) {
  const double s2 = std::sqrt(2.0);
  if (std::abs(y) > 1.0 / (2.0 * s2) + 1e-15 || std::abs(x) > (1.0 + 2.0 * s2 * y) / 4.0 + 1e-15) {
    throw ParameterError("gsms2 parameters outside the admissible triangle");
  }
  CMatrix rho = (s2 * y + x) * projector(ghz_vector(2, 1.0)) + (s2 * y - x) * projector(ghz_vector(2, -1.0));
  rho.diagonal().array() += (1.0 - 2.0 * s2 * y) / 4.0;
  return DensityMatrix(rho);
}

DensityMatrix gsms3(double x, double y) {
  const double s3 = std::sqrt(3.0);
  if (y < -1.0 / (4.0 * s3) - 1e-15 || y > s3 / 4.0 + 1e-15 || std::abs(x) > (1.0 + 4.0 * s3 * y) / 8.0 + 1e-15) {
    throw ParameterError("gsms3 parameters outside the admissible triangle");
  }
  const double w = 2.0 * s3 / 3.0 * y;
  CMatrix rho = (w + x) * projector(ghz_vector(3, 1.0)) + (w - x) * projector(ghz_vector(3, -1.0));
  rho.diagonal().array() += (3.0 - 4.0 * s3 * y) / 24.0;
  return DensityMatrix(rho);
}

DensityMatrix mems(double gamma) {
  if (!(gamma >= 2.0 / 3.0 - 1e-15 && gamma <= 1.0)) {
    throw ParameterError("mems gamma must lie in [2/3, 1], got " + std::to_string(gamma));
  }
  CMatrix rho = gamma * projector(ghz_vector(2, 1.0));
  rho(1, 1) += 1.0 - gamma;
  return DensityMatrix(rho);
}

DensityMatrix phn(double x, int n_qubits) {
  require_qubits(n_qubits);
  if (std::abs(x) > 0.5) throw ParameterError("phn requires |x| <= 1/2, got " + std::to_string(x));
  const CMatrix rho = (0.5 + x) * projector(ghz_vector(n_qubits, 1.0)) +
                      (0.5 - x) * projector(ghz_vector(n_qubits, -1.0));
  return DensityMatrix(rho);
}

PureState basis_state(std::string_view bits) {
  if (bits.size() != 2 && bits.size() != 3) throw ParameterError("basis state needs 2 or 3 bits");
  Eigen::Index index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ParameterError("basis state bits must be 0 or 1");
    index = (index << 1) | (c == '1' ? 1 : 0);
  }
  CVector v = CVector::Zero(Eigen::Index{1} << bits.size());
  v(index) = 1.0;
  return PureState(std::move(v));
}

DensityMatrix apply_local_unitaries(const DensityMatrix& rho, std::span<const LocalUnitary> us) {
  if (static_cast<int>(us.size()) != rho.n_qubits()) {
    throw ParameterError("need one local unitary per qubit");
  }
  CMatrix u = us[0].matrix();
  for (std::size_t k = 1; k < us.size(); ++k) {
    const CMatrix prev = u;
    const Eigen::Matrix2cd& next = us[k].matrix();
    u.resize(prev.rows() * 2, prev.cols() * 2);
    for (Eigen::Index i = 0; i < prev.rows(); ++i)
      for (Eigen::Index j = 0; j < prev.cols(); ++j) u.block(2 * i, 2 * j, 2, 2) = prev(i, j) * next;
  }
  CMatrix out = u * rho.matrix() * u.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(std::move(out), rho.n_qubits(), DensityMatrix::Trusted{});
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  const int n = rho.n_qubits();
  std::vector<bool> kept(static_cast<std::size_t>(n), false);
  for (int q : keep) {
    if (q < 0 || q >= n || kept[static_cast<std::size_t>(q)]) throw ParameterError("invalid qubit subset");
    kept[static_cast<std::size_t>(q)] = true;
  }
  if (keep.empty() || static_cast<int>(keep.size()) == n) {
    throw ParameterError("partial trace needs a non-empty strict subset of qubits");
  }
  std::vector<int> keep_sorted(keep.begin(), keep.end());
  std::sort(keep_sorted.begin(), keep_sorted.end());
  const int k = static_cast<int>(keep_sorted.size());
  const Eigen::Index dk = Eigen::Index{1} << k;
  CMatrix out = CMatrix::Zero(dk, dk);
  const Eigen::Index d = Eigen::Index{1} << n;
  // Reduced index: bits of the kept qubits, in ascending qubit order.
  auto reduced = [&](Eigen::Index full) {
    Eigen::Index r = 0;
    for (int q : keep_sorted) r = (r << 1) | ((full >> (n - 1 - q)) & 1);
    return r;
  };
  auto traced = [&](Eigen::Index full) {
    Eigen::Index r = 0;
    for (int q = 0; q < n; ++q)
      if (!kept[static_cast<std::size_t>(q)]) r = (r << 1) | ((full >> (n - 1 - q)) & 1);
    return r;
  };
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      if (traced(i) == traced(j)) out(reduced(i), reduced(j)) += rho(i, j);
  return DensityMatrix(std::move(out), k, DensityMatrix::Trusted{});
}

double purity(const DensityMatrix& rho) {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return rho.matrix().cwiseAbs2().sum();
}

double fidelity_pure(const DensityMatrix& rho, const PureState& psi) {
  if (rho.dim() != psi.dim()) throw ParameterError("fidelity: dimension mismatch");
  const Complex f = psi.amplitudes().adjoint() * rho.matrix() * psi.amplitudes();
  return std::clamp(f.real(), 0.0, 1.0);
}

double visibility_from_purity(double p) {
  if (!(p >= 1.0 / 8.0 && p <= 1.0)) throw ParameterError("purity must lie in [1/8, 1], got " + std::to_string(p));
  return std::sqrt((8.0 * p - 1.0) / 7.0);
}

double min_eigenvalue(const CMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

LocalUnitary haar_unitary(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Matrix2cd z;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(z);
  Eigen::Matrix2cd q = qr.householderQ();
  const Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity of QR so that Q is Haar distributed.
  for (int j = 0; j < 2; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= std::abs(d) > 0 ? d / std::abs(d) : Complex(1.0);
  }
  return LocalUnitary(q);
}

Vec3 random_bloch_vector(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    const double x = normal(rng);
    const double y = normal(rng);
    const double z = normal(rng);
    const double r = std::sqrt(x * x + y * y + z * z);
    if (r > 1e-300) return Vec3(x / r, y / r, z / r);
  }
}

}  // namespace bellconc
