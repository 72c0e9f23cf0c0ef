#pragma once

#include <span>
#include <vector>

#include "bellconc/qstate.hpp"

namespace bellconc {

/// Diagonal and anti-diagonal content of an X-shaped density matrix.
/// Pairing: a_j = rho[j,j], b_j = rho[D-1-j, D-1-j], z_j = rho[j, D-1-j].
struct XStateDecomposition {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<Complex> z;
};

/// Wootters concurrence of a two-qubit state.
double concurrence2(const DensityMatrix& rho);

/// sqrt(2 (1 - Tr rho_gamma^2)) for the subsystem `part` of a pure state.
double concurrence_pure(const PureState& psi, std::span<const int> part);

/// Minimum of concurrence_pure over the three single-qubit bipartitions.
double gme_concurrence_pure(const PureState& psi);

/// Throws NotXStateError if any off-X entry exceeds 1e-9 in magnitude.
XStateDecomposition xstate_decompose(const DensityMatrix& rho);

/// Exact GME concurrence 2 max_i {0, |z_i| - sum_{j != i} sqrt(a_j b_j)}.
double gme_concurrence_xstate(const XStateDecomposition& dec);

// Closed forms for Werner-like states ------------------------------------

/// max{0, (v (2 sin 2theta + 1) - 1)/2}
double conc_closed_w2(double theta, double v);

/// max{0, ((3 sin 2theta + 2) v - 2)/3}, the three-qubit expression as
/// published. Disagrees with the X-state formula for v < 1 (zero at v = 2/5
/// instead of 3/7 at theta = pi/4); kept for reproducing the published
/// concurrence-vs-p_V fits.
double gme_closed_w3_published(double theta, double v);

/// max{0, v sin 2theta - 3(1 - v)/4}, the X-state formula evaluated on
/// v|theta><theta| + (1-v)/8 I. Default for estimation pipelines.
double gme_closed_w3_xstate(double theta, double v);

/// Unclamped versions, used to locate zero crossings.
double gme_closed_w3_published_raw(double theta, double v);
double gme_closed_w3_xstate_raw(double theta, double v);

/// max{0, 2|x| + sqrt2 y - 1/2}
double conc_gsms2(double x, double y);

/// max{0, 2|x| + sqrt3 y - 3/4}
double gme_gsms3(double x, double y);

}  // namespace bellconc
