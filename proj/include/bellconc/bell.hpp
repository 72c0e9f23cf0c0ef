#pragma once

// Bell scenarios with N <= 3 parties, two inputs and two outputs per party.
//
// Behaviors and inequality coefficients share one flat layout: entry
// (settings, outcomes) lives at index (settings << N) | outcomes, where
// party 0 is the most significant bit of both the settings and the outcome
// index.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bellconc/qstate.hpp"

namespace bellconc {

inline constexpr int kMaxParties = 3;

/// Two projective qubit measurements per party, given by unit Bloch vectors.
/// Outcome r of setting S projects onto (I + (-1)^r u_S . sigma)/2.
struct MeasurementSettings {
  std::vector<std::array<Vec3, 2>> directions;

  int n_parties() const noexcept { return static_cast<int>(directions.size()); }
  /// Throws ParameterError if any direction deviates from unit norm by more than `tol`.
  void validate(double tol = 1e-12) const;
};

/// Joint conditional probabilities P(r|S).
class Behavior {
public:
  /// Checks P >= -1e-12 and per-setting normalization within 1e-10.
  Behavior(int n_parties, std::vector<double> table);

  int n_parties() const noexcept { return n_parties_; }
  double p(unsigned settings, unsigned outcomes) const { return table_[(settings << n_parties_) | outcomes]; }
  std::span<const double> table() const noexcept { return table_; }

  /// Largest dependence of any party subset's marginal on the other parties' settings.
  double no_signaling_deviation() const;

private:
  int n_parties_;
  std::vector<double> table_;
};

struct BellInequality {
  int n_parties = 2;
  std::vector<double> coefficients;  // 4^N entries, Behavior layout
  double lhv_bound = 1.0;
  std::string name;

  /// At least one nonzero coefficient, lhv_bound > 0, matching size.
  void validate() const;
  /// True if only N-party full correlators carry weight (no marginal or constant terms).
  bool is_full_correlation(double tol = 1e-12) const;
};

/// Deduplicated relabeling orbit of a list of inequalities. Every member is
/// scaled to lhv_bound = 1.
struct InequalitySet {
  int n_parties = 0;
  std::vector<BellInequality> generators;
  std::vector<BellInequality> members;
  std::string tag;
  /// False when the generators are known to be a subset of the facet classes;
  /// p_V computed with an incomplete set is a lower bound.
  bool complete = false;

  std::uint64_t dedup_hash() const;
  bool full_correlation() const;
};

/// A relabeling of parties, inputs and outputs. For new party j the old party
/// is party_perm[j]; inputs of old party p are swapped when bit p of
/// input_swap is set; outputs of old party p under old input s are flipped
/// when output_flip[p][s] is set.
struct Relabeling {
  std::vector<int> party_perm;
  unsigned input_swap = 0;
  std::vector<std::array<bool, 2>> output_flip;
};

/// All N! * 2^N * 4^N relabelings of an N-party scenario.
std::vector<Relabeling> all_relabelings(int n_parties);

/// Transformed table X' with X'[S', r'] = X[S, r] under the relabeling.
std::vector<double> relabel_table(std::span<const double> table, int n_parties, const Relabeling& g);
Behavior relabel(const Behavior& b, const Relabeling& g);
BellInequality relabel(const BellInequality& ineq, const Relabeling& g);

/// Pauli expectation tensor T[mu_0..mu_{N-1}] = Tr(rho sigma_mu0 x ... ), mu_0 most
/// significant. Builds behaviors for many settings without touching rho again.
class CorrelationTensor {
public:
  explicit CorrelationTensor(const DensityMatrix& rho);

  int n_parties() const noexcept { return n_parties_; }
  std::span<const double> values() const noexcept { return std::span<const double>(t_.data(), size_); }

  Behavior behavior(const MeasurementSettings& m) const;
  /// Hot-path variant writing 4^N probabilities into `out`.
  void behavior_into(const MeasurementSettings& m, std::span<double> out) const;

private:
  int n_parties_;
  std::size_t size_;
  std::array<double, 64> t_{};
};

Behavior behavior_from_state(const DensityMatrix& rho, const MeasurementSettings& m);

/// Normalized value (sum mu P) / C_LHV. Violation iff the result exceeds 1.
double evaluate(const BellInequality& ineq, const Behavior& b);

InequalitySet expand_relabelings(std::span<const BellInequality> ineqs, std::string tag = {}, bool complete = false);

/// Maximum normalized value over the set.
double max_violation(const Behavior& b, const InequalitySet& set);
double max_violation(std::span<const double> table, const InequalitySet& set);

/// R_ij = Tr[rho (sigma_i x sigma_j)] for a two-qubit state.
Eigen::Matrix3d correlation_matrix(const DensityMatrix& rho);

/// |a0.R(b0+b1) + a1.R(b0-b1)| / 2.
double chsh_horodecki(const Eigen::Matrix3d& r, const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1);

// Bundled inequality classes ----------------------------------------------

/// E00 + E01 + E10 - E11 <= 2.
BellInequality chsh_inequality();
/// E001 + E010 + E100 - E111 <= 2 (fully-local bound; not a genuine tripartite test).
BellInequality mermin_inequality();
/// E000 + E001 + E010 - E011 + E100 - E101 - E110 - E111 <= 4.
BellInequality svetlichny_inequality();

/// Inequality with coefficient weight[S] * (-1)^(r_1 + ... + r_N) on P(r|S).
BellInequality correlator_inequality(int n_parties, std::span<const double> weights, double bound, std::string name);

// Text format --------------------------------------------------------------

BellInequality parse_inequality(std::string_view text);
std::string serialize_inequality(const BellInequality& ineq);

BellInequality load_inequality(const std::string& path);
/// Loads every *.bellineq file directly inside `dir` whose party count is
/// `n_parties`. Throws DataError when none is found.
std::vector<BellInequality> load_inequality_dir(const std::string& dir, int n_parties);

/// Relabeling orbit of everything load_inequality_dir finds. A two-party set
/// containing CHSH is marked complete; a three-party set is marked complete
/// once it holds at least 185 generators.
InequalitySet load_inequality_set(const std::string& dir, int n_parties);

/// $BELLCONC_INEQ_DIR when set, otherwise the data directory fixed at build time.
std::string default_inequality_dir();

}  // namespace bellconc
