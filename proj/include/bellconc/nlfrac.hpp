#pragma once

// Nonlocal fraction: the probability that uniformly random local projective
// measurements produce a behavior violating at least one inequality of a set.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bellconc/bell.hpp"
#include "bellconc/qstate.hpp"

namespace bellconc {

struct PvEstimate {
  double p_v = 0.0;
  double std_err = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;
  std::string set_tag;
  /// Set when the inequality set is partial, so p_v under-counts the true value.
  bool lower_bound = false;
};

/// Maximal normalized Bell values, one per sampled setting.
struct ViolationSamples {
  std::vector<double> values;
  std::string state_tag;
  std::uint64_t settings_seed = 0;
  std::string set_tag;
};

/// Settings used for sample `index`: two uniform Bloch directions per party
/// drawn from the substream (seed, "settings", index).
MeasurementSettings sample_settings(int n_parties, std::uint64_t seed, std::uint64_t index);

/// Fraction of m sampled settings with max_violation > 1. The result does not
/// depend on `workers` (0 picks the hardware concurrency).
PvEstimate estimate_pv(const DensityMatrix& rho, const InequalitySet& set, std::uint64_t m, std::uint64_t seed,
                       unsigned workers = 1);

ViolationSamples violation_distribution(const DensityMatrix& rho, const InequalitySet& set, std::uint64_t m,
                                        std::uint64_t seed, unsigned workers = 1, std::string state_tag = {});

/// Two-qubit Werner state, R = diag(v, -v, v):
///   2[(1 + v^2) atan(sqrt(2v^2 - 1)/(1 - v^2)) - 3 sqrt(2v^2 - 1)]/v^2,
/// zero for v <= 1/sqrt2 and 2(pi - 3) at v = 1.
double pv_werner2_closed(double v);

/// Same expression with the prefactor (1 - v^2) on the arctangent. Gives -6
/// at v = 1; kept only to document that form.
double pv_werner2_printed(double v);

/// Direct integration of the cube-volume integral (adaptive Simpson after
/// x = sin t, absolute tolerance 1e-10).
double pv_werner2_quadrature(double v);

/// Samples (alpha, beta, x) uniformly in [-1, 1]^3 and counts
/// |alpha sqrt(1+x) + beta sqrt(1-x)| > sqrt2/v. The count fraction is
/// multiplied by 4 for the four CHSH relabelings that can be violated, so
/// p_v = 4 violations / m here.
PvEstimate sample_chsh_reduced(double v, std::uint64_t m, std::uint64_t seed);

/// Fraction of samples strictly above 1/v.
double pv_from_distribution(std::span<const double> values, double v);
inline double pv_from_distribution(const ViolationSamples& s, double v) { return pv_from_distribution(s.values, v); }

/// (fraction above 1/v + eps, fraction above 1/v - eps).
std::pair<double, double> pv_threshold_sensitivity(std::span<const double> values, double v, double epsilon);

/// Binomial estimate with std_err = sqrt(p (1 - p)/m).
PvEstimate make_estimate(std::uint64_t violations, std::uint64_t m, std::string set_tag = {}, bool lower_bound = false);

std::string pv_estimate_to_json(const PvEstimate& e);

/// CSV with header `i_max`, values in shortest round-trip form.
std::string samples_to_csv(const ViolationSamples& s);
std::vector<double> samples_from_csv(std::string_view text);
/// {"state_tag", "seed", "m", "set_tag"}.
std::string samples_sidecar_json(const ViolationSamples& s);

}  // namespace bellconc
