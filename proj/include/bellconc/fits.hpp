#pragma once

// Empirical relations between the nonlocal fraction, the visibility and the
// (GME-)concurrence of Werner-like states.
//
// Every fit takes p_V in percent (0 to 100). Angle-dependent coefficients
// take theta in radians.

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bellconc {

/// y(pv) = sum_k coefficients[k] * pv^basis[k].
struct FitCurve {
  std::vector<double> basis;
  std::vector<double> coefficients;
  double domain_lo = 0.5;
  double domain_hi = 30.0;
  std::string units = "percent";
  std::string provenance = "published";
  double rms = 0.0;

  double operator()(double pv_percent) const;
  void validate() const;
};

std::string fit_curve_to_json(const FitCurve& c);
FitCurve fit_curve_from_json(std::string_view text);

inline const std::vector<double> kBasis2q{0.0, 0.25, 0.5, 1.0};
inline const std::vector<double> kBasis3q{0.0, 1.0 / 6.0, 0.5, 1.0};

// Maximal violations and critical visibilities -----------------------------

double beta2(double theta);
double v2cr(double theta);

/// The three expressions of the piecewise three-qubit maximal violation,
/// each evaluated at theta regardless of which interval theta lies in.
struct Beta3Branches {
  double polynomial;
  double middle;
  double upper;
};
Beta3Branches beta3_branches(double theta);

/// Polynomial below 14.94 deg, (1 + 2 sqrt(1 + sin^2 2t))/3 up to 29.5 deg,
/// sqrt(2 sin^2 2t) above.
double beta3(double theta);
double v3cr(double theta);

inline constexpr double kBeta3Break1Deg = 14.94;
inline constexpr double kBeta3Break2Deg = 29.5;

// Published coefficient functions ------------------------------------------

double f1(double theta);
double f2(double theta);
double f3(double theta);
double g1(double theta);
double g2(double theta);
double g3(double theta);

/// v2cr + f1 pv^(1/4) + f2 pv^(1/2) + f3 pv, clamped to [0, 1].
double v_from_pv_2q(double theta, double pv_percent);
/// v3cr + g1 pv^(1/6) + g2 pv^(1/2) + g3 pv, clamped to [0, 1].
double v_from_pv_3q(double theta, double pv_percent);

/// The two relations above as FitCurve objects at fixed theta.
FitCurve published_curve_2q(double theta);
FitCurve published_curve_3q(double theta);

// Concurrence fits, clamped to [0, 1] ----------------------------------------

double c_lower_2q(double pv_percent);
double c_mems_fit(double pv_percent);
double c_phn3_fit(double pv_percent);
double c_gme_pure3_fit(double pv_percent);
double c_gme_45_fit(double pv_percent);
double c_gme_35_fit(double pv_percent);

/// Names accepted: c-lower-2q, c-mems, c-phn3, c-gme-pure3, c-gme-45,
/// c-gme-35, v-2q, v-3q (the last two also need theta).
double evaluate_named_fit(std::string_view name, double pv_percent, double theta = 0.0);
std::vector<std::string> named_fits();

enum class ConcFamily { werner2, werner3_published, werner3_xstate };
ConcFamily parse_conc_family(std::string_view name);

/// Closed-form concurrence of the family evaluated at the fitted visibility.
double concurrence_from_pv(double theta, double pv_percent, ConcFamily family);

// Regeneration ---------------------------------------------------------------

/// Linear least squares of y on pv^basis. Points are (pv_percent, y). Throws
/// FitError when the design matrix is rank deficient.
FitCurve refit(std::span<const std::pair<double, double>> points, std::span<const double> basis,
               std::string provenance = "refit");

/// (1/v0) (v3cr + g1 pv^(1/6) + g2 pv^(1/2) + g3 pv), unclamped.
double rescaled_visibility_model(double theta, double v0, double pv_percent);

struct ThetaV0 {
  double theta;
  double v0;
  double residual;  // RMS in v
};

/// Least-squares fit of (theta, v0) to points (v, pv_percent): grid over
/// theta in (0, pi/4], v0 in [0.8, 1], then Nelder-Mead refinement.
ThetaV0 estimate_theta_v0(std::span<const std::pair<double, double>> curve);

}  // namespace bellconc
