#include "bellconc/fits.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include <Eigen/Dense>
#include <json.hpp>

#include "bellconc/entanglement.hpp"
#include "bellconc/errors.hpp"
#include "bellconc/qstate.hpp"

namespace bellconc {

namespace {

constexpr double kDeg = kPi / 180.0;

void require_theta_open(double theta) {
  if (!(theta > 0.0 && theta <= kPi / 4 + 1e-15)) throw ParameterError("theta must lie in (0, pi/4]");
}

void require_theta_closed(double theta) {
  if (!(theta >= 0.0 && theta <= kPi / 4 + 1e-15)) throw ParameterError("theta must lie in [0, pi/4]");
}

void require_pv(double pv) {
  if (!(pv >= 0.0 && pv <= 100.0)) throw ParameterError("p_V must lie in [0, 100] percent");
}

double power(double pv, double exponent) { return exponent == 0.0 ? 1.0 : std::pow(pv, exponent); }

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

double sin2(double theta) {
  const double s = std::sin(2.0 * theta);
  return s * s;
}

}  // namespace

double FitCurve::operator()(double pv_percent) const {
  double y = 0.0;
  for (std::size_t k = 0; k < basis.size(); ++k) y += coefficients[k] * power(pv_percent, basis[k]);
  return y;
}

void FitCurve::validate() const {
  if (basis.empty() || basis.size() != coefficients.size()) throw ParameterError("fit basis and coefficients differ in length");
  for (std::size_t k = 1; k < basis.size(); ++k)
    if (!(basis[k] > basis[k - 1])) throw ParameterError("fit basis exponents must be strictly increasing");
  if (!(domain_hi > domain_lo)) throw ParameterError("fit domain is empty");
}

std::string fit_curve_to_json(const FitCurve& c) {
  nlohmann::ordered_json j;
  j["basis"] = c.basis;
  j["coefficients"] = c.coefficients;
  j["domain"] = {c.domain_lo, c.domain_hi};
  j["units"] = c.units;
  j["provenance"] = c.provenance;
  j["rms"] = c.rms;
  return j.dump(2) + "\n";
}

FitCurve fit_curve_from_json(std::string_view text) {
  FitCurve c;
  try {
    const auto j = nlohmann::json::parse(text);
    c.basis = j.at("basis").get<std::vector<double>>();
    c.coefficients = j.at("coefficients").get<std::vector<double>>();
    const auto dom = j.at("domain").get<std::vector<double>>();
    if (dom.size() != 2) throw ParseError("domain must be [lo, hi]", 0);
    c.domain_lo = dom[0];
    c.domain_hi = dom[1];
    c.units = j.value("units", std::string("percent"));
    c.provenance = j.value("provenance", std::string("published"));
    c.rms = j.value("rms", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid fit curve: ") + e.what(), 0);
  }
  if (c.units != "percent") throw ParseError("fit curves must use percent units", 0);
  c.validate();
  return c;
}

double beta2(double theta) {
  require_theta_open(theta);
  return std::sqrt(sin2(theta) + 1.0);
}

double v2cr(double theta) { return 1.0 / beta2(theta); }

Beta3Branches beta3_branches(double theta) {
  require_theta_closed(theta);
  const double t = theta;
  return {1.0 + 0.0622 * t + 1.697 * t * t - 3.391 * t * t * t + 1.442 * t * t * t * t,
          (1.0 + 2.0 * std::sqrt(1.0 + sin2(t))) / 3.0, std::sqrt(2.0 * sin2(t))};
}

double beta3(double theta) {
  const Beta3Branches b = beta3_branches(theta);
  if (theta < kBeta3Break1Deg * kDeg) return b.polynomial;
  if (theta < kBeta3Break2Deg * kDeg) return b.middle;
  return b.upper;
}

double v3cr(double theta) { return 1.0 / beta3(theta); }

double f1(double t) {
  require_theta_open(t);
  return (0.19674 - 1.3982 * t + 4.712274 * t * t - 6.7193 * t * t * t + 3.3384 * t * t * t * t) / std::sqrt(10.0);
}

double f2(double t) {
  require_theta_open(t);
  return 0.11886 - 0.011544 / t - 0.363104 * t + 0.460436 * t * t - 0.204953 * t * t * t;
}

double f3(double t) {
  require_theta_open(t);
  return (0.03848 - 0.011 / t - 0.02531 * t - 0.018331 * t * t + 0.017373 * t * t * t) * 1e-2;
}

double g1(double t) {
  require_theta_closed(t);
  const double a = -0.061297 + 0.55512 * t - 0.42815 * t * t;
  const double b = -18.58393 + 57.9917 * std::sqrt(t) - 50.2727 * t + 11.209 * t * t;
  return std::max(a, b) / std::cbrt(10.0);
}

double g2(double t) {
  require_theta_closed(t);
  return std::min(0.0, 0.76306 - 4.13852 * t + 8.28077 * t * t - 7.2943 * t * t * t + 2.38884 * t * t * t * t);
}

double g3(double t) {
  require_theta_closed(t);
  const double a = 0.0001151 - 0.0004063 * t + 0.0004321 * t * t;
  const double b = -0.015237 + 0.084803 * t - 0.17408 * t * t + 0.15723 * t * t * t - 0.052804 * t * t * t * t;
  return std::max(a, b);
}

FitCurve published_curve_2q(double theta) {
  FitCurve c;
  c.basis = kBasis2q;
  c.coefficients = {v2cr(theta), f1(theta), f2(theta), f3(theta)};
  return c;
}

FitCurve published_curve_3q(double theta) {
  require_theta_open(theta);
  FitCurve c;
  c.basis = kBasis3q;
  c.coefficients = {v3cr(theta), g1(theta), g2(theta), g3(theta)};
  return c;
}

double v_from_pv_2q(double theta, double pv_percent) {
  require_pv(pv_percent);
  return clamp01(published_curve_2q(theta)(pv_percent));
}

double v_from_pv_3q(double theta, double pv_percent) {
  require_pv(pv_percent);
  return clamp01(published_curve_3q(theta)(pv_percent));
}

double c_lower_2q(double p) {
  require_pv(p);
  return clamp01(0.6784 / std::sqrt(10.0) * std::pow(p, 0.25) - 1.59e-2 * std::sqrt(p) + 1e-4 * p);
}

double c_mems_fit(double p) {
  require_pv(p);
  return clamp01(1.0 / std::sqrt(2.0) + 0.1125 / std::sqrt(10.0) * std::pow(p, 0.25) - 9.0e-4 * std::sqrt(p) +
                 2.83e-5 * p);
}

double c_phn3_fit(double p) {
  require_pv(p);
  return clamp01(0.4012 * std::pow(p, 1.0 / 6.0) - 0.0118 * std::sqrt(p) + 9.0e-5 * p);
}

double c_gme_pure3_fit(double p) {
  require_pv(p);
  return clamp01(std::sqrt(0.068 * p + 0.06 * std::sqrt(p)));
}

double c_gme_45_fit(double p) {
  require_pv(p);
  return clamp01(0.512 + 0.186 * std::pow(p, 1.0 / 6.0) - 7.1e-3 * std::sqrt(p) + 1.12e-4 * p);
}

double c_gme_35_fit(double p) {
  require_pv(p);
  return clamp01(0.542 + 0.155 * std::pow(p, 1.0 / 6.0) - 8.2e-3 * std::sqrt(p) + 1.52e-4 * p);
}

std::vector<std::string> named_fits() {
  return {"c-lower-2q", "c-mems", "c-phn3", "c-gme-pure3", "c-gme-45", "c-gme-35", "v-2q", "v-3q"};
}

double evaluate_named_fit(std::string_view name, double pv, double theta) {
  if (name == "c-lower-2q") return c_lower_2q(pv);
  if (name == "c-mems") return c_mems_fit(pv);
  if (name == "c-phn3") return c_phn3_fit(pv);
  if (name == "c-gme-pure3") return c_gme_pure3_fit(pv);
  if (name == "c-gme-45") return c_gme_45_fit(pv);
  if (name == "c-gme-35") return c_gme_35_fit(pv);
  if (name == "v-2q") return v_from_pv_2q(theta, pv);
  if (name == "v-3q") return v_from_pv_3q(theta, pv);
  throw ParameterError("unknown fit '" + std::string(name) + "'");
}

ConcFamily parse_conc_family(std::string_view name) {
  if (name == "werner2") return ConcFamily::werner2;
  if (name == "werner3_published" || name == "werner3-published") return ConcFamily::werner3_published;
  if (name == "werner3_xstate" || name == "werner3-xstate") return ConcFamily::werner3_xstate;
  throw ParameterError("unknown concurrence family '" + std::string(name) + "'");
}

double concurrence_from_pv(double theta, double pv_percent, ConcFamily family) {
  switch (family) {
    case ConcFamily::werner2:
      return conc_closed_w2(theta, v_from_pv_2q(theta, pv_percent));
    case ConcFamily::werner3_published:
      return gme_closed_w3_published(theta, v_from_pv_3q(theta, pv_percent));
    case ConcFamily::werner3_xstate:
      return gme_closed_w3_xstate(theta, v_from_pv_3q(theta, pv_percent));
  }
  throw ParameterError("unknown concurrence family");
}

FitCurve refit(std::span<const std::pair<double, double>> points, std::span<const double> basis, std::string provenance) {
  FitCurve c;
  c.basis.assign(basis.begin(), basis.end());
  c.coefficients.assign(basis.size(), 0.0);
  c.provenance = std::move(provenance);
  c.validate();
  const auto rows = static_cast<Eigen::Index>(points.size());
  const auto cols = static_cast<Eigen::Index>(basis.size());
  if (rows < cols) throw FitError("need at least as many points as basis terms");
  Eigen::MatrixXd a(rows, cols);
  Eigen::VectorXd y(rows);
  double lo = 1e300, hi = -1e300;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto [pv, value] = points[static_cast<std::size_t>(i)];
    if (!(pv >= 0.0) || !std::isfinite(value)) throw FitError("fit points need pv >= 0 and finite values");
    for (Eigen::Index k = 0; k < cols; ++k) a(i, k) = power(pv, basis[static_cast<std::size_t>(k)]);
    y(i) = value;
    lo = std::min(lo, pv);
    hi = std::max(hi, pv);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-12);
  if (qr.rank() < cols) throw FitError("rank-deficient design matrix");
  const Eigen::VectorXd coef = qr.solve(y);
  for (Eigen::Index k = 0; k < cols; ++k) c.coefficients[static_cast<std::size_t>(k)] = coef(k);
  c.rms = std::sqrt((a * coef - y).squaredNorm() / static_cast<double>(rows));
  c.domain_lo = lo;
  c.domain_hi = hi > lo ? hi : lo + 1.0;
  return c;
}

double rescaled_visibility_model(double theta, double v0, double pv) {
  return (v3cr(theta) + g1(theta) * std::pow(pv, 1.0 / 6.0) + g2(theta) * std::sqrt(pv) + g3(theta) * pv) / v0;
}

namespace {

using Point2 = std::array<double, 2>;

// Plain Nelder-Mead on two parameters.
Point2 nelder_mead(const std::function<double(const Point2&)>& f, Point2 start, Point2 step, int max_iter) {
  std::array<Point2, 3> x{start, start, start};
  x[1][0] += step[0];
  x[2][1] += step[1];
  std::array<double, 3> fx{f(x[0]), f(x[1]), f(x[2])};
  for (int iter = 0; iter < max_iter; ++iter) {
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fx[a] < fx[b]; });
    const int best = order[0], mid = order[1], worst = order[2];
    if (std::abs(fx[worst] - fx[best]) <= 1e-18 + 1e-14 * std::abs(fx[best]) &&
        std::abs(x[worst][0] - x[best][0]) < 1e-10 && std::abs(x[worst][1] - x[best][1]) < 1e-10) {
      break;
    }
    const Point2 centroid{(x[best][0] + x[mid][0]) / 2.0, (x[best][1] + x[mid][1]) / 2.0};
    const auto along = [&](double t) {
      return Point2{centroid[0] + t * (x[worst][0] - centroid[0]), centroid[1] + t * (x[worst][1] - centroid[1])};
    };
    const Point2 reflected = along(-1.0);
    const double fr = f(reflected);
    if (fr < fx[best]) {
      const Point2 expanded = along(-2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        x[worst] = expanded;
        fx[worst] = fe;
      } else {
        x[worst] = reflected;
        fx[worst] = fr;
      }
    } else if (fr < fx[mid]) {
      x[worst] = reflected;
      fx[worst] = fr;
    } else {
      const Point2 contracted = fr < fx[worst] ? along(-0.5) : along(0.5);
      const double fc = f(contracted);
      if (fc < std::min(fr, fx[worst])) {
        x[worst] = contracted;
        fx[worst] = fc;
      } else {
        for (int i : {mid, worst}) {
          x[i] = {(x[i][0] + x[best][0]) / 2.0, (x[i][1] + x[best][1]) / 2.0};
          fx[i] = f(x[i]);
        }
      }
    }
  }
  const auto it = std::min_element(fx.begin(), fx.end());
  return x[static_cast<std::size_t>(it - fx.begin())];
}

}  // namespace

ThetaV0 estimate_theta_v0(std::span<const std::pair<double, double>> curve) {
  if (curve.size() < 3) throw ParameterError("need at least three (v, pv) points");
  const auto [mn, mx] = std::minmax_element(curve.begin(), curve.end(),
                                            [](const auto& a, const auto& b) { return a.second < b.second; });
  if (mx->second - mn->second <= 1e-12) throw FitError("degenerate curve: all p_V values are equal");
  for (const auto& [v, pv] : curve) {
    if (!std::isfinite(v)) throw FitError("non-finite visibility in curve");
    require_pv(pv);
  }

  constexpr double kThetaLo = 1e-4;
  constexpr double kThetaHi = kPi / 4;
  constexpr double kV0Lo = 0.8;
  constexpr double kV0Hi = 1.0;
  const auto sse = [&](double theta, double v0) {
    double s = 0.0;
    for (const auto& [v, pv] : curve) {
      const double r = v - rescaled_visibility_model(theta, v0, pv);
      s += r * r;
    }
    return s;
  };
  const std::function<double(const Point2&)> objective = [&](const Point2& p) {
    const double theta = std::clamp(p[0], kThetaLo, kThetaHi);
    const double v0 = std::clamp(p[1], kV0Lo, kV0Hi);
    const double penalty = std::pow(p[0] - theta, 2) + std::pow(p[1] - v0, 2);
    return sse(theta, v0) + 1e3 * penalty;
  };

  Point2 best{kThetaHi, 1.0};
  double best_val = 1e300;
  for (int i = 1; i <= 180; ++i) {
    const double theta = kThetaHi * i / 180.0;
    for (int k = 0; k <= 100; ++k) {
      const double v0 = kV0Lo + (kV0Hi - kV0Lo) * k / 100.0;
      const double val = sse(theta, v0);
      if (val < best_val) {
        best_val = val;
        best = {theta, v0};
      }
    }
  }
  const Point2 refined = nelder_mead(objective, best, {0.25 * kDeg, 0.002}, 2000);
  ThetaV0 out;
  out.theta = std::clamp(refined[0], kThetaLo, kThetaHi);
  out.v0 = std::clamp(refined[1], kV0Lo, kV0Hi);
  out.residual = std::sqrt(sse(out.theta, out.v0) / static_cast<double>(curve.size()));
  return out;
}

}  // namespace bellconc
