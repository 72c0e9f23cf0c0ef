#include "bellconc/nlfrac.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include <json.hpp>

#include "bellconc/errors.hpp"
#include "bellconc/io.hpp"
#include "bellconc/parallel.hpp"
#include "bellconc/rng.hpp"

namespace bellconc {

namespace {

constexpr std::string_view kSettingsTag = "settings";

void fill_settings(MeasurementSettings& m, std::uint64_t seed, std::uint64_t index) {
  Rng rng = substream(seed, kSettingsTag, index);
  for (auto& pair : m.directions) {
    pair[0] = random_bloch_vector(rng);
    pair[1] = random_bloch_vector(rng);
  }
}

// Coefficients of every member packed row by row.
struct PackedSet {
  std::size_t width = 0;
  std::vector<double> rows;

  explicit PackedSet(const InequalitySet& set) {
    if (set.members.empty()) throw ParameterError("inequality set is empty");
    width = set.members.front().coefficients.size();
    rows.reserve(width * set.members.size());
    for (const auto& m : set.members) rows.insert(rows.end(), m.coefficients.begin(), m.coefficients.end());
  }

  double max_value(const double* p) const {
    double best = -1e300;
    for (std::size_t off = 0; off < rows.size(); off += width) {
      double acc = 0.0;
      for (std::size_t i = 0; i < width; ++i) acc += rows[off + i] * p[i];
      best = std::max(best, acc);
    }
    return best;
  }
};

void check_inputs(const DensityMatrix& rho, const InequalitySet& set, std::uint64_t m) {
  if (m == 0) throw ParameterError("sample count must be positive");
  if (set.members.empty()) throw ParameterError("inequality set is empty");
  if (set.n_parties != rho.n_qubits()) throw ParameterError("inequality set and state have different party counts");
}

void require_visibility(double v) {
  if (!(v > 0.0 && v <= 1.0)) throw ParameterError("visibility must lie in (0, 1]");
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

}  // namespace

MeasurementSettings sample_settings(int n_parties, std::uint64_t seed, std::uint64_t index) {
  if (n_parties < 1 || n_parties > kMaxParties) throw ParameterError("unsupported party count");
  MeasurementSettings m;
  m.directions.resize(static_cast<std::size_t>(n_parties));
  fill_settings(m, seed, index);
  return m;
}

ViolationSamples violation_distribution(const DensityMatrix& rho, const InequalitySet& set, std::uint64_t m,
                                        std::uint64_t seed, unsigned workers, std::string state_tag) {
  check_inputs(rho, set, m);
  const CorrelationTensor tensor(rho);
  const PackedSet packed(set);
  ViolationSamples out;
  out.values.resize(m);
  out.state_tag = std::move(state_tag);
  out.settings_seed = seed;
  out.set_tag = set.tag;
  parallel_ranges(m, workers, [&](std::uint64_t begin, std::uint64_t end, unsigned) {
    MeasurementSettings settings;
    settings.directions.resize(static_cast<std::size_t>(rho.n_qubits()));
    std::vector<double> table(packed.width);
    for (std::uint64_t i = begin; i < end; ++i) {
      fill_settings(settings, seed, i);
      tensor.behavior_into(settings, table);
      out.values[i] = packed.max_value(table.data());
    }
  });
  return out;
}

PvEstimate estimate_pv(const DensityMatrix& rho, const InequalitySet& set, std::uint64_t m, std::uint64_t seed,
                       unsigned workers) {
  check_inputs(rho, set, m);
  const CorrelationTensor tensor(rho);
  const PackedSet packed(set);
  std::vector<std::uint64_t> counts(resolve_workers(workers, m), 0);
  parallel_ranges(m, workers, [&](std::uint64_t begin, std::uint64_t end, unsigned w) {
    MeasurementSettings settings;
    settings.directions.resize(static_cast<std::size_t>(rho.n_qubits()));
    std::vector<double> table(packed.width);
    std::uint64_t hits = 0;
    for (std::uint64_t i = begin; i < end; ++i) {
      fill_settings(settings, seed, i);
      tensor.behavior_into(settings, table);
      if (packed.max_value(table.data()) > 1.0) ++hits;
    }
    counts[w] = hits;
  });
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  return make_estimate(total, m, set.tag, !set.complete);
}

double pv_werner2_closed(double v) {
  require_visibility(v);
  const double s2 = 2.0 * v * v - 1.0;
  if (s2 <= 0.0) return 0.0;
  const double s = std::sqrt(s2);
  // atan(s / (1 - v^2)) on [0, pi/2]; atan2 handles v = 1 without a limit.
  const double angle = std::atan2(s, 1.0 - v * v);
  return 2.0 * ((1.0 + v * v) * angle - 3.0 * s) / (v * v);
}

double pv_werner2_printed(double v) {
  require_visibility(v);
  const double s2 = 2.0 * v * v - 1.0;
  if (s2 <= 0.0) return 0.0;
  const double s = std::sqrt(s2);
  return 2.0 * ((1.0 - v * v) * std::atan2(s, 1.0 - v * v) - 3.0 * s) / (v * v);
}

double pv_werner2_quadrature(double v) {
  require_visibility(v);
  const double x2 = (2.0 * v * v - 1.0) / (v * v * v * v);
  if (x2 <= 0.0) return 0.0;
  const double t_max = std::asin(std::min(1.0, std::sqrt(x2)));
  const double root2 = std::sqrt(2.0);
  // Integrand after x = sin t; dx / sqrt(1 - x^2) = dt.
  const std::function<double(double)> f = [&](double t) {
    const double x = std::sin(t);
    const double gap = root2 - v * (std::sqrt(std::max(0.0, 1.0 - x)) + std::sqrt(1.0 + x));
    return gap * gap / (8.0 * v * v);
  };
  const double fa = f(0.0), fm = f(0.5 * t_max), fb = f(t_max);
  const double whole = t_max / 6.0 * (fa + 4.0 * fm + fb);
  const double half = adaptive_simpson(f, 0.0, t_max, fa, fm, fb, whole, 1e-12, 50);
  return 4.0 * 2.0 * half;
}

PvEstimate sample_chsh_reduced(double v, std::uint64_t m, std::uint64_t seed) {
  require_visibility(v);
  if (m == 0) throw ParameterError("sample count must be positive");
  const double threshold = std::sqrt(2.0) / v;
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < m; ++i) {
    Rng rng = substream(seed, "chsh-reduced", i);
    const double alpha = uni(rng);
    const double beta = uni(rng);
    const double x = uni(rng);
    if (std::abs(alpha * std::sqrt(1.0 + x) + beta * std::sqrt(1.0 - x)) > threshold) ++hits;
  }
  PvEstimate e;
  const double q = static_cast<double>(hits) / static_cast<double>(m);
  e.p_v = 4.0 * q;
  e.std_err = 4.0 * std::sqrt(q * (1.0 - q) / static_cast<double>(m));
  e.samples = m;
  e.violations = hits;
  e.set_tag = "chsh-reduced";
  return e;
}

double pv_from_distribution(std::span<const double> values, double v) {
  require_visibility(v);
  if (values.empty()) throw ParameterError("no samples");
  const double threshold = 1.0 / v;
  const auto hits = std::count_if(values.begin(), values.end(), [&](double x) { return x > threshold; });
  return static_cast<double>(hits) / static_cast<double>(values.size());
}

std::pair<double, double> pv_threshold_sensitivity(std::span<const double> values, double v, double epsilon) {
  require_visibility(v);
  if (epsilon < 0.0) throw ParameterError("epsilon must be non-negative");
  if (values.empty()) throw ParameterError("no samples");
  const double t = 1.0 / v;
  const double n = static_cast<double>(values.size());
  const auto above = [&](double threshold) {
    return static_cast<double>(std::count_if(values.begin(), values.end(), [&](double x) { return x > threshold; })) / n;
  };
  return {above(t + epsilon), above(t - epsilon)};
}

PvEstimate make_estimate(std::uint64_t violations, std::uint64_t m, std::string set_tag, bool lower_bound) {
  if (m == 0) throw ParameterError("sample count must be positive");
  if (violations > m) throw ParameterError("more violations than samples");
  PvEstimate e;
  e.samples = m;
  e.violations = violations;
  e.p_v = static_cast<double>(violations) / static_cast<double>(m);
  e.std_err = std::sqrt(e.p_v * (1.0 - e.p_v) / static_cast<double>(m));
  e.set_tag = std::move(set_tag);
  e.lower_bound = lower_bound;
  return e;
}

std::string pv_estimate_to_json(const PvEstimate& e) {
  nlohmann::ordered_json j;
  j["p_v"] = e.p_v;
  j["std_err"] = e.std_err;
  j["m"] = e.samples;
  j["violations"] = e.violations;
  j["set_tag"] = e.set_tag;
  j["lower_bound"] = e.lower_bound;
  return j.dump(2) + "\n";
}

std::string samples_to_csv(const ViolationSamples& s) {
  std::string out = "i_max\n";
  out.reserve(out.size() + s.values.size() * 20);
  for (double x : s.values) {
    out += format_shortest(x);
    out += '\n';
  }
  return out;
}

std::vector<double> samples_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != "i_max") throw ParseError("expected header 'i_max'", 1);
      continue;
    }
    if (line.empty()) continue;
    double v = 0.0;
    const char* end = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(line.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) throw ParseError("malformed value '" + line + "'", line_no);
    out.push_back(v);
  }
  if (line_no == 0) throw ParseError("empty samples file", 0);
  return out;
}

std::string samples_sidecar_json(const ViolationSamples& s) {
  nlohmann::ordered_json j;
  j["state_tag"] = s.state_tag;
  j["seed"] = s.settings_seed;
  j["m"] = s.values.size();
  j["set_tag"] = s.set_tag;
  return j.dump(2) + "\n";
}

}  // namespace bellconc
