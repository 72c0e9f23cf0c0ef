#include "bellconc/bell.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "bellconc/errors.hpp"
#include "bellconc/io.hpp"
#include "bellconc/rng.hpp"

namespace bellconc {

namespace {

std::size_t table_size(int n) { return std::size_t{1} << (2 * n); }

void require_parties(int n) {
  if (n < 1 || n > kMaxParties) throw ParameterError("unsupported party count " + std::to_string(n));
}

unsigned bit(unsigned word, int n, int party) { return (word >> (n - 1 - party)) & 1U; }

std::vector<long long> dedup_key(const BellInequality& ineq) {
  std::vector<long long> key;
  key.reserve(ineq.coefficients.size());
  for (double c : ineq.coefficients) key.push_back(std::llround(c / ineq.lhv_bound * 1e9));
  return key;
}

}  // namespace

void MeasurementSettings::validate(double tol) const {
  require_parties(n_parties());
  for (const auto& pair : directions)
    for (const auto& u : pair)
      if (std::abs(u.norm() - 1.0) > tol) throw ParameterError("measurement direction is not a unit vector");
}

Behavior::Behavior(int n_parties, std::vector<double> table) : n_parties_(n_parties), table_(std::move(table)) {
  require_parties(n_parties);
  if (table_.size() != table_size(n_parties)) throw ParameterError("behavior table has wrong size");
  const unsigned outcomes = 1U << n_parties;
  for (unsigned s = 0; s < outcomes; ++s) {
    double sum = 0.0;
    for (unsigned r = 0; r < outcomes; ++r) {
      const double v = p(s, r);
      if (v < -1e-12) throw ParameterError("behavior has a negative probability");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-10) throw ParameterError("behavior is not normalized for settings " + std::to_string(s));
  }
}

double Behavior::no_signaling_deviation() const {
  const int n = n_parties_;
  const unsigned full = (1U << n) - 1;
  double worst = 0.0;
  for (unsigned subset = 1; subset < full; ++subset) {
    // Marginal over `subset` for every setting of the whole system; compare
    // across settings that agree on `subset`.
    for (unsigned s_sub = 0; s_sub <= full; ++s_sub) {
      if ((s_sub & ~subset) != 0) continue;
      for (unsigned r_sub = 0; r_sub <= full; ++r_sub) {
        if ((r_sub & ~subset) != 0) continue;
        double lo = 1e300, hi = -1e300;
        for (unsigned s_rest = 0; s_rest <= full; ++s_rest) {
          if ((s_rest & subset) != 0) continue;
          double m = 0.0;
          for (unsigned r_rest = 0; r_rest <= full; ++r_rest) {
            if ((r_rest & subset) != 0) continue;
            m += p(s_sub | s_rest, r_sub | r_rest);
          }
          lo = std::min(lo, m);
          hi = std::max(hi, m);
        }
        worst = std::max(worst, hi - lo);
      }
    }
  }
  return worst;
}

void BellInequality::validate() const {
  require_parties(n_parties);
  if (coefficients.size() != table_size(n_parties)) throw ParameterError("inequality has wrong number of coefficients");
  if (!(lhv_bound > 0.0)) throw ParameterError("inequality bound must be positive");
  if (std::all_of(coefficients.begin(), coefficients.end(), [](double c) { return c == 0.0; })) {
    throw ParameterError("inequality has no nonzero coefficient");
  }
}

bool BellInequality::is_full_correlation(double tol) const {
  const int n = n_parties;
  const unsigned count = 1U << n;
  const unsigned all = count - 1;
  // Weight on the correlator E_T(S) is 2^-N sum_r mu(S,r) (-1)^{|r & T|}.
  for (unsigned s = 0; s < count; ++s)
    for (unsigned t = 0; t < all; ++t) {
      double w = 0.0;
      for (unsigned r = 0; r < count; ++r) {
        const double sign = (std::popcount(r & t) % 2) ? -1.0 : 1.0;
        w += sign * coefficients[(s << n) | r];
      }
      if (std::abs(w) > tol * count) return false;
    }
  return true;
}

std::uint64_t InequalitySet::dedup_hash() const {
  std::string bytes;
  for (const auto& m : members) {
    for (long long q : dedup_key(m)) {
      bytes += std::to_string(q);
      bytes += ',';
    }
    bytes += ';';
  }
  return fnv1a64(bytes);
}

bool InequalitySet::full_correlation() const {
  return std::all_of(members.begin(), members.end(), [](const BellInequality& m) { return m.is_full_correlation(); });
}

std::vector<Relabeling> all_relabelings(int n_parties) {
  require_parties(n_parties);
  const int n = n_parties;
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Relabeling> out;
  do {
    for (unsigned swap = 0; swap < (1U << n); ++swap)
      for (unsigned flips = 0; flips < (1U << (2 * n)); ++flips) {
        Relabeling g;
        g.party_perm = perm;
        g.input_swap = swap;
        g.output_flip.resize(static_cast<std::size_t>(n));
        for (int p = 0; p < n; ++p) {
          g.output_flip[static_cast<std::size_t>(p)] = {((flips >> (2 * p)) & 1U) != 0,
                                                        ((flips >> (2 * p + 1)) & 1U) != 0};
        }
        out.push_back(std::move(g));
      }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::vector<double> relabel_table(std::span<const double> table, int n, const Relabeling& g) {
  if (table.size() != table_size(n) || static_cast<int>(g.party_perm.size()) != n) {
    throw ParameterError("relabeling does not match the table");
  }
  const unsigned count = 1U << n;
  std::vector<double> out(table.size());
  for (unsigned s_new = 0; s_new < count; ++s_new)
    for (unsigned r_new = 0; r_new < count; ++r_new) {
      unsigned s_old = 0, r_old = 0;
      for (int j = 0; j < n; ++j) {
        const int p = g.party_perm[static_cast<std::size_t>(j)];
        const unsigned s = bit(s_new, n, j) ^ ((g.input_swap >> p) & 1U);
        const unsigned r = bit(r_new, n, j) ^ (g.output_flip[static_cast<std::size_t>(p)][s] ? 1U : 0U);
        s_old |= s << (n - 1 - p);
        r_old |= r << (n - 1 - p);
      }
      out[(s_new << n) | r_new] = table[(s_old << n) | r_old];
    }
  return out;
}

Behavior relabel(const Behavior& b, const Relabeling& g) {
  return Behavior(b.n_parties(), relabel_table(b.table(), b.n_parties(), g));
}

BellInequality relabel(const BellInequality& ineq, const Relabeling& g) {
  BellInequality out = ineq;
  out.coefficients = relabel_table(ineq.coefficients, ineq.n_parties, g);
  return out;
}

CorrelationTensor::CorrelationTensor(const DensityMatrix& rho)
    : n_parties_(rho.n_qubits()), size_(table_size(rho.n_qubits())) {
  require_parties(n_parties_);
  const int n = n_parties_;
  for (std::size_t mu = 0; mu < size_; ++mu) {
    CMatrix op = pauli(static_cast<int>((mu >> (2 * (n - 1))) & 3U));
    for (int k = 1; k < n; ++k) {
      const Eigen::Matrix2cd& next = pauli(static_cast<int>((mu >> (2 * (n - 1 - k))) & 3U));
      CMatrix prev = op;
      op.resize(prev.rows() * 2, prev.cols() * 2);
      for (Eigen::Index i = 0; i < prev.rows(); ++i)
        for (Eigen::Index j = 0; j < prev.cols(); ++j) op.block(2 * i, 2 * j, 2, 2) = prev(i, j) * next;
    }
    t_[mu] = (rho.matrix() * op).trace().real();
  }
}

void CorrelationTensor::behavior_into(const MeasurementSettings& m, std::span<double> out) const {
  const int n = n_parties_;
  if (m.n_parties() != n) throw ParameterError("settings do not match the state's party count");
  if (out.size() != size_) throw ParameterError("behavior buffer has wrong size");

  // Contract one party at a time. Choice c = 2 S + r selects the vector
  // (1, (-1)^r u_S) / 2. Layout after k steps: (c_0..c_{k-1}, mu_k..mu_{N-1}).
  std::array<double, 64> cur{};
  std::array<double, 64> next{};
  std::copy_n(t_.begin(), size_, cur.begin());
  for (int k = 0; k < n; ++k) {
    const std::size_t suffix = std::size_t{1} << (2 * (n - 1 - k));
    const std::size_t prefix = std::size_t{1} << (2 * k);
    std::array<std::array<double, 4>, 4> vec{};
    for (unsigned c = 0; c < 4; ++c) {
      const Vec3& u = m.directions[static_cast<std::size_t>(k)][c >> 1];
      const double sign = (c & 1U) ? -0.5 : 0.5;
      vec[c] = {0.5, sign * u.x(), sign * u.y(), sign * u.z()};
    }
    for (std::size_t pre = 0; pre < prefix; ++pre)
      for (unsigned c = 0; c < 4; ++c)
        for (std::size_t suf = 0; suf < suffix; ++suf) {
          double acc = 0.0;
          for (unsigned mu = 0; mu < 4; ++mu) acc += vec[c][mu] * cur[(pre * 4 + mu) * suffix + suf];
          next[(pre * 4 + c) * suffix + suf] = acc;
        }
    std::swap(cur, next);
  }
  for (std::size_t idx = 0; idx < size_; ++idx) {
    unsigned s = 0, r = 0;
    for (int k = 0; k < n; ++k) {
      const unsigned c = static_cast<unsigned>(idx >> (2 * (n - 1 - k))) & 3U;
      s = (s << 1) | (c >> 1);
      r = (r << 1) | (c & 1U);
    }
    out[(s << n) | r] = cur[idx];
  }
}

Behavior CorrelationTensor::behavior(const MeasurementSettings& m) const {
  std::vector<double> table(size_);
  behavior_into(m, table);
  return Behavior(n_parties_, std::move(table));
}

Behavior behavior_from_state(const DensityMatrix& rho, const MeasurementSettings& m) {
  m.validate(1e-9);
  return CorrelationTensor(rho).behavior(m);
}

double evaluate(const BellInequality& ineq, const Behavior& b) {
  if (ineq.n_parties != b.n_parties() || ineq.coefficients.size() != b.table().size()) {
    throw ParameterError("inequality and behavior shapes differ");
  }
  const auto t = b.table();
  double acc = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) acc += ineq.coefficients[i] * t[i];
  return acc / ineq.lhv_bound;
}

InequalitySet expand_relabelings(std::span<const BellInequality> ineqs, std::string tag, bool complete) {
  InequalitySet set;
  if (ineqs.empty()) {
    set.tag = std::move(tag);
    set.complete = complete;
    return set;
  }
  set.n_parties = ineqs.front().n_parties;
  const auto group = all_relabelings(set.n_parties);
  std::set<std::vector<long long>> seen;
  for (const auto& ineq : ineqs) {
    ineq.validate();
    if (ineq.n_parties != set.n_parties) throw ParameterError("inequalities in one set must share the party count");
    set.generators.push_back(ineq);
    BellInequality normalized = ineq;
    for (double& c : normalized.coefficients) c /= ineq.lhv_bound;
    normalized.lhv_bound = 1.0;
    for (const auto& g : group) {
      BellInequality image = relabel(normalized, g);
      if (seen.insert(dedup_key(image)).second) set.members.push_back(std::move(image));
    }
  }
  if (tag.empty()) {
    for (const auto& ineq : ineqs) tag += (tag.empty() ? "" : "+") + ineq.name;
  }
  set.tag = std::move(tag);
  set.complete = complete;
  return set;
}

double max_violation(std::span<const double> table, const InequalitySet& set) {
  if (set.members.empty()) throw ParameterError("inequality set is empty");
  double best = -1e300;
  for (const auto& m : set.members) {
    double acc = 0.0;
    for (std::size_t i = 0; i < table.size(); ++i) acc += m.coefficients[i] * table[i];
    best = std::max(best, acc);
  }
  return best;
}

double max_violation(const Behavior& b, const InequalitySet& set) {
  if (!set.members.empty() && set.n_parties != b.n_parties()) throw ParameterError("set and behavior shapes differ");
  return max_violation(b.table(), set);
}

Eigen::Matrix3d correlation_matrix(const DensityMatrix& rho) {
  if (rho.n_qubits() != 2) throw ParameterError("correlation matrix needs a two-qubit state");
  const CorrelationTensor t(rho);
  Eigen::Matrix3d r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = t.values()[static_cast<std::size_t>((i + 1) * 4 + (j + 1))];
  return r;
}

double chsh_horodecki(const Eigen::Matrix3d& r, const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1) {
  return std::abs(a0.dot(r * (b0 + b1)) + a1.dot(r * (b0 - b1))) / 2.0;
}

BellInequality correlator_inequality(int n_parties, std::span<const double> weights, double bound, std::string name) {
  require_parties(n_parties);
  const unsigned count = 1U << n_parties;
  if (weights.size() != count) throw ParameterError("need one correlator weight per setting combination");
  BellInequality ineq;
  ineq.n_parties = n_parties;
  ineq.coefficients.assign(table_size(n_parties), 0.0);
  for (unsigned s = 0; s < count; ++s)
    for (unsigned r = 0; r < count; ++r) {
      const double sign = (std::popcount(r) % 2) ? -1.0 : 1.0;
      ineq.coefficients[(s << n_parties) | r] = weights[s] == 0.0 ? 0.0 : sign * weights[s];
    }
  ineq.lhv_bound = bound;
  ineq.name = std::move(name);
  ineq.validate();
  return ineq;
}

BellInequality chsh_inequality() {
  const std::array<double, 4> w{1, 1, 1, -1};
  return correlator_inequality(2, w, 2.0, "chsh");
}

BellInequality mermin_inequality() {
  const std::array<double, 8> w{0, 1, 1, 0, 1, 0, 0, -1};
  return correlator_inequality(3, w, 2.0, "mermin");
}

BellInequality svetlichny_inequality() {
  const std::array<double, 8> w{1, 1, 1, -1, 1, -1, -1, -1};
  return correlator_inequality(3, w, 4.0, "svetlichny");
}

// --- text format -------------------------------------------------------------

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_number(const std::string& tok, std::size_t line) {
  double v = 0.0;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) throw ParseError("malformed number '" + tok + "'", line);
  return v;
}

int parse_int(const std::string& tok, std::size_t line) {
  int v = 0;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw ParseError("malformed integer '" + tok + "'", line);
  return v;
}

unsigned parse_bits(std::span<const std::string> toks, int n, std::size_t line) {
  std::string joined;
  for (const auto& t : toks) joined += t;
  if (static_cast<int>(joined.size()) != n) throw ParseError("wrong arity in coefficient line", line);
  unsigned v = 0;
  for (char c : joined) {
    if (c != '0' && c != '1') throw ParseError("setting and outcome labels must be 0 or 1", line);
    v = (v << 1) | (c == '1' ? 1U : 0U);
  }
  return v;
}

}  // namespace

BellInequality parse_inequality(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  int header_step = 0;  // 0 magic, 1 parties, 2 inputs, 3 outputs, 4 bound, 5 body
  BellInequality ineq;
  std::vector<bool> assigned;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const auto first = raw.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (raw[first] == '#') {
      const std::string body = raw.substr(first + 1);
      const auto key = body.find("name:");
      if (key != std::string::npos && body.find_first_not_of(' ') == key) {
        std::string name = body.substr(key + 5);
        name.erase(0, name.find_first_not_of(' '));
        ineq.name = name;
      }
      continue;
    }
    const auto tok = split_ws(raw);
    switch (header_step) {
      case 0:
        if (tok.size() != 2 || tok[0] != "bellineq" || tok[1] != "1") throw ParseError("expected 'bellineq 1'", line_no);
        break;
      case 1:
        if (tok.size() != 2 || tok[0] != "parties") throw ParseError("expected 'parties <N>'", line_no);
        ineq.n_parties = parse_int(tok[1], line_no);
        if (ineq.n_parties < 1 || ineq.n_parties > kMaxParties) throw ParseError("unsupported scenario: parties " + tok[1], line_no);
        ineq.coefficients.assign(table_size(ineq.n_parties), 0.0);
        assigned.assign(ineq.coefficients.size(), false);
        break;
      case 2:
        if (tok.size() != 2 || tok[0] != "inputs") throw ParseError("expected 'inputs 2'", line_no);
        if (tok[1] != "2") throw ParseError("unsupported scenario: inputs " + tok[1], line_no);
        break;
      case 3:
        if (tok.size() != 2 || tok[0] != "outputs") throw ParseError("expected 'outputs 2'", line_no);
        if (tok[1] != "2") throw ParseError("unsupported scenario: outputs " + tok[1], line_no);
        break;
      case 4:
        if (tok.size() != 2 || tok[0] != "bound") throw ParseError("missing bound line", line_no);
        ineq.lhv_bound = parse_number(tok[1], line_no);
        if (!(ineq.lhv_bound > 0.0)) throw ParseError("bound must be positive", line_no);
        break;
      default: {
        if (tok.empty() || tok[0] != "c") throw ParseError("expected coefficient line 'c <S> <r> <value>'", line_no);
        const int n = ineq.n_parties;
        unsigned s = 0, r = 0;
        if (tok.size() == 4) {
          s = parse_bits(std::span(tok).subspan(1, 1), n, line_no);
          r = parse_bits(std::span(tok).subspan(2, 1), n, line_no);
        } else if (static_cast<int>(tok.size()) == 2 * n + 2) {
          s = parse_bits(std::span(tok).subspan(1, static_cast<std::size_t>(n)), n, line_no);
          r = parse_bits(std::span(tok).subspan(static_cast<std::size_t>(n) + 1, static_cast<std::size_t>(n)), n, line_no);
        } else {
          throw ParseError("wrong arity in coefficient line", line_no);
        }
        const std::size_t idx = (static_cast<std::size_t>(s) << n) | r;
        if (assigned[idx]) throw ParseError("duplicate coefficient", line_no);
        assigned[idx] = true;
        ineq.coefficients[idx] = parse_number(tok.back(), line_no);
        break;
      }
    }
    if (header_step < 5) ++header_step;
  }
  if (header_step < 5) {
    throw ParseError(header_step == 4 ? "missing bound line" : "incomplete inequality header", line_no);
  }
  try {
    ineq.validate();
  } catch (const ParameterError& e) {
    throw ParseError(e.what(), 0);
  }
  return ineq;
}

std::string serialize_inequality(const BellInequality& ineq) {
  ineq.validate();
  const int n = ineq.n_parties;
  std::string out = "bellineq 1\nparties " + std::to_string(n) + "\ninputs 2\noutputs 2\nbound " +
                    format_shortest(ineq.lhv_bound) + "\n";
  if (!ineq.name.empty()) out += "# name: " + ineq.name + "\n";
  const unsigned count = 1U << n;
  for (unsigned s = 0; s < count; ++s)
    for (unsigned r = 0; r < count; ++r) {
      const double c = ineq.coefficients[(s << n) | r];
      if (c == 0.0) continue;
      std::string sb, rb;
      for (int k = 0; k < n; ++k) {
        sb += bit(s, n, k) ? '1' : '0';
        rb += bit(r, n, k) ? '1' : '0';
      }
      out += "c " + sb + " " + rb + " " + format_shortest(c) + "\n";
    }
  return out;
}

BellInequality load_inequality(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open inequality file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_inequality(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line());
  }
}

std::vector<BellInequality> load_inequality_dir(const std::string& dir, int n_parties) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw DataError("inequality directory not found: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".bellineq") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<BellInequality> out;
  for (const auto& f : files) {
    BellInequality ineq = load_inequality(f.string());
    if (ineq.name.empty()) ineq.name = f.stem().string();
    if (ineq.n_parties == n_parties) out.push_back(std::move(ineq));
  }
  if (out.empty()) {
    throw DataError("no " + std::to_string(n_parties) + "-party inequalities in " + dir);
  }
  return out;
}

InequalitySet load_inequality_set(const std::string& dir, int n_parties) {
  const auto generators = load_inequality_dir(dir, n_parties);
  InequalitySet set = expand_relabelings(generators);
  if (n_parties == 2) {
    const auto chsh = expand_relabelings(std::vector<BellInequality>{chsh_inequality()});
    std::set<std::vector<long long>> have;
    for (const auto& m : set.members) have.insert(dedup_key(m));
    set.complete = have.count(dedup_key(chsh.members.front())) > 0;
  } else if (n_parties == 3) {
    set.complete = generators.size() >= 185;
  }
  return set;
}

std::string default_inequality_dir() {
  if (const char* env = std::getenv("BELLCONC_INEQ_DIR"); env != nullptr && *env != '\0') return env;
#ifdef BELLCONC_DATA_DIR
  return std::string(BELLCONC_DATA_DIR) + "/inequalities";
#else
  return "data/inequalities";
#endif
}

}  // namespace bellconc
