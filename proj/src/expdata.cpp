#include "bellconc/expdata.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "bellconc/errors.hpp"
#include "bellconc/io.hpp"
#include "bellconc/parallel.hpp"
#include "bellconc/rng.hpp"

namespace bellconc {

double CCRecord::total() const { return std::accumulate(counts.begin(), counts.end(), 0.0); }

// --- CSV -----------------------------------------------------------------------

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double field_double(std::string_view tok, std::size_t row) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    throw ParseError("malformed number '" + std::string(tok) + "'", row);
  }
  return v;
}

std::uint64_t field_uint(std::string_view tok, std::size_t row) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError("malformed integer '" + std::string(tok) + "'", row);
  }
  return v;
}

bool same_direction(const Vec3& a, const Vec3& b, double tol) { return (a - b).cwiseAbs().maxCoeff() <= tol; }

}  // namespace

std::string cc_to_csv(const CCDataset& ds) {
  std::string out(kCCHeader);
  out += '\n';
  for (const auto& rec : ds.records) {
    std::string prefix = std::to_string(rec.setting_id);
    for (const auto& u : rec.directions)
      for (int k = 0; k < 3; ++k) prefix += "," + format_shortest(u(k));
    for (unsigned r = 0; r < 8; ++r) {
      if (!((rec.outcome_mask >> r) & 1U)) continue;
      out += prefix;
      out += ',' + std::to_string((r >> 2) & 1U) + ',' + std::to_string((r >> 1) & 1U) + ',' + std::to_string(r & 1U);
      out += ',' + format_shortest(rec.counts[r]) + ',' + format_shortest(rec.duration_s) + '\n';
    }
  }
  return out;
}

CCDataset cc_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t row = 0;
  CCDataset ds;
  std::unordered_map<std::uint64_t, std::size_t> index;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (row == 1) {
      if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);
      if (line != kCCHeader) throw ParseError("unexpected CSV header", 1);
      continue;
    }
    if (line.empty()) continue;
    const auto f = split_commas(line);
    if (f.size() != 15) throw ParseError("expected 15 fields, found " + std::to_string(f.size()), row);
    const std::uint64_t id = field_uint(f[0], row);
    std::array<Vec3, 3> dirs;
    for (int p = 0; p < 3; ++p) {
      dirs[static_cast<std::size_t>(p)] = Vec3(field_double(f[1 + 3 * p], row), field_double(f[2 + 3 * p], row),
                                               field_double(f[3 + 3 * p], row));
      if (std::abs(dirs[static_cast<std::size_t>(p)].norm() - 1.0) > 1e-6) {
        throw ParseError("direction of qubit " + std::to_string(p + 1) + " is not a unit vector", row);
      }
    }
    unsigned r = 0;
    for (int p = 0; p < 3; ++p) {
      const auto bitval = field_uint(f[10 + static_cast<std::size_t>(p)], row);
      if (bitval > 1) throw ParseError("outcome labels must be 0 or 1", row);
      r = (r << 1) | static_cast<unsigned>(bitval);
    }
    const double counts = field_double(f[13], row);
    if (counts < 0.0) throw ParseError("negative count", row);
    const double duration = field_double(f[14], row);
    if (!(duration > 0.0)) throw ParseError("duration must be positive", row);

    auto [it, inserted] = index.try_emplace(id, ds.records.size());
    if (inserted) {
      CCRecord rec;
      rec.setting_id = id;
      rec.directions = dirs;
      rec.duration_s = duration;
      rec.outcome_mask = 0;
      ds.records.push_back(rec);
    }
    CCRecord& rec = ds.records[it->second];
    for (int p = 0; p < 3; ++p)
      if (!same_direction(rec.directions[static_cast<std::size_t>(p)], dirs[static_cast<std::size_t>(p)], 1e-9)) {
        throw ParseError("directions differ between rows of setting " + std::to_string(id), row);
      }
    if ((rec.outcome_mask >> r) & 1U) throw ParseError("duplicate outcome for setting " + std::to_string(id), row);
    rec.outcome_mask = static_cast<std::uint8_t>(rec.outcome_mask | (1U << r));
    rec.counts[r] = counts;
  }
  if (row == 0) throw ParseError("empty file", 0);
  if (ds.records.empty()) throw DataError("dataset has no records");
  return ds;
}

CCDataset load_cc(const std::string& path) {
  CCDataset ds;
  try {
    ds = cc_from_csv(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line());
  }
  const std::string sidecar = path + ".json";
  if (std::filesystem::exists(sidecar)) {
    try {
      const auto j = nlohmann::json::parse(read_text_file(sidecar));
      ds.tag = j.value("tag", std::string());
      ds.normalization = j.value("normalization", 1.0);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(sidecar + ": " + e.what(), 0);
    }
  }
  if (ds.tag.empty()) ds.tag = std::filesystem::path(path).stem().string();
  return ds;
}

void save_cc(const CCDataset& ds, const std::string& path) {
  write_text_file(path, cc_to_csv(ds));
  nlohmann::ordered_json j;
  j["tag"] = ds.tag;
  j["normalization"] = ds.normalization;
  write_text_file(path + ".json", j.dump(2) + "\n");
}

// --- blocks --------------------------------------------------------------------

namespace {

struct DirectionClusters {
  static constexpr double kTol = 1e-6;
  std::vector<Vec3> reps;
  std::map<std::array<long long, 3>, std::vector<std::size_t>> cells;

  static std::array<long long, 3> cell_of(const Vec3& u) {
    return {static_cast<long long>(std::floor(u.x() / kTol)), static_cast<long long>(std::floor(u.y() / kTol)),
            static_cast<long long>(std::floor(u.z() / kTol))};
  }

  std::size_t id(const Vec3& u) {
    const auto c = cell_of(u);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy)
        for (long long dz = -1; dz <= 1; ++dz) {
          const auto it = cells.find({c[0] + dx, c[1] + dy, c[2] + dz});
          if (it == cells.end()) continue;
          for (std::size_t k : it->second)
            if (same_direction(reps[k], u, kTol)) return k;
        }
    reps.push_back(u);
    cells[c].push_back(reps.size() - 1);
    return reps.size() - 1;
  }
};

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

BlockGrouping group_blocks(const CCDataset& ds) {
  const std::size_t n = ds.records.size();
  std::array<DirectionClusters, 3> clusters;
  std::vector<std::array<std::size_t, 3>> ids(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t p = 0; p < 3; ++p) ids[i][p] = clusters[p].id(ds.records[i].directions[p]);

  UnionFind uf(n);
  for (std::size_t p = 0; p < 3; ++p) {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> first;
    const std::size_t a = (p + 1) % 3, b = (p + 2) % 3;
    for (std::size_t i = 0; i < n; ++i) {
      auto [it, inserted] = first.try_emplace({ids[i][a], ids[i][b]}, i);
      if (!inserted) uf.unite(it->second, i);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> components;
  for (std::size_t i = 0; i < n; ++i) components[uf.find(i)].push_back(i);

  BlockGrouping out;
  std::vector<std::pair<std::uint64_t, CCBlock>> found;
  for (auto& [root, members] : components) {
    (void)root;
    if (members.size() != 8) {
      out.excluded_records += members.size();
      continue;
    }
    const auto lowest = *std::min_element(members.begin(), members.end(), [&](std::size_t x, std::size_t y) {
      return ds.records[x].setting_id < ds.records[y].setting_id;
    });
    CCBlock block;
    std::array<std::array<std::size_t, 2>, 3> pair_ids{};
    bool ok = true;
    for (std::size_t p = 0; p < 3 && ok; ++p) {
      pair_ids[p] = {ids[lowest][p], ids[lowest][p]};
      for (std::size_t i : members) {
        if (ids[i][p] == pair_ids[p][0]) continue;
        if (pair_ids[p][1] == pair_ids[p][0]) {
          pair_ids[p][1] = ids[i][p];
        } else if (ids[i][p] != pair_ids[p][1]) {
          ok = false;
        }
      }
      if (pair_ids[p][1] == pair_ids[p][0]) ok = false;
    }
    std::array<bool, 8> seen{};
    for (std::size_t i : members) {
      if (!ok) break;
      unsigned s = 0;
      for (std::size_t p = 0; p < 3; ++p) s = (s << 1) | (ids[i][p] == pair_ids[p][1] ? 1U : 0U);
      if (seen[s]) ok = false;
      seen[s] = true;
      block.record[s] = i;
    }
    if (!ok) {
      out.excluded_records += members.size();
      continue;
    }
    for (std::size_t p = 0; p < 3; ++p) {
      block.directions[p][0] = ds.records[block.record[0]].directions[p];
      block.directions[p][1] = ds.records[block.record[7]].directions[p];
    }
    found.emplace_back(ds.records[lowest].setting_id, block);
  }
  std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (auto& [id, block] : found) out.blocks.push_back(block);
  return out;
}

namespace {

// Behavior table of a block, or nullopt when some record has no counts.
std::optional<std::vector<double>> block_table(const CCDataset& ds, const CCBlock& block) {
  std::vector<double> table(64);
  for (unsigned s = 0; s < 8; ++s) {
    const CCRecord& rec = ds.records[block.record[s]];
    const double total = rec.total();
    if (!(total > 0.0)) return std::nullopt;
    for (unsigned r = 0; r < 8; ++r) table[(s << 3) | r] = rec.counts[r] / total;
  }
  return table;
}

PvCCResult pv_from_grouping(const CCDataset& ds, const BlockGrouping& grouping, const InequalitySet& set,
                            double margin) {
  if (set.n_parties != 3) throw ParameterError("coincidence data needs a three-party inequality set");
  if (margin < 0.0) throw ParameterError("margin must be non-negative");
  PvCCResult out;
  out.excluded_records = grouping.excluded_records;
  std::uint64_t hits = 0, above_hi = 0, above_lo = 0, used = 0;
  for (const auto& block : grouping.blocks) {
    const auto table = block_table(ds, block);
    if (!table) {
      out.excluded_records += 8;
      continue;
    }
    ++used;
    const double value = max_violation(*table, set);
    if (value > 1.0) ++hits;
    if (value > 1.0 + margin) ++above_hi;
    if (value > 1.0 - margin) ++above_lo;
  }
  if (used == 0) throw DataError("no complete setting blocks in dataset");
  out.blocks = used;
  out.estimate = make_estimate(hits, used, set.tag, !set.complete);
  out.low = static_cast<double>(above_hi) / static_cast<double>(used);
  out.high = static_cast<double>(above_lo) / static_cast<double>(used);
  return out;
}

}  // namespace

Behavior behavior_from_block(const CCDataset& ds, const CCBlock& block) {
  auto table = block_table(ds, block);
  if (!table) throw DataError("block contains a record without counts");
  return Behavior(3, std::move(*table));
}

PvCCResult pv_cc(const CCDataset& ds, const InequalitySet& set, double margin) {
  return pv_from_grouping(ds, group_blocks(ds), set, margin);
}

// --- mixing ----------------------------------------------------------------------

CCDataset normalize_cc(const CCDataset& ds) {
  double total = 0.0;
  for (const auto& rec : ds.records) total += rec.total();
  if (!(total > 0.0)) throw DataError("dataset has no counts to normalize");
  CCDataset out = ds;
  for (auto& rec : out.records)
    for (double& c : rec.counts) c /= total;
  out.normalization = total;
  return out;
}

CCDataset mix_counts(const CCDataset& state, std::span<const CCDataset> basis, double v_c) {
  if (!(v_c >= 0.0 && v_c <= 1.0)) throw ParameterError("v_c must lie in [0, 1]");
  if (basis.size() != 8) throw ParameterError("mixing needs exactly 8 basis datasets");
  const CCDataset s = normalize_cc(state);
  std::vector<CCDataset> b;
  b.reserve(8);
  for (const auto& ds : basis) {
    if (ds.records.size() != s.records.size()) throw DataError("basis dataset '" + ds.tag + "' has a different setting list");
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
      const auto& x = ds.records[i];
      const auto& y = s.records[i];
      bool same = x.setting_id == y.setting_id;
      for (std::size_t p = 0; p < 3 && same; ++p) same = same_direction(x.directions[p], y.directions[p], 1e-9);
      if (!same) throw DataError("basis dataset '" + ds.tag + "' is misaligned at setting " + std::to_string(y.setting_id));
    }
    b.push_back(normalize_cc(ds));
  }
  CCDataset out = s;
  const double w = (1.0 - v_c) / 8.0;
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    CCRecord& rec = out.records[i];
    for (unsigned r = 0; r < 8; ++r) {
      double c = v_c * s.records[i].counts[r];
      for (const auto& ds : b) c += w * ds.records[i].counts[r];
      rec.counts[r] = c;
    }
    if (v_c < 1.0)
      for (const auto& ds : b) rec.outcome_mask = static_cast<std::uint8_t>(rec.outcome_mask | ds.records[i].outcome_mask);
  }
  out.normalization = 1.0;
  out.tag = state.tag;
  return out;
}

// --- synthesis -------------------------------------------------------------------

CCDataset synthesize_cc(const DensityMatrix& rho, std::size_t n_blocks, std::uint64_t seed, double counts_per_setting,
                        std::optional<std::uint64_t> poisson_seed, std::string tag) {
  if (rho.n_qubits() != 3) throw ParameterError("coincidence data is defined for three qubits");
  if (n_blocks == 0) throw ParameterError("need at least one block");
  if (!(counts_per_setting > 0.0)) throw ParameterError("counts per setting must be positive");
  const CorrelationTensor tensor(rho);
  CCDataset ds;
  ds.tag = std::move(tag);
  ds.records.reserve(n_blocks * 8);
  std::vector<double> table(64);
  for (std::size_t i = 0; i < n_blocks; ++i) {
    const MeasurementSettings m = sample_settings(3, seed, i);
    tensor.behavior_into(m, table);
    std::optional<Rng> rng;
    if (poisson_seed) rng.emplace(substream(*poisson_seed, "synth-poisson", i));
    for (unsigned s = 0; s < 8; ++s) {
      CCRecord rec;
      rec.setting_id = 8 * i + s;
      for (std::size_t p = 0; p < 3; ++p) rec.directions[p] = m.directions[p][(s >> (2 - p)) & 1U];
      rec.duration_s = 20.0;
      for (unsigned r = 0; r < 8; ++r) {
        const double mean = counts_per_setting * std::max(0.0, table[(s << 3) | r]);
        if (rng && mean > 0.0) {
          std::poisson_distribution<long long> pd(mean);
          rec.counts[r] = static_cast<double>(pd(*rng));
        } else {
          rec.counts[r] = rng ? 0.0 : mean;
        }
      }
      ds.records.push_back(rec);
    }
  }
  return ds;
}

std::vector<CCDataset> synthesize_basis_cc(std::size_t n_blocks, std::uint64_t seed, double counts_per_setting) {
  std::vector<CCDataset> out;
  for (unsigned k = 0; k < 8; ++k) {
    std::string bits;
    for (int p = 2; p >= 0; --p) bits += ((k >> p) & 1U) ? '1' : '0';
    out.push_back(synthesize_cc(DensityMatrix::from_pure(basis_state(bits)), n_blocks, seed, counts_per_setting,
                                std::nullopt, "basis-" + bits));
  }
  return out;
}

// --- statistics and resampling -------------------------------------------------------

namespace {

enum class Statistic { total_counts, pv_cc, correlator, fidelity_proxy };

Statistic parse_statistic(std::string_view name) {
  if (name == "total_counts" || name == "total-counts") return Statistic::total_counts;
  if (name == "pv_cc" || name == "pv-cc") return Statistic::pv_cc;
  if (name == "correlator") return Statistic::correlator;
  if (name == "fidelity_proxy" || name == "fidelity-proxy") return Statistic::fidelity_proxy;
  throw ParameterError("unknown statistic '" + std::string(name) + "'");
}

double statistic_value(const CCDataset& ds, Statistic stat, const InequalitySet* set, const BlockGrouping* grouping) {
  switch (stat) {
    case Statistic::total_counts: {
      double t = 0.0;
      for (const auto& rec : ds.records) t += rec.total();
      return t;
    }
    case Statistic::pv_cc: {
      if (set == nullptr) throw ParameterError("statistic pv_cc needs an inequality set");
      return (grouping ? pv_from_grouping(ds, *grouping, *set, 0.0) : pv_cc(ds, *set, 0.0)).estimate.p_v;
    }
    case Statistic::correlator:
    case Statistic::fidelity_proxy: {
      double acc = 0.0;
      std::size_t used = 0;
      for (const auto& rec : ds.records) {
        const double total = rec.total();
        if (!(total > 0.0)) continue;
        double v = 0.0;
        if (stat == Statistic::correlator) {
          for (unsigned r = 0; r < 8; ++r) v += ((std::popcount(r) % 2) ? -1.0 : 1.0) * rec.counts[r];
        } else {
          v = rec.counts[0] + rec.counts[7];
        }
        acc += v / total;
        ++used;
      }
      return used ? acc / static_cast<double>(used) : 0.0;
    }
  }
  return 0.0;
}

}  // namespace

double cc_statistic(const CCDataset& ds, std::string_view statistic, const InequalitySet* set) {
  return statistic_value(ds, parse_statistic(statistic), set, nullptr);
}

ResampleResult poisson_resample(const CCDataset& ds, std::string_view statistic, std::size_t trials, std::uint64_t seed,
                                const InequalitySet* set, unsigned workers) {
  const Statistic stat = parse_statistic(statistic);
  if (trials < 2) throw ParameterError("need at least two trials");
  if (stat == Statistic::pv_cc && set == nullptr) throw ParameterError("statistic pv_cc needs an inequality set");
  std::optional<BlockGrouping> grouping;
  if (stat == Statistic::pv_cc) grouping = group_blocks(ds);

  std::vector<double> values(trials);
  parallel_ranges(trials, workers, [&](std::uint64_t begin, std::uint64_t end, unsigned) {
    CCDataset copy = ds;
    for (std::uint64_t t = begin; t < end; ++t) {
      Rng rng = substream(seed, "poisson", t);
      for (std::size_t i = 0; i < ds.records.size(); ++i)
        for (unsigned r = 0; r < 8; ++r) {
          const double mean = ds.records[i].counts[r];
          if (mean > 0.0) {
            std::poisson_distribution<long long> pd(mean);
            copy.records[i].counts[r] = static_cast<double>(pd(rng));
          } else {
            copy.records[i].counts[r] = 0.0;
          }
        }
      values[t] = statistic_value(copy, stat, set, grouping ? &*grouping : nullptr);
    }
  });
  ResampleResult out;
  out.trials = trials;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(trials);
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.std = std::sqrt(ss / static_cast<double>(trials - 1));
  return out;
}

}  // namespace bellconc
