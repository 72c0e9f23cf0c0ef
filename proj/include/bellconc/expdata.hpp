#pragma once

// Three-qubit coincidence-count (CC) records: loading, block grouping,
// count mixing, Bell tests per block and Poisson resampling.
//
// A block is the 8 records that share two directions per party and cover
// every setting combination S in {0,1}^3. Within a block, S_p = 0 is the
// direction party p uses in the block's lowest setting_id.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bellconc/bell.hpp"
#include "bellconc/nlfrac.hpp"
#include "bellconc/qstate.hpp"

namespace bellconc {

struct CCRecord {
  std::uint64_t setting_id = 0;
  std::array<Vec3, 3> directions;
  /// Indexed by outcome bits r1 r2 r3, r1 most significant.
  std::array<double, 8> counts{};
  double duration_s = 1.0;
  /// Bit r set when the outcome row was present in the source file.
  std::uint8_t outcome_mask = 0xFF;

  double total() const;
};

struct CCDataset {
  std::vector<CCRecord> records;
  double normalization = 1.0;
  std::string tag;
};

/// CSV header of the per-outcome row format.
inline constexpr std::string_view kCCHeader =
    "setting_id,u1x,u1y,u1z,u2x,u2y,u2z,u3x,u3y,u3z,r1,r2,r3,counts,duration_s";

std::string cc_to_csv(const CCDataset& ds);
/// Row numbers in errors are 1-based file lines (the header is line 1).
CCDataset cc_from_csv(std::string_view text);

/// Reads `path` and the optional sidecar `path + ".json"` ({tag, normalization}).
CCDataset load_cc(const std::string& path);
void save_cc(const CCDataset& ds, const std::string& path);

struct CCBlock {
  /// Record index for each setting combination S (S1 most significant).
  std::array<std::size_t, 8> record{};
  std::array<std::array<Vec3, 2>, 3> directions;
};

struct BlockGrouping {
  std::vector<CCBlock> blocks;
  std::size_t excluded_records = 0;
};

/// Groups records by matching per-party directions (tolerance 1e-6).
/// Records that do not form a complete block are counted as excluded.
BlockGrouping group_blocks(const CCDataset& ds);

/// P(r|S) = counts_r / total for each record of the block.
Behavior behavior_from_block(const CCDataset& ds, const CCBlock& block);

/// Counts divided by the dataset total; normalization records that total.
CCDataset normalize_cc(const CCDataset& ds);

/// v_c CC(state) + sum_k (1 - v_c)/8 CC(basis_k) on normalized datasets.
/// All nine datasets must list the same settings in the same order.
CCDataset mix_counts(const CCDataset& state, std::span<const CCDataset> basis, double v_c);

struct PvCCResult {
  PvEstimate estimate;
  double low = 0.0;   // fraction of blocks above 1 + margin
  double high = 0.0;  // fraction of blocks above 1 - margin
  std::size_t blocks = 0;
  std::size_t excluded_records = 0;
};

PvCCResult pv_cc(const CCDataset& ds, const InequalitySet& set, double margin = 0.015);

/// Block i uses sample_settings(3, seed, i), i.e. the settings estimate_pv
/// draws for sample i; setting_id = 8 i + S. Counts are
/// counts_per_setting * P(r|S), or Poisson draws with that mean when
/// `poisson_seed` is given.
CCDataset synthesize_cc(const DensityMatrix& rho, std::size_t n_blocks, std::uint64_t seed,
                        double counts_per_setting, std::optional<std::uint64_t> poisson_seed = std::nullopt,
                        std::string tag = {});

/// Datasets for the 8 computational basis states on the same settings.
std::vector<CCDataset> synthesize_basis_cc(std::size_t n_blocks, std::uint64_t seed, double counts_per_setting);

struct ResampleResult {
  double mean = 0.0;
  double std = 0.0;
  std::size_t trials = 0;
};

/// Statistics: "total_counts", "pv_cc" (needs `set`), "correlator" (mean
/// three-party correlator over records), "fidelity_proxy" (mean weight of
/// outcomes 000 and 111 over records).
double cc_statistic(const CCDataset& ds, std::string_view statistic, const InequalitySet* set = nullptr);

/// Redraws every count from Poisson(count) per trial and summarizes the
/// statistic; trial t uses substream (seed, "poisson", t).
ResampleResult poisson_resample(const CCDataset& ds, std::string_view statistic, std::size_t trials, std::uint64_t seed,
                                const InequalitySet* set = nullptr, unsigned workers = 1);

}  // namespace bellconc
