#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "seeds3d/types.hpp"

namespace seeds3d {

/// Cell boundaries along one axis: cell i spans [bounds[i], bounds[i+1]).
using AxisBounds = std::vector<std::size_t>;

/// Top-level cell geometry chosen for a requested supervoxel count.
struct GridLayout {
  std::array<AxisBounds, 3> bounds;
  Dims cells;  // cells per axis; K = cells.size()

  std::int32_t supervoxel_count() const { return static_cast<std::int32_t>(cells.size()); }
};

/// Near-cubic tiling: per axis round(extent / side) cells with side = (V / K)^(1/d),
/// clamped to [1, extent]. The last cell along each axis absorbs the remainder.
/// 2D mode tiles only the first two axes. Throws ConfigurationError when the volume
/// cannot host the grid.
GridLayout plan_grid(const Dims& dims, const SeedsParams& params);

/// One grid of blocks. Blocks at a level tile the volume and never straddle a
/// block of the next coarser level.
struct BlockLevel {
  std::array<AxisBounds, 3> bounds;
  std::array<std::vector<std::int32_t>, 3> cell_of;  // voxel coordinate -> block coordinate
  Dims grid;
  std::vector<std::int32_t> owner;      // supervoxel per block
  std::vector<std::int32_t> histogram;  // grid.size() x num_bins, fixed after init
  std::vector<std::int32_t> count;      // voxels per block, fixed after init

  std::size_t block_at_voxel(std::size_t x, std::size_t y, std::size_t z) const {
    return grid.index(static_cast<std::size_t>(cell_of[0][x]), static_cast<std::size_t>(cell_of[1][y]),
                      static_cast<std::size_t>(cell_of[2][z]));
  }
};

/// Multi-level block structure plus per-supervoxel histograms.
///
/// Level 0 is the voxel level and is represented only by the per-voxel bin array.
/// Levels 1..top-1 are the intermediate block levels (finest first) and the top
/// level is the initial supervoxel grid. Supervoxel histograms are delta-updated on
/// every move and always equal the histogram of the voxels currently labeled k.
class BlockHierarchy {
 public:
  BlockHierarchy() = default;

  std::int32_t num_bins() const { return num_bins_; }
  const Dims& dims() const { return dims_; }
  std::int32_t supervoxel_count() const { return supervoxel_count_; }

  /// Index of the top (initial supervoxel) level; intermediate levels are 1..top_level()-1.
  int top_level() const { return static_cast<int>(levels_.size()); }
  int intermediate_levels() const { return top_level() - 1; }
  /// Levels 1..top_level(). Level 0 is the voxel grid and has no BlockLevel.
  const BlockLevel& level(int l) const;

  std::span<const std::int32_t> voxel_bins() const { return bins_; }

  std::span<const std::int32_t> supervoxel_histogram(std::int32_t k) const {
    return {sv_hist_.data() + static_cast<std::size_t>(k) * static_cast<std::size_t>(num_bins_),
            static_cast<std::size_t>(num_bins_)};
  }
  std::int64_t supervoxel_size(std::int32_t k) const { return sv_count_[static_cast<std::size_t>(k)]; }
  std::span<const std::int32_t> block_histogram(int l, std::size_t block) const;

  /// Histogram and voxel count of supervoxel k. Throws DomainError if k is out of range.
  std::pair<Histogram, std::int64_t> supervoxel_stats(std::int32_t k) const;
  Histogram block_stats(int l, std::size_t block) const;

  /// Coarser-level block containing `block` of level l, from the block geometry.
  std::size_t parent_of(int l, std::size_t block) const;

  /// Re-derive level-l block owners from the voxel labels. Valid whenever every
  /// supervoxel is a union of level-l blocks.
  void sync_owners(int l, const LabelField& labels);

  /// Hand a level-l block from supervoxel `from` to `to`, relabeling its voxels.
  /// Throws LogicError if the block is not owned by `from` or from == to.
  void move_block(LabelField& labels, int l, std::size_t block, std::int32_t from, std::int32_t to);
  /// Hand one voxel from `from` to `to`.
  void move_voxel(LabelField& labels, std::size_t voxel, std::int32_t from, std::int32_t to);

  friend std::pair<LabelField, BlockHierarchy> init_grid(const Volume& volume,
                                                         const SeedsParams& params);

 private:
  BlockLevel& mutable_level(int l) { return levels_[static_cast<std::size_t>(l - 1)]; }

  std::int32_t num_bins_ = 0;
  Dims dims_;
  std::int32_t supervoxel_count_ = 0;
  std::vector<std::int32_t> bins_;
  std::vector<BlockLevel> levels_;  // levels_[l - 1] holds level l
  std::vector<std::int32_t> sv_hist_;
  std::vector<std::int64_t> sv_count_;
};

/// Initial grid labels and block hierarchy for a volume with intensities in [0, 1].
/// Creates up to params.block_iterations intermediate levels by halving every block
/// extent per axis; stops early once no block can be split further.
std::pair<LabelField, BlockHierarchy> init_grid(const Volume& volume, const SeedsParams& params);

}  // namespace seeds3d
