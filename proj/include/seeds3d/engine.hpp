#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "seeds3d/energy.hpp"
#include "seeds3d/hierarchy.hpp"
#include "seeds3d/types.hpp"

namespace seeds3d {

enum class PassKind : std::uint8_t { Block, Pixel };

struct PassStats {
  PassKind kind = PassKind::Pixel;
  int level = 0;  // block level for block passes, 0 for pixel passes
  std::int64_t proposed = 0;
  std::int64_t accepted = 0;
  double seconds = 0.0;
};

struct RunReport {
  std::int32_t supervoxels = 0;
  double init_seconds = 0.0;
  double total_seconds = 0.0;
  std::vector<PassStats> passes;

  std::int64_t accepted() const;
  std::int64_t proposed() const;
};

/// One accepted transfer, reported before it is applied.
struct MoveEvent {
  PassKind kind = PassKind::Pixel;
  int level = 0;
  std::size_t element = 0;  // voxel index, or block index at `level`
  Direction direction = Direction::MinusSagittal;
  std::int32_t from = 0;
  std::int32_t to = 0;
  TransferEnergies energies;
  std::optional<BoundaryPair> boundary;
};

/// Read-only view of the engine state handed to hooks.
struct EngineView {
  const LabelField& labels;
  const BlockHierarchy& hierarchy;
  const SeedsParams& params;
};

/// Instrumentation callbacks. Unset hooks cost nothing.
struct RunHooks {
  std::function<void(const MoveEvent&, const EngineView&)> before_move;
  std::function<void(const MoveEvent&, const EngineView&)> after_move;
};

struct SegmentationResult {
  LabelField labels;
  RunReport report;
};

/// Supervoxel segmentation of a volume with intensities in [0, 1].
///
/// Builds the initial grid, runs params.block_iterations block passes coarse to fine
/// and then params.pixel_iterations pixel passes. Scans are lexicographic with axis 0
/// fastest and the six directions in kAllDirections order; accepted moves apply
/// immediately. The result is a deterministic function of (volume, params).
/// Dispatches to run_2d when params.mode is TwoD.
SegmentationResult run(const Volume& volume, const SeedsParams& params, const RunHooks& hooks = {});

/// Superpixel variant on a single-slice volume: two proposal axes, the 3x3 split
/// guard and the 3x4 boundary window.
SegmentationResult run_2d(const Volume& image, const SeedsParams& params, const RunHooks& hooks = {});

/// Lower-level access to individual passes, used by tests and benchmarks.
class Engine {
 public:
  Engine(const Volume& volume, const SeedsParams& params, const RunHooks& hooks = {});

  /// One block pass at block level l (1 <= l < hierarchy().top_level()).
  PassStats block_pass(int level);
  PassStats pixel_pass();

  /// Block level used by the i-th block pass: coarsest first, then repeating the finest.
  int block_level_for_pass(std::int32_t pass) const;

  const LabelField& labels() const { return labels_; }
  const BlockHierarchy& hierarchy() const { return hierarchy_; }
  const SeedsParams& params() const { return params_; }
  LabelField release_labels() && { return std::move(labels_); }

 private:
  bool planar() const { return params_.mode == Mode::TwoD; }
  bool block_guard(const BlockLevel& lvl, std::size_t block, std::int32_t owner, Direction d) const;
  bool voxel_guard(std::size_t x, std::size_t y, std::size_t z, std::int32_t owner, Direction d) const;

  SeedsParams params_;
  RunHooks hooks_;
  LabelField labels_;
  BlockHierarchy hierarchy_;
};

std::string to_string(PassKind kind);

}  // namespace seeds3d
