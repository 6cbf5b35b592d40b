#include "seeds3d/engine.hpp"

#include <algorithm>
#include <chrono>

#include "seeds3d/error.hpp"
#include "seeds3d/topology.hpp"

namespace seeds3d {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Neighbor coordinate along d, or false if it leaves the grid.
bool step(const Dims& grid, std::array<std::size_t, 3>& c, Direction d) {
  const auto a = static_cast<std::size_t>(axis_of(d));
  if (sign_of(d) < 0) {
    if (c[a] == 0) return false;
    --c[a];
  } else {
    if (c[a] + 1 >= grid.extent[a]) return false;
    ++c[a];
  }
  return true;
}

}  // namespace

std::int64_t RunReport::accepted() const {
  std::int64_t n = 0;
  for (const auto& p : passes) n += p.accepted;
  return n;
}

std::int64_t RunReport::proposed() const {
  std::int64_t n = 0;
  for (const auto& p : passes) n += p.proposed;
  return n;
}

std::string to_string(PassKind kind) { return kind == PassKind::Block ? "block" : "pixel"; }

Engine::Engine(const Volume& volume, const SeedsParams& params, const RunHooks& hooks)
    : params_(params), hooks_(hooks) {
  auto [labels, hierarchy] = init_grid(volume, params);
  labels_ = std::move(labels);
  hierarchy_ = std::move(hierarchy);
}

int Engine::block_level_for_pass(std::int32_t pass) const {
  const int coarsest = hierarchy_.top_level() - 1;
  if (coarsest < 1) throw LogicError("no intermediate block levels");
  return std::max(coarsest - pass, 1);
}

bool Engine::block_guard(const BlockLevel& lvl, std::size_t block, std::int32_t owner,
                         Direction d) const {
  const auto c = lvl.grid.coord(block);
  if (planar()) return check_split_2d(gather_mask_2d(lvl.owner, lvl.grid, c[0], c[1], c[2], owner), d);
  return check_split_3d(gather_mask_3d(lvl.owner, lvl.grid, c[0], c[1], c[2], owner), d);
}

bool Engine::voxel_guard(std::size_t x, std::size_t y, std::size_t z, std::int32_t owner,
                         Direction d) const {
  if (planar()) return check_split_2d(gather_mask_2d(labels_.labels, labels_.dims, x, y, z, owner), d);
  return check_split_3d(gather_mask_3d(labels_.labels, labels_.dims, x, y, z, owner), d);
}

PassStats Engine::block_pass(int level) {
  if (level < 1 || level >= hierarchy_.top_level())
    throw LogicError("block_pass: level " + std::to_string(level) + " is not an intermediate level");
  const auto t0 = Clock::now();
  PassStats stats;
  stats.kind = PassKind::Block;
  stats.level = level;

  hierarchy_.sync_owners(level, labels_);
  const BlockLevel& lvl = hierarchy_.level(level);
  const bool hooked = hooks_.before_move || hooks_.after_move;

  for (std::size_t b = 0; b < lvl.grid.size(); ++b) {
    const std::int32_t k = lvl.owner[b];
    const auto here = lvl.grid.coord(b);
    int guard = -1;  // lazily evaluated; the rule does not depend on direction
    for (Direction d : kAllDirections) {
      if (planar() && axis_of(d) == 2) continue;
      auto c = here;
      if (!step(lvl.grid, c, d)) continue;
      const std::int32_t n = lvl.owner[lvl.grid.index(c[0], c[1], c[2])];
      if (n == k) continue;
      ++stats.proposed;
      if (guard < 0) guard = block_guard(lvl, b, k, d) ? 1 : 0;
      if (!guard) continue;

      const auto part = hierarchy_.block_histogram(level, b);
      const auto donor = hierarchy_.supervoxel_histogram(k);
      const auto recipient = hierarchy_.supervoxel_histogram(n);
      std::int64_t retain = 0, transfer = 0;
      for (std::size_t j = 0; j < part.size(); ++j) {
        retain += std::min(donor[j] - part[j], part[j]);
        transfer += std::min(recipient[j], part[j]);
      }
      if (!(retain < transfer)) continue;

      MoveEvent ev;
      if (hooked) {
        ev = MoveEvent{PassKind::Block, level, b, d, k, n, {{retain, 1}, {transfer, 1}}, std::nullopt};
        if (hooks_.before_move) hooks_.before_move(ev, EngineView{labels_, hierarchy_, params_});
      }
      hierarchy_.move_block(labels_, level, b, k, n);
      ++stats.accepted;
      if (hooks_.after_move) hooks_.after_move(ev, EngineView{labels_, hierarchy_, params_});
      break;
    }
  }
  stats.seconds = seconds_since(t0);
  return stats;
}

PassStats Engine::pixel_pass() {
  const auto t0 = Clock::now();
  PassStats stats;
  stats.kind = PassKind::Pixel;

  const Dims dims = labels_.dims;
  const auto bins = hierarchy_.voxel_bins();
  std::vector<std::int32_t>& lab = labels_.labels;
  const std::int32_t lambda = params_.prior_weight;
  const bool hooked = hooks_.before_move || hooks_.after_move;

  for (std::size_t z = 0; z < dims[2]; ++z)
    for (std::size_t y = 0; y < dims[1]; ++y)
      for (std::size_t x = 0; x < dims[0]; ++x) {
        const std::size_t i = dims.index(x, y, z);
        const std::int32_t k = lab[i];
        int guard = -1;
        for (Direction d : kAllDirections) {
          if (planar() && axis_of(d) == 2) continue;
          std::array<std::size_t, 3> c{x, y, z};
          if (!step(dims, c, d)) continue;
          const std::int32_t n = lab[dims.index(c[0], c[1], c[2])];
          if (n == k) continue;
          ++stats.proposed;
          if (guard < 0) guard = voxel_guard(x, y, z, k, d) ? 1 : 0;
          if (!guard) continue;

          const auto j = static_cast<std::size_t>(bins[i]);
          const std::int64_t donor_bin = hierarchy_.supervoxel_histogram(k)[j];
          const std::int64_t recipient_bin = hierarchy_.supervoxel_histogram(n)[j];
          // Without a same-bin voxel in the recipient the transfer energy is zero.
          if (recipient_bin == 0) continue;

          const std::int64_t n_donor = boundary_count(lab, dims, x, y, z, d, k);
          const std::int64_t n_recipient = boundary_count(lab, dims, x, y, z, d, n);
          const EnergyTerms retain{std::min<std::int64_t>(donor_bin - 1, 1), n_donor * donor_bin};
          const EnergyTerms transfer{1, n_recipient * recipient_bin};
          if (!energy_less(retain, transfer, lambda)) continue;

          MoveEvent ev;
          if (hooked) {
            ev = MoveEvent{PassKind::Pixel, 0, i, d, k, n, {retain, transfer},
                           BoundaryPair{n_donor, n_recipient, j}};
            if (hooks_.before_move) hooks_.before_move(ev, EngineView{labels_, hierarchy_, params_});
          }
          hierarchy_.move_voxel(labels_, i, k, n);
          ++stats.accepted;
          if (hooks_.after_move) hooks_.after_move(ev, EngineView{labels_, hierarchy_, params_});
          break;
        }
      }
  stats.seconds = seconds_since(t0);
  return stats;
}

namespace {

SegmentationResult run_passes(const Volume& volume, const SeedsParams& params, const RunHooks& hooks) {
  const auto t0 = Clock::now();
  Engine engine(volume, params, hooks);
  RunReport report;
  report.supervoxels = engine.labels().count;
  report.init_seconds = seconds_since(t0);

  if (engine.hierarchy().intermediate_levels() > 0)
    for (std::int32_t p = 0; p < params.block_iterations; ++p)
      report.passes.push_back(engine.block_pass(engine.block_level_for_pass(p)));
  for (std::int32_t p = 0; p < params.pixel_iterations; ++p)
    report.passes.push_back(engine.pixel_pass());

  report.total_seconds = seconds_since(t0);
  return {std::move(engine).release_labels(), std::move(report)};
}

}  // namespace

SegmentationResult run(const Volume& volume, const SeedsParams& params, const RunHooks& hooks) {
  if (params.mode == Mode::TwoD) return run_2d(volume, params, hooks);
  return run_passes(volume, params, hooks);
}

SegmentationResult run_2d(const Volume& image, const SeedsParams& params, const RunHooks& hooks) {
  if (image.dims[2] != 1)
    throw ConfigurationError("run_2d needs a single-slice image, got " + std::to_string(image.dims[2]) +
                             " slices");
  SeedsParams p = params;
  p.mode = Mode::TwoD;
  return run_passes(image, p, hooks);
}

}  // namespace seeds3d
