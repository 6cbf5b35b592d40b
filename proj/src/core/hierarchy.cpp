#include "seeds3d/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seeds3d/error.hpp"

namespace seeds3d {
namespace {

AxisBounds even_split(std::size_t extent, std::size_t cells) {
  AxisBounds b(cells + 1);
  const std::size_t step = extent / cells;
  for (std::size_t i = 0; i < cells; ++i) b[i] = i * step;
  b[cells] = extent;
  return b;
}

// Split every interval of length >= 2 in two; the second half takes the odd voxel.
AxisBounds halve(const AxisBounds& coarse, bool& changed) {
  AxisBounds fine;
  fine.reserve(coarse.size() * 2);
  for (std::size_t i = 0; i + 1 < coarse.size(); ++i) {
    const std::size_t lo = coarse[i], len = coarse[i + 1] - coarse[i];
    fine.push_back(lo);
    if (len >= 2) {
      fine.push_back(lo + len / 2);
      changed = true;
    }
  }
  fine.push_back(coarse.back());
  return fine;
}

BlockLevel make_level(const std::array<AxisBounds, 3>& bounds, const Dims& dims) {
  BlockLevel lvl;
  lvl.bounds = bounds;
  std::array<std::size_t, 3> n{};
  for (int a = 0; a < 3; ++a) {
    const auto& b = bounds[static_cast<std::size_t>(a)];
    n[static_cast<std::size_t>(a)] = b.size() - 1;
    auto& map = lvl.cell_of[static_cast<std::size_t>(a)];
    map.resize(dims[a]);
    for (std::size_t c = 0; c + 1 < b.size(); ++c)
      for (std::size_t v = b[c]; v < b[c + 1]; ++v) map[v] = static_cast<std::int32_t>(c);
  }
  lvl.grid = Dims(n[0], n[1], n[2]);
  lvl.owner.assign(lvl.grid.size(), 0);
  lvl.count.assign(lvl.grid.size(), 0);
  return lvl;
}

}  // namespace

GridLayout plan_grid(const Dims& dims, const SeedsParams& params) {
  params.validate();
  if (dims[0] == 0 || dims[1] == 0 || dims[2] == 0)
    throw ConfigurationError("volume has an empty axis");
  const bool planar = params.mode == Mode::TwoD;
  if (planar && dims[2] != 1)
    throw ConfigurationError("2D mode needs a single-slice volume, got " + std::to_string(dims[2]) +
                             " slices");
  const std::size_t area = planar ? dims[0] * dims[1] : dims.size();
  if (static_cast<std::size_t>(params.num_supervoxels) > area)
    throw ConfigurationError("volume of " + std::to_string(area) + " voxels cannot host " +
                             std::to_string(params.num_supervoxels) + " supervoxels");

  const double side = std::pow(static_cast<double>(area) / params.num_supervoxels,
                               planar ? 1.0 / 2.0 : 1.0 / 3.0);
  GridLayout layout;
  std::array<std::size_t, 3> n{1, 1, 1};
  for (int a = 0; a < (planar ? 2 : 3); ++a) {
    const auto cells = static_cast<std::size_t>(std::llround(static_cast<double>(dims[a]) / side));
    n[static_cast<std::size_t>(a)] = std::clamp<std::size_t>(cells, 1, dims[a]);
  }
  for (int a = 0; a < 3; ++a)
    layout.bounds[static_cast<std::size_t>(a)] = even_split(dims[a], n[static_cast<std::size_t>(a)]);
  layout.cells = Dims(n[0], n[1], n[2]);
  return layout;
}

std::pair<LabelField, BlockHierarchy> init_grid(const Volume& volume, const SeedsParams& params) {
  const GridLayout layout = plan_grid(volume.dims, params);
  volume.require_unit_range();
  const Dims dims = volume.dims;
  const std::size_t nb = static_cast<std::size_t>(params.num_bins);

  BlockHierarchy h;
  h.num_bins_ = params.num_bins;
  h.dims_ = dims;
  h.supervoxel_count_ = layout.supervoxel_count();

  h.bins_.resize(dims.size());
  for (std::size_t i = 0; i < dims.size(); ++i)
    h.bins_[i] = static_cast<std::int32_t>(assign_bin(volume.data[i], params.num_bins));

  // Coarse to fine, then store finest first.
  std::vector<std::array<AxisBounds, 3>> geometry{layout.bounds};
  for (std::int32_t it = 0; it < params.block_iterations; ++it) {
    bool changed = false;
    std::array<AxisBounds, 3> next;
    for (std::size_t a = 0; a < 3; ++a) next[a] = halve(geometry.back()[a], changed);
    if (!changed) break;
    geometry.push_back(std::move(next));
  }
  std::reverse(geometry.begin(), geometry.end());
  for (const auto& g : geometry) h.levels_.push_back(make_level(g, dims));

  for (auto& lvl : h.levels_) lvl.histogram.assign(lvl.grid.size() * nb, 0);
  for (std::size_t z = 0; z < dims[2]; ++z)
    for (std::size_t y = 0; y < dims[1]; ++y)
      for (std::size_t x = 0; x < dims[0]; ++x) {
        const auto bin = static_cast<std::size_t>(h.bins_[dims.index(x, y, z)]);
        for (auto& lvl : h.levels_) {
          const std::size_t b = lvl.block_at_voxel(x, y, z);
          ++lvl.histogram[b * nb + bin];
          ++lvl.count[b];
        }
      }

  // Top-level blocks are the supervoxels themselves.
  const BlockLevel& top = h.levels_.back();
  std::vector<std::int32_t> labels(dims.size());
  for (std::size_t z = 0; z < dims[2]; ++z)
    for (std::size_t y = 0; y < dims[1]; ++y)
      for (std::size_t x = 0; x < dims[0]; ++x)
        labels[dims.index(x, y, z)] = static_cast<std::int32_t>(top.block_at_voxel(x, y, z));

  h.sv_hist_ = top.histogram;
  h.sv_count_.assign(top.count.begin(), top.count.end());
  for (std::size_t i = 0; i < top.grid.size(); ++i) h.levels_.back().owner[i] = static_cast<std::int32_t>(i);

  LabelField field(dims, std::move(labels), h.supervoxel_count_);
  for (int l = 1; l < h.top_level(); ++l) h.sync_owners(l, field);
  return {std::move(field), std::move(h)};
}

const BlockLevel& BlockHierarchy::level(int l) const {
  if (l < 1 || l > top_level())
    throw DomainError("block level " + std::to_string(l) + " outside [1, " +
                      std::to_string(top_level()) + "]");
  return levels_[static_cast<std::size_t>(l - 1)];
}

std::span<const std::int32_t> BlockHierarchy::block_histogram(int l, std::size_t block) const {
  const auto nb = static_cast<std::size_t>(num_bins_);
  return {level(l).histogram.data() + block * nb, nb};
}

std::pair<Histogram, std::int64_t> BlockHierarchy::supervoxel_stats(std::int32_t k) const {
  if (k < 0 || k >= supervoxel_count_)
    throw DomainError("supervoxel " + std::to_string(k) + " outside [0, " +
                      std::to_string(supervoxel_count_) + ")");
  Histogram hist(static_cast<std::size_t>(num_bins_));
  const auto src = supervoxel_histogram(k);
  for (std::size_t j = 0; j < src.size(); ++j) hist.add(j, src[j]);
  return {std::move(hist), sv_count_[static_cast<std::size_t>(k)]};
}

Histogram BlockHierarchy::block_stats(int l, std::size_t block) const {
  Histogram hist(static_cast<std::size_t>(num_bins_));
  const auto src = block_histogram(l, block);
  for (std::size_t j = 0; j < src.size(); ++j) hist.add(j, src[j]);
  return hist;
}

std::size_t BlockHierarchy::parent_of(int l, std::size_t block) const {
  if (l >= top_level()) throw DomainError("top-level blocks have no parent");
  const BlockLevel& lvl = level(l);
  const auto c = lvl.grid.coord(block);
  return level(l + 1).block_at_voxel(lvl.bounds[0][c[0]], lvl.bounds[1][c[1]], lvl.bounds[2][c[2]]);
}

void BlockHierarchy::sync_owners(int l, const LabelField& labels) {
  BlockLevel& lvl = mutable_level(l);
  for (std::size_t b = 0; b < lvl.grid.size(); ++b) {
    const auto c = lvl.grid.coord(b);
    lvl.owner[b] = labels.at(lvl.bounds[0][c[0]], lvl.bounds[1][c[1]], lvl.bounds[2][c[2]]);
  }
}

void BlockHierarchy::move_block(LabelField& labels, int l, std::size_t block, std::int32_t from,
                                std::int32_t to) {
  BlockLevel& lvl = mutable_level(l);
  if (from == to) throw LogicError("move_block: donor and recipient are the same supervoxel");
  if (lvl.owner[block] != from)
    throw LogicError("move_block: block " + std::to_string(block) + " is owned by " +
                     std::to_string(lvl.owner[block]) + ", not " + std::to_string(from));
  lvl.owner[block] = to;

  const auto nb = static_cast<std::size_t>(num_bins_);
  const std::int32_t* part = lvl.histogram.data() + block * nb;
  std::int32_t* donor = sv_hist_.data() + static_cast<std::size_t>(from) * nb;
  std::int32_t* recipient = sv_hist_.data() + static_cast<std::size_t>(to) * nb;
  for (std::size_t j = 0; j < nb; ++j) {
    donor[j] -= part[j];
    recipient[j] += part[j];
  }
  sv_count_[static_cast<std::size_t>(from)] -= lvl.count[block];
  sv_count_[static_cast<std::size_t>(to)] += lvl.count[block];

  const auto c = lvl.grid.coord(block);
  for (std::size_t z = lvl.bounds[2][c[2]]; z < lvl.bounds[2][c[2] + 1]; ++z)
    for (std::size_t y = lvl.bounds[1][c[1]]; y < lvl.bounds[1][c[1] + 1]; ++y)
      for (std::size_t x = lvl.bounds[0][c[0]]; x < lvl.bounds[0][c[0] + 1]; ++x)
        labels.labels[dims_.index(x, y, z)] = to;
}

void BlockHierarchy::move_voxel(LabelField& labels, std::size_t voxel, std::int32_t from,
                                std::int32_t to) {
  if (from == to) throw LogicError("move_voxel: donor and recipient are the same supervoxel");
  if (labels.labels[voxel] != from)
    throw LogicError("move_voxel: voxel " + std::to_string(voxel) + " is not owned by " +
                     std::to_string(from));
  const auto nb = static_cast<std::size_t>(num_bins_);
  const auto bin = static_cast<std::size_t>(bins_[voxel]);
  --sv_hist_[static_cast<std::size_t>(from) * nb + bin];
  ++sv_hist_[static_cast<std::size_t>(to) * nb + bin];
  --sv_count_[static_cast<std::size_t>(from)];
  ++sv_count_[static_cast<std::size_t>(to)];
  labels.labels[voxel] = to;
}

}  // namespace seeds3d
