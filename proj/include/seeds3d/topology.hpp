#pragma once

#include <cstdint>
#include <span>

#include "seeds3d/types.hpp"

namespace seeds3d {

/// 3x3 occupancy window. Bit (dx+1) + 3*(dy+1) is set where the cell belongs to the
/// donor supervoxel. The center is bit 4.
struct Mask2D {
  std::uint16_t bits = 0;

  static constexpr int kCenter = 4;
  static constexpr int bit(int dx, int dy) { return (dx + 1) + 3 * (dy + 1); }
  constexpr bool test(int dx, int dy) const { return (bits >> bit(dx, dy)) & 1u; }
  constexpr void set(int dx, int dy) { bits = static_cast<std::uint16_t>(bits | (1u << bit(dx, dy))); }
};

/// 3x3x3 occupancy window. Bit (dx+1) + 3*(dy+1) + 9*(dz+1); the center is bit 13.
struct Mask3D {
  std::uint32_t bits = 0;

  static constexpr int kCenter = 13;
  static constexpr int bit(int dx, int dy, int dz) { return (dx + 1) + 3 * (dy + 1) + 9 * (dz + 1); }
  constexpr bool test(int dx, int dy, int dz) const { return (bits >> bit(dx, dy, dz)) & 1u; }
  constexpr void set(int dx, int dy, int dz) { bits |= 1u << bit(dx, dy, dz); }
};

/// True iff the window cells other than the center are non-empty and 4-connected
/// inside the window.
bool local_connectivity_oracle(Mask2D mask);
/// True iff the window cells other than the center are non-empty and 6-connected
/// inside the window.
bool local_connectivity_oracle(Mask3D mask);

/// Split guard for moving the center pixel out of its superpixel along `direction`
/// (sagittal or coronal only). Returns false when the move could disconnect the
/// superpixel or empty it.
bool check_split_2d(Mask2D mask, Direction direction);

/// Split guard for moving the center voxel out of its supervoxel along `direction`.
///
/// A true result guarantees that the donor cells left in the window stay 6-connected
/// without the center, so any path through the center can be rerouted inside the
/// window and the donor stays globally connected. Rejects the isolated voxel, which
/// keeps supervoxels from vanishing. The rule is symmetric, so the decision does not
/// depend on the direction; it is accepted for interface symmetry with the 2D guard.
bool check_split_3d(Mask3D mask, Direction direction);

/// Window of cells carrying `owner` around (x, y, z) on a grid of `dims` cells.
/// Out-of-range cells are empty.
Mask3D gather_mask_3d(std::span<const std::int32_t> labels, const Dims& dims, std::size_t x,
                      std::size_t y, std::size_t z, std::int32_t owner);
/// In-plane window at slice z.
Mask2D gather_mask_2d(std::span<const std::int32_t> labels, const Dims& dims, std::size_t x,
                      std::size_t y, std::size_t z, std::int32_t owner);

}  // namespace seeds3d
