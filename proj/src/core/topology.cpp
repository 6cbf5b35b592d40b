#include "seeds3d/topology.hpp"

#include <array>

#include "seeds3d/error.hpp"

namespace seeds3d {
namespace {

// Cells not on the given window face, so a shift never wraps into the next row.
constexpr std::uint32_t face_free_3d(int axis, int side) {
  std::uint32_t m = 0;
  for (int z = 0; z < 3; ++z)
    for (int y = 0; y < 3; ++y)
      for (int x = 0; x < 3; ++x) {
        const int c = axis == 0 ? x : axis == 1 ? y : z;
        if (c != side) m |= 1u << (x + 3 * y + 9 * z);
      }
  return m;
}

constexpr std::uint32_t kNotX0 = face_free_3d(0, 0), kNotX2 = face_free_3d(0, 2);
constexpr std::uint32_t kNotY0 = face_free_3d(1, 0), kNotY2 = face_free_3d(1, 2);
constexpr std::uint32_t kNotZ0 = face_free_3d(2, 0), kNotZ2 = face_free_3d(2, 2);

constexpr std::uint32_t grow_3d(std::uint32_t s) {
  return s | ((s & kNotX2) << 1) | ((s & kNotX0) >> 1) | ((s & kNotY2) << 3) |
         ((s & kNotY0) >> 3) | ((s & kNotZ2) << 9) | ((s & kNotZ0) >> 9);
}

// 2D windows live in the z = 0 plane of the same bit layout.
constexpr std::uint32_t kPlane = 0x1FFu;

constexpr std::uint32_t grow_2d(std::uint32_t s) {
  return (s | ((s & kNotX2) << 1) | ((s & kNotX0) >> 1) | ((s & kNotY2) << 3) |
          ((s & kNotY0) >> 3)) &
         kPlane;
}

template <std::uint32_t (*Grow)(std::uint32_t)>
constexpr bool remainder_connected(std::uint32_t bits, int center) {
  const std::uint32_t rest = bits & ~(1u << center);
  if (rest == 0) return false;
  std::uint32_t reached = rest & (~rest + 1);  // lowest set cell
  for (;;) {
    const std::uint32_t next = Grow(reached) & rest;
    if (next == reached) break;
    reached = next;
  }
  return reached == rest;
}

constexpr std::array<bool, 512> build_table_2d() {
  std::array<bool, 512> t{};
  for (std::uint32_t m = 0; m < 512; ++m) t[m] = remainder_connected<grow_2d>(m, Mask2D::kCenter);
  return t;
}

constexpr std::array<bool, 512> kSafe2d = build_table_2d();

}  // namespace

bool local_connectivity_oracle(Mask2D mask) {
  return remainder_connected<grow_2d>(mask.bits & kPlane, Mask2D::kCenter);
}

bool local_connectivity_oracle(Mask3D mask) {
  return remainder_connected<grow_3d>(mask.bits & 0x7FFFFFFu, Mask3D::kCenter);
}

bool check_split_2d(Mask2D mask, Direction direction) {
  if (axis_of(direction) == 2) throw LogicError("check_split_2d: axial direction in a 2D window");
  return kSafe2d[mask.bits & kPlane];
}

bool check_split_3d(Mask3D mask, [[maybe_unused]] Direction direction) {
  return remainder_connected<grow_3d>(mask.bits & 0x7FFFFFFu, Mask3D::kCenter);
}

Mask3D gather_mask_3d(std::span<const std::int32_t> labels, const Dims& dims, std::size_t x,
                      std::size_t y, std::size_t z, std::int32_t owner) {
  Mask3D m;
  const std::size_t sx = dims[0], sy = dims[1], sz = dims[2];
  const bool interior = x > 0 && y > 0 && z > 0 && x + 1 < sx && y + 1 < sy && z + 1 < sz;
  if (interior) {
    const std::int32_t* base = labels.data() + dims.index(x - 1, y - 1, z - 1);
    int b = 0;
    for (int dz = 0; dz < 3; ++dz)
      for (int dy = 0; dy < 3; ++dy) {
        const std::int32_t* row = base + (dz * sy + dy) * sx;
        for (int dx = 0; dx < 3; ++dx, ++b)
          if (row[dx] == owner) m.bits |= 1u << b;
      }
    return m;
  }
  for (int dz = -1; dz <= 1; ++dz) {
    const auto zz = static_cast<std::ptrdiff_t>(z) + dz;
    if (zz < 0 || zz >= static_cast<std::ptrdiff_t>(sz)) continue;
    for (int dy = -1; dy <= 1; ++dy) {
      const auto yy = static_cast<std::ptrdiff_t>(y) + dy;
      if (yy < 0 || yy >= static_cast<std::ptrdiff_t>(sy)) continue;
      for (int dx = -1; dx <= 1; ++dx) {
        const auto xx = static_cast<std::ptrdiff_t>(x) + dx;
        if (xx < 0 || xx >= static_cast<std::ptrdiff_t>(sx)) continue;
        if (labels[dims.index(static_cast<std::size_t>(xx), static_cast<std::size_t>(yy),
                              static_cast<std::size_t>(zz))] == owner)
          m.set(dx, dy, dz);
      }
    }
  }
  return m;
}

Mask2D gather_mask_2d(std::span<const std::int32_t> labels, const Dims& dims, std::size_t x,
                      std::size_t y, std::size_t z, std::int32_t owner) {
  Mask2D m;
  for (int dy = -1; dy <= 1; ++dy) {
    const auto yy = static_cast<std::ptrdiff_t>(y) + dy;
    if (yy < 0 || yy >= static_cast<std::ptrdiff_t>(dims[1])) continue;
    for (int dx = -1; dx <= 1; ++dx) {
      const auto xx = static_cast<std::ptrdiff_t>(x) + dx;
      if (xx < 0 || xx >= static_cast<std::ptrdiff_t>(dims[0])) continue;
      if (labels[dims.index(static_cast<std::size_t>(xx), static_cast<std::size_t>(yy), z)] == owner)
        m.set(dx, dy);
    }
  }
  return m;
}

}  // namespace seeds3d
