#include <array>
#include <queue>
#include <random>

#include "doctest.h"
#include "seeds3d/topology.hpp"

using namespace seeds3d;

namespace {

// Flood fill over the window cells other than the center.
bool flood_ok_3d(std::uint32_t bits) {
  bits &= ~(1u << 13);
  if (bits == 0) return false;
  const int start = __builtin_ctz(bits);
  std::uint32_t seen = 1u << start;
  std::queue<int> q;
  q.push(start);
  while (!q.empty()) {
    const int c = q.front();
    q.pop();
    const int x = c % 3, y = (c / 3) % 3, z = c / 9;
    const int nb[6][3] = {{x - 1, y, z}, {x + 1, y, z}, {x, y - 1, z}, {x, y + 1, z}, {x, y, z - 1}, {x, y, z + 1}};
    for (const auto& p : nb) {
      if (p[0] < 0 || p[0] > 2 || p[1] < 0 || p[1] > 2 || p[2] < 0 || p[2] > 2) continue;
      const int n = p[0] + 3 * p[1] + 9 * p[2];
      if (((bits >> n) & 1u) && !((seen >> n) & 1u)) {
        seen |= 1u << n;
        q.push(n);
      }
    }
  }
  return seen == bits;
}

bool flood_ok_2d(std::uint32_t bits) {
  // A single slice of the 3D window at z = 1.
  return flood_ok_3d(bits << 9);
}

Mask3D mask3(std::uint32_t bits) { return Mask3D{bits | (1u << Mask3D::kCenter)}; }

// Rotates a window by a quarter turn in the (a, b) plane.
Mask3D rotate(Mask3D m, int a, int b) {
  Mask3D out;
  for (int i = 0; i < 27; ++i) {
    if (!((m.bits >> i) & 1u)) continue;
    std::array<int, 3> p{i % 3 - 1, (i / 3) % 3 - 1, i / 9 - 1};
    const int pa = p[static_cast<std::size_t>(a)], pb = p[static_cast<std::size_t>(b)];
    p[static_cast<std::size_t>(a)] = -pb;
    p[static_cast<std::size_t>(b)] = pa;
    out.set(p[0], p[1], p[2]);
  }
  return out;
}

}  // namespace

TEST_CASE("oracle agrees with an independent flood fill") {
  for (std::uint32_t b = 0; b < 512; ++b) {
    const Mask2D m{static_cast<std::uint16_t>(b | (1u << Mask2D::kCenter))};
    REQUIRE(local_connectivity_oracle(m) == flood_ok_2d(m.bits));
  }
  std::mt19937 rng(1);
  for (int t = 0; t < 100000; ++t) {
    const Mask3D m = mask3(static_cast<std::uint32_t>(rng()) & ((1u << 27) - 1));
    REQUIRE(local_connectivity_oracle(m) == flood_ok_3d(m.bits));
  }
  CHECK(local_connectivity_oracle(Mask3D{(1u << 27) - 1}));
  CHECK_FALSE(local_connectivity_oracle(mask3(0)));
}

TEST_CASE("2D guard examples") {
  const Mask2D isolated{1u << Mask2D::kCenter};
  CHECK_FALSE(check_split_2d(isolated, Direction::PlusSagittal));

  Mask2D bridge = isolated;
  bridge.set(0, -1);
  bridge.set(0, 1);
  CHECK_FALSE(check_split_2d(bridge, Direction::PlusSagittal));
  CHECK_FALSE(check_split_2d(bridge, Direction::MinusSagittal));

  Mask2D column = isolated;
  for (int dy = -1; dy <= 1; ++dy) column.set(-1, dy);
  CHECK(check_split_2d(column, Direction::PlusSagittal));
}

TEST_CASE("2D guard is sound on every window") {
  for (std::uint32_t b = 0; b < 512; ++b) {
    if (!((b >> Mask2D::kCenter) & 1u)) continue;
    const Mask2D m{static_cast<std::uint16_t>(b)};
    for (Direction d : {Direction::MinusSagittal, Direction::PlusSagittal, Direction::MinusCoronal,
                        Direction::PlusCoronal})
      if (check_split_2d(m, d)) REQUIRE(local_connectivity_oracle(m));
  }
}

TEST_CASE("3D guard examples") {
  const Mask3D isolated = mask3(0);
  for (Direction d : kAllDirections) CHECK_FALSE(check_split_3d(isolated, d));

  Mask3D bridge = isolated;
  bridge.set(0, 0, -1);
  bridge.set(0, 0, 1);
  CHECK_FALSE(check_split_3d(bridge, Direction::PlusSagittal));

  Mask3D slab = isolated;
  for (int dy = -1; dy <= 1; ++dy)
    for (int dz = -1; dz <= 1; ++dz) slab.set(-1, dy, dz);
  CHECK(check_split_3d(slab, Direction::PlusSagittal));
}

TEST_CASE("3D guard is sound on sampled and sparse windows") {
  std::mt19937 rng(2);
  for (int t = 0; t < 200000; ++t) {
    const Mask3D m = mask3(static_cast<std::uint32_t>(rng()) & ((1u << 27) - 1));
    const Direction d = kAllDirections[static_cast<std::size_t>(t % 6)];
    if (check_split_3d(m, d)) REQUIRE(local_connectivity_oracle(m));
  }
  // All windows with at most three neighbors besides the center.
  for (int a = 0; a < 27; ++a)
    for (int b = a; b < 27; ++b)
      for (int c = b; c < 27; ++c) {
        const Mask3D m = mask3((1u << a) | (1u << b) | (1u << c));
        if (check_split_3d(m, Direction::MinusAxial)) REQUIRE(local_connectivity_oracle(m));
      }
}

TEST_CASE("3D guard is invariant under rotating window and direction together") {
  std::mt19937 rng(4);
  const std::array<std::array<int, 2>, 3> planes{{{0, 1}, {1, 2}, {2, 0}}};
  for (int t = 0; t < 20000; ++t) {
    const Mask3D m = mask3(static_cast<std::uint32_t>(rng()) & ((1u << 27) - 1));
    const auto& pl = planes[static_cast<std::size_t>(t % 3)];
    const Mask3D r = rotate(m, pl[0], pl[1]);
    // The rule does not depend on direction, so each direction maps to some other.
    for (Direction d : kAllDirections)
      REQUIRE(check_split_3d(m, d) == check_split_3d(r, kAllDirections[(static_cast<std::size_t>(d) + 2) % 6]));
  }
}

TEST_CASE("gather reads the owner's cells and treats the outside as empty") {
  const Dims dims(3, 3, 3);
  std::vector<std::int32_t> labels(27, 1);
  labels[dims.index(0, 0, 0)] = 0;
  labels[dims.index(1, 0, 0)] = 0;
  const Mask3D m = gather_mask_3d(labels, dims, 0, 0, 0, 0);
  CHECK(m.test(0, 0, 0));
  CHECK(m.test(1, 0, 0));
  CHECK(__builtin_popcount(m.bits) == 2);
  const Mask3D inner = gather_mask_3d(labels, dims, 1, 1, 1, 1);
  CHECK(__builtin_popcount(inner.bits) == 25);
  const Mask2D s = gather_mask_2d(labels, dims, 1, 1, 0, 0);
  CHECK(s.test(-1, -1));
  CHECK(s.test(0, -1));
  CHECK(__builtin_popcount(s.bits) == 2);
}
