#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace seeds3d {

/// Voxel extents. Axis 0 is sagittal, axis 1 coronal, axis 2 axial; axis 0 varies fastest in memory.
struct Dims {
  std::array<std::size_t, 3> extent{0, 0, 0};

  constexpr Dims() = default;
  constexpr Dims(std::size_t sx, std::size_t sy, std::size_t sz) : extent{sx, sy, sz} {}

  constexpr std::size_t operator[](int axis) const { return extent[static_cast<std::size_t>(axis)]; }
  constexpr std::size_t size() const { return extent[0] * extent[1] * extent[2]; }
  constexpr std::size_t index(std::size_t x, std::size_t y, std::size_t z) const {
    return x + extent[0] * (y + extent[1] * z);
  }
  constexpr std::array<std::size_t, 3> coord(std::size_t i) const {
    return {i % extent[0], (i / extent[0]) % extent[1], i / (extent[0] * extent[1])};
  }
  friend constexpr bool operator==(const Dims&, const Dims&) = default;
};

enum class Mode : std::uint8_t { TwoD, ThreeD };

/// Transfer directions, in the order the engine scans them.
enum class Direction : std::uint8_t {
  MinusSagittal,
  PlusSagittal,
  MinusCoronal,
  PlusCoronal,
  MinusAxial,
  PlusAxial,
};

inline constexpr std::array<Direction, 6> kAllDirections{
    Direction::MinusSagittal, Direction::PlusSagittal, Direction::MinusCoronal,
    Direction::PlusCoronal,   Direction::MinusAxial,   Direction::PlusAxial};

constexpr int axis_of(Direction d) { return static_cast<int>(d) / 2; }
constexpr int sign_of(Direction d) { return (static_cast<int>(d) % 2) ? 1 : -1; }
constexpr Direction opposite(Direction d) {
  return static_cast<Direction>(static_cast<int>(d) ^ 1);
}

/// Dense single-channel scalar volume.
struct Volume {
  Dims dims;
  std::vector<float> data;
  std::optional<std::array<double, 3>> spacing;

  Volume() = default;
  Volume(Dims d, std::vector<float> values, std::optional<std::array<double, 3>> sp = std::nullopt);
  explicit Volume(Dims d, float fill = 0.0f);

  float at(std::size_t x, std::size_t y, std::size_t z) const { return data[dims.index(x, y, z)]; }
  float& at(std::size_t x, std::size_t y, std::size_t z) { return data[dims.index(x, y, z)]; }

  bool in_unit_range() const;
  /// Throws DomainError naming the first offending voxel if any value lies outside [0, 1].
  void require_unit_range() const;
};

/// Per-voxel supervoxel labels in [0, count).
struct LabelField {
  Dims dims;
  std::vector<std::int32_t> labels;
  std::int32_t count = 0;

  LabelField() = default;
  LabelField(Dims d, std::vector<std::int32_t> values, std::int32_t k);

  std::int32_t at(std::size_t x, std::size_t y, std::size_t z) const {
    return labels[dims.index(x, y, z)];
  }
  /// Voxel count per label.
  std::vector<std::int64_t> sizes() const;
};

/// Ground-truth class map; class 0 is background.
struct GroundTruth {
  Dims dims;
  std::vector<std::int32_t> classes;
  std::int32_t class_count = 0;

  GroundTruth() = default;
  GroundTruth(Dims d, std::vector<std::int32_t> values);
  GroundTruth(Dims d, std::vector<std::int32_t> values, std::int32_t num_classes);
};

/// Intensity histogram with integer counts.
struct Histogram {
  std::vector<std::int64_t> bins;
  std::int64_t total = 0;

  Histogram() = default;
  explicit Histogram(std::size_t num_bins) : bins(num_bins, 0) {}

  void add(std::size_t bin, std::int64_t n = 1) {
    bins[bin] += n;
    total += n;
  }
  friend bool operator==(const Histogram&, const Histogram&) = default;
};

struct SeedsParams {
  std::int32_t num_supervoxels = 1000;
  std::int32_t num_bins = 15;
  std::int32_t prior_weight = 2;
  std::int32_t block_iterations = 2;
  std::int32_t pixel_iterations = 4;
  Mode mode = Mode::ThreeD;

  /// Throws ConfigurationError on out-of-range fields.
  void validate() const;
};

/// floor(intensity * num_bins) with 1.0 clamped into the top bin.
std::size_t assign_bin(double intensity, std::int32_t num_bins);

Histogram histogram_of(std::span<const float> values, std::int32_t num_bins);

}  // namespace seeds3d
