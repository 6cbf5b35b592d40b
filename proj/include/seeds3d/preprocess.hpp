#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seeds3d/nifti.hpp"
#include "seeds3d/types.hpp"

namespace seeds3d {

/// Nearest-rank percentile: the ceil(p/100 * n)-th smallest value (rank at least 1).
float percentile_nearest_rank(std::span<const float> values, double p);

/// Clamp to the [lo, hi] nearest-rank percentiles.
Volume clip_percentiles(const Volume& volume, double lo = 0.5, double hi = 99.5);

/// Clamp to [level - width/2, level + width/2].
Volume window_ct(const Volume& volume, double width = 400.0, double level = 40.0);

/// (v - min) / (max - min). Throws DomainError on a constant volume.
Volume rescale_unit(const Volume& volume);

/// Resample to `target`: nearest neighbor along axis 2, then Catmull-Rom bicubic
/// (a = -0.5, edge-clamped, pixel-center aligned) in each slice. Results are clamped
/// to [0, 1] when the input was in [0, 1]. Throws DomainError for in-plane extents
/// below 2 or empty targets.
Volume resize(const Volume& volume, const Dims& target);

/// Voxel-to-world transform of a resized grid, keeping the physical field of view.
Affine resized_affine(const Affine& affine, const Dims& source, const Dims& target);

/// Axis codes ("RAS", "LPI", ...) of an affine: the world direction each voxel axis
/// increases toward.
std::string orientation_codes(const Affine& affine);

/// Index-only remapping: output axis i reads source axis `source_axis[i]`, flipped when `flip[i]`.
struct AxisTransform {
  std::array<int, 3> source_axis{0, 1, 2};
  std::array<bool, 3> flip{false, false, false};

  Dims apply(const Dims& d) const;
  template <typename T>
  std::vector<T> apply(const Dims& source, std::span<const T> values) const;
  Affine apply(const Affine& affine, const Dims& source) const;
  bool identity() const;
};

/// Transform taking an image with `affine` to orientation `target` (three letters,
/// one of R/L, A/P, S/I each). Throws DomainError for a malformed target.
AxisTransform orientation_transform(const Affine& affine, std::string_view target);

/// Reorient a NIfTI image. Throws DomainError when the image has neither qform nor
/// sform; pass an explicit AxisTransform through reorient_with in that case.
NiftiImage reorient(const NiftiImage& image, std::string_view target);
NiftiImage reorient_with(const NiftiImage& image, const AxisTransform& transform);
Volume reorient_with(const Volume& volume, const AxisTransform& transform);

template <typename T>
std::vector<T> AxisTransform::apply(const Dims& source, std::span<const T> values) const {
  const Dims out = apply(source);
  std::vector<T> result(out.size());
  std::array<std::size_t, 3> src{};
  for (std::size_t z = 0; z < out[2]; ++z)
    for (std::size_t y = 0; y < out[1]; ++y)
      for (std::size_t x = 0; x < out[0]; ++x) {
        const std::array<std::size_t, 3> o{x, y, z};
        for (std::size_t i = 0; i < 3; ++i) {
          const auto a = static_cast<std::size_t>(source_axis[i]);
          src[a] = flip[i] ? out[static_cast<int>(i)] - 1 - o[i] : o[i];
        }
        result[out.index(x, y, z)] = values[source.index(src[0], src[1], src[2])];
      }
  return result;
}

}  // namespace seeds3d
