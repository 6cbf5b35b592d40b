#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "seeds3d/types.hpp"

namespace seeds3d {

enum class View : std::uint8_t { Axial, Coronal, Sagittal };

struct RgbImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::array<std::uint8_t, 3>> pixels;  // row-major

  std::array<std::uint8_t, 3>& at(std::size_t col, std::size_t row) { return pixels[row * width + col]; }
  const std::array<std::uint8_t, 3>& at(std::size_t col, std::size_t row) const {
    return pixels[row * width + col];
  }
};

inline constexpr std::array<std::uint8_t, 3> kBoundaryColor{255, 40, 40};
inline constexpr std::array<std::uint8_t, 3> kContourColor{40, 255, 40};

/// Number of slices along a view's normal axis.
std::size_t slice_count(const Dims& dims, View view);

/// Grayscale slice with supervoxel boundaries in red and, when given, ground-truth
/// class contours in green. A pixel is on a boundary when one of its four in-slice
/// neighbors carries a different id. Axial slices span (sagittal, coronal), coronal
/// slices (sagittal, axial), sagittal slices (coronal, axial). Throws DomainError
/// for an out-of-range slice index, naming the valid range.
RgbImage render_slice(const Volume& volume, const LabelField& labels, const GroundTruth* gt, View view,
                      std::size_t index);

/// Binary portable pixmap (P6).
void write_ppm(const RgbImage& image, const std::filesystem::path& path);

}  // namespace seeds3d
