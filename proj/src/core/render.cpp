#include "seeds3d/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <span>
#include <string>

#include "seeds3d/error.hpp"

namespace seeds3d {
namespace {

// Image column/row axes and the slice normal for a view.
std::array<int, 3> view_axes(View view) {
  switch (view) {
    case View::Axial: return {0, 1, 2};
    case View::Coronal: return {0, 2, 1};
    case View::Sagittal: return {1, 2, 0};
  }
  return {0, 1, 2};
}

const char* view_name(View view) {
  switch (view) {
    case View::Axial: return "axial";
    case View::Coronal: return "coronal";
    case View::Sagittal: return "sagittal";
  }
  return "?";
}

template <typename Get>
bool on_boundary(const Get& id, std::size_t c, std::size_t r, std::size_t w, std::size_t h) {
  const auto here = id(c, r);
  return (c > 0 && id(c - 1, r) != here) || (c + 1 < w && id(c + 1, r) != here) ||
         (r > 0 && id(c, r - 1) != here) || (r + 1 < h && id(c, r + 1) != here);
}

}  // namespace

std::size_t slice_count(const Dims& dims, View view) { return dims[view_axes(view)[2]]; }

RgbImage render_slice(const Volume& volume, const LabelField& labels, const GroundTruth* gt, View view,
                      std::size_t index) {
  if (!(volume.dims == labels.dims)) throw DomainError("render: volume and label map differ in shape");
  if (gt && !(gt->dims == labels.dims)) throw DomainError("render: ground truth differs in shape");
  const Dims dims = labels.dims;
  const auto axes = view_axes(view);
  const std::size_t n = dims[axes[2]];
  if (index >= n)
    throw DomainError(std::string(view_name(view)) + " slice " + std::to_string(index) +
                      " out of range; valid range is [0, " + std::to_string(n == 0 ? 0 : n - 1) + "]");

  RgbImage img;
  img.width = dims[axes[0]];
  img.height = dims[axes[1]];
  img.pixels.resize(img.width * img.height);

  auto voxel = [&](std::size_t c, std::size_t r) {
    std::array<std::size_t, 3> p{};
    p[static_cast<std::size_t>(axes[0])] = c;
    p[static_cast<std::size_t>(axes[1])] = r;
    p[static_cast<std::size_t>(axes[2])] = index;
    return dims.index(p[0], p[1], p[2]);
  };
  auto label = [&](std::size_t c, std::size_t r) { return labels.labels[voxel(c, r)]; };
  auto klass = [&](std::size_t c, std::size_t r) { return gt->classes[voxel(c, r)]; };

  for (std::size_t r = 0; r < img.height; ++r)
    for (std::size_t c = 0; c < img.width; ++c) {
      const float v = std::clamp(volume.data[voxel(c, r)], 0.0f, 1.0f);
      const auto g = static_cast<std::uint8_t>(std::lround(v * 255.0f));
      img.at(c, r) = {g, g, g};
      if (on_boundary(label, c, r, img.width, img.height)) img.at(c, r) = kBoundaryColor;
      if (gt && on_boundary(klass, c, r, img.width, img.height)) img.at(c, r) = kContourColor;
    }
  return img;
}

void write_ppm(const RgbImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
  for (const auto& px : image.pixels) out.write(reinterpret_cast<const char*>(px.data()), 3);
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace seeds3d
