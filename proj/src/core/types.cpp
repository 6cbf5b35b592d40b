#include "seeds3d/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seeds3d/error.hpp"

namespace seeds3d {

Volume::Volume(Dims d, std::vector<float> values, std::optional<std::array<double, 3>> sp)
    : dims(d), data(std::move(values)), spacing(sp) {
  if (data.size() != dims.size())
    throw DomainError("volume data length " + std::to_string(data.size()) +
                      " does not match dims product " + std::to_string(dims.size()));
}

Volume::Volume(Dims d, float fill) : dims(d), data(d.size(), fill) {}

bool Volume::in_unit_range() const {
  return std::all_of(data.begin(), data.end(), [](float v) { return v >= 0.0f && v <= 1.0f; });
}

void Volume::require_unit_range() const {
  for (std::size_t i = 0; i < data.size(); ++i) {
    const float v = data[i];
    if (!(v >= 0.0f && v <= 1.0f)) {
      const auto c = dims.coord(i);
      throw DomainError("intensity " + std::to_string(v) + " at voxel (" + std::to_string(c[0]) +
                        "," + std::to_string(c[1]) + "," + std::to_string(c[2]) +
                        ") outside [0, 1]; preprocess the volume first");
    }
  }
}

LabelField::LabelField(Dims d, std::vector<std::int32_t> values, std::int32_t k)
    : dims(d), labels(std::move(values)), count(k) {
  if (labels.size() != dims.size())
    throw DomainError("label data length does not match dims product");
  for (auto l : labels)
    if (l < 0 || l >= count)
      throw DomainError("label " + std::to_string(l) + " outside [0, " + std::to_string(count) + ")");
}

std::vector<std::int64_t> LabelField::sizes() const {
  std::vector<std::int64_t> out(static_cast<std::size_t>(count), 0);
  for (auto l : labels) ++out[static_cast<std::size_t>(l)];
  return out;
}

GroundTruth::GroundTruth(Dims d, std::vector<std::int32_t> values)
    : dims(d), classes(std::move(values)) {
  if (classes.size() != dims.size())
    throw DomainError("ground-truth data length does not match dims product");
  std::int32_t top = -1;
  for (auto c : classes) {
    if (c < 0) throw DomainError("negative ground-truth class " + std::to_string(c));
    top = std::max(top, c);
  }
  class_count = top + 1;
}

GroundTruth::GroundTruth(Dims d, std::vector<std::int32_t> values, std::int32_t num_classes)
    : GroundTruth(d, std::move(values)) {
  if (num_classes < class_count)
    throw DomainError("class count " + std::to_string(num_classes) + " below largest class present");
  class_count = num_classes;
}

void SeedsParams::validate() const {
  if (num_supervoxels < 1) throw ConfigurationError("num_supervoxels must be >= 1");
  if (num_bins < 1) throw ConfigurationError("num_bins must be >= 1");
  if (prior_weight < 0) throw ConfigurationError("prior_weight must be >= 0");
  if (block_iterations < 0) throw ConfigurationError("block_iterations must be >= 0");
  if (pixel_iterations < 0) throw ConfigurationError("pixel_iterations must be >= 0");
}

std::size_t assign_bin(double intensity, std::int32_t num_bins) {
  if (num_bins < 1) throw DomainError("num_bins must be >= 1");
  if (!(intensity >= 0.0 && intensity <= 1.0))
    throw DomainError("intensity " + std::to_string(intensity) + " outside [0, 1]");
  const auto bin = static_cast<std::size_t>(std::floor(intensity * num_bins));
  return std::min(bin, static_cast<std::size_t>(num_bins - 1));
}

Histogram histogram_of(std::span<const float> values, std::int32_t num_bins) {
  if (num_bins < 1) throw DomainError("num_bins must be >= 1");
  Histogram h(static_cast<std::size_t>(num_bins));
  for (float v : values) h.add(assign_bin(v, num_bins));
  return h;
}

}  // namespace seeds3d
