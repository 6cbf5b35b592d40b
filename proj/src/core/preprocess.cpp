#include "seeds3d/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "seeds3d/error.hpp"

namespace seeds3d {
namespace {

constexpr double kCubicA = -0.5;

double cubic_weight(double d) {
  d = std::abs(d);
  if (d <= 1.0) return ((kCubicA + 2.0) * d - (kCubicA + 3.0)) * d * d + 1.0;
  if (d < 2.0) return ((kCubicA * d - 5.0 * kCubicA) * d + 8.0 * kCubicA) * d - 4.0 * kCubicA;
  return 0.0;
}

struct Taps {
  std::array<std::size_t, 4> index;
  std::array<double, 4> weight;
};

// Pixel-center aligned 4-tap kernels for resampling n_src samples to n_dst.
std::vector<Taps> cubic_taps(std::size_t n_src, std::size_t n_dst) {
  std::vector<Taps> taps(n_dst);
  const double scale = static_cast<double>(n_src) / static_cast<double>(n_dst);
  const auto last = static_cast<std::ptrdiff_t>(n_src) - 1;
  for (std::size_t o = 0; o < n_dst; ++o) {
    const double u = (static_cast<double>(o) + 0.5) * scale - 0.5;
    const double base = std::floor(u);
    const double t = u - base;
    for (int k = 0; k < 4; ++k) {
      const auto i = static_cast<std::ptrdiff_t>(base) + k - 1;
      taps[o].index[static_cast<std::size_t>(k)] = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, last));
      taps[o].weight[static_cast<std::size_t>(k)] = cubic_weight(t - (k - 1));
    }
  }
  return taps;
}

char axis_letter(int world_axis, bool positive) {
  static constexpr char pos[3] = {'R', 'A', 'S'};
  static constexpr char neg[3] = {'L', 'P', 'I'};
  return positive ? pos[world_axis] : neg[world_axis];
}

int world_axis_of(char c) {
  switch (c) {
    case 'R': case 'L': return 0;
    case 'A': case 'P': return 1;
    case 'S': case 'I': return 2;
    default: return -1;
  }
}

}  // namespace

float percentile_nearest_rank(std::span<const float> values, double p) {
  if (values.empty()) throw DomainError("percentile of an empty volume");
  if (!(p >= 0.0 && p <= 100.0)) throw DomainError("percentile " + std::to_string(p) + " outside [0, 100]");
  const std::size_t n = values.size();
  auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n) / 100.0));
  rank = std::clamp<std::size_t>(rank, 1, n);
  std::vector<float> tmp(values.begin(), values.end());
  std::nth_element(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(rank - 1), tmp.end());
  return tmp[rank - 1];
}

Volume clip_percentiles(const Volume& volume, double lo, double hi) {
  if (volume.data.empty()) throw DomainError("clip_percentiles: empty volume");
  if (lo > hi) throw DomainError("clip_percentiles: lower percentile above upper");
  const float a = percentile_nearest_rank(volume.data, lo);
  const float b = percentile_nearest_rank(volume.data, hi);
  Volume out = volume;
  for (float& v : out.data) v = std::clamp(v, a, b);
  return out;
}

Volume window_ct(const Volume& volume, double width, double level) {
  if (!(width > 0.0)) throw DomainError("window width must be positive");
  const auto a = static_cast<float>(level - width / 2.0);
  const auto b = static_cast<float>(level + width / 2.0);
  Volume out = volume;
  for (float& v : out.data) v = std::clamp(v, a, b);
  return out;
}

Volume rescale_unit(const Volume& volume) {
  if (volume.data.empty()) throw DomainError("rescale_unit: empty volume");
  const auto [lo, hi] = std::minmax_element(volume.data.begin(), volume.data.end());
  const double mn = *lo, mx = *hi;
  if (!(mx > mn)) throw DomainError("rescale_unit: constant volume cannot be rescaled");
  Volume out = volume;
  const double span = mx - mn;
  for (float& v : out.data)
    v = static_cast<float>(std::clamp((static_cast<double>(v) - mn) / span, 0.0, 1.0));
  return out;
}

Volume resize(const Volume& volume, const Dims& target) {
  const Dims src = volume.dims;
  if (target.size() == 0) throw DomainError("resize: empty target");
  if (src == target) return volume;
  for (int a = 0; a < 2; ++a)
    if (src[a] < 2 && src[a] != target[a])
      throw DomainError("resize: in-plane axis " + std::to_string(a) + " has extent " +
                        std::to_string(src[a]) + "; bicubic needs at least 2");
  if (src.size() == 0) throw DomainError("resize: empty source");

  const bool unit = volume.in_unit_range();
  const auto tx = cubic_taps(src[0], target[0]);
  const auto ty = cubic_taps(src[1], target[1]);

  Volume out(target);
  if (volume.spacing) {
    auto sp = *volume.spacing;
    for (std::size_t a = 0; a < 3; ++a)
      sp[a] *= static_cast<double>(src[static_cast<int>(a)]) / static_cast<double>(target[static_cast<int>(a)]);
    out.spacing = sp;
  }

  std::vector<double> rows(target[0] * src[1]);
  for (std::size_t oz = 0; oz < target[2]; ++oz) {
    const auto sz = std::min<std::size_t>(
        static_cast<std::size_t>(std::floor((static_cast<double>(oz) + 0.5) * static_cast<double>(src[2]) /
                                            static_cast<double>(target[2]))),
        src[2] - 1);
    const float* slice = volume.data.data() + src.index(0, 0, sz);
    for (std::size_t y = 0; y < src[1]; ++y)
      for (std::size_t ox = 0; ox < target[0]; ++ox) {
        const Taps& t = tx[ox];
        double acc = 0.0;
        for (std::size_t k = 0; k < 4; ++k) acc += t.weight[k] * slice[y * src[0] + t.index[k]];
        rows[y * target[0] + ox] = acc;
      }
    for (std::size_t oy = 0; oy < target[1]; ++oy) {
      const Taps& t = ty[oy];
      for (std::size_t ox = 0; ox < target[0]; ++ox) {
        double acc = 0.0;
        for (std::size_t k = 0; k < 4; ++k) acc += t.weight[k] * rows[t.index[k] * target[0] + ox];
        if (unit) acc = std::clamp(acc, 0.0, 1.0);
        out.data[target.index(ox, oy, oz)] = static_cast<float>(acc);
      }
    }
  }
  return out;
}

Affine resized_affine(const Affine& affine, const Dims& source, const Dims& target) {
  Affine out = affine;
  for (std::size_t j = 0; j < 3; ++j) {
    const double s = static_cast<double>(source[static_cast<int>(j)]) / static_cast<double>(target[static_cast<int>(j)]);
    const double shift = 0.5 * s - 0.5;  // new voxel 0 center in old voxel units
    for (std::size_t i = 0; i < 3; ++i) {
      out[i][3] += affine[i][j] * shift;
      out[i][j] = affine[i][j] * s;
    }
  }
  return out;
}

std::string orientation_codes(const Affine& affine) {
  std::string codes(3, '?');
  for (std::size_t j = 0; j < 3; ++j) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < 3; ++i)
      if (std::abs(affine[i][j]) > std::abs(affine[best][j])) best = i;
    if (affine[best][j] == 0.0) throw DomainError("degenerate affine: voxel axis " + std::to_string(j) + " is zero");
    codes[j] = axis_letter(static_cast<int>(best), affine[best][j] > 0.0);
  }
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = a + 1; b < 3; ++b)
      if (world_axis_of(codes[a]) == world_axis_of(codes[b]))
        throw DomainError("affine maps two voxel axes onto the same world axis (" + codes + ")");
  return codes;
}

Dims AxisTransform::apply(const Dims& d) const {
  return Dims(d[source_axis[0]], d[source_axis[1]], d[source_axis[2]]);
}

Affine AxisTransform::apply(const Affine& affine, const Dims& source) const {
  Affine out{};
  for (std::size_t r = 0; r < 3; ++r) out[r][3] = affine[r][3];
  for (std::size_t i = 0; i < 3; ++i) {
    const auto a = static_cast<std::size_t>(source_axis[i]);
    const double sign = flip[i] ? -1.0 : 1.0;
    for (std::size_t r = 0; r < 3; ++r) {
      out[r][i] = sign * affine[r][a];
      if (flip[i]) out[r][3] += affine[r][a] * static_cast<double>(source[static_cast<int>(a)] - 1);
    }
  }
  return out;
}

bool AxisTransform::identity() const {
  return source_axis == std::array<int, 3>{0, 1, 2} && flip == std::array<bool, 3>{false, false, false};
}

AxisTransform orientation_transform(const Affine& affine, std::string_view target) {
  if (target.size() != 3) throw DomainError("orientation target must have three letters");
  std::array<int, 3> world{};
  for (std::size_t i = 0; i < 3; ++i) {
    world[i] = world_axis_of(target[i]);
    if (world[i] < 0) throw DomainError(std::string("bad orientation letter '") + target[i] + "'");
  }
  if (world[0] == world[1] || world[0] == world[2] || world[1] == world[2])
    throw DomainError("orientation target repeats an anatomical axis: " + std::string(target));

  const std::string current = orientation_codes(affine);
  AxisTransform t;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (world_axis_of(current[j]) == world[i]) {
        t.source_axis[i] = static_cast<int>(j);
        t.flip[i] = current[j] != target[i];
      }
  return t;
}

NiftiImage reorient_with(const NiftiImage& image, const AxisTransform& transform) {
  if (image.raw.size() != image.dims.size())
    throw LogicError("reorient: image holds " + std::to_string(image.raw.size()) + " values for " +
                     std::to_string(image.dims.size()) + " voxels");
  NiftiImage out = image;
  out.dims = transform.apply(image.dims);
  out.raw = transform.apply<double>(image.dims, image.raw);
  if (auto a = image.affine()) out.set_affine(transform.apply(*a, image.dims));
  else
    for (std::size_t i = 0; i < 3; ++i) out.pixdim[i] = image.pixdim[static_cast<std::size_t>(transform.source_axis[i])];
  return out;
}

Volume reorient_with(const Volume& volume, const AxisTransform& transform) {
  Volume out(transform.apply(volume.dims), transform.apply<float>(volume.dims, volume.data));
  if (volume.spacing) {
    std::array<double, 3> sp{};
    for (std::size_t i = 0; i < 3; ++i) sp[i] = (*volume.spacing)[static_cast<std::size_t>(transform.source_axis[i])];
    out.spacing = sp;
  }
  return out;
}

NiftiImage reorient(const NiftiImage& image, std::string_view target) {
  const auto a = image.affine();
  if (!a)
    throw DomainError("image has no qform or sform orientation; pass an explicit axis permutation instead");
  return reorient_with(image, orientation_transform(*a, target));
}

}  // namespace seeds3d
