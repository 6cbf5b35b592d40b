#include "seeds3d/seeds3d.h"

#include <algorithm>
#include <cstring>
#include <map>
#include <new>
#include <optional>
#include <string>
#include <utility>

#include "seeds3d/engine.hpp"
#include "seeds3d/error.hpp"
#include "seeds3d/metrics.hpp"
#include "seeds3d/nifti.hpp"
#include "seeds3d/preprocess.hpp"
#include "seeds3d/render.hpp"
#include "seeds3d/report.hpp"

using namespace seeds3d;

struct s3d_volume {
  Volume volume;
  std::optional<NiftiImage> header;  // geometry only; raw is kept empty
};

struct s3d_labels {
  Dims dims;
  std::vector<std::int32_t> ids;
  std::int32_t count = 0;
  std::optional<NiftiImage> header;
};

struct s3d_report {
  RunReport report;
  SeedsParams params;
  Dims dims;
};

namespace {

thread_local std::string g_last_error;

s3d_status fail(s3d_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

s3d_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return S3D_ERR_DOMAIN;
    case ErrorKind::Configuration: return S3D_ERR_CONFIGURATION;
    case ErrorKind::Format: return S3D_ERR_FORMAT;
    case ErrorKind::Io: return S3D_ERR_IO;
    case ErrorKind::Logic: return S3D_ERR_LOGIC;
  }
  return S3D_ERR_INTERNAL;
}

template <typename F>
s3d_status guarded(F&& body) noexcept {
  try {
    g_last_error.clear();
    body();
    return S3D_OK;
  } catch (const Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(S3D_ERR_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return fail(S3D_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(S3D_ERR_INTERNAL, "unknown failure");
  }
}

#define S3D_REQUIRE(ptr) \
  if (!(ptr)) return fail(S3D_ERR_ARGUMENT, std::string(__func__) + ": " #ptr " is null")

char* duplicate(const std::string& s) {
  auto* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Dims to_dims(const size_t d[3]) { return Dims(d[0], d[1], d[2]); }

void put_dims(const Dims& d, size_t out[3]) {
  for (int a = 0; a < 3; ++a) out[a] = d[a];
}

SeedsParams to_params(const s3d_params& p) {
  SeedsParams out;
  out.num_supervoxels = p.num_supervoxels;
  out.num_bins = p.num_bins;
  out.prior_weight = p.prior_weight;
  out.block_iterations = p.block_iterations;
  out.pixel_iterations = p.pixel_iterations;
  out.mode = p.planar ? Mode::TwoD : Mode::ThreeD;
  return out;
}

NiftiImage geometry_of(const NiftiImage& image) {
  NiftiImage g = image;
  g.raw.clear();
  g.raw.shrink_to_fit();
  return g;
}

LabelField field_of(const s3d_labels& l) { return LabelField(l.dims, l.ids, l.count); }

// Permutation moving `slice_axis` to axis 2, keeping the other two in order.
AxisTransform slice_last(int slice_axis) {
  AxisTransform t;
  int o = 0;
  for (int a = 0; a < 3; ++a)
    if (a != slice_axis) t.source_axis[static_cast<std::size_t>(o++)] = a;
  t.source_axis[2] = slice_axis;
  return t;
}

AxisTransform inverse(const AxisTransform& t) {
  AxisTransform inv;
  for (std::size_t i = 0; i < 3; ++i) inv.source_axis[static_cast<std::size_t>(t.source_axis[i])] = static_cast<int>(i);
  return inv;
}

}  // namespace

extern "C" {

const char* s3d_version(void) { return "1.0.0"; }

const char* s3d_last_error(void) { return g_last_error.c_str(); }

const char* s3d_status_name(s3d_status status) {
  switch (status) {
    case S3D_OK: return "ok";
    case S3D_ERR_ARGUMENT: return "argument error";
    case S3D_ERR_DOMAIN: return "domain error";
    case S3D_ERR_CONFIGURATION: return "configuration error";
    case S3D_ERR_FORMAT: return "format error";
    case S3D_ERR_IO: return "I/O error";
    case S3D_ERR_LOGIC: return "logic error";
    case S3D_ERR_MEMORY: return "out of memory";
    case S3D_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void s3d_string_free(char* s) { delete[] s; }

void s3d_params_default(s3d_params* params) {
  if (!params) return;
  const SeedsParams d;
  *params = s3d_params{d.num_supervoxels, d.num_bins, d.prior_weight, d.block_iterations, d.pixel_iterations, 0};
}

s3d_status s3d_volume_create(const size_t dims[3], const float* data, s3d_volume** out) {
  S3D_REQUIRE(dims);
  S3D_REQUIRE(data);
  S3D_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const Dims d = to_dims(dims);
    if (d.size() == 0) throw DomainError("volume dims must be positive");
    *out = new s3d_volume{Volume(d, std::vector<float>(data, data + d.size())), std::nullopt};
  });
}

s3d_status s3d_volume_read(const char* path, s3d_volume** out) {
  S3D_REQUIRE(path);
  S3D_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const NiftiImage img = read_nifti(path);
    *out = new s3d_volume{img.to_volume(), geometry_of(img)};
  });
}

s3d_status s3d_volume_write(const s3d_volume* volume, const char* path) {
  S3D_REQUIRE(volume);
  S3D_REQUIRE(path);
  return guarded([&] {
    write_nifti(volume_image(volume->volume, volume->header ? &*volume->header : nullptr), path);
  });
}

s3d_status s3d_volume_dims(const s3d_volume* volume, size_t dims[3]) {
  S3D_REQUIRE(volume);
  S3D_REQUIRE(dims);
  put_dims(volume->volume.dims, dims);
  return S3D_OK;
}

const float* s3d_volume_data(const s3d_volume* volume) { return volume ? volume->volume.data.data() : nullptr; }

void s3d_volume_free(s3d_volume* volume) { delete volume; }

s3d_status s3d_clip_percentiles(s3d_volume* volume, double lo, double hi) {
  S3D_REQUIRE(volume);
  return guarded([&] { volume->volume = clip_percentiles(volume->volume, lo, hi); });
}

s3d_status s3d_window_ct(s3d_volume* volume, double width, double level) {
  S3D_REQUIRE(volume);
  return guarded([&] { volume->volume = window_ct(volume->volume, width, level); });
}

s3d_status s3d_rescale_unit(s3d_volume* volume, int zero_if_constant, int* was_constant) {
  S3D_REQUIRE(volume);
  if (was_constant) *was_constant = 0;
  return guarded([&] {
    const auto [lo, hi] = std::minmax_element(volume->volume.data.begin(), volume->volume.data.end());
    if (zero_if_constant && lo != volume->volume.data.end() && *lo == *hi) {
      std::fill(volume->volume.data.begin(), volume->volume.data.end(), 0.0f);
      if (was_constant) *was_constant = 1;
      return;
    }
    volume->volume = rescale_unit(volume->volume);
  });
}

s3d_status s3d_resize(s3d_volume* volume, const size_t target[3], int slice_axis) {
  S3D_REQUIRE(volume);
  S3D_REQUIRE(target);
  if (slice_axis < 0 || slice_axis > 2)
    return fail(S3D_ERR_ARGUMENT, "slice axis " + std::to_string(slice_axis) + " outside [0, 2]");
  return guarded([&] {
    const Dims source = volume->volume.dims;
    const Dims want = to_dims(target);
    Volume out;
    if (slice_axis == 2) {
      out = resize(volume->volume, want);
    } else {
      const AxisTransform to = slice_last(slice_axis);
      const Volume moved = reorient_with(volume->volume, to);
      out = reorient_with(resize(moved, to.apply(want)), inverse(to));
    }
    if (volume->header) {
      NiftiImage& h = *volume->header;
      if (const auto a = h.affine()) h.set_affine(resized_affine(*a, source, want));
      else
        for (int ax = 0; ax < 3; ++ax)
          h.pixdim[static_cast<std::size_t>(ax)] *= static_cast<double>(source[ax]) / static_cast<double>(want[ax]);
      h.dims = want;
    }
    volume->volume = std::move(out);
  });
}

s3d_status s3d_reorient(s3d_volume* volume, const char* codes) {
  S3D_REQUIRE(volume);
  S3D_REQUIRE(codes);
  return guarded([&] {
    const std::optional<Affine> a = volume->header ? volume->header->affine() : std::nullopt;
    if (!a) throw DomainError("volume has no qform or sform orientation; reorient needs an explicit axis permutation");
    const AxisTransform t = orientation_transform(*a, codes);
    NiftiImage& h = *volume->header;
    h.set_affine(t.apply(*a, h.dims));
    h.dims = t.apply(h.dims);
    volume->volume = reorient_with(volume->volume, t);
  });
}

s3d_status s3d_segment(const s3d_volume* volume, const s3d_params* params, s3d_labels** labels,
                       s3d_report** report) {
  S3D_REQUIRE(volume);
  S3D_REQUIRE(params);
  S3D_REQUIRE(labels);
  *labels = nullptr;
  if (report) *report = nullptr;
  return guarded([&] {
    const SeedsParams p = to_params(*params);
    SegmentationResult r = run(volume->volume, p);
    auto* l = new s3d_labels{r.labels.dims, std::move(r.labels.labels), r.labels.count, volume->header};
    if (report) {
      try {
        *report = new s3d_report{std::move(r.report), p, volume->volume.dims};
      } catch (...) {
        delete l;
        throw;
      }
    }
    *labels = l;
  });
}

s3d_status s3d_report_json(const s3d_report* report, char** json) {
  S3D_REQUIRE(report);
  S3D_REQUIRE(json);
  *json = nullptr;
  return guarded([&] { *json = duplicate(run_report_json(report->report, report->params, report->dims)); });
}

double s3d_report_total_seconds(const s3d_report* report) { return report ? report->report.total_seconds : 0.0; }

void s3d_report_free(s3d_report* report) { delete report; }

s3d_status s3d_labels_read(const char* path, int compact, s3d_labels** out) {
  S3D_REQUIRE(path);
  S3D_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const NiftiImage img = read_nifti(path);
    std::vector<std::int32_t> ids = integer_values(img);
    if (compact) {
      LabelField f = compact_labels(img.dims, ids);
      *out = new s3d_labels{f.dims, std::move(f.labels), f.count, geometry_of(img)};
      return;
    }
    const std::int32_t top = ids.empty() ? -1 : *std::max_element(ids.begin(), ids.end());
    *out = new s3d_labels{img.dims, std::move(ids), top + 1, geometry_of(img)};
  });
}

s3d_status s3d_labels_write(const s3d_labels* labels, const s3d_volume* reference, const char* path) {
  S3D_REQUIRE(labels);
  S3D_REQUIRE(path);
  return guarded([&] {
    const NiftiImage* ref = reference && reference->header ? &*reference->header
                            : labels->header                ? &*labels->header
                                                            : nullptr;
    write_nifti(label_image(field_of(*labels), ref), path);
  });
}

s3d_status s3d_labels_dims(const s3d_labels* labels, size_t dims[3]) {
  S3D_REQUIRE(labels);
  S3D_REQUIRE(dims);
  put_dims(labels->dims, dims);
  return S3D_OK;
}

const int32_t* s3d_labels_data(const s3d_labels* labels) { return labels ? labels->ids.data() : nullptr; }

int32_t s3d_labels_count(const s3d_labels* labels) { return labels ? labels->count : 0; }

void s3d_labels_free(s3d_labels* labels) { delete labels; }

s3d_status s3d_evaluate(const s3d_labels* labels, const s3d_labels* truth, const int32_t* class_ids,
                        const char* const* class_names, size_t n_classes, char** json, char** csv) {
  S3D_REQUIRE(labels);
  S3D_REQUIRE(truth);
  if (n_classes > 0 && !class_ids) return fail(S3D_ERR_ARGUMENT, "s3d_evaluate: class_ids is null");
  if (json) *json = nullptr;
  if (csv) *csv = nullptr;
  return guarded([&] {
    if (!(labels->dims == truth->dims)) {
      auto shape = [](const Dims& d) {
        return std::to_string(d[0]) + "x" + std::to_string(d[1]) + "x" + std::to_string(d[2]);
      };
      throw DomainError("label map is " + shape(labels->dims) + " but ground truth is " + shape(truth->dims));
    }
    std::map<int, std::string> names;
    std::int32_t num_classes = 0;
    for (auto c : truth->ids) num_classes = std::max(num_classes, c + 1);
    for (size_t i = 0; i < n_classes; ++i) {
      if (class_ids[i] < 1) throw DomainError("class id " + std::to_string(class_ids[i]) + " is not a foreground class");
      num_classes = std::max(num_classes, class_ids[i] + 1);
      names[class_ids[i]] = class_names && class_names[i] ? class_names[i] : "class_" + std::to_string(class_ids[i]);
    }
    const LabelField f = compact_labels(labels->dims, labels->ids);
    const MetricsReport m = evaluate(f, GroundTruth(truth->dims, truth->ids, num_classes));
    std::string j = metrics_json(m, names);
    std::string c = metrics_csv(m, names);
    if (json) *json = duplicate(j);
    if (csv) {
      try {
        *csv = duplicate(c);
      } catch (...) {
        if (json) s3d_string_free(*json), *json = nullptr;
        throw;
      }
    }
  });
}

s3d_status s3d_slice_count(const s3d_volume* volume, s3d_view view, size_t* count) {
  S3D_REQUIRE(volume);
  S3D_REQUIRE(count);
  if (view < S3D_VIEW_AXIAL || view > S3D_VIEW_SAGITTAL) return fail(S3D_ERR_ARGUMENT, "unknown view");
  *count = slice_count(volume->volume.dims, static_cast<View>(view));
  return S3D_OK;
}

s3d_status s3d_render_slice(const s3d_volume* volume, const s3d_labels* labels, const s3d_labels* truth,
                            s3d_view view, size_t index, const char* path) {
  S3D_REQUIRE(volume);
  S3D_REQUIRE(labels);
  S3D_REQUIRE(path);
  if (view < S3D_VIEW_AXIAL || view > S3D_VIEW_SAGITTAL) return fail(S3D_ERR_ARGUMENT, "unknown view");
  return guarded([&] {
    const LabelField f = compact_labels(labels->dims, labels->ids);
    std::optional<GroundTruth> gt;
    if (truth) gt.emplace(truth->dims, truth->ids);
    write_ppm(render_slice(volume->volume, f, gt ? &*gt : nullptr, static_cast<View>(view), index), path);
  });
}

}  // extern "C"
