// seeds3d command-line tool: segment, eval, bench, render.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "seeds3d/seeds3d.h"

namespace {

// Exit codes, one per failure class.
enum Exit : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kIo = 3,
  kFormat = 4,
  kConfiguration = 5,
  kDomain = 6,
};

struct Failure {
  s3d_status status;
  std::string message;
};

int exit_code(s3d_status s) {
  switch (s) {
    case S3D_ERR_IO: return kIo;
    case S3D_ERR_FORMAT: return kFormat;
    case S3D_ERR_CONFIGURATION: return kConfiguration;
    case S3D_ERR_DOMAIN: return kDomain;
    case S3D_ERR_ARGUMENT: return kUsage;
    default: return kFailure;
  }
}

void check(s3d_status s, const std::string& context) {
  if (s != S3D_OK) throw Failure{s, context + ": " + s3d_last_error()};
}

struct VolumeFree {
  void operator()(s3d_volume* v) const { s3d_volume_free(v); }
};
struct LabelsFree {
  void operator()(s3d_labels* l) const { s3d_labels_free(l); }
};
struct ReportFree {
  void operator()(s3d_report* r) const { s3d_report_free(r); }
};
struct StringFree {
  void operator()(char* s) const { s3d_string_free(s); }
};
using VolumePtr = std::unique_ptr<s3d_volume, VolumeFree>;
using LabelsPtr = std::unique_ptr<s3d_labels, LabelsFree>;
using ReportPtr = std::unique_ptr<s3d_report, ReportFree>;
using StringPtr = std::unique_ptr<char, StringFree>;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Preprocess {
  std::string kind = "none";
  std::vector<std::size_t> target;
  int slice_axis = 2;
  std::string orient;
  double clip_lo = 0.5;
  double clip_hi = 99.5;
  double window_width = 400.0;
  double window_level = 40.0;
};

void add_preprocess_options(CLI::App* cmd, Preprocess& p) {
  cmd->add_option("--preprocess", p.kind, "Intensity preprocessing: mri (percentile clip), ct (window) or none")
      ->check(CLI::IsMember({"mri", "ct", "none"}))
      ->capture_default_str();
  cmd->add_option("--target-dims", p.target, "Resize to this grid, e.g. 160 160 160")->expected(3);
  cmd->add_option("--slice-axis", p.slice_axis, "Axis resampled by nearest neighbor when resizing")
      ->check(CLI::Range(0, 2))
      ->capture_default_str();
  cmd->add_option("--orient", p.orient, "Reorient to three axis codes after resizing, e.g. RPI");
  cmd->add_option("--clip-lo", p.clip_lo, "Lower percentile for mri clipping")->capture_default_str();
  cmd->add_option("--clip-hi", p.clip_hi, "Upper percentile for mri clipping")->capture_default_str();
  cmd->add_option("--window-width", p.window_width, "CT window width")->capture_default_str();
  cmd->add_option("--window-level", p.window_level, "CT window level")->capture_default_str();
}

// clip/window, rescale, resize, reorient.
void preprocess(s3d_volume* v, const Preprocess& p) {
  if (p.kind == "mri") check(s3d_clip_percentiles(v, p.clip_lo, p.clip_hi), "clip");
  if (p.kind == "ct") check(s3d_window_ct(v, p.window_width, p.window_level), "window");
  if (p.kind != "none") {
    int constant = 0;
    check(s3d_rescale_unit(v, 1, &constant), "rescale");
    if (constant) std::cerr << "seeds3d: warning: constant volume rescaled to all zeros\n";
  }
  if (!p.target.empty()) {
    const std::size_t t[3] = {p.target[0], p.target[1], p.target[2]};
    check(s3d_resize(v, t, p.slice_axis), "resize");
  }
  if (!p.orient.empty()) check(s3d_reorient(v, p.orient.c_str()), "reorient");
}

VolumePtr read_volume(const std::string& path) {
  s3d_volume* v = nullptr;
  check(s3d_volume_read(path.c_str(), &v), path);
  return VolumePtr(v);
}

LabelsPtr read_labels(const std::string& path, bool compact) {
  s3d_labels* l = nullptr;
  check(s3d_labels_read(path.c_str(), compact ? 1 : 0, &l), path);
  return LabelsPtr(l);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{S3D_ERR_IO, "cannot write " + path};
  out << text;
  if (!out) throw Failure{S3D_ERR_IO, "failed writing " + path};
}

std::string default_report_path(const std::string& output) {
  std::string base = output;
  for (const std::string ext : {".nii.gz", ".nii"})
    if (base.size() > ext.size() && base.compare(base.size() - ext.size(), ext.size(), ext) == 0) {
      base.resize(base.size() - ext.size());
      break;
    }
  return base + ".report.json";
}

struct SegmentConfig {
  std::string input;
  std::string output;
  std::string report;
  s3d_params params{};
  int extra_pixel_iters = 0;
  std::string mode = "3d";
  Preprocess prep;
};

void add_seeds_options(CLI::App* cmd, s3d_params& p, int& extra, std::string& mode) {
  cmd->add_option("-k,--supervoxels", p.num_supervoxels, "Requested number of supervoxels")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--bins", p.num_bins, "Intensity histogram bins")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--prior-weight", p.prior_weight, "Exponent on the boundary term")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--block-iters", p.block_iterations, "Block-level passes")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--pixel-iters", p.pixel_iterations, "Pixel-level passes")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--extra-pixel-iters", extra, "Pixel-level passes added to --pixel-iters (8 or 16 in the benchmarks)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--mode", mode, "3d, or 2d for single-slice inputs")
      ->check(CLI::IsMember({"2d", "3d"}))
      ->capture_default_str();
}

s3d_params effective(s3d_params p, int extra, const std::string& mode) {
  p.pixel_iterations += extra;
  p.planar = mode == "2d" ? 1 : 0;
  return p;
}

int cmd_segment(const SegmentConfig& c) {
  VolumePtr v = read_volume(c.input);
  preprocess(v.get(), c.prep);
  const s3d_params p = effective(c.params, c.extra_pixel_iters, c.mode);
  s3d_labels* l = nullptr;
  s3d_report* r = nullptr;
  check(s3d_segment(v.get(), &p, &l, &r), "segment");
  LabelsPtr labels(l);
  ReportPtr report(r);
  char* js = nullptr;
  check(s3d_report_json(report.get(), &js), "report");
  StringPtr json(js);
  check(s3d_labels_write(labels.get(), v.get(), c.output.c_str()), c.output);
  write_text(c.report.empty() ? default_report_path(c.output) : c.report, std::string(json.get()) + "\n");
  std::cerr << "seeds3d: " << s3d_labels_count(labels.get()) << " supervoxels in "
            << s3d_report_total_seconds(report.get()) << " s\n";
  return kOk;
}

struct EvalConfig {
  std::string labels;
  std::string truth;
  std::vector<std::string> classes;
  std::string output;
  std::string csv;
};

int cmd_eval(const EvalConfig& c) {
  LabelsPtr labels = read_labels(c.labels, true);
  LabelsPtr truth = read_labels(c.truth, false);
  std::vector<std::int32_t> ids;
  std::vector<std::string> names;
  for (const auto& spec : c.classes) {
    const auto eq = spec.find('=');
    try {
      ids.push_back(std::stoi(spec.substr(0, eq)));
    } catch (const std::exception&) {
      throw Failure{S3D_ERR_ARGUMENT, "bad --class '" + spec + "', expected ID or ID=NAME"};
    }
    names.push_back(eq == std::string::npos ? "class_" + std::to_string(ids.back()) : spec.substr(eq + 1));
  }
  std::vector<const char*> name_ptrs;
  for (const auto& n : names) name_ptrs.push_back(n.c_str());
  char* js = nullptr;
  char* cs = nullptr;
  check(s3d_evaluate(labels.get(), truth.get(), ids.data(), name_ptrs.data(), ids.size(), &js, &cs), "eval");
  StringPtr json(js), csv(cs);
  std::cout << json.get() << "\n";
  if (!c.output.empty()) write_text(c.output, std::string(json.get()) + "\n");
  if (!c.csv.empty()) write_text(c.csv, csv.get());
  return kOk;
}

struct BenchConfig {
  std::string input;
  std::vector<std::size_t> synthetic;
  std::vector<std::int32_t> supervoxels{1000};
  std::vector<int> extra{0};
  int repeats = 5;
  std::uint64_t seed = 1;
  std::string output;
  s3d_params params{};
  std::string mode = "3d";
  Preprocess prep;
};

struct Timing {
  double median = 0.0;
  double min = 0.0;
};

Timing summarize(std::vector<double> t) {
  if (t.empty()) return {};
  std::sort(t.begin(), t.end());
  const std::size_t n = t.size();
  return {n % 2 ? t[n / 2] : 0.5 * (t[n / 2 - 1] + t[n / 2]), t.front()};
}

std::uint64_t fnv1a(const std::int32_t* data, std::size_t n) {
  std::uint64_t h = 1469598103934665603ull;
  const auto* bytes = reinterpret_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n * sizeof(std::int32_t); ++i) h = (h ^ bytes[i]) * 1099511628211ull;
  return h;
}

VolumePtr synthetic_volume(const std::vector<std::size_t>& dims, std::uint64_t seed) {
  const std::size_t d[3] = {dims[0], dims[1], dims[2]};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  std::vector<float> data(d[0] * d[1] * d[2]);
  for (float& x : data) x = u(rng);
  s3d_volume* v = nullptr;
  check(s3d_volume_create(d, data.data(), &v), "synthetic volume");
  return VolumePtr(v);
}

int cmd_bench(const BenchConfig& c) {
  if (c.input.empty() == c.synthetic.empty())
    throw Failure{S3D_ERR_ARGUMENT, "bench needs exactly one of --input or --synthetic"};
  if (c.repeats < 1) throw Failure{S3D_ERR_ARGUMENT, "--repeats must be >= 1"};

  auto load = [&] { return c.input.empty() ? synthetic_volume(c.synthetic, c.seed) : read_volume(c.input); };
  load();  // warm the page cache

  std::vector<double> read_t, prep_t;
  VolumePtr prepared;
  for (int r = 0; r < c.repeats; ++r) {
    auto t0 = Clock::now();
    VolumePtr v = load();
    read_t.push_back(seconds_since(t0));
    t0 = Clock::now();
    preprocess(v.get(), c.prep);
    prep_t.push_back(seconds_since(t0));
    prepared = std::move(v);
  }
  const Timing read = summarize(read_t), prep = summarize(prep_t);

  std::ostringstream csv;
  csv << "supervoxels,extra_pixel_iters,repeats,actual_supervoxels,read_median_s,read_min_s,"
         "preprocess_median_s,preprocess_min_s,segment_median_s,segment_min_s,segment_over_read,labels_fnv1a\n";
  std::map<std::pair<std::int32_t, int>, double> medians;
  for (const std::int32_t k : c.supervoxels)
    for (const int extra : c.extra) {
      s3d_params p = c.params;
      p.num_supervoxels = k;
      p = effective(p, extra, c.mode);
      std::vector<double> seg_t;
      std::optional<std::uint64_t> hash;
      std::int32_t actual = 0;
      for (int r = 0; r < c.repeats; ++r) {
        s3d_labels* l = nullptr;
        const auto t0 = Clock::now();
        check(s3d_segment(prepared.get(), &p, &l, nullptr), "segment");
        seg_t.push_back(seconds_since(t0));
        LabelsPtr labels(l);
        std::size_t d[3];
        s3d_labels_dims(labels.get(), d);
        const std::uint64_t h = fnv1a(s3d_labels_data(labels.get()), d[0] * d[1] * d[2]);
        if (hash && *hash != h) throw Failure{S3D_ERR_LOGIC, "segmentation differed between repetitions"};
        hash = h;
        actual = s3d_labels_count(labels.get());
      }
      const Timing seg = summarize(seg_t);
      medians[{k, extra}] = seg.median;
      char hex[17];
      std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(*hash));
      csv << k << ',' << extra << ',' << c.repeats << ',' << actual << ',' << read.median << ',' << read.min << ','
          << prep.median << ',' << prep.min << ',' << seg.median << ',' << seg.min << ','
          << (read.median > 0.0 ? seg.median / read.median : 0.0) << ',' << hex << '\n';
    }

  if (c.output.empty()) std::cout << csv.str();
  else write_text(c.output, csv.str());

  for (const int extra : c.extra) {
    const auto a = medians.find({1000, extra}), b = medians.find({4096, extra});
    if (a != medians.end() && b != medians.end() && a->second > 0.0)
      std::cerr << "seeds3d: segment time ratio K=4096/K=1000 (extra " << extra << "): " << b->second / a->second
                << "\n";
  }
  return kOk;
}

struct RenderConfig {
  std::string volume;
  std::string labels;
  std::string truth;
  std::string view = "axial";
  std::vector<std::size_t> slices;
  std::string prefix = "slice";
  Preprocess prep;
};

int cmd_render(const RenderConfig& c) {
  VolumePtr v = read_volume(c.volume);
  preprocess(v.get(), c.prep);
  LabelsPtr labels = read_labels(c.labels, false);
  LabelsPtr truth = c.truth.empty() ? nullptr : read_labels(c.truth, false);
  const s3d_view view = c.view == "coronal" ? S3D_VIEW_CORONAL : c.view == "sagittal" ? S3D_VIEW_SAGITTAL : S3D_VIEW_AXIAL;
  std::vector<std::size_t> slices = c.slices;
  if (slices.empty()) {
    std::size_t n = 0;
    check(s3d_slice_count(v.get(), view, &n), "render");
    slices.push_back(n / 2);
  }
  for (const std::size_t s : slices) {
    const std::string path = c.prefix + "_" + c.view + "_" + std::to_string(s) + ".ppm";
    check(s3d_render_slice(v.get(), labels.get(), truth.get(), view, s, path.c_str()), "render");
    std::cerr << "seeds3d: wrote " << path << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"3D SEEDS supervoxels: segmentation, evaluation, benchmarking and slice rendering"};
  app.set_version_flag("--version", s3d_version());
  app.set_config("--config", "", "Read flags from a config file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();
  bool print_config = false;
  app.add_flag("--print-config", print_config, "Print the given flags as a config file instead of running")
      ->configurable(false);

  SegmentConfig seg;
  s3d_params_default(&seg.params);
  auto* segment = app.add_subcommand("segment", "Segment a NIfTI volume into supervoxels");
  segment->add_option("-i,--input", seg.input, "Input NIfTI volume")->required();
  segment->add_option("-o,--output", seg.output, "Output label NIfTI (int32)")->required();
  segment->add_option("--report", seg.report, "Run report JSON (default: <output>.report.json)");
  add_seeds_options(segment, seg.params, seg.extra_pixel_iters, seg.mode);
  add_preprocess_options(segment, seg.prep);

  EvalConfig ev;
  auto* eval = app.add_subcommand("eval", "Under-segmentation error and achievable Dice of a label map");
  eval->add_option("-l,--labels", ev.labels, "Supervoxel label NIfTI")->required();
  eval->add_option("-t,--truth", ev.truth, "Ground-truth class NIfTI, 0 = background")->required();
  eval->add_option("--class", ev.classes, "Foreground class to report, ID or ID=NAME (repeatable)");
  eval->add_option("-o,--output", ev.output, "Also write the metrics JSON here");
  eval->add_option("--csv", ev.csv, "Per-class CSV rows");

  BenchConfig bc;
  s3d_params_default(&bc.params);
  auto* bench = app.add_subcommand("bench", "Time read, preprocess and segment phases");
  bench->add_option("-i,--input", bc.input, "Input NIfTI volume");
  bench->add_option("--synthetic", bc.synthetic, "Uniform-noise volume of these dims instead of --input")
      ->expected(3);
  bench->add_option("--seed", bc.seed, "Seed for --synthetic")->capture_default_str();
  bench->add_option("-r,--repeats", bc.repeats, "Repetitions per configuration")->capture_default_str();
  bench->add_option("-o,--output", bc.output, "CSV path (default: stdout)");
  int unused_extra = 0;
  add_seeds_options(bench, bc.params, unused_extra, bc.mode);
  bench->remove_option(bench->get_option("--supervoxels"));
  bench->remove_option(bench->get_option("--extra-pixel-iters"));
  bench->add_option("-k,--supervoxels", bc.supervoxels, "Supervoxel counts to time (repeatable)")
      ->capture_default_str();
  bench->add_option("--extra-pixel-iters", bc.extra, "Extra pixel passes to time (repeatable)")
      ->capture_default_str();
  add_preprocess_options(bench, bc.prep);

  RenderConfig rc;
  auto* render = app.add_subcommand("render", "Write slice overlays as portable pixmaps");
  render->add_option("-v,--volume", rc.volume, "Intensity NIfTI")->required();
  render->add_option("-l,--labels", rc.labels, "Supervoxel label NIfTI")->required();
  render->add_option("-t,--truth", rc.truth, "Ground-truth NIfTI drawn as contours");
  render->add_option("--view", rc.view, "axial, coronal or sagittal")
      ->check(CLI::IsMember({"axial", "coronal", "sagittal"}))
      ->capture_default_str();
  render->add_option("-s,--slice", rc.slices, "Slice indices (default: the middle slice)");
  render->add_option("-o,--prefix", rc.prefix, "Output path prefix")->capture_default_str();
  add_preprocess_options(render, rc.prep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "seeds3d: error: " << e.what() << "\n";
    return kUsage;
  }

  if (print_config) {
    std::cout << app.config_to_str(false, false);
    return kOk;
  }

  try {
    if (*segment) return cmd_segment(seg);
    if (*eval) return cmd_eval(ev);
    if (*bench) return cmd_bench(bc);
    if (*render) return cmd_render(rc);
  } catch (const Failure& f) {
    std::cerr << "seeds3d: error: " << s3d_status_name(f.status) << ": " << f.message << "\n";
    return exit_code(f.status);
  } catch (const std::exception& e) {
    std::cerr << "seeds3d: error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
