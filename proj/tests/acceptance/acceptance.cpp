// Acceptance checks. Prints one PASS/FAIL/SKIP line per criterion and exits nonzero
// when a criterion fails that is not listed with --known-failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oracles.hpp"
#include "seeds3d/energy.hpp"
#include "seeds3d/engine.hpp"
#include "seeds3d/metrics.hpp"
#include "seeds3d/nifti.hpp"
#include "seeds3d/preprocess.hpp"
#include "seeds3d/topology.hpp"

using namespace seeds3d;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned thresholds.
constexpr double kTopologySeconds = 60.0;
constexpr std::size_t kTopologySamples = 1'000'000;
constexpr int kTopologySparseMax = 6;
constexpr int kConnectivityVolumes = 100;
constexpr double kConnectivitySeconds = 300.0;
constexpr int kDeterminismVolumes = 20;
constexpr int kEnergyVolumes = 40;
constexpr int kMetricPairs = 1000;
constexpr double kPhantomMinDice = 0.99;
constexpr double kPhantomMaxUe = 0.01;
constexpr double kLatencyMaxSeconds = 5.0;
constexpr double kLatencyMaxRatio = 1.6;
constexpr double kExtraItersMaxRatio = 6.0;
constexpr int kLatencyRepeats = 3;
constexpr int kRoundTrips = 50;
constexpr double kRampTolerance = 1e-6;
constexpr double kDatasetUeTolerance = 0.2;   // absolute percentage points
constexpr double kDatasetDiceTolerance = 2.0;  // absolute percentage points

struct Outcome {
  enum Status { Pass, Fail, Skip } status = Pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int bin_of(float v, int bins) {
  return std::min(static_cast<int>(std::floor(static_cast<double>(v) * bins)), bins - 1);
}

// ---------------------------------------------------------------------------
// 1. Topology soundness

bool flood_connected(std::uint32_t cells, int side, int dims) {
  if (cells == 0) return false;
  const int start = __builtin_ctz(cells);
  std::uint32_t seen = 1u << start, frontier = seen;
  while (frontier) {
    const int c = __builtin_ctz(frontier);
    frontier &= frontier - 1;
    const int x = c % side, y = (c / side) % side, z = c / (side * side);
    const int nb[6][3] = {{x - 1, y, z}, {x + 1, y, z}, {x, y - 1, z}, {x, y + 1, z}, {x, y, z - 1}, {x, y, z + 1}};
    for (int k = 0; k < (dims == 2 ? 4 : 6); ++k) {
      const auto& p = nb[k];
      if (p[0] < 0 || p[0] >= side || p[1] < 0 || p[1] >= side || p[2] < 0 || p[2] >= side) continue;
      const int n = p[0] + side * (p[1] + side * p[2]);
      if (((cells >> n) & 1u) && !((seen >> n) & 1u)) {
        seen |= 1u << n;
        frontier |= 1u << n;
      }
    }
  }
  return seen == cells;
}

Outcome topology_soundness() {
  const auto t0 = Clock::now();
  std::int64_t checked = 0, violations = 0, oracle_mismatch = 0;
  const std::array<Direction, 4> planar{Direction::MinusSagittal, Direction::PlusSagittal,
                                        Direction::MinusCoronal, Direction::PlusCoronal};
  for (std::uint32_t b = 0; b < 256; ++b) {
    // Spread the eight neighbor bits around the center bit 4.
    const std::uint32_t bits = (b & 0xFu) | ((b >> 4) << 5) | (1u << Mask2D::kCenter);
    const Mask2D m{static_cast<std::uint16_t>(bits)};
    const bool truth = flood_connected(bits & ~(1u << Mask2D::kCenter), 3, 2);
    oracle_mismatch += local_connectivity_oracle(m) != truth;
    for (Direction d : planar) {
      ++checked;
      violations += check_split_2d(m, d) && !truth;
    }
  }
  const auto check3 = [&](std::uint32_t neighbors) {
    const std::uint32_t bits = neighbors | (1u << Mask3D::kCenter);
    const Mask3D m{bits};
    const bool truth = flood_connected(neighbors, 3, 3);
    oracle_mismatch += local_connectivity_oracle(m) != truth;
    for (Direction d : kAllDirections) {
      ++checked;
      violations += check_split_3d(m, d) && !truth;
    }
  };
  const auto spread = [](std::uint32_t n26) {
    return (n26 & ((1u << 13) - 1)) | ((n26 >> 13) << 14);
  };
  std::mt19937_64 rng(20240601);
  for (std::size_t i = 0; i < kTopologySamples; ++i) check3(spread(static_cast<std::uint32_t>(rng()) & ((1u << 26) - 1)));
  // Every window with at most kTopologySparseMax neighbors, via Gosper's hack per popcount.
  std::int64_t sparse = 0;
  check3(0);
  ++sparse;
  for (int k = 1; k <= kTopologySparseMax; ++k) {
    std::uint32_t s = (1u << k) - 1;
    while (s < (1u << 26)) {
      check3(spread(s));
      ++sparse;
      const std::uint32_t c = s & (~s + 1), r = s + c;
      s = (((r ^ s) >> 2) / c) | r;
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.status = violations == 0 && oracle_mismatch == 0 && secs < kTopologySeconds ? Outcome::Pass : Outcome::Fail;
  o.detail = fmt("%lld decisions (256 planar windows, %zu sampled and %lld sparse 3D windows), "
                 "%lld violations, %lld oracle mismatches, %.1f s (limit %.0f s)",
                 static_cast<long long>(checked), kTopologySamples, static_cast<long long>(sparse),
                 static_cast<long long>(violations), static_cast<long long>(oracle_mismatch), secs,
                 kTopologySeconds);
  return o;
}

// ---------------------------------------------------------------------------
// 2. Global connectivity

Outcome global_connectivity() {
  const auto t0 = Clock::now();
  const std::array<std::int32_t, 3> ks{8, 27, 64};
  std::int64_t audits = 0, broken = 0, final_broken = 0;
  for (int i = 0; i < kConnectivityVolumes; ++i) {
    const Volume v = oracle::uniform_noise(Dims(16, 16, 16), 1000 + static_cast<std::uint64_t>(i));
    SeedsParams p;
    p.num_supervoxels = ks[static_cast<std::size_t>(i) % 3];
    RunHooks hooks;
    hooks.after_move = [&](const MoveEvent& m, const EngineView& view) {
      if (m.kind != PassKind::Pixel) return;
      ++audits;
      broken += !oracle::all_connected(view.labels);
    };
    const auto r = run(v, p, hooks);
    final_broken += !oracle::all_connected(r.labels);
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.status = broken == 0 && final_broken == 0 && audits > 0 && secs < kConnectivitySeconds ? Outcome::Pass
                                                                                           : Outcome::Fail;
  o.detail = fmt("%d volumes, %lld flood-fill audits after pixel moves, %lld disconnected states, %.1f s (limit %.0f s)",
                 kConnectivityVolumes, static_cast<long long>(audits), static_cast<long long>(broken + final_broken),
                 secs, kConnectivitySeconds);
  return o;
}

// ---------------------------------------------------------------------------
// 3. Partition and determinism

Outcome partition_determinism() {
  std::mt19937 rng(33);
  int identical = 0, partitions = 0;
  for (int i = 0; i < kDeterminismVolumes; ++i) {
    const Dims d(8 + rng() % 17, 8 + rng() % 17, 8 + rng() % 17);
    const Volume v = oracle::uniform_noise(d, 3000 + static_cast<std::uint64_t>(i));
    SeedsParams p;
    p.num_supervoxels = static_cast<std::int32_t>(4 + rng() % 100);
    const auto a = run(v, p);
    const auto b = run(v, p);
    bool same = a.labels.labels == b.labels.labels && a.labels.count == b.labels.count &&
                a.report.passes.size() == b.report.passes.size();
    for (std::size_t k = 0; same && k < a.report.passes.size(); ++k)
      same = a.report.passes[k].accepted == b.report.passes[k].accepted &&
             a.report.passes[k].proposed == b.report.passes[k].proposed;
    identical += same;
    const auto sizes = a.labels.sizes();
    std::int64_t total = 0;
    bool covered = a.labels.count == a.report.supervoxels && a.labels.labels.size() == d.size();
    for (auto s : sizes) {
      total += s;
      covered = covered && s > 0;
    }
    for (auto l : a.labels.labels) covered = covered && l >= 0 && l < a.labels.count;
    partitions += covered && total == static_cast<std::int64_t>(d.size());
  }
  Outcome o;
  o.status = identical == kDeterminismVolumes && partitions == kDeterminismVolumes ? Outcome::Pass : Outcome::Fail;
  o.detail = fmt("%d/%d runs bit-identical, %d/%d label maps conserve voxels and cover every label",
                 identical, kDeterminismVolumes, partitions, kDeterminismVolumes);
  return o;
}

// ---------------------------------------------------------------------------
// 4. Energy gate

std::int64_t window_count(const LabelField& f, std::size_t element, Direction d, std::int32_t owner) {
  const auto c = f.dims.coord(element);
  const int axis = axis_of(d);
  std::int64_t n = 0;
  for (std::size_t i = 0; i < f.dims.size(); ++i) {
    if (f.labels[i] != owner) continue;
    const auto p = f.dims.coord(i);
    std::array<std::ptrdiff_t, 3> off{};
    for (std::size_t a = 0; a < 3; ++a) off[a] = static_cast<std::ptrdiff_t>(p[a]) - static_cast<std::ptrdiff_t>(c[a]);
    const std::ptrdiff_t along = off[static_cast<std::size_t>(axis)] * sign_of(d);
    bool inside = along >= -1 && along <= 2, on_line = true;
    for (int a = 0; a < 3; ++a) {
      if (a == axis) continue;
      inside = inside && std::abs(off[static_cast<std::size_t>(a)]) <= 1;
      on_line = on_line && off[static_cast<std::size_t>(a)] == 0;
    }
    if (inside && !(on_line && (along == 0 || along == 1))) ++n;
  }
  return n;
}

__extension__ typedef __int128 Wide;

Wide energy(std::int64_t h, std::int64_t g, int lambda) {
  Wide e = h;
  for (int i = 0; i < lambda; ++i) e *= g;
  return e;
}

Outcome energy_gate() {
  std::int64_t pixel = 0, block = 0, mismatches = 0, not_strict = 0, hist_mismatch = 0;
  for (int i = 0; i < kEnergyVolumes; ++i) {
    const Volume v = oracle::uniform_noise(Dims(8, 8, 8), 4000 + static_cast<std::uint64_t>(i));
    SeedsParams p;
    p.num_supervoxels = i % 2 ? 27 : 8;
    const int bins = p.num_bins;
    std::vector<int> bin(v.data.size());
    for (std::size_t k = 0; k < bin.size(); ++k) bin[k] = bin_of(v.data[k], bins);

    const auto hist_of = [&](const LabelField& f, std::int32_t label, const std::vector<bool>* exclude) {
      std::vector<std::int64_t> h(static_cast<std::size_t>(bins), 0);
      for (std::size_t k = 0; k < f.labels.size(); ++k)
        if (f.labels[k] == label && !(exclude && (*exclude)[k])) ++h[static_cast<std::size_t>(bin[k])];
      return h;
    };
    const auto stored_matches = [&](const EngineView& view, std::int32_t label) {
      const auto [h, n] = view.hierarchy.supervoxel_stats(label);
      const auto scratch = hist_of(view.labels, label, nullptr);
      std::int64_t total = 0;
      for (auto x : scratch) total += x;
      return h.bins == scratch && n == total;
    };

    RunHooks hooks;
    hooks.before_move = [&](const MoveEvent& m, const EngineView& view) {
      const LabelField& f = view.labels;
      std::vector<bool> part(f.labels.size(), false);
      if (m.kind == PassKind::Pixel) {
        part[m.element] = true;
      } else {
        const BlockLevel& lvl = view.hierarchy.level(m.level);
        for (std::size_t k = 0; k < f.labels.size(); ++k) {
          const auto c = f.dims.coord(k);
          part[k] = lvl.block_at_voxel(c[0], c[1], c[2]) == m.element;
        }
      }
      std::vector<std::int64_t> hp(static_cast<std::size_t>(bins), 0);
      for (std::size_t k = 0; k < part.size(); ++k)
        if (part[k]) {
          mismatches += f.labels[k] != m.from;
          ++hp[static_cast<std::size_t>(bin[k])];
        }
      const auto donor_minus = hist_of(f, m.from, &part);
      const auto recipient = hist_of(f, m.to, nullptr);
      const std::int64_t h_retain = oracle::intersection(donor_minus, hp);
      const std::int64_t h_transfer = oracle::intersection(recipient, hp);
      std::int64_t g_retain = 1, g_transfer = 1;
      int lambda = 0;
      if (m.kind == PassKind::Pixel) {
        ++pixel;
        const auto j = static_cast<std::size_t>(bin[m.element]);
        const std::int64_t n_donor = window_count(f, m.element, m.direction, m.from);
        const std::int64_t n_recipient = window_count(f, m.element, m.direction, m.to);
        // The donor still holds the candidate when the move is evaluated.
        g_retain = n_donor * (donor_minus[j] + 1);
        g_transfer = n_recipient * recipient[j];
        lambda = view.params.prior_weight;
        mismatches += !m.boundary || m.boundary->donor_count != n_donor ||
                      m.boundary->recipient_count != n_recipient || m.boundary->candidate_bin != j;
      } else {
        ++block;
        mismatches += m.boundary.has_value();
      }
      mismatches += m.energies.retain.color != h_retain || m.energies.transfer.color != h_transfer ||
                    m.energies.retain.boundary != g_retain || m.energies.transfer.boundary != g_transfer;
      not_strict += !(energy(h_retain, g_retain, lambda) < energy(h_transfer, g_transfer, lambda));
      hist_mismatch += !stored_matches(view, m.from) || !stored_matches(view, m.to);
    };
    hooks.after_move = [&](const MoveEvent& m, const EngineView& view) {
      hist_mismatch += !stored_matches(view, m.from) || !stored_matches(view, m.to);
    };
    run(v, p, hooks);
  }
  Outcome o;
  o.status = mismatches == 0 && not_strict == 0 && hist_mismatch == 0 && pixel > 0 && block > 0 ? Outcome::Pass
                                                                                                 : Outcome::Fail;
  o.detail = fmt("%lld pixel and %lld block moves on %d volumes; %lld energy term mismatches, %lld non-strict "
                 "acceptances, %lld stored histogram mismatches",
                 static_cast<long long>(pixel), static_cast<long long>(block), kEnergyVolumes,
                 static_cast<long long>(mismatches), static_cast<long long>(not_strict),
                 static_cast<long long>(hist_mismatch));
  return o;
}

// ---------------------------------------------------------------------------
// 5. Metrics oracle equivalence

bool same_fraction(const Ratio& r, std::int64_t num, std::int64_t den) {
  return static_cast<Wide>(r.numerator) * den == static_cast<Wide>(num) * r.denominator;
}

Outcome metrics_equivalence() {
  std::mt19937 rng(55);
  const Dims d(8, 8, 8);
  int agree = 0;
  for (int t = 0; t < kMetricPairs; ++t) {
    const std::int32_t k = 1 + static_cast<std::int32_t>(rng() % 64);
    const std::int32_t c = 1 + static_cast<std::int32_t>(rng() % 6);
    std::vector<std::int32_t> lab(d.size()), cls(d.size());
    // Blocky maps give aligned supervoxels as well as mixed ones.
    const std::size_t grain = 1 + rng() % 4;
    for (std::size_t i = 0; i < d.size(); ++i) {
      const auto p = d.coord(i);
      lab[i] = static_cast<std::int32_t>(rng() % static_cast<unsigned>(k));
      cls[i] = static_cast<std::int32_t>((p[0] / grain + p[1] / grain + (rng() % 3 == 0 ? rng() : 0)) %
                                         static_cast<unsigned>(c));
    }
    const auto want = oracle::brute_metrics(lab, k, cls, c);
    const MetricsReport got = evaluate(LabelField(d, lab, k), GroundTruth(d, cls, c));
    bool ok = same_fraction(got.ue, want.ue_numerator, want.ue_denominator) && got.ads.size() == want.dice.size();
    for (std::size_t i = 0; ok && i < want.dice.size(); ++i) {
      const auto [num, den] = want.dice[i];
      ok = den == 0 ? !got.ads[i].dice.has_value()
                    : got.ads[i].dice.has_value() && same_fraction(*got.ads[i].dice, num, den);
    }
    agree += ok;
  }
  Outcome o;
  o.status = agree == kMetricPairs ? Outcome::Pass : Outcome::Fail;
  o.detail = fmt("%d/%d random pairs agree exactly on UE and every per-class Dice", agree, kMetricPairs);
  return o;
}

// ---------------------------------------------------------------------------
// 6. Phantom quality

Outcome phantom_quality() {
  const std::size_t n = 64;
  const Volume v = oracle::sphere_phantom(n, 20.0, 0.8f, 0.2f);
  const GroundTruth gt = oracle::sphere_truth(n, 20.0);
  SeedsParams p;
  p.num_supervoxels = 64;
  const auto r = run(v, p);
  const MetricsReport m = evaluate(r.labels, gt);
  const auto brute = oracle::brute_metrics(r.labels.labels, r.labels.count, gt.classes, gt.class_count);
  const bool exact = same_fraction(m.ue, brute.ue_numerator, brute.ue_denominator) &&
                     same_fraction(*m.ads[0].dice, brute.dice[0].first, brute.dice[0].second);
  const double dice = m.ads[0].dice->value();
  const double ue = m.ue.value();
  Outcome o;
  o.status = exact && dice >= kPhantomMinDice && ue <= kPhantomMaxUe ? Outcome::Pass : Outcome::Fail;
  o.detail = fmt("K=%d, sphere ADS %.4f (need >= %.2f), UE %.5f (need <= %.2f), oracle %s", r.labels.count, dice,
                 kPhantomMinDice, ue, kPhantomMaxUe, exact ? "agrees" : "DISAGREES");
  return o;
}

// ---------------------------------------------------------------------------
// 7. Latency scaling

double median_seconds(const Volume& v, const SeedsParams& p, int repeats) {
  std::vector<double> t;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = Clock::now();
    const auto r = run(v, p);
    t.push_back(seconds_since(t0));
    if (r.labels.count != p.num_supervoxels) return -1.0;
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

Outcome latency_scaling() {
  const Volume v = oracle::uniform_noise(Dims(160, 160, 160), 7);
  SeedsParams p;
  p.num_supervoxels = 1000;
  const double base = median_seconds(v, p, kLatencyRepeats);
  p.num_supervoxels = 4096;
  const double fine = median_seconds(v, p, kLatencyRepeats);
  p.num_supervoxels = 1000;
  p.pixel_iterations += 16;
  const double extra = median_seconds(v, p, kLatencyRepeats);
  const double ratio = fine / base, extra_ratio = extra / base;
  Outcome o;
  o.status = base > 0 && fine > 0 && extra > 0 && base <= kLatencyMaxSeconds && ratio <= kLatencyMaxRatio &&
                     extra_ratio <= kExtraItersMaxRatio
                 ? Outcome::Pass
                 : Outcome::Fail;
  o.detail = fmt("160^3 medians of %d: K=1000 %.2f s (limit %.1f), K=4096 %.2f s, ratio %.2f (limit %.1f), "
                 "+16 iters %.2f s, ratio %.2f (limit %.1f)",
                 kLatencyRepeats, base, kLatencyMaxSeconds, fine, ratio, kLatencyMaxRatio, extra, extra_ratio,
                 kExtraItersMaxRatio);
  return o;
}

// ---------------------------------------------------------------------------
// 8. Dataset reproduction (optional)

struct DatasetCase {
  fs::path image;
  fs::path truth;
};

// Nearest neighbor on voxel centers along every axis.
std::vector<std::int32_t> resize_labels(const std::vector<std::int32_t>& src, const Dims& from, const Dims& to) {
  std::vector<std::int32_t> out(to.size());
  const auto pick = [&](std::size_t o, int a) {
    return std::min(static_cast<std::size_t>(std::floor((static_cast<double>(o) + 0.5) *
                                                        static_cast<double>(from[a]) / static_cast<double>(to[a]))),
                    from[a] - 1);
  };
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto c = to.coord(i);
    out[i] = src[from.index(pick(c[0], 0), pick(c[1], 1), pick(c[2], 2))];
  }
  return out;
}

struct Task {
  std::string name;
  std::set<std::int32_t> ids;  // ground-truth ids merged into this region
  double expected_1000;
  double expected_4096;
};

Outcome dataset_reproduction(const std::string& dir, const std::string& kind) {
  Outcome o;
  if (dir.empty()) {
    o.status = Outcome::Skip;
    o.detail = "no dataset supplied (--dataset DIR --dataset-kind btcv|brats)";
    return o;
  }
  std::vector<Task> tasks;
  std::vector<DatasetCase> cases;
  const bool ct = kind == "btcv";
  if (ct) {
    tasks = {{"spleen", {1}, 75.96, 86.67},    {"right kidney", {2}, 59.45, 79.75}, {"left kidney", {3}, 60.39, 79.89},
             {"gallbladder", {4}, 10.71, 43.10}, {"liver", {6}, 84.76, 90.68},       {"stomach", {7}, 63.79, 79.06},
             {"aorta", {8}, 17.10, 62.49},      {"inferior vena cava", {9}, 8.50, 50.72},
             {"pancreas", {11}, 7.79, 47.06}};
    // imagesTr/<case>.nii.gz with labelsTr/<case>.nii.gz
    for (const auto& e : fs::directory_iterator(fs::path(dir) / "imagesTr")) {
      const fs::path truth = fs::path(dir) / "labelsTr" / e.path().filename();
      if (fs::exists(truth)) cases.push_back({e.path(), truth});
    }
  } else {
    tasks = {{"WT", {1, 2, 3}, 83.82, 88.44}, {"ET", {3}, 57.26, 72.42}, {"ED", {2}, 63.38, 73.46},
             {"NCR", {1}, 38.25, 57.89}};
    // <case>/<case>-t2f.nii.gz with <case>/<case>-seg.nii.gz
    for (const auto& e : fs::directory_iterator(dir)) {
      if (!e.is_directory()) continue;
      const std::string id = e.path().filename().string();
      const fs::path image = e.path() / (id + "-t2f.nii.gz"), truth = e.path() / (id + "-seg.nii.gz");
      if (fs::exists(image) && fs::exists(truth)) cases.push_back({image, truth});
    }
  }
  std::sort(cases.begin(), cases.end(), [](const auto& a, const auto& b) { return a.image < b.image; });
  if (cases.empty()) {
    o.status = Outcome::Fail;
    o.detail = "dataset directory holds no image/label pairs";
    return o;
  }

  const Dims target(160, 160, 160);
  std::map<std::int32_t, std::vector<double>> dice;  // K -> per task sums
  std::map<std::int32_t, std::vector<int>> present;
  std::map<std::int32_t, double> ue_sum;
  for (const auto& c : cases) {
    Volume v = read_nifti(c.image).to_volume();
    v = ct ? window_ct(v) : clip_percentiles(v);
    v = resize(rescale_unit(v), target);
    const NiftiImage t = read_nifti(c.truth);
    const auto truth = resize_labels(integer_values(t), t.dims, target);
    for (std::int32_t k : {1000, 4096}) {
      SeedsParams p;
      p.num_supervoxels = k;
      const LabelField labels = run(v, p).labels;
      auto& ds = dice[k];
      auto& pr = present[k];
      ds.resize(tasks.size(), 0.0);
      pr.resize(tasks.size(), 0);
      std::int32_t max_id = 0;
      for (auto x : truth) max_id = std::max(max_id, x);
      ue_sum[k] += evaluate(labels, GroundTruth(target, truth, max_id + 1)).ue.value();
      for (std::size_t i = 0; i < tasks.size(); ++i) {
        std::vector<std::int32_t> binary(truth.size());
        for (std::size_t j = 0; j < truth.size(); ++j) binary[j] = tasks[i].ids.count(truth[j]) ? 1 : 0;
        const MetricsReport m = evaluate(labels, GroundTruth(target, binary, 2));
        if (m.ads[0].dice) {
          ds[i] += m.ads[0].dice->value();
          ++pr[i];
        }
      }
    }
  }
  const std::map<std::int32_t, double> expected_ue{{1000, 1.18}, {4096, 0.75}};
  bool within = true;
  std::ostringstream out;
  out << cases.size() << " " << kind << " cases;";
  for (std::int32_t k : {1000, 4096}) {
    const double ue = 100.0 * ue_sum[k] / static_cast<double>(cases.size());
    const double delta = ue - expected_ue.at(k);
    within = within && std::abs(delta) <= kDatasetUeTolerance;
    out << fmt(" K=%d UE %.2f%% (delta %+.2f)", k, ue, delta);
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      if (present[k][i] == 0) continue;
      const double ads = 100.0 * dice[k][i] / present[k][i];
      const double want = k == 1000 ? tasks[i].expected_1000 : tasks[i].expected_4096;
      within = within && std::abs(ads - want) <= kDatasetDiceTolerance;
      out << fmt(", %s %.2f (delta %+.2f)", tasks[i].name.c_str(), ads, ads - want);
    }
    out << ";";
  }
  o.status = within ? Outcome::Pass : Outcome::Fail;
  o.detail = out.str();
  return o;
}

// ---------------------------------------------------------------------------
// 9. NIfTI round trip

std::vector<char> bytes_of(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome nifti_round_trip(const fs::path& scratch) {
  std::mt19937_64 rng(99);
  const std::array<NiftiDatatype, 6> types{NiftiDatatype::UInt8, NiftiDatatype::Int16, NiftiDatatype::UInt16,
                                           NiftiDatatype::Int32, NiftiDatatype::Float32, NiftiDatatype::Float64};
  const auto real = [&](double lo, double hi) {
    return static_cast<double>(static_cast<float>(std::uniform_real_distribution<double>(lo, hi)(rng)));
  };
  int identical = 0;
  std::set<std::string> combos;
  for (int t = 0; t < kRoundTrips; ++t) {
    NiftiImage img;
    img.dims = Dims(1 + rng() % 9, 1 + rng() % 9, 1 + rng() % 9);
    img.datatype = types[rng() % types.size()];
    img.scl_slope = std::array<double, 4>{0.0, 1.0, 0.5, 2.25}[rng() % 4];
    img.scl_inter = std::array<double, 3>{0.0, -1024.0, 3.5}[rng() % 3];
    img.pixdim = {real(0.1, 5), real(0.1, 5), real(0.1, 5)};
    img.qform_code = static_cast<std::int16_t>(rng() % 3);
    img.sform_code = static_cast<std::int16_t>(rng() % 3);
    img.quatern = {real(-0.5, 0.5), real(-0.5, 0.5), real(-0.5, 0.5)};
    img.qoffset = {real(-100, 100), real(-100, 100), real(-100, 100)};
    img.qfac = rng() % 2 ? 1.0 : -1.0;
    for (auto& row : img.srow)
      for (auto& x : row) x = real(-10, 10);
    img.xyzt_units = static_cast<std::uint8_t>(rng() % 2 ? 10 : 2);
    img.description = "case " + std::to_string(rng() % 100000);
    img.raw.resize(img.dims.size());
    for (auto& x : img.raw) {
      switch (img.datatype) {
        case NiftiDatatype::UInt8: x = static_cast<double>(rng() % 256); break;
        case NiftiDatatype::Int16: x = static_cast<double>(static_cast<std::int16_t>(rng())); break;
        case NiftiDatatype::UInt16: x = static_cast<double>(static_cast<std::uint16_t>(rng())); break;
        case NiftiDatatype::Int32: x = static_cast<double>(static_cast<std::int32_t>(rng())); break;
        case NiftiDatatype::Float32: x = real(-1e6, 1e6); break;
        case NiftiDatatype::Float64: x = std::uniform_real_distribution<double>(-1e12, 1e12)(rng); break;
      }
    }
    NiftiWriteOptions opt;
    opt.endian = rng() % 2 ? Endian::Big : Endian::Little;
    const bool gz = rng() % 2;
    const std::string ext = gz ? ".nii.gz" : ".nii";
    combos.insert(std::to_string(static_cast<int>(img.datatype)) + (opt.endian == Endian::Big ? "B" : "L") + ext);
    const fs::path first = scratch / ("first" + ext), second = scratch / ("second" + ext);
    write_nifti(img, first, opt);
    const NiftiImage back = read_nifti(first);
    write_nifti(back, second, opt);
    identical += bytes_of(first) == bytes_of(second) && back.raw == img.raw && read_nifti(second).raw == img.raw;
  }
  Outcome o;
  o.status = identical == kRoundTrips ? Outcome::Pass : Outcome::Fail;
  o.detail = fmt("%d/%d randomized files rewrite bit-identically (%zu datatype/endianness/compression combinations)",
                 identical, kRoundTrips, combos.size());
  return o;
}

// ---------------------------------------------------------------------------
// 10. Interpolation correctness

Outcome interpolation() {
  std::mt19937 rng(1010);
  int constants_exact = 0, configs = 0;
  double worst = 0.0;
  std::int64_t ramp_points = 0;
  for (int t = 0; t < 40; ++t) {
    const Dims src(4 + rng() % 17, 4 + rng() % 17, 1 + rng() % 8);
    const Dims dst = t % 4 == 0 ? Dims(2 * src[0], 2 * src[1], src[2])
                                : Dims(3 + rng() % 40, 3 + rng() % 40, 1 + rng() % 12);
    ++configs;
    const float level = static_cast<float>(rng() % 1000) / 999.0f;
    const Volume flat(src, level);
    const Volume out = resize(flat, dst);
    constants_exact += out.dims == dst && std::all_of(out.data.begin(), out.data.end(), [&](float x) { return x == level; });

    // Ramp kept inside [0, 1] so clamping never engages.
    const double ax = 0.4 / static_cast<double>(src[0]), ay = 0.4 / static_cast<double>(src[1]);
    const double az = 0.1 / static_cast<double>(src[2]), b = 0.05;
    Volume ramp(src);
    for (std::size_t i = 0; i < src.size(); ++i) {
      const auto c = src.coord(i);
      ramp.data[i] = static_cast<float>(ax * static_cast<double>(c[0]) + ay * static_cast<double>(c[1]) +
                                        az * static_cast<double>(c[2]) + b);
    }
    const Volume r = resize(ramp, dst);
    const auto source = [](std::size_t o, std::size_t from, std::size_t to) {
      return (static_cast<double>(o) + 0.5) * static_cast<double>(from) / static_cast<double>(to) - 0.5;
    };
    const auto interior = [](double s, std::size_t n) {
      return std::floor(s) >= 1 && std::floor(s) + 2 <= static_cast<double>(n) - 1;
    };
    for (std::size_t z = 0; z < dst[2]; ++z) {
      const auto sz = std::min<std::size_t>(
          static_cast<std::size_t>(std::floor((static_cast<double>(z) + 0.5) * static_cast<double>(src[2]) /
                                              static_cast<double>(dst[2]))),
          src[2] - 1);
      for (std::size_t y = 0; y < dst[1]; ++y)
        for (std::size_t x = 0; x < dst[0]; ++x) {
          const double sx = source(x, src[0], dst[0]), sy = source(y, src[1], dst[1]);
          if (!interior(sx, src[0]) || !interior(sy, src[1])) continue;
          // Reference from the float-rounded source samples' exact linear model.
          const double want = ax * sx + ay * sy + az * static_cast<double>(sz) + b;
          worst = std::max(worst, std::abs(static_cast<double>(r.at(x, y, z)) - want));
          ++ramp_points;
        }
    }
  }
  Outcome o;
  o.status = constants_exact == configs && worst <= kRampTolerance && ramp_points > 0 ? Outcome::Pass : Outcome::Fail;
  o.detail = fmt("%d/%d resizes keep constants exactly; %lld interior ramp samples, max error %.2e (limit %.0e)",
                 constants_exact, configs, static_cast<long long>(ramp_points), worst, kRampTolerance);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seeds3d acceptance checks"};
  std::set<int> known_failures;
  std::set<int> only;
  std::string dataset, dataset_kind = "btcv";
  app.add_option("--known-failure", known_failures, "criteria whose failure is documented and does not set the exit code");
  app.add_option("--only", only, "run only these criteria");
  app.add_option("--dataset", dataset, "dataset root for criterion 8");
  app.add_option("--dataset-kind", dataset_kind, "btcv or brats")->check(CLI::IsMember({"btcv", "brats"}));
  CLI11_PARSE(app, argc, argv);

  const fs::path scratch = fs::temp_directory_path() / ("seeds3d_acceptance_" + std::to_string(std::random_device{}()));
  fs::create_directories(scratch);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"topology soundness", topology_soundness},
      {"global connectivity", global_connectivity},
      {"partition and determinism", partition_determinism},
      {"energy gate", energy_gate},
      {"metrics oracle equivalence", metrics_equivalence},
      {"phantom quality", phantom_quality},
      {"latency scaling", latency_scaling},
      {"dataset reproduction", [&] { return dataset_reproduction(dataset, dataset_kind); }},
      {"NIfTI round trip", [&] { return nifti_round_trip(scratch); }},
      {"interpolation correctness", interpolation},
  };

  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.status = Outcome::Fail;
      o.detail = std::string("exception: ") + e.what();
    }
    const char* status = o.status == Outcome::Pass ? "PASS" : o.status == Outcome::Fail ? "FAIL" : "SKIP";
    const bool known = o.status == Outcome::Fail && known_failures.count(id);
    // Dataset deltas are reported, never enforced.
    if (o.status == Outcome::Fail && !known && id != 8) ++unexpected;
    std::printf("criterion %2d %s  %-27s %s [%.1f s]%s\n", id, status, criteria[i].first.c_str(), o.detail.c_str(),
                seconds_since(t0), known ? " (known shortfall)" : "");
    std::fflush(stdout);
  }
  fs::remove_all(scratch);
  return unexpected == 0 ? 0 : 1;
}
