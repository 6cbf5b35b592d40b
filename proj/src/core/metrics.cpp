#include "seeds3d/metrics.hpp"

#include <numeric>

#include "seeds3d/error.hpp"

namespace seeds3d {
namespace {

std::string shape(const Dims& d) {
  return std::to_string(d[0]) + "x" + std::to_string(d[1]) + "x" + std::to_string(d[2]);
}

void require_same_dims(const LabelField& labels, const GroundTruth& gt) {
  if (!(labels.dims == gt.dims))
    throw DomainError("label map " + shape(labels.dims) + " and ground truth " + shape(gt.dims) +
                      " differ in shape");
}

}  // namespace

AlignmentTable align(const LabelField& labels, const GroundTruth& gt) {
  require_same_dims(labels, gt);
  AlignmentTable t;
  t.supervoxels = labels.count;
  t.classes = std::max(gt.class_count, 1);
  const auto nc = static_cast<std::size_t>(t.classes);
  t.overlap.assign(static_cast<std::size_t>(t.supervoxels) * nc, 0);
  for (std::size_t v = 0; v < labels.labels.size(); ++v)
    ++t.overlap[static_cast<std::size_t>(labels.labels[v]) * nc + static_cast<std::size_t>(gt.classes[v])];

  t.aligned.assign(static_cast<std::size_t>(t.supervoxels), 0);
  t.largest.assign(static_cast<std::size_t>(t.supervoxels), 0);
  t.size.assign(static_cast<std::size_t>(t.supervoxels), 0);
  for (std::int32_t k = 0; k < t.supervoxels; ++k) {
    std::int64_t best = -1, total = 0;
    std::int32_t best_class = 0;
    for (std::int32_t i = 0; i < t.classes; ++i) {
      const std::int64_t o = t.at(k, i);
      total += o;
      if (o > best) {
        best = o;
        best_class = i;
      }
    }
    const auto ku = static_cast<std::size_t>(k);
    t.aligned[ku] = best_class;
    t.largest[ku] = best;
    t.size[ku] = total;
  }
  return t;
}

Ratio under_segmentation_error(const AlignmentTable& table, const GroundTruth& gt) {
  if (gt.classes.empty()) throw DomainError("under-segmentation error of an empty volume");
  Ratio r;
  for (std::size_t k = 0; k < table.size.size(); ++k) r.numerator += table.size[k] - table.largest[k];
  r.denominator = static_cast<std::int64_t>(gt.classes.size());
  return r;
}

std::vector<ClassDice> achievable_dice(const AlignmentTable& table, const LabelField& labels,
                                       const GroundTruth& gt) {
  require_same_dims(labels, gt);
  if (gt.classes.empty()) throw DomainError("achievable Dice of an empty volume");
  const auto nc = static_cast<std::size_t>(table.classes);
  std::vector<std::int64_t> predicted(nc, 0), truth(nc, 0), hit(nc, 0);
  for (std::int32_t k = 0; k < table.supervoxels; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const auto i = static_cast<std::size_t>(table.aligned[ku]);
    predicted[i] += table.size[ku];
    hit[i] += table.largest[ku];
  }
  for (std::int32_t i = 0; i < table.classes; ++i)
    for (std::int32_t k = 0; k < table.supervoxels; ++k) truth[static_cast<std::size_t>(i)] += table.at(k, i);

  std::vector<ClassDice> out;
  for (std::size_t i = 1; i < nc; ++i) {
    ClassDice cd{static_cast<std::int32_t>(i), std::nullopt};
    if (truth[i] > 0) cd.dice = Ratio{2 * hit[i], predicted[i] + truth[i]};
    out.push_back(cd);
  }
  return out;
}

MetricsReport evaluate(const LabelField& labels, const GroundTruth& gt) {
  const AlignmentTable table = align(labels, gt);
  MetricsReport r;
  r.ue = under_segmentation_error(table, gt);
  r.ads = achievable_dice(table, labels, gt);
  r.supervoxels = labels.count;
  r.classes = table.classes;
  r.dims = labels.dims;
  double sum = 0.0;
  int present = 0;
  for (const auto& cd : r.ads)
    if (cd.dice) {
      sum += cd.dice->value();
      ++present;
    }
  if (present > 0) r.mean_ads = sum / present;
  return r;
}

}  // namespace seeds3d
