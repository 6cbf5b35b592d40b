#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seeds3d/types.hpp"

namespace seeds3d {

/// Overlap counts between supervoxels and ground-truth classes.
struct AlignmentTable {
  std::int32_t supervoxels = 0;
  std::int32_t classes = 0;
  std::vector<std::int64_t> overlap;  // supervoxels x classes, row-major
  std::vector<std::int32_t> aligned;  // best class per supervoxel
  std::vector<std::int64_t> largest;  // overlap with the best class
  std::vector<std::int64_t> size;     // |A_k|

  std::int64_t at(std::int32_t k, std::int32_t i) const {
    return overlap[static_cast<std::size_t>(k) * static_cast<std::size_t>(classes) +
                   static_cast<std::size_t>(i)];
  }
};

/// Exact ratio; `value()` is the only floating-point step.
struct Ratio {
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;
  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

struct ClassDice {
  std::int32_t class_id = 0;
  std::optional<Ratio> dice;  // empty when the class is absent from the ground truth
};

struct MetricsReport {
  Ratio ue;
  std::vector<ClassDice> ads;  // foreground classes 1..I-1
  std::optional<double> mean_ads;
  std::int32_t supervoxels = 0;
  std::int32_t classes = 0;
  Dims dims;
};

/// Each supervoxel's best-overlapping class, background included; ties go to the
/// smaller class index. Throws DomainError on a dims mismatch.
AlignmentTable align(const LabelField& labels, const GroundTruth& gt);

/// Leakage outside each supervoxel's aligned class over the total voxel count.
Ratio under_segmentation_error(const AlignmentTable& table, const GroundTruth& gt);

/// Dice between each foreground class and the union of supervoxels aligned to it.
std::vector<ClassDice> achievable_dice(const AlignmentTable& table, const LabelField& labels,
                                       const GroundTruth& gt);

MetricsReport evaluate(const LabelField& labels, const GroundTruth& gt);

}  // namespace seeds3d
