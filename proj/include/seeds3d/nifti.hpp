#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "seeds3d/types.hpp"

namespace seeds3d {

enum class NiftiDatatype : std::int16_t {
  UInt8 = 2,
  Int16 = 4,
  Int32 = 8,
  Float32 = 16,
  Float64 = 64,
  UInt16 = 512,
};

enum class Endian : std::uint8_t { Little, Big };

/// Voxel-to-world (RAS+) transform, 3 rows of 4.
using Affine = std::array<std::array<double, 4>, 3>;

/// NIfTI-1 image reduced to the header fields the pipeline needs.
///
/// `raw` holds the stored values exactly as encoded (every supported datatype is
/// exactly representable as a double); decoded() applies the slope and intercept.
struct NiftiImage {
  Dims dims;
  NiftiDatatype datatype = NiftiDatatype::Float32;
  double scl_slope = 1.0;
  double scl_inter = 0.0;
  std::array<double, 3> pixdim{1.0, 1.0, 1.0};
  std::int16_t qform_code = 0;
  std::int16_t sform_code = 0;
  std::array<double, 3> quatern{0.0, 0.0, 0.0};  // b, c, d
  std::array<double, 3> qoffset{0.0, 0.0, 0.0};
  double qfac = 1.0;
  Affine srow{};
  std::uint8_t xyzt_units = 0;
  std::string description;
  std::vector<double> raw;

  /// raw * scl_slope + scl_inter, or raw when scl_slope is 0.
  std::vector<double> decoded() const;
  Volume to_volume() const;

  /// sform when sform_code > 0, else qform when qform_code > 0.
  std::optional<Affine> affine() const;
  /// Store `a` as the sform (code 2, aligned) and drop the qform.
  void set_affine(const Affine& a);
};

struct NiftiWriteOptions {
  Endian endian = Endian::Little;
  /// Force gzip on or off; by default follows a ".gz" extension.
  std::optional<bool> gzip;
};

/// Reads .nii or .nii.gz. Throws FormatError naming the offending field, IoError on
/// filesystem failures.
NiftiImage read_nifti(const std::filesystem::path& path);

void write_nifti(const NiftiImage& image, const std::filesystem::path& path,
                 const NiftiWriteOptions& options = {});

/// Label map as int32 with slope 1 and intercept 0, carrying `reference`'s geometry when given.
NiftiImage label_image(const LabelField& labels, const NiftiImage* reference = nullptr);
/// Image from a float volume, carrying `reference`'s geometry when given.
NiftiImage volume_image(const Volume& volume, const NiftiImage* reference = nullptr);

/// Integer labels from an image; values must be integral.
std::vector<std::int32_t> integer_values(const NiftiImage& image);

/// Relabel arbitrary integer ids to dense [0, K) in order of first appearance.
LabelField compact_labels(const Dims& dims, const std::vector<std::int32_t>& ids);

}  // namespace seeds3d
