#include "seeds3d/nifti.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <unordered_map>

#include "seeds3d/error.hpp"

namespace seeds3d {
namespace {

constexpr std::size_t kHeaderSize = 348;
constexpr std::size_t kDataOffset = 352;  // header + 4-byte extension flag

bool host_is_little() { return std::endian::native == std::endian::little; }

std::size_t bytes_per_voxel(NiftiDatatype t) {
  switch (t) {
    case NiftiDatatype::UInt8: return 1;
    case NiftiDatatype::Int16:
    case NiftiDatatype::UInt16: return 2;
    case NiftiDatatype::Int32:
    case NiftiDatatype::Float32: return 4;
    case NiftiDatatype::Float64: return 8;
  }
  return 0;
}

bool known_datatype(std::int16_t code) {
  switch (code) {
    case 2: case 4: case 8: case 16: case 64: case 512: return true;
    default: return false;
  }
}

template <typename T>
T swap_bytes(T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  std::reverse(b, b + sizeof(T));
  std::memcpy(&v, b, sizeof(T));
  return v;
}

class Reader {
 public:
  Reader(const std::vector<unsigned char>& buf, bool swap) : buf_(buf), swap_(swap) {}
  template <typename T>
  T get(std::size_t off) const {
    T v;
    std::memcpy(&v, buf_.data() + off, sizeof(T));
    return swap_ ? swap_bytes(v) : v;
  }

 private:
  const std::vector<unsigned char>& buf_;
  bool swap_;
};

class Writer {
 public:
  Writer(std::vector<unsigned char>& buf, bool swap) : buf_(buf), swap_(swap) {}
  template <typename T>
  void put(std::size_t off, T v) {
    if (swap_) v = swap_bytes(v);
    std::memcpy(buf_.data() + off, &v, sizeof(T));
  }

 private:
  std::vector<unsigned char>& buf_;
  bool swap_;
};

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("cannot open " + path.string() + ": no such file");
  gzFile f = gzopen(path.c_str(), "rb");
  if (!f) throw IoError("cannot open " + path.string());
  gzbuffer(f, 1 << 18);
  std::vector<unsigned char> out;
  std::vector<unsigned char> chunk(1 << 20);
  for (;;) {
    const int n = gzread(f, chunk.data(), static_cast<unsigned>(chunk.size()));
    if (n < 0) {
      int code = 0;
      const std::string msg = gzerror(f, &code);
      gzclose(f);
      throw FormatError("corrupt gzip stream in " + path.string() + ": " + msg);
    }
    if (n == 0) break;
    out.insert(out.end(), chunk.begin(), chunk.begin() + n);
  }
  gzclose(f);
  return out;
}

bool wants_gzip(const std::filesystem::path& path, const NiftiWriteOptions& o) {
  if (o.gzip) return *o.gzip;
  return path.extension() == ".gz";
}

double decode_voxel(const unsigned char* p, NiftiDatatype t, bool swap) {
  auto load = [&](auto tag) {
    using T = decltype(tag);
    T v;
    std::memcpy(&v, p, sizeof(T));
    if (swap) v = swap_bytes(v);
    return static_cast<double>(v);
  };
  switch (t) {
    case NiftiDatatype::UInt8: return load(std::uint8_t{});
    case NiftiDatatype::Int16: return load(std::int16_t{});
    case NiftiDatatype::UInt16: return load(std::uint16_t{});
    case NiftiDatatype::Int32: return load(std::int32_t{});
    case NiftiDatatype::Float32: return load(float{});
    case NiftiDatatype::Float64: return load(double{});
  }
  return 0.0;
}

void encode_voxel(unsigned char* p, double v, NiftiDatatype t, bool swap) {
  auto store = [&](auto x) {
    if (swap) x = swap_bytes(x);
    std::memcpy(p, &x, sizeof(x));
  };
  switch (t) {
    case NiftiDatatype::UInt8: store(static_cast<std::uint8_t>(std::lround(v))); break;
    case NiftiDatatype::Int16: store(static_cast<std::int16_t>(std::lround(v))); break;
    case NiftiDatatype::UInt16: store(static_cast<std::uint16_t>(std::lround(v))); break;
    case NiftiDatatype::Int32: store(static_cast<std::int32_t>(std::lround(v))); break;
    case NiftiDatatype::Float32: store(static_cast<float>(v)); break;
    case NiftiDatatype::Float64: store(v); break;
  }
}

Affine qform_affine(const NiftiImage& img) {
  const double b = img.quatern[0], c = img.quatern[1], d = img.quatern[2];
  double a2 = 1.0 - (b * b + c * c + d * d);
  const double a = a2 > 1e-7 ? std::sqrt(a2) : 0.0;
  const double r[3][3] = {
      {a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c)},
      {2 * (b * c + a * d), a * a + c * c - b * b - d * d, 2 * (c * d - a * b)},
      {2 * (b * d - a * c), 2 * (c * d + a * b), a * a + d * d - c * c - b * b}};
  const double qfac = img.qfac < 0 ? -1.0 : 1.0;
  const double scale[3] = {img.pixdim[0], img.pixdim[1], qfac * img.pixdim[2]};
  Affine out{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out[i][j] = r[i][j] * scale[j];
    out[i][3] = img.qoffset[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace

std::vector<double> NiftiImage::decoded() const {
  if (scl_slope == 0.0) return raw;
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i] * scl_slope + scl_inter;
  return out;
}

Volume NiftiImage::to_volume() const {
  const auto values = decoded();
  std::vector<float> data(values.begin(), values.end());
  return Volume(dims, std::move(data), pixdim);
}

std::optional<Affine> NiftiImage::affine() const {
  if (sform_code > 0) return srow;
  if (qform_code > 0) return qform_affine(*this);
  return std::nullopt;
}

void NiftiImage::set_affine(const Affine& a) {
  srow = a;
  sform_code = 2;
  qform_code = 0;
  for (std::size_t j = 0; j < 3; ++j)
    pixdim[j] = std::sqrt(a[0][j] * a[0][j] + a[1][j] * a[1][j] + a[2][j] * a[2][j]);
}

NiftiImage read_nifti(const std::filesystem::path& path) {
  const std::vector<unsigned char> buf = slurp(path);
  const std::string where = path.string();
  if (buf.size() < kHeaderSize)
    throw FormatError(where + ": file shorter than the 348-byte header");

  std::int32_t sizeof_hdr;
  std::memcpy(&sizeof_hdr, buf.data(), 4);
  bool swap = false;
  if (sizeof_hdr != 348) {
    if (swap_bytes(sizeof_hdr) != 348)
      throw FormatError(where + ": bad sizeof_hdr " + std::to_string(sizeof_hdr) + " (expected 348)");
    swap = true;
  }
  const char* magic = reinterpret_cast<const char*>(buf.data() + 344);
  if (!(std::memcmp(magic, "n+1\0", 4) == 0 || std::memcmp(magic, "ni1\0", 4) == 0))
    throw FormatError(where + ": bad magic (expected \"n+1\" or \"ni1\")");
  const bool detached = std::memcmp(magic, "ni1\0", 4) == 0;

  const Reader r(buf, swap);
  NiftiImage img;
  const auto ndim = r.get<std::int16_t>(40);
  if (ndim < 1 || ndim > 7) throw FormatError(where + ": dim[0] = " + std::to_string(ndim) + " out of range");
  std::array<std::size_t, 3> ext{1, 1, 1};
  for (int i = 1; i <= ndim; ++i) {
    const auto d = r.get<std::int16_t>(40 + 2 * static_cast<std::size_t>(i));
    if (d < 1) throw FormatError(where + ": dim[" + std::to_string(i) + "] = " + std::to_string(d));
    if (i <= 3) ext[static_cast<std::size_t>(i - 1)] = static_cast<std::size_t>(d);
    else if (d > 1)
      throw FormatError(where + ": dim[" + std::to_string(i) + "] = " + std::to_string(d) +
                        "; only single-channel 3D volumes are supported");
  }
  img.dims = Dims(ext[0], ext[1], ext[2]);

  const auto code = r.get<std::int16_t>(70);
  if (!known_datatype(code)) throw FormatError(where + ": unsupported datatype " + std::to_string(code));
  img.datatype = static_cast<NiftiDatatype>(code);

  img.qfac = r.get<float>(76) < 0 ? -1.0 : 1.0;
  for (std::size_t j = 0; j < 3; ++j) img.pixdim[j] = r.get<float>(80 + 4 * j);
  const float vox_offset = r.get<float>(108);
  img.scl_slope = r.get<float>(112);
  img.scl_inter = r.get<float>(116);
  img.xyzt_units = buf[123];
  img.description.assign(reinterpret_cast<const char*>(buf.data() + 148),
                         strnlen(reinterpret_cast<const char*>(buf.data() + 148), 80));
  img.qform_code = r.get<std::int16_t>(252);
  img.sform_code = r.get<std::int16_t>(254);
  for (std::size_t j = 0; j < 3; ++j) {
    img.quatern[j] = r.get<float>(256 + 4 * j);
    img.qoffset[j] = r.get<float>(268 + 4 * j);
  }
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) img.srow[i][j] = r.get<float>(280 + 16 * i + 4 * j);

  // A detached header keeps its payload in the sibling .img file.
  std::vector<unsigned char> detached_payload;
  if (detached) {
    auto img_path = path;
    if (img_path.extension() == ".gz") img_path.replace_extension();
    img_path.replace_extension(".img");
    if (!std::filesystem::exists(img_path) && std::filesystem::exists(img_path.string() + ".gz"))
      img_path = img_path.string() + ".gz";
    detached_payload = slurp(img_path);
  } else if (!(vox_offset >= static_cast<float>(kHeaderSize))) {
    throw FormatError(where + ": vox_offset " + std::to_string(vox_offset) + " inside the header");
  }
  const std::vector<unsigned char>& data = detached ? detached_payload : buf;
  const auto offset = static_cast<std::size_t>(std::max(vox_offset, 0.0f));
  const std::size_t bpv = bytes_per_voxel(img.datatype);
  const std::size_t need = img.dims.size() * bpv;
  if (data.size() < offset + need)
    throw FormatError(where + ": truncated payload: expected " + std::to_string(need) + " bytes at offset " +
                      std::to_string(offset) + ", found " +
                      std::to_string(buf.size() > offset ? buf.size() - offset : 0));

  img.raw.resize(img.dims.size());
  const unsigned char* p = buf.data() + offset;
  for (std::size_t i = 0; i < img.raw.size(); ++i, p += bpv) img.raw[i] = decode_voxel(p, img.datatype, swap);
  return img;
}

void write_nifti(const NiftiImage& image, const std::filesystem::path& path,
                 const NiftiWriteOptions& options) {
  if (image.raw.size() != image.dims.size())
    throw LogicError("write_nifti: payload length does not match dims");
  for (int a = 0; a < 3; ++a)
    if (image.dims[a] > 32767) throw DomainError("write_nifti: extent exceeds the NIfTI-1 limit of 32767");

  const bool swap = (options.endian == Endian::Little) != host_is_little();
  const std::size_t bpv = bytes_per_voxel(image.datatype);
  std::vector<unsigned char> buf(kDataOffset + image.raw.size() * bpv, 0);
  Writer w(buf, swap);

  w.put<std::int32_t>(0, 348);
  buf[38] = 'r';  // regular
  w.put<std::int16_t>(40, 3);
  for (int i = 0; i < 3; ++i) w.put<std::int16_t>(42 + 2 * static_cast<std::size_t>(i), static_cast<std::int16_t>(image.dims[i]));
  for (std::size_t i = 4; i < 8; ++i) w.put<std::int16_t>(40 + 2 * i, 1);
  w.put<std::int16_t>(70, static_cast<std::int16_t>(image.datatype));
  w.put<std::int16_t>(72, static_cast<std::int16_t>(bpv * 8));
  w.put<float>(76, image.qfac < 0 ? -1.0f : 1.0f);
  for (std::size_t j = 0; j < 3; ++j) w.put<float>(80 + 4 * j, static_cast<float>(image.pixdim[j]));
  for (std::size_t j = 4; j < 8; ++j) w.put<float>(76 + 4 * j, 1.0f);
  w.put<float>(108, static_cast<float>(kDataOffset));
  w.put<float>(112, static_cast<float>(image.scl_slope));
  w.put<float>(116, static_cast<float>(image.scl_inter));
  buf[123] = image.xyzt_units;
  std::memcpy(buf.data() + 148, image.description.data(), std::min<std::size_t>(image.description.size(), 79));
  w.put<std::int16_t>(252, image.qform_code);
  w.put<std::int16_t>(254, image.sform_code);
  for (std::size_t j = 0; j < 3; ++j) {
    w.put<float>(256 + 4 * j, static_cast<float>(image.quatern[j]));
    w.put<float>(268 + 4 * j, static_cast<float>(image.qoffset[j]));
  }
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) w.put<float>(280 + 16 * i + 4 * j, static_cast<float>(image.srow[i][j]));
  std::memcpy(buf.data() + 344, "n+1\0", 4);

  unsigned char* p = buf.data() + kDataOffset;
  for (double v : image.raw) {
    encode_voxel(p, v, image.datatype, swap);
    p += bpv;
  }

  if (wants_gzip(path, options)) {
    gzFile f = gzopen(path.c_str(), "wb6");
    if (!f) throw IoError("cannot write " + path.string());
    const bool ok = gzwrite(f, buf.data(), static_cast<unsigned>(buf.size())) == static_cast<int>(buf.size());
    if (gzclose(f) != Z_OK || !ok) throw IoError("failed writing " + path.string());
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

namespace {

void copy_geometry(NiftiImage& dst, const NiftiImage* ref) {
  if (!ref) return;
  if (auto a = ref->affine(); a && ref->dims == dst.dims) {
    dst.pixdim = ref->pixdim;
    dst.qform_code = ref->qform_code;
    dst.sform_code = ref->sform_code;
    dst.quatern = ref->quatern;
    dst.qoffset = ref->qoffset;
    dst.qfac = ref->qfac;
    dst.srow = ref->srow;
    dst.xyzt_units = ref->xyzt_units;
  }
}

}  // namespace

NiftiImage label_image(const LabelField& labels, const NiftiImage* reference) {
  NiftiImage img;
  img.dims = labels.dims;
  img.datatype = NiftiDatatype::Int32;
  img.raw.assign(labels.labels.begin(), labels.labels.end());
  img.description = "supervoxel labels";
  copy_geometry(img, reference);
  return img;
}

NiftiImage volume_image(const Volume& volume, const NiftiImage* reference) {
  NiftiImage img;
  img.dims = volume.dims;
  img.datatype = NiftiDatatype::Float32;
  img.raw.assign(volume.data.begin(), volume.data.end());
  if (volume.spacing) img.pixdim = *volume.spacing;
  copy_geometry(img, reference);
  return img;
}

std::vector<std::int32_t> integer_values(const NiftiImage& image) {
  const auto values = image.decoded();
  std::vector<std::int32_t> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (v != std::nearbyint(v) || std::abs(v) > 2147483647.0)
      throw FormatError("voxel " + std::to_string(i) + " holds non-integer label " + std::to_string(v));
    out[i] = static_cast<std::int32_t>(v);
  }
  return out;
}

LabelField compact_labels(const Dims& dims, const std::vector<std::int32_t>& ids) {
  std::unordered_map<std::int32_t, std::int32_t> remap;
  std::vector<std::int32_t> dense(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto [it, fresh] = remap.try_emplace(ids[i], static_cast<std::int32_t>(remap.size()));
    dense[i] = it->second;
  }
  return LabelField(dims, std::move(dense), static_cast<std::int32_t>(remap.size()));
}

}  // namespace seeds3d
