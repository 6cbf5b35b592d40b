#include "seeds3d/energy.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "seeds3d/error.hpp"

namespace seeds3d {
namespace {

__extension__ using Wide = unsigned __int128;

// base^exp in 128 bits; false on overflow.
bool checked_pow(std::uint64_t base, std::int32_t exp, Wide& out) {
  Wide r = 1;
  for (std::int32_t i = 0; i < exp; ++i)
    if (__builtin_mul_overflow(r, static_cast<Wide>(base), &r)) return false;
  out = r;
  return true;
}

bool checked_energy(const EnergyTerms& t, std::int32_t lambda, Wide& out) {
  Wide p;
  if (!checked_pow(static_cast<std::uint64_t>(t.boundary), lambda, p)) return false;
  return !__builtin_mul_overflow(static_cast<Wide>(t.color), p, &out);
}

boost::multiprecision::cpp_int exact_energy(const EnergyTerms& t, std::int32_t lambda) {
  boost::multiprecision::cpp_int g = t.boundary;
  return boost::multiprecision::cpp_int(t.color) *
         boost::multiprecision::pow(g, static_cast<unsigned>(lambda));
}

}  // namespace

std::int64_t intersection(const Histogram& a, const Histogram& b) {
  if (a.bins.size() != b.bins.size())
    throw DomainError("histogram length mismatch: " + std::to_string(a.bins.size()) + " vs " +
                      std::to_string(b.bins.size()));
  std::int64_t sum = 0;
  for (std::size_t j = 0; j < a.bins.size(); ++j) sum += std::min(a.bins[j], b.bins[j]);
  return sum;
}

std::int64_t intersection(std::span<const std::int32_t> a, std::span<const std::int32_t> b) noexcept {
  std::int64_t sum = 0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t j = 0; j < n; ++j) sum += std::min(a[j], b[j]);
  return sum;
}

std::int32_t boundary_count(std::span<const std::int32_t> labels, const Dims& dims, std::size_t x,
                            std::size_t y, std::size_t z, Direction direction,
                            std::int32_t owner) noexcept {
  const int axis = axis_of(direction);
  const int sign = sign_of(direction);
  const std::array<std::ptrdiff_t, 3> at{static_cast<std::ptrdiff_t>(x), static_cast<std::ptrdiff_t>(y),
                                         static_cast<std::ptrdiff_t>(z)};
  const int u = (axis + 1) % 3, v = (axis + 2) % 3;
  std::int32_t count = 0;
  for (int t = -1; t <= 2; ++t) {
    std::array<std::ptrdiff_t, 3> c = at;
    c[axis] += sign * t;
    if (c[axis] < 0 || c[axis] >= static_cast<std::ptrdiff_t>(dims[axis])) continue;
    for (int du = -1; du <= 1; ++du) {
      const std::ptrdiff_t cu = at[u] + du;
      if (cu < 0 || cu >= static_cast<std::ptrdiff_t>(dims[u])) continue;
      for (int dv = -1; dv <= 1; ++dv) {
        const std::ptrdiff_t cv = at[v] + dv;
        if (cv < 0 || cv >= static_cast<std::ptrdiff_t>(dims[v])) continue;
        if (du == 0 && dv == 0 && (t == 0 || t == 1)) continue;
        c[u] = cu;
        c[v] = cv;
        count += labels[dims.index(static_cast<std::size_t>(c[0]), static_cast<std::size_t>(c[1]),
                                   static_cast<std::size_t>(c[2]))] == owner;
      }
    }
  }
  return count;
}

std::int32_t boundary_count(const LabelField& labels, std::size_t x, std::size_t y, std::size_t z,
                            Direction direction, std::int32_t owner) {
  if (x >= labels.dims[0] || y >= labels.dims[1] || z >= labels.dims[2])
    throw DomainError("boundary_count: voxel out of bounds");
  return boundary_count(labels.labels, labels.dims, x, y, z, direction, owner);
}

std::int64_t boundary_term(std::int64_t neighbor_count, const Histogram& hist,
                           std::size_t candidate_bin) {
  return neighbor_count * hist.bins.at(candidate_bin);
}

bool energy_less(const EnergyTerms& a, const EnergyTerms& b, std::int32_t prior_weight) {
  Wide ea, eb;
  if (checked_energy(a, prior_weight, ea) && checked_energy(b, prior_weight, eb)) return ea < eb;
  return exact_energy(a, prior_weight) < exact_energy(b, prior_weight);
}

TransferEnergies transfer_energies(const EnergyContext& ctx, const Histogram& part,
                                   const Histogram& donor_minus, const Histogram& recipient,
                                   const std::optional<BoundaryPair>& boundary) {
  if (part.bins.size() != static_cast<std::size_t>(ctx.num_bins))
    throw DomainError("part histogram does not have num_bins bins");
  TransferEnergies e;
  e.retain.color = intersection(donor_minus, part);
  e.transfer.color = intersection(recipient, part);
  if (boundary) {
    if (part.total != 1) throw LogicError("boundary term supplied for a multi-voxel part");
    const std::size_t j = boundary->candidate_bin;
    // Both sides see the pre-move state: the donor still holds the candidate.
    e.retain.boundary = boundary->donor_count * (donor_minus.bins.at(j) + part.bins.at(j));
    e.transfer.boundary = boundary_term(boundary->recipient_count, recipient, j);
  }
  return e;
}

bool accept_transfer(const EnergyContext& ctx, const Histogram& part, const Histogram& donor_minus,
                     const Histogram& recipient, const std::optional<BoundaryPair>& boundary) {
  const TransferEnergies e = transfer_energies(ctx, part, donor_minus, recipient, boundary);
  if (!boundary) return e.retain.color < e.transfer.color;
  return energy_less(e.retain, e.transfer, ctx.prior_weight);
}

}  // namespace seeds3d
