#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "seeds3d/types.hpp"

namespace seeds3d {

struct EnergyContext {
  std::int32_t prior_weight = 2;  // exponent on the boundary term
  std::int32_t num_bins = 15;
};

/// Sum over bins of min(a[j], b[j]). Throws DomainError on a length mismatch.
std::int64_t intersection(const Histogram& a, const Histogram& b);
std::int64_t intersection(std::span<const std::int32_t> a, std::span<const std::int32_t> b) noexcept;

/// Count of cells labeled `owner` in the box that reaches one cell behind and two
/// cells ahead of (x, y, z) along `direction`, and one cell to either side on every
/// other axis. The candidate and the cell directly ahead of it (the recipient's
/// boundary cell) are never counted. Out-of-range cells count as zero, so on a
/// single-slice grid the box degenerates to the 3x4 window.
std::int32_t boundary_count(std::span<const std::int32_t> labels, const Dims& dims, std::size_t x,
                            std::size_t y, std::size_t z, Direction direction,
                            std::int32_t owner) noexcept;
std::int32_t boundary_count(const LabelField& labels, std::size_t x, std::size_t y, std::size_t z,
                            Direction direction, std::int32_t owner);

/// N * hist[candidate_bin].
std::int64_t boundary_term(std::int64_t neighbor_count, const Histogram& hist,
                           std::size_t candidate_bin);

/// Same-owner neighbor counts on both sides of a single-voxel move.
struct BoundaryPair {
  std::int64_t donor_count = 0;
  std::int64_t recipient_count = 0;
  std::size_t candidate_bin = 0;
};

/// The two factors of one side's energy, H * G^lambda. G is 1 for block moves.
struct EnergyTerms {
  std::int64_t color = 0;
  std::int64_t boundary = 1;
  friend bool operator==(const EnergyTerms&, const EnergyTerms&) = default;
};

/// Energies of keeping the part with the donor and of handing it to the recipient.
struct TransferEnergies {
  EnergyTerms retain;
  EnergyTerms transfer;
  friend bool operator==(const TransferEnergies&, const TransferEnergies&) = default;
};

/// Exact test a.color * a.boundary^lambda < b.color * b.boundary^lambda.
bool energy_less(const EnergyTerms& a, const EnergyTerms& b, std::int32_t prior_weight);

TransferEnergies transfer_energies(const EnergyContext& ctx, const Histogram& part,
                                   const Histogram& donor_minus, const Histogram& recipient,
                                   const std::optional<BoundaryPair>& boundary);

/// Hill-climbing acceptance: the move is taken only if the retention energy is
/// strictly below the transfer energy. `boundary` must be given exactly for
/// single-voxel parts; supplying it for a larger part is a LogicError.
bool accept_transfer(const EnergyContext& ctx, const Histogram& part, const Histogram& donor_minus,
                     const Histogram& recipient, const std::optional<BoundaryPair>& boundary);

}  // namespace seeds3d
