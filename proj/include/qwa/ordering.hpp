#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "qwa/instance.hpp"

namespace qwa {

/// Sweep order for DMRG: slot k of the 1D chain holds spin order()[k].
class SitePath {
 public:
  /// Throws InvalidInputError unless order is a permutation of 0..n-1.
  explicit SitePath(std::vector<int> order);

  int size() const { return static_cast<int>(order_.size()); }
  std::span<const int> order() const { return order_; }
  int spin_at(int slot) const { return order_[static_cast<std::size_t>(slot)]; }
  int slot_of(int spin) const { return position_[static_cast<std::size_t>(spin)]; }

  bool operator==(const SitePath& other) const { return order_ == other.order_; }

 private:
  std::vector<int> order_;
  std::vector<int> position_;
};

SitePath identity_path(int n);

/// Reverse Cuthill-McKee style layering: each connected component is laid
/// out contiguously by breadth-first search from a pseudo-peripheral vertex,
/// neighbors visited by (degree, index). Several peripheral starts are tried
/// and the narrowest layout kept; the identity is returned when it is
/// strictly narrower than every candidate.
SitePath heuristic_path(const GraphInstance& inst);

/// max over edges of |slot(i) - slot(j)|; 0 for an edgeless instance.
int bandwidth(const GraphInstance& inst, const SitePath& path);

/// Parses "2,0,1" into a SitePath.
SitePath parse_path(std::string_view text);

}  // namespace qwa
