#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "bhed/correlators.hpp"
#include "bhed/eigensolver.hpp"

namespace bhed {

/// Site pairs (2i-1, 2i), i = 1..M/2, 1-based.
struct DimerPairing {
  std::vector<std::pair<int, int>> pairs;

  static DimerPairing odd_even(int sites);
};

/// prod_{i=1}^{M/2} (b^+_{2i-1} + b^+_{2i}) / sqrt(2) |0> in the hard-core
/// basis (N = M/2, n_max = 1): 2^(M/2) equal amplitudes 2^(-M/4).
GroundState perfect_dimer_state(int sites);

/// Same amplitudes in a basis with a larger occupation cap, zero elsewhere.
GroundState embed_state(const GroundState& state, std::shared_ptr<const FockBasis> target);

// Closed forms for the perfect dimer state (M even, M >= 8), current-bond
// xy operator, per-Delta values normalized by the number of terms.

/// -3/8 (Delta = 0), (5M-14)/(16(M-3)) (|Delta| = 1), -(1/4)(-1)^|Delta| otherwise.
double dimer_xy_delta_closed(int sites, int delta);

/// 1/8 (Delta = 0), -(3M-8)/(32(M-3)) (|Delta| = 1), (1/16)(-1)^|Delta| otherwise.
double dimer_zz_delta_closed(int sites, int delta);

/// xy: 1/(8(M-3)); zz: (2-M) / (16 (2M-5)(M-3)).
double dimer_average_closed(int sites, DimerChannel channel);

}  // namespace bhed
