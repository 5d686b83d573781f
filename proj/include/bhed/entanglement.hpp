#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bhed/eigensolver.hpp"

namespace bhed {

/// A:B split of the chain. Bit i of `mask` marks site i+1 as belonging to A.
struct Bipartition {
  std::uint64_t mask = 0;
  int sites = 0;

  /// From 1-based site indices of A.
  static Bipartition from_sites(int sites, const std::vector<int>& subset_a);

  /// Canonical form contains site 1 (complement taken otherwise).
  bool canonical() const { return (mask & 1u) != 0; }
  Bipartition canonicalized() const;
  Bipartition complement() const;
  std::vector<int> subset_a() const;  ///< 1-based, ascending

  /// Throws unless A is a non-empty proper subset of the chain.
  void validate() const;

  friend bool operator==(const Bipartition&, const Bipartition&) = default;
};

/// Eigenvalues of the reduced state rho_A, descending.
struct SchmidtSpectrum {
  std::vector<double> eigenvalues;
  double entropy = 0.0;
  double lambda_max_sq = 0.0;
};

SchmidtSpectrum schmidt_spectrum(const GroundState& gs, const Bipartition& partition);

/// Von Neumann entropy of the left half {1..M/2}; M must be even.
double half_chain_entropy(const GroundState& gs);

/// How the largest squared Schmidt coefficient of one number-sector block is
/// obtained. Auto goes iterative when both block dimensions exceed 512.
enum class TopSingularPath { Auto, Dense, Iterative };

/// Largest eigenvalue of rho_A (max over particle-number blocks).
double top_schmidt_weight(const GroundState& gs, const Bipartition& partition,
                          TopSingularPath path = TopSingularPath::Auto);

enum class GgmScope { All, ContiguousParity };

GgmScope parse_ggm_scope(const std::string& text);
std::string to_string(GgmScope scope);

struct GgmResult {
  double value = 0.0;  ///< 1 - max lambda^2
  double lambda_max_sq = 0.0;
  Bipartition argmax;
};

/// Canonical bipartitions in the given scope, ascending by mask.
/// All: every subset containing site 1 except the whole chain (2^(M-1)-1).
/// ContiguousParity: A or B a contiguous block, plus the odd/even-site split.
std::vector<Bipartition> enumerate_bipartitions(int sites, GgmScope scope);

/// Generalized geometric measure. Maximizer ties (within 1e-12) resolve to the
/// smallest mask. Scope All is refused above `ceiling` sites.
GgmResult ggm(const GroundState& gs, GgmScope scope = GgmScope::All, int ceiling = 16);

}  // namespace bhed
