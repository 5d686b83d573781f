#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bhed {

using Occupation = std::uint8_t;

/// Occupation numbers of one Fock configuration, site 1 first.
struct FockConfig {
  std::vector<int> occupations;

  friend bool operator==(const FockConfig&, const FockConfig&) = default;
  friend auto operator<=>(const FockConfig&, const FockConfig&) = default;
};

/// Counts of bounded compositions: count(s, p) is the number of ways to put
/// p bosons on s sites with at most n_max per site. Shared by the full basis
/// and by every subsystem basis used in Schmidt decompositions.
class CompositionTable {
 public:
  CompositionTable() = default;
  CompositionTable(int max_sites, int max_particles, int n_max);

  std::size_t count(int sites, int particles) const;
  int n_max() const noexcept { return n_max_; }
  int max_sites() const noexcept { return max_sites_; }
  int max_particles() const noexcept { return max_particles_; }

  /// Lexicographic rank of `occ` among configurations of occ.size() sites
  /// holding `particles` bosons. The caller guarantees the sum matches.
  std::size_t rank(std::span<const Occupation> occ, int particles) const;
  void unrank(std::size_t index, int particles, std::span<Occupation> out) const;

 private:
  int max_sites_ = 0;
  int max_particles_ = 0;
  int n_max_ = 0;
  std::vector<std::size_t> table_;  // (max_sites+1) x (max_particles+1)
};

/// Particle-number conserving bosonic Fock space with an occupation cap.
///
/// States are ordered ascending-lexicographically on the occupation vector,
/// site 1 most significant: for (M=3, N=2, n_max=2) the order is
/// (0,0,2) (0,1,1) (0,2,0) (1,0,1) (1,1,0) (2,0,0).
/// Immutable after construction.
class FockBasis {
 public:
  FockBasis(int sites, int particles, int n_max);

  int sites() const noexcept { return sites_; }
  int particles() const noexcept { return particles_; }
  int n_max() const noexcept { return n_max_; }
  std::size_t dimension() const noexcept { return dimension_; }

  /// Occupations of state `index` without copying.
  std::span<const Occupation> occupations(std::size_t index) const {
    return {states_.data() + index * static_cast<std::size_t>(sites_),
            static_cast<std::size_t>(sites_)};
  }

  /// O(M) ranking of a raw occupation vector already known to be valid.
  std::size_t index_of(std::span<const Occupation> occ) const {
    return table_.rank(occ, particles_);
  }

  std::size_t rank(const FockConfig& config) const;
  FockConfig unrank(std::size_t index) const;

  const CompositionTable& table() const noexcept { return table_; }

 private:
  int sites_;
  int particles_;
  int n_max_;
  std::size_t dimension_;
  CompositionTable table_;
  std::vector<Occupation> states_;
};

/// Builds the basis, validating M >= 2, N >= 0, n_max >= 1 and N <= M*n_max.
FockBasis enumerate_basis(int sites, int particles, int n_max);

/// Soft-core default occupation cap.
inline int default_n_max(int particles) { return particles < 1 ? 1 : (particles < 5 ? particles : 5); }

}  // namespace bhed
