#include "bhed/fock.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "bhed/error.hpp"

namespace bhed {

namespace {
constexpr std::size_t kSaturated = std::numeric_limits<std::size_t>::max();
}

CompositionTable::CompositionTable(int max_sites, int max_particles, int n_max)
    : max_sites_(max_sites), max_particles_(max_particles), n_max_(n_max) {
  const auto cols = static_cast<std::size_t>(max_particles + 1);
  table_.assign(static_cast<std::size_t>(max_sites + 1) * cols, 0);
  table_[0] = 1;
  for (int s = 1; s <= max_sites; ++s) {
    for (int p = 0; p <= max_particles; ++p) {
      std::size_t total = 0;
      for (int v = 0; v <= std::min(p, n_max); ++v) {
        const std::size_t c = table_[static_cast<std::size_t>(s - 1) * cols + static_cast<std::size_t>(p - v)];
        if (c == kSaturated || total > kSaturated - c) {
          total = kSaturated;
          break;
        }
        total += c;
      }
      table_[static_cast<std::size_t>(s) * cols + static_cast<std::size_t>(p)] = total;
    }
  }
}

std::size_t CompositionTable::count(int sites, int particles) const {
  if (sites < 0 || particles < 0 || sites > max_sites_ || particles > max_particles_) return 0;
  return table_[static_cast<std::size_t>(sites) * static_cast<std::size_t>(max_particles_ + 1) +
                static_cast<std::size_t>(particles)];
}

std::size_t CompositionTable::rank(std::span<const Occupation> occ, int particles) const {
  const int length = static_cast<int>(occ.size());
  std::size_t index = 0;
  int remaining = particles;
  for (int i = 0; i < length; ++i) {
    const int n = occ[static_cast<std::size_t>(i)];
    for (int v = 0; v < n; ++v) index += count(length - i - 1, remaining - v);
    remaining -= n;
  }
  return index;
}

void CompositionTable::unrank(std::size_t index, int particles, std::span<Occupation> out) const {
  const int length = static_cast<int>(out.size());
  int remaining = particles;
  for (int i = 0; i < length; ++i) {
    int v = 0;
    for (;; ++v) {
      const std::size_t c = count(length - i - 1, remaining - v);
      if (index < c) break;
      index -= c;
    }
    out[static_cast<std::size_t>(i)] = static_cast<Occupation>(v);
    remaining -= v;
  }
}

FockBasis::FockBasis(int sites, int particles, int n_max)
    : sites_(sites), particles_(particles), n_max_(n_max), dimension_(0) {
  if (sites < 2) throw InvalidArgument("FockBasis: need at least 2 sites, got " + std::to_string(sites));
  if (particles < 0) throw InvalidArgument("FockBasis: negative particle count");
  if (n_max < 1 || n_max > 255) throw InvalidArgument("FockBasis: n_max must lie in [1, 255]");
  if (static_cast<long long>(particles) > static_cast<long long>(sites) * n_max) {
    throw InvalidArgument("FockBasis: infeasible, N=" + std::to_string(particles) + " exceeds M*n_max=" +
                          std::to_string(static_cast<long long>(sites) * n_max));
  }
  table_ = CompositionTable(sites, particles, n_max);
  dimension_ = table_.count(sites, particles);
  if (dimension_ == 0) throw InvalidArgument("FockBasis: empty basis");
  if (dimension_ > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidArgument("FockBasis: dimension exceeds 32-bit index range");
  }
  states_.resize(dimension_ * static_cast<std::size_t>(sites));
  for (std::size_t k = 0; k < dimension_; ++k) {
    table_.unrank(k, particles, {states_.data() + k * static_cast<std::size_t>(sites), static_cast<std::size_t>(sites)});
  }
}

std::size_t FockBasis::rank(const FockConfig& config) const {
  if (static_cast<int>(config.occupations.size()) != sites_) {
    throw InvalidArgument("rank: configuration has " + std::to_string(config.occupations.size()) +
                          " sites, basis has " + std::to_string(sites_));
  }
  std::vector<Occupation> occ(config.occupations.size());
  int total = 0;
  for (std::size_t i = 0; i < occ.size(); ++i) {
    const int n = config.occupations[i];
    if (n < 0 || n > n_max_) {
      throw InvalidArgument("rank: occupation " + std::to_string(n) + " at site " + std::to_string(i + 1) +
                            " outside [0, " + std::to_string(n_max_) + "]");
    }
    occ[i] = static_cast<Occupation>(n);
    total += n;
  }
  if (total != particles_) {
    throw InvalidArgument("rank: configuration holds " + std::to_string(total) + " particles, basis has " +
                          std::to_string(particles_));
  }
  return table_.rank(occ, particles_);
}

FockConfig FockBasis::unrank(std::size_t index) const {
  if (index >= dimension_) {
    throw InvalidArgument("unrank: index " + std::to_string(index) + " out of range [0, " +
                          std::to_string(dimension_) + ")");
  }
  const auto occ = occupations(index);
  return FockConfig{std::vector<int>(occ.begin(), occ.end())};
}

FockBasis enumerate_basis(int sites, int particles, int n_max) { return FockBasis(sites, particles, n_max); }

}  // namespace bhed
