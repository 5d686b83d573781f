#include "bhed/entanglement.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>

#include "bhed/error.hpp"
#include "bhed/parallel.hpp"

namespace bhed {

namespace {

constexpr Eigen::Index kIterativeGramDim = 512;

std::uint64_t full_mask(int sites) { return sites >= 64 ? ~0ull : (1ull << sites) - 1; }

/// Amplitude matrix split into particle-number blocks: block k has rows
/// indexed by A-configurations with k bosons and columns by B-configurations
/// with N-k bosons.
std::vector<Eigen::MatrixXcd> schmidt_blocks(const GroundState& gs, const Bipartition& partition) {
  partition.validate();
  const FockBasis& basis = *gs.basis;
  if (partition.sites != basis.sites()) {
    throw InvalidArgument("bipartition defined for " + std::to_string(partition.sites) + " sites, state has " +
                          std::to_string(basis.sites()));
  }
  std::vector<std::size_t> a_sites;
  std::vector<std::size_t> b_sites;
  for (int i = 0; i < basis.sites(); ++i) {
    ((partition.mask >> i) & 1u ? a_sites : b_sites).push_back(static_cast<std::size_t>(i));
  }
  const CompositionTable& table = basis.table();
  const int n = basis.particles();
  const int na = static_cast<int>(a_sites.size());
  const int nb = static_cast<int>(b_sites.size());

  std::vector<Eigen::MatrixXcd> blocks(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) {
    const auto rows = static_cast<Eigen::Index>(table.count(na, k));
    const auto cols = static_cast<Eigen::Index>(table.count(nb, n - k));
    if (rows > 0 && cols > 0) blocks[static_cast<std::size_t>(k)] = Eigen::MatrixXcd::Zero(rows, cols);
  }
  std::vector<Occupation> occ_a(a_sites.size());
  std::vector<Occupation> occ_b(b_sites.size());
  for (std::size_t s = 0; s < basis.dimension(); ++s) {
    const auto occ = basis.occupations(s);
    int k = 0;
    for (std::size_t i = 0; i < a_sites.size(); ++i) k += occ_a[i] = occ[a_sites[i]];
    for (std::size_t i = 0; i < b_sites.size(); ++i) occ_b[i] = occ[b_sites[i]];
    const auto row = static_cast<Eigen::Index>(table.rank(occ_a, k));
    const auto col = static_cast<Eigen::Index>(table.rank(occ_b, n - k));
    blocks[static_cast<std::size_t>(k)](row, col) = gs.amplitudes[s];
  }
  return blocks;
}

/// Eigenvalues of B B^+ (or B^+ B, whichever is smaller), ascending.
Eigen::VectorXd gram_eigenvalues(const Eigen::MatrixXcd& block) {
  const Eigen::MatrixXcd gram =
      block.rows() <= block.cols() ? Eigen::MatrixXcd(block * block.adjoint()) : Eigen::MatrixXcd(block.adjoint() * block);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
  return eig.eigenvalues();
}

double top_weight_iterative(const Eigen::MatrixXcd& block) {
  const bool left = block.rows() <= block.cols();
  const Eigen::Index dim = left ? block.rows() : block.cols();
  // Largest eigenvalue of the Gram matrix as the lowest of its negative.
  const LinearMap map = [&](std::span<const cplx> x, std::span<cplx> y) {
    const Eigen::Map<const Eigen::VectorXcd> in(x.data(), dim);
    Eigen::Map<Eigen::VectorXcd> out(y.data(), dim);
    if (left) {
      out.noalias() = -(block * (block.adjoint() * in));
    } else {
      out.noalias() = -(block.adjoint() * (block * in));
    }
  };
  SolverOptions options;
  options.tol = 1e-13;
  options.seed = 7;
  options.max_iter = 100000;
  return -lowest_eigenpair(map, static_cast<std::size_t>(dim), options).value;
}

double block_top_weight(const Eigen::MatrixXcd& block, TopSingularPath path) {
  if (block.size() == 0) return 0.0;
  const bool iterative = path == TopSingularPath::Iterative ||
                         (path == TopSingularPath::Auto && std::min(block.rows(), block.cols()) > kIterativeGramDim);
  if (iterative && std::min(block.rows(), block.cols()) > 1) return top_weight_iterative(block);
  return gram_eigenvalues(block).maxCoeff();
}

}  // namespace

Bipartition Bipartition::from_sites(int sites, const std::vector<int>& subset_a) {
  Bipartition p;
  p.sites = sites;
  for (const int s : subset_a) {
    if (s < 1 || s > sites || s > 64) throw InvalidArgument("bipartition site " + std::to_string(s) + " out of range");
    p.mask |= 1ull << (s - 1);
  }
  p.validate();
  return p;
}

Bipartition Bipartition::complement() const { return {full_mask(sites) & ~mask, sites}; }

Bipartition Bipartition::canonicalized() const { return canonical() ? *this : complement(); }

std::vector<int> Bipartition::subset_a() const {
  std::vector<int> out;
  for (int i = 0; i < sites; ++i) {
    if ((mask >> i) & 1u) out.push_back(i + 1);
  }
  return out;
}

void Bipartition::validate() const {
  if (sites < 2 || sites > 64) throw InvalidArgument("bipartition needs 2..64 sites");
  if ((mask & ~full_mask(sites)) != 0) throw InvalidArgument("bipartition references sites beyond the chain");
  if (mask == 0 || mask == full_mask(sites)) {
    throw InvalidArgument("bipartition subset A must be a non-empty proper subset");
  }
}

SchmidtSpectrum schmidt_spectrum(const GroundState& gs, const Bipartition& partition) {
  SchmidtSpectrum spectrum;
  for (const auto& block : schmidt_blocks(gs, partition)) {
    if (block.size() == 0) continue;
    const Eigen::VectorXd ev = gram_eigenvalues(block);
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      double lambda = ev(i);
      if (lambda < -1e-12) throw Error("schmidt_spectrum: negative reduced-state eigenvalue");
      spectrum.eigenvalues.push_back(std::max(lambda, 0.0));
    }
  }
  std::sort(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end(), std::greater<>());
  for (const double lambda : spectrum.eigenvalues) {
    if (lambda > 0.0) spectrum.entropy -= lambda * std::log(lambda);
  }
  spectrum.entropy = std::max(spectrum.entropy, 0.0);
  spectrum.lambda_max_sq = spectrum.eigenvalues.empty() ? 0.0 : spectrum.eigenvalues.front();
  return spectrum;
}

double half_chain_entropy(const GroundState& gs) {
  const int m = gs.sites();
  if (m % 2 != 0) throw InvalidArgument("half_chain_entropy: needs even M, got " + std::to_string(m));
  std::vector<int> left(static_cast<std::size_t>(m / 2));
  for (int i = 0; i < m / 2; ++i) left[static_cast<std::size_t>(i)] = i + 1;
  return schmidt_spectrum(gs, Bipartition::from_sites(m, left)).entropy;
}

double top_schmidt_weight(const GroundState& gs, const Bipartition& partition, TopSingularPath path) {
  double best = 0.0;
  for (const auto& block : schmidt_blocks(gs, partition)) best = std::max(best, block_top_weight(block, path));
  return best;
}

GgmScope parse_ggm_scope(const std::string& text) {
  if (text == "all") return GgmScope::All;
  if (text == "contiguous+parity" || text == "contiguous") return GgmScope::ContiguousParity;
  throw InvalidArgument("unknown ggm scope '" + text + "' (expected all or contiguous+parity)");
}

std::string to_string(GgmScope scope) { return scope == GgmScope::All ? "all" : "contiguous+parity"; }

std::vector<Bipartition> enumerate_bipartitions(int sites, GgmScope scope) {
  if (sites < 2 || sites > 63) throw InvalidArgument("enumerate_bipartitions: needs 2..63 sites");
  std::vector<Bipartition> out;
  if (scope == GgmScope::All) {
    const std::uint64_t full = full_mask(sites);
    for (std::uint64_t mask = 1; mask < full; mask += 2) out.push_back({mask, sites});
    return out;
  }
  std::set<std::uint64_t> masks;
  for (int a = 0; a < sites; ++a) {
    for (int b = a; b < sites; ++b) {
      const std::uint64_t block = full_mask(b - a + 1) << a;
      if (block == full_mask(sites)) continue;
      masks.insert(Bipartition{block, sites}.canonicalized().mask);
    }
  }
  std::uint64_t odd = 0;
  for (int i = 0; i < sites; i += 2) odd |= 1ull << i;
  masks.insert(odd);
  for (const auto mask : masks) out.push_back({mask, sites});
  return out;
}

GgmResult ggm(const GroundState& gs, GgmScope scope, int ceiling) {
  const int m = gs.sites();
  if (scope == GgmScope::All && m > ceiling) {
    throw InvalidArgument("ggm: scope=all enumerates 2^(M-1)-1 bipartitions and is limited to M <= " +
                          std::to_string(ceiling) + " (M = " + std::to_string(m) +
                          "); use scope contiguous+parity for an approximation");
  }
  const auto partitions = enumerate_bipartitions(m, scope);
  std::vector<double> weights(partitions.size());
  parallel_for(partitions.size(), 16, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) weights[i] = top_schmidt_weight(gs, partitions[i]);
  });
  const double best = *std::max_element(weights.begin(), weights.end());
  std::size_t pick = 0;
  while (weights[pick] < best - 1e-12) ++pick;
  GgmResult result;
  result.lambda_max_sq = best;
  result.value = std::max(0.0, 1.0 - best);
  result.argmax = partitions[pick];
  return result;
}

}  // namespace bhed
