#include "bhed/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bhed/error.hpp"
#include "bhed/kernels.hpp"
#include "bhed/parallel.hpp"

namespace bhed {

std::string to_string(Boundary b) { return b == Boundary::Open ? "open" : "periodic"; }

Boundary parse_boundary(const std::string& text) {
  if (text == "open" || text == "obc") return Boundary::Open;
  if (text == "periodic" || text == "pbc") return Boundary::Periodic;
  throw InvalidArgument("unknown boundary '" + text + "' (expected open or periodic)");
}

void CouplingParams::validate() const {
  if (!std::isfinite(t1) || !std::isfinite(t2) || !std::isfinite(U)) {
    throw InvalidArgument("coupling amplitudes must be finite");
  }
  if (n_max < 1) throw InvalidArgument("n_max must be at least 1");
  if (hardcore && n_max != 1) {
    throw InvalidArgument("hardcore bosons require n_max = 1, got " + std::to_string(n_max));
  }
}

SpinCouplings hardcore_spin_couplings(const CouplingParams& params) {
  return {-2.0 * params.t1, -2.0 * params.t2};
}

SparseOperator SparseOperator::from_triplets(std::size_t dimension, std::vector<Triplet> entries, bool hermitian) {
  if (dimension > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidArgument("SparseOperator: dimension exceeds 32-bit column range");
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseOperator op;
  op.dimension_ = dimension;
  op.hermitian_ = hermitian;
  op.row_ptr_.assign(dimension + 1, 0);
  op.cols_.reserve(entries.size());
  op.values_.reserve(entries.size());
  std::size_t i = 0;
  while (i < entries.size()) {
    const std::size_t row = entries[i].row;
    const std::size_t col = entries[i].col;
    if (row >= dimension || col >= dimension) throw InvalidArgument("SparseOperator: entry outside matrix");
    cplx sum = 0.0;
    while (i < entries.size() && entries[i].row == row && entries[i].col == col) sum += entries[i++].value;
    if (sum == cplx{0.0, 0.0}) continue;
    op.cols_.push_back(static_cast<std::uint32_t>(col));
    op.values_.push_back(sum);
    ++op.row_ptr_[row + 1];
  }
  for (std::size_t r = 0; r < dimension; ++r) op.row_ptr_[r + 1] += op.row_ptr_[r];
  return op;
}

cplx SparseOperator::at(std::size_t row, std::size_t col) const {
  if (row >= dimension_ || col >= dimension_) throw InvalidArgument("SparseOperator::at: index out of range");
  const auto begin = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row]);
  const auto end = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row + 1]);
  const auto it = std::lower_bound(begin, end, static_cast<std::uint32_t>(col));
  if (it == end || *it != col) return {0.0, 0.0};
  return values_[static_cast<std::size_t>(it - cols_.begin())];
}

std::vector<std::pair<int, int>> chain_bonds(int sites, int distance, Boundary boundary) {
  std::vector<std::pair<int, int>> bonds;
  for (int i = 0; i + distance < sites; ++i) bonds.emplace_back(i, i + distance);
  if (boundary == Boundary::Periodic) {
    for (int i = sites - distance; i < sites; ++i) bonds.emplace_back(i, (i + distance) % sites);
  }
  return bonds;
}

SparseOperator build_hamiltonian(const FockBasis& basis, const CouplingParams& params) {
  params.validate();
  if (basis.n_max() != params.n_max) {
    throw InvalidArgument("build_hamiltonian: basis n_max " + std::to_string(basis.n_max()) +
                          " does not match params n_max " + std::to_string(params.n_max));
  }
  const int m = basis.sites();
  if (params.boundary == Boundary::Periodic && m < 5) {
    throw InvalidArgument("build_hamiltonian: periodic chains need at least 5 sites, got " + std::to_string(m));
  }

  struct Hop {
    int a;
    int b;
    double t;
  };
  std::vector<Hop> hops;
  for (const auto& [a, b] : chain_bonds(m, 1, params.boundary)) hops.push_back({a, b, params.t1});
  for (const auto& [a, b] : chain_bonds(m, 2, params.boundary)) hops.push_back({a, b, params.t2});

  const int cap = basis.n_max();
  std::vector<Triplet> entries;
  entries.reserve(basis.dimension() * (1 + 2 * hops.size()) / 2);
  std::vector<Occupation> scratch(static_cast<std::size_t>(m));
  for (std::size_t src = 0; src < basis.dimension(); ++src) {
    const auto occ = basis.occupations(src);
    double diagonal = 0.0;
    for (const Occupation n : occ) diagonal += 0.5 * params.U * n * (n - 1);
    if (diagonal != 0.0) entries.push_back({src, src, diagonal});

    for (const Hop& hop : hops) {
      if (hop.t == 0.0) continue;
      // Both directions of the bond: move one boson from -> to.
      for (const auto& [from, to] : {std::pair{hop.a, hop.b}, std::pair{hop.b, hop.a}}) {
        const int n_from = occ[static_cast<std::size_t>(from)];
        const int n_to = occ[static_cast<std::size_t>(to)];
        if (n_from == 0 || n_to == cap) continue;
        std::copy(occ.begin(), occ.end(), scratch.begin());
        --scratch[static_cast<std::size_t>(from)];
        ++scratch[static_cast<std::size_t>(to)];
        const std::size_t dst = basis.index_of(scratch);
        entries.push_back({dst, src, -hop.t * std::sqrt(static_cast<double>(n_from) * (n_to + 1))});
      }
    }
  }
  return SparseOperator::from_triplets(basis.dimension(), std::move(entries), true);
}

void apply_into(const SparseOperator& op, std::span<const cplx> x, std::span<cplx> y) {
  if (x.size() != op.dimension() || y.size() != op.dimension()) {
    throw InvalidArgument("apply: vector length " + std::to_string(x.size()) + " does not match dimension " +
                          std::to_string(op.dimension()));
  }
  const auto& k = kernels::active();
  parallel_for(op.dimension(), 16384, [&](std::size_t begin, std::size_t end) {
    k.csr_matvec(op.row_ptr().data(), op.cols().data(), op.values().data(), x.data(), y.data(), begin, end);
  });
}

std::vector<cplx> apply(const SparseOperator& op, std::span<const cplx> x) {
  std::vector<cplx> y(op.dimension());
  apply_into(op, x, y);
  return y;
}

}  // namespace bhed
