#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bhed/fock.hpp"

namespace bhed {

using cplx = std::complex<double>;

enum class Boundary { Open, Periodic };

std::string to_string(Boundary b);
Boundary parse_boundary(const std::string& text);

/// Parameters of the frustrated Bose-Hubbard chain
///   H = -t1 sum_<ij> (b_i^+ b_j + h.c.) - t2 sum_<<ij>> (b_i^+ b_j + h.c.)
///       + U/2 sum_i n_i (n_i - 1).
struct CouplingParams {
  double t1 = 1.0;
  double t2 = -1.0;
  double U = 0.0;
  Boundary boundary = Boundary::Open;
  bool hardcore = false;
  int n_max = 1;

  /// Throws InvalidArgument for non-finite amplitudes or hardcore with n_max != 1.
  void validate() const;
};

/// Exchange constants of the equivalent XX J1-J2 spin chain.
struct SpinCouplings {
  double J1;
  double J2;
};

SpinCouplings hardcore_spin_couplings(const CouplingParams& params);

struct Triplet {
  std::size_t row;
  std::size_t col;
  cplx value;
};

/// Square sparse matrix in CSR layout over a Fock basis.
class SparseOperator {
 public:
  SparseOperator() = default;

  /// Sorts entries, sums duplicates and drops exact zeros.
  static SparseOperator from_triplets(std::size_t dimension, std::vector<Triplet> entries, bool hermitian);

  std::size_t dimension() const noexcept { return dimension_; }
  bool hermitian() const noexcept { return hermitian_; }
  std::size_t nonzeros() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::uint32_t> cols() const noexcept { return cols_; }
  std::span<const cplx> values() const noexcept { return values_; }

  /// Entry (row, col); zero when not stored.
  cplx at(std::size_t row, std::size_t col) const;

 private:
  std::size_t dimension_ = 0;
  bool hermitian_ = false;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> cols_;
  std::vector<cplx> values_;
};

/// Site pairs (0-based, first < second unless wrapped) coupled at `distance`
/// (1 = nearest, 2 = next-nearest) under the given boundary.
std::vector<std::pair<int, int>> chain_bonds(int sites, int distance, Boundary boundary);

/// Assembles H in the basis. Rejects periodic chains with fewer than 5 sites
/// (the next-nearest wrap would double count) and a basis whose n_max differs
/// from params.n_max.
SparseOperator build_hamiltonian(const FockBasis& basis, const CouplingParams& params);

/// y = op * x
std::vector<cplx> apply(const SparseOperator& op, std::span<const cplx> x);
void apply_into(const SparseOperator& op, std::span<const cplx> x, std::span<cplx> y);

}  // namespace bhed
