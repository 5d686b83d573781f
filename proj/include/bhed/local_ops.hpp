#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "bhed/fock.hpp"

namespace bhed {

using cplx = std::complex<double>;

/// coeff * b_to^+ b_from on 0-based sites; to == from gives coeff * n_site.
struct HopTerm {
  int to;
  int from;
  cplx coeff;
};

enum class OperatorSymmetry { Hermitian, AntiHermitian, General };

/// Few-body operator: a sum of single-boson hops plus a diagonal function of
/// the occupation vector. Matrix elements respect the basis occupation cap.
struct LocalOperator {
  std::vector<HopTerm> hops;
  std::function<double(std::span<const Occupation>)> diagonal;
  OperatorSymmetry symmetry = OperatorSymmetry::General;

  LocalOperator adjoint() const;
};

/// y = op * x over the basis. Gathers per output configuration so rows are
/// independent.
std::vector<cplx> apply_local(const FockBasis& basis, const LocalOperator& op, std::span<const cplx> x);

/// <x| op |x>
cplx expectation(const FockBasis& basis, const LocalOperator& op, std::span<const cplx> x);

/// Bond kinetic operator b_a^+ b_b + b_b^+ b_a scaled by `scale`.
LocalOperator bond_kinetic(int a, int b, cplx scale = 1.0);

}  // namespace bhed
