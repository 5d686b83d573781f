#include "bhed/local_ops.hpp"

#include <cmath>
#include <string>

#include "bhed/error.hpp"
#include "bhed/kernels.hpp"
#include "bhed/parallel.hpp"

namespace bhed {

LocalOperator LocalOperator::adjoint() const {
  LocalOperator adj;
  adj.symmetry = symmetry;
  adj.diagonal = diagonal;
  adj.hops.reserve(hops.size());
  for (const HopTerm& h : hops) adj.hops.push_back({h.from, h.to, std::conj(h.coeff)});
  return adj;
}

std::vector<cplx> apply_local(const FockBasis& basis, const LocalOperator& op, std::span<const cplx> x) {
  if (x.size() != basis.dimension()) {
    throw InvalidArgument("apply_local: vector length " + std::to_string(x.size()) + " does not match basis " +
                          std::to_string(basis.dimension()));
  }
  const int cap = basis.n_max();
  const auto m = static_cast<std::size_t>(basis.sites());
  for (const HopTerm& h : op.hops) {
    if (h.to < 0 || h.from < 0 || static_cast<std::size_t>(h.to) >= m || static_cast<std::size_t>(h.from) >= m) {
      throw InvalidArgument("apply_local: hop references a site outside the chain");
    }
  }
  std::vector<cplx> y(x.size());
  parallel_for(basis.dimension(), 4096, [&](std::size_t begin, std::size_t end) {
    std::vector<Occupation> source(m);
    for (std::size_t dst = begin; dst < end; ++dst) {
      const auto occ = basis.occupations(dst);
      cplx acc = 0.0;
      if (op.diagonal) acc += op.diagonal(occ) * x[dst];
      for (const HopTerm& h : op.hops) {
        if (h.to == h.from) {
          acc += h.coeff * static_cast<double>(occ[static_cast<std::size_t>(h.to)]) * x[dst];
          continue;
        }
        // <dst| b_to^+ b_from |src>: src has one more boson on `from`, one fewer on `to`.
        const int n_to = occ[static_cast<std::size_t>(h.to)];
        const int n_from = occ[static_cast<std::size_t>(h.from)];
        if (n_to == 0 || n_from == cap) continue;
        std::copy(occ.begin(), occ.end(), source.begin());
        --source[static_cast<std::size_t>(h.to)];
        ++source[static_cast<std::size_t>(h.from)];
        const double amp = std::sqrt(static_cast<double>(n_from + 1) * n_to);
        acc += h.coeff * amp * x[basis.index_of(source)];
      }
      y[dst] = acc;
    }
  });
  return y;
}

cplx expectation(const FockBasis& basis, const LocalOperator& op, std::span<const cplx> x) {
  const auto y = apply_local(basis, op, x);
  return kernels::dotc(x, y);
}

LocalOperator bond_kinetic(int a, int b, cplx scale) {
  LocalOperator op;
  op.hops = {{a, b, scale}, {b, a, scale}};
  if (scale.imag() == 0.0) {
    op.symmetry = OperatorSymmetry::Hermitian;
  } else if (scale.real() == 0.0) {
    op.symmetry = OperatorSymmetry::AntiHermitian;
  }
  return op;
}

}  // namespace bhed
