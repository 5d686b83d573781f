#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "bhed/fock.hpp"
#include "bhed/hamiltonian.hpp"

namespace bhed {

/// y = A x for a Hermitian linear map.
using LinearMap = std::function<void(std::span<const cplx>, std::span<cplx>)>;

struct SolverOptions {
  double tol = 1e-10;          ///< residual norm ||H psi - E psi||
  int max_iter = 20000;        ///< budget of operator applications
  std::uint64_t seed = 12345;  ///< start vector seed
  int krylov_dim = 64;         ///< basis size before a thick restart
  int keep = 4;                ///< Ritz vectors retained across restarts
  bool refine_gap = true;      ///< second, deflated solve for E1
};

/// Lowest eigenpair of a Hermitian map with Ritz-value bookkeeping.
struct KrylovResult {
  double value = 0.0;
  std::vector<cplx> vector;
  double residual = 0.0;
  int matvecs = 0;
  std::vector<double> ritz_values;  ///< ascending, from the final projected matrix
};

/// Thick-restart Lanczos with full reorthogonalization. The start vector is
/// real, uniform in [-1, 1), drawn from `seed`, and orthogonalized against
/// `locked`; the iteration then stays in the orthogonal complement of
/// `locked`. Throws ConvergenceError when the budget runs out.
KrylovResult lowest_eigenpair(const LinearMap& map, std::size_t dimension, const SolverOptions& options,
                              std::span<const std::vector<cplx>> locked = {});

/// Normalized ground state with solver metadata.
struct GroundState {
  std::shared_ptr<const FockBasis> basis;
  std::vector<cplx> amplitudes;
  double energy = 0.0;
  double gap_estimate = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
  bool degenerate = false;

  int sites() const { return basis->sites(); }
  int particles() const { return basis->particles(); }

  /// Wraps an arbitrary vector (normalized here, phase untouched); solver
  /// fields are zero. Used for constructed states and tests.
  static GroundState from_amplitudes(std::shared_ptr<const FockBasis> basis, std::vector<cplx> amplitudes);
};

GroundState ground_state(const SparseOperator& H, std::shared_ptr<const FockBasis> basis,
                         const SolverOptions& options = {});

/// Dense diagonalization oracle; dimension must not exceed 4096.
GroundState dense_ground_state(const SparseOperator& H, std::shared_ptr<const FockBasis> basis);

/// All eigenvalues, ascending, by dense diagonalization (dimension <= 4096).
std::vector<double> dense_spectrum(const SparseOperator& H);

/// Rotates the global phase so the largest-magnitude amplitude (first one on
/// ties) is real and positive.
void fix_global_phase(std::span<cplx> amplitudes);

}  // namespace bhed
