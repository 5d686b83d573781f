#include "bhed/eigensolver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "bhed/error.hpp"
#include "bhed/kernels.hpp"

namespace bhed {

namespace {

constexpr std::size_t kDenseLimit = 4096;

using Vec = std::vector<cplx>;

void project_out(std::span<const Vec> basis, Vec& w) {
  for (const Vec& u : basis) kernels::axpy(-kernels::dotc(u, w), u, w);
}

Vec random_start(std::size_t n, std::uint64_t seed, std::span<const Vec> locked) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vec v(n);
  for (auto& x : v) x = dist(rng);
  for (int pass = 0; pass < 2; ++pass) project_out(locked, v);
  double norm = std::sqrt(kernels::norm_sq(v));
  if (norm < 1e-8) {
    // Start vector fell inside span(locked); walk unit vectors instead.
    for (std::size_t i = 0; i < n && norm < 1e-8; ++i) {
      std::fill(v.begin(), v.end(), cplx{});
      v[i] = 1.0;
      for (int pass = 0; pass < 2; ++pass) project_out(locked, v);
      norm = std::sqrt(kernels::norm_sq(v));
    }
  }
  kernels::scale(1.0 / norm, v);
  return v;
}

void check_dense_size(std::size_t dim) {
  if (dim > kDenseLimit) {
    throw InvalidArgument("dense diagonalization limited to dimension " + std::to_string(kDenseLimit) + ", got " +
                          std::to_string(dim));
  }
}

Eigen::MatrixXcd to_dense(const SparseOperator& H) {
  const auto n = static_cast<Eigen::Index>(H.dimension());
  Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t r = 0; r < H.dimension(); ++r) {
    for (std::size_t k = H.row_ptr()[r]; k < H.row_ptr()[r + 1]; ++k) {
      dense(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(H.cols()[k])) = H.values()[k];
    }
  }
  return dense;
}

double residual_of(const SparseOperator& H, std::span<const cplx> v, double value) {
  Vec r = apply(H, v);
  kernels::axpy(-value, v, r);
  return std::sqrt(kernels::norm_sq(r));
}

}  // namespace

KrylovResult lowest_eigenpair(const LinearMap& map, std::size_t dimension, const SolverOptions& options,
                              std::span<const std::vector<cplx>> locked) {
  if (dimension == 0) throw InvalidArgument("lowest_eigenpair: empty operator");
  if (locked.size() >= dimension) throw InvalidArgument("lowest_eigenpair: locked vectors span the whole space");
  const std::size_t free_dim = dimension - locked.size();
  const auto m = static_cast<Eigen::Index>(std::min<std::size_t>(std::max(options.krylov_dim, 2), free_dim));
  const Eigen::Index keep = std::clamp<Eigen::Index>(options.keep, 1, std::max<Eigen::Index>(m - 1, 1));

  std::vector<Vec> V;
  V.reserve(static_cast<std::size_t>(m) + 1);
  V.push_back(random_start(dimension, options.seed, locked));
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(m, m);

  KrylovResult result;
  double best_residual = std::numeric_limits<double>::infinity();
  double scale_estimate = 1.0;
  Vec w(dimension);
  Eigen::Index next = 0;  // first basis vector not yet expanded

  for (;;) {
    double beta = 0.0;
    for (Eigen::Index j = next; j < m; ++j) {
      map(V[static_cast<std::size_t>(j)], w);
      ++result.matvecs;
      project_out(locked, w);
      // Classical Gram-Schmidt, applied twice.
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index i = 0; i <= j; ++i) {
          const cplx c = kernels::dotc(V[static_cast<std::size_t>(i)], w);
          T(i, j) = pass == 0 ? c : T(i, j) + c;
          kernels::axpy(-c, V[static_cast<std::size_t>(i)], w);
        }
      }
      T(j, j) = T(j, j).real();
      for (Eigen::Index i = 0; i < j; ++i) T(j, i) = std::conj(T(i, j));
      scale_estimate = std::max(scale_estimate, std::abs(T(j, j).real()));
      beta = std::sqrt(kernels::norm_sq(w));
      if (beta <= 1e-13 * scale_estimate || j + 1 == m || result.matvecs >= options.max_iter) break;
      V.push_back(w);
      kernels::scale(1.0 / beta, V.back());
    }

    const auto k = static_cast<Eigen::Index>(V.size());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(T.topLeftCorner(k, k));
    const Eigen::VectorXd theta = eig.eigenvalues();
    const Eigen::MatrixXcd Y = eig.eigenvectors();
    const bool invariant = beta <= 1e-13 * scale_estimate;
    const double estimate = invariant ? 0.0 : beta * std::abs(Y(k - 1, 0));

    if (estimate <= options.tol || invariant) {
      Vec x(dimension);
      for (Eigen::Index i = 0; i < k; ++i) kernels::axpy(Y(i, 0), V[static_cast<std::size_t>(i)], x);
      kernels::scale(1.0 / std::sqrt(kernels::norm_sq(x)), x);
      Vec r(dimension);
      map(x, r);
      ++result.matvecs;
      project_out(locked, r);
      kernels::axpy(-theta(0), x, r);
      const double res = std::sqrt(kernels::norm_sq(r));
      best_residual = std::min(best_residual, res);
      if (res <= options.tol || invariant) {
        if (res > options.tol) {
          throw ConvergenceError("Krylov space became invariant without meeting the residual tolerance", res,
                                 result.matvecs);
        }
        result.value = theta(0);
        result.vector = std::move(x);
        result.residual = res;
        result.ritz_values.assign(theta.data(), theta.data() + theta.size());
        return result;
      }
    } else {
      best_residual = std::min(best_residual, estimate);
    }

    if (result.matvecs >= options.max_iter) {
      throw ConvergenceError("Krylov iteration did not converge within " + std::to_string(options.max_iter) +
                                 " operator applications (best residual " + std::to_string(best_residual) + ")",
                             best_residual, result.matvecs);
    }

    // Thick restart: keep the lowest Ritz vectors, continue from the residual.
    const Eigen::Index kept = std::min(keep, k - 1);
    std::vector<Vec> restarted(static_cast<std::size_t>(kept), Vec(dimension));
    for (Eigen::Index r = 0; r < kept; ++r) {
      for (Eigen::Index i = 0; i < k; ++i) {
        kernels::axpy(Y(i, r), V[static_cast<std::size_t>(i)], restarted[static_cast<std::size_t>(r)]);
      }
    }
    V = std::move(restarted);
    T.setZero();
    for (Eigen::Index r = 0; r < kept; ++r) T(r, r) = theta(r);
    V.push_back(w);
    kernels::scale(1.0 / beta, V.back());
    next = kept;
  }
}

void fix_global_phase(std::span<cplx> amplitudes) {
  std::size_t best = 0;
  double best_mag = -1.0;
  for (std::size_t i = 0; i < amplitudes.size(); ++i) {
    const double mag = std::abs(amplitudes[i]);
    if (mag > best_mag * (1.0 + 1e-12)) {
      best_mag = mag;
      best = i;
    }
  }
  if (best_mag <= 0.0) return;
  const cplx phase = std::conj(amplitudes[best]) / best_mag;
  for (auto& a : amplitudes) a *= phase;
  amplitudes[best] = best_mag;
}

GroundState GroundState::from_amplitudes(std::shared_ptr<const FockBasis> basis, std::vector<cplx> amplitudes) {
  if (!basis) throw InvalidArgument("GroundState: null basis");
  if (amplitudes.size() != basis->dimension()) {
    throw InvalidArgument("GroundState: amplitude vector length " + std::to_string(amplitudes.size()) +
                          " does not match basis dimension " + std::to_string(basis->dimension()));
  }
  const double norm = std::sqrt(kernels::norm_sq(amplitudes));
  if (!(norm > 0.0)) throw InvalidArgument("GroundState: zero vector");
  kernels::scale(1.0 / norm, amplitudes);
  GroundState gs;
  gs.basis = std::move(basis);
  gs.amplitudes = std::move(amplitudes);
  return gs;
}

namespace {

GroundState finish(std::shared_ptr<const FockBasis> basis, Vec vec, double energy, double gap, double residual,
                   int iterations, bool has_gap) {
  fix_global_phase(vec);
  GroundState gs;
  gs.basis = std::move(basis);
  gs.amplitudes = std::move(vec);
  gs.energy = energy;
  gs.gap_estimate = std::max(0.0, gap);
  gs.residual_norm = residual;
  gs.iterations = iterations;
  gs.degenerate = has_gap && gs.gap_estimate < 1e-8 * std::max(1.0, std::abs(energy));
  return gs;
}

void check_operator(const SparseOperator& H, const std::shared_ptr<const FockBasis>& basis) {
  if (!basis) throw InvalidArgument("ground_state: null basis");
  if (H.dimension() != basis->dimension()) {
    throw InvalidArgument("ground_state: operator dimension " + std::to_string(H.dimension()) +
                          " does not match basis dimension " + std::to_string(basis->dimension()));
  }
  if (!H.hermitian()) throw InvalidArgument("ground_state: operator is not flagged Hermitian");
}

}  // namespace

GroundState ground_state(const SparseOperator& H, std::shared_ptr<const FockBasis> basis,
                         const SolverOptions& options) {
  check_operator(H, basis);
  const LinearMap map = [&H](std::span<const cplx> x, std::span<cplx> y) { apply_into(H, x, y); };
  const std::size_t dim = H.dimension();
  KrylovResult lowest = lowest_eigenpair(map, dim, options);
  if (dim == 1) return finish(std::move(basis), std::move(lowest.vector), lowest.value, 0.0, lowest.residual, lowest.matvecs, false);

  double gap = lowest.ritz_values.size() >= 2 ? lowest.ritz_values[1] - lowest.ritz_values[0] : 0.0;
  if (options.refine_gap) {
    SolverOptions second = options;
    second.seed = options.seed + 1;
    const std::vector<Vec> locked{lowest.vector};
    KrylovResult next = lowest_eigenpair(map, dim, second, locked);
    if (next.value < lowest.value) {
      // The first run settled on an excited level; the deflated run found lower.
      std::swap(next, lowest);
    }
    gap = next.value - lowest.value;
  }
  return finish(std::move(basis), std::move(lowest.vector), lowest.value, gap, lowest.residual, lowest.matvecs, true);
}

GroundState dense_ground_state(const SparseOperator& H, std::shared_ptr<const FockBasis> basis) {
  check_operator(H, basis);
  check_dense_size(H.dimension());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(to_dense(H));
  const Eigen::VectorXcd col = eig.eigenvectors().col(0);
  Vec vec(col.data(), col.data() + col.size());
  const double e0 = eig.eigenvalues()(0);
  const double gap = H.dimension() >= 2 ? eig.eigenvalues()(1) - e0 : 0.0;
  const double residual = residual_of(H, vec, e0);
  return finish(std::move(basis), std::move(vec), e0, gap, residual, 0, H.dimension() >= 2);
}

std::vector<double> dense_spectrum(const SparseOperator& H) {
  check_dense_size(H.dimension());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(to_dense(H), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = eig.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

}  // namespace bhed
