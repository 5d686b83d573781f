#include "bhed/momentum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bhed/error.hpp"

namespace bhed {

Eigen::MatrixXcd one_body_matrix(const GroundState& gs) {
  const FockBasis& basis = *gs.basis;
  const int m = basis.sites();
  const int cap = basis.n_max();
  const auto& psi = gs.amplitudes;
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(m, m);
  std::vector<Occupation> target(static_cast<std::size_t>(m));
  for (std::size_t src = 0; src < basis.dimension(); ++src) {
    const cplx amp = psi[src];
    if (amp == cplx{}) continue;
    const auto occ = basis.occupations(src);
    for (int j = 0; j < m; ++j) {
      const int nj = occ[static_cast<std::size_t>(j)];
      if (nj == 0) continue;
      g(j, j) += std::norm(amp) * static_cast<double>(nj);
      for (int i = 0; i < m; ++i) {
        const int ni = occ[static_cast<std::size_t>(i)];
        if (i == j || ni == cap) continue;
        std::copy(occ.begin(), occ.end(), target.begin());
        --target[static_cast<std::size_t>(j)];
        ++target[static_cast<std::size_t>(i)];
        g(i, j) += std::conj(psi[basis.index_of(target)]) * amp * std::sqrt(static_cast<double>(nj) * (ni + 1));
      }
    }
  }
  return g;
}

std::vector<double> momentum_grid(int n_q) {
  if (n_q < 1) throw InvalidArgument("momentum grid needs at least one point");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n_q));
  const int lo = -((n_q - 1) / 2);
  for (int m = lo; m < lo + n_q; ++m) grid.push_back(std::numbers::pi * (2.0 * m / n_q));
  return grid;
}

MomentumProfile momentum_profile(const GroundState& gs, int n_q) {
  const int m = gs.sites();
  if (n_q < m) throw InvalidArgument("momentum_profile: N_q must be at least M");
  const Eigen::MatrixXcd g = one_body_matrix(gs);

  // Diagonal sums of the one-body matrix, C_d = sum_i <b_i^+ b_{i+d}>.
  std::vector<cplx> c(static_cast<std::size_t>(m));
  for (int d = 0; d < m; ++d) {
    for (int i = 0; i + d < m; ++i) c[static_cast<std::size_t>(d)] += g(i, i + d);
  }

  MomentumProfile p;
  p.q_grid = momentum_grid(n_q);
  p.densities.resize(p.q_grid.size());
  for (std::size_t k = 0; k < p.q_grid.size(); ++k) {
    const double q = p.q_grid[k];
    double s = c[0].real();
    for (int d = 1; d < m; ++d) {
      s += 2.0 * (std::cos(q * d) * c[static_cast<std::size_t>(d)].real() -
                  std::sin(q * d) * c[static_cast<std::size_t>(d)].imag());
    }
    s /= m;
    if (s < -1e-12) throw Error("momentum_profile: negative density " + std::to_string(s));
    p.densities[k] = std::max(s, 0.0);
  }

  double total = 0.0;
  double peak = 0.0;
  for (const double n : p.densities) {
    total += n;
    peak = std::max(peak, n);
  }
  if (!(total > 0.0) || gs.particles() == 0) throw Error("momentum_profile: all-zero momentum density");

  const double tie = 1e-12 * std::max(1.0, peak);
  std::size_t best = 0;
  bool found = false;
  for (std::size_t k = 0; k < p.densities.size(); ++k) {
    if (p.densities[k] < peak - tie) continue;
    const double q = p.q_grid[k];
    const double bq = p.q_grid[best];
    if (!found || std::abs(q) < std::abs(bq) || (std::abs(q) == std::abs(bq) && q > bq)) best = k;
    found = true;
  }
  p.q_max = p.q_grid[best];
  p.eta = p.densities[best] / gs.particles();

  double entropy = 0.0;
  for (const double n : p.densities) {
    const double rho = n / total;
    if (rho > 0.0) entropy -= rho * std::log(rho);
  }
  p.S_q = entropy;
  p.S_q_normalized = n_q > 1 ? entropy / std::log(static_cast<double>(n_q)) : 0.0;
  return p;
}

Commensurability classify_commensurate(const MomentumProfile& profile) {
  const double half_step = std::numbers::pi / static_cast<double>(profile.q_grid.size());
  const double q = std::abs(profile.q_max);
  const bool at_zero = q < half_step;
  const bool at_pi = std::numbers::pi - q < half_step;
  return at_zero || at_pi ? Commensurability::Commensurate : Commensurability::Incommensurate;
}

std::string to_string(Commensurability c) { return c == Commensurability::Commensurate ? "C" : "IC"; }

double dispersion(double q, double t1, double t2) { return -2.0 * t1 * std::cos(q) - 2.0 * t2 * std::cos(2.0 * q); }

std::vector<double> qmax_free(double t1, double t2) {
  if (!(t2 < 0.0)) {
    throw InvalidArgument("qmax_free: requires frustrated t2 < 0; for t2 >= 0 the band minimum is q = 0 (t1 > 0) or pi");
  }
  const double ratio = t1 / t2;
  if (ratio <= -4.0) return {0.0};
  if (ratio >= 4.0) return {std::numbers::pi};
  const double q = std::acos(-t1 / (4.0 * t2));
  return {-q, q};
}

}  // namespace bhed
