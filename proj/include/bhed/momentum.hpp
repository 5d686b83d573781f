#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "bhed/eigensolver.hpp"

namespace bhed {

/// Momentum-space occupation of a ground state on a uniform grid over (-pi, pi].
struct MomentumProfile {
  std::vector<double> q_grid;
  std::vector<double> densities;  ///< n_q, clipped at zero
  double eta = 0.0;               ///< max_q n_q / N
  double q_max = 0.0;
  double S_q = 0.0;  ///< entropy of rho_q = n_q / sum_q n_q
  double S_q_normalized = 0.0;
};

enum class Commensurability { Commensurate, Incommensurate };

/// <b_i^+ b_j> as an M x M Hermitian matrix (0-based indices).
Eigen::MatrixXcd one_body_matrix(const GroundState& gs);

/// The grid q_k = pi * 2m / N_q for integer m in (-N_q/2, N_q/2]; it is
/// symmetric under q -> -q and contains 0 and pi when N_q is even.
std::vector<double> momentum_grid(int n_q);

/// n_q = (1/M) sum_ij exp(-i q (i-j)) <b_i^+ b_j> at every grid point.
/// q_max ties (within 1e-12 relative) go to the smaller |q|, then to q > 0.
MomentumProfile momentum_profile(const GroundState& gs, int n_q = 1000);

/// Commensurate when q_max is the grid point nearest to 0 or to pi.
Commensurability classify_commensurate(const MomentumProfile& profile);
std::string to_string(Commensurability c);

/// Free-boson band -2 t1 cos q - 2 t2 cos 2q.
double dispersion(double q, double t1, double t2);

/// Minimizers of the free-boson band for frustrated t2 < 0: {0} for
/// t1/t2 <= -4, {-acos(-t1/(4 t2)), +acos(...)} in between, {pi} for t1/t2 >= 4.
std::vector<double> qmax_free(double t1, double t2);

}  // namespace bhed
