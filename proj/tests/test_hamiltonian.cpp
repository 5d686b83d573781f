#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bhed/error.hpp"
#include "bhed/hamiltonian.hpp"
#include "support/dense.hpp"
#include "support/dense_oracle.hpp"
#include "support/generators.hpp"

using namespace bhed;

namespace {

CouplingParams params(double t1, double t2, double U, Boundary b, int n_max, bool hardcore = false) {
  CouplingParams p;
  p.t1 = t1;
  p.t2 = t2;
  p.U = U;
  p.boundary = b;
  p.n_max = n_max;
  p.hardcore = hardcore;
  return p;
}

Eigen::VectorXd spectrum_of(const SparseOperator& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(support::to_dense(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace

TEST_CASE("two-site hopping matrix") {
  const FockBasis b(2, 1, 1);
  const SparseOperator h = build_hamiltonian(b, params(1.0, 0.0, 0.0, Boundary::Open, 1, true));
  CHECK(h.dimension() == 2);
  CHECK(h.at(0, 1) == cplx(-1.0));
  CHECK(h.at(1, 0) == cplx(-1.0));
  CHECK(h.at(0, 0) == cplx(0.0));
  const std::vector<cplx> x{1.0, 0.0};
  const auto y = bhed::apply(h, x);
  CHECK(y[0] == cplx(0.0));
  CHECK(y[1] == cplx(-1.0));
}

TEST_CASE("hopping amplitude carries the bosonic enhancement") {
  // (2,0) -> (1,1): -t sqrt(2 * 1)
  const FockBasis b(2, 2, 2);
  const SparseOperator h = build_hamiltonian(b, params(0.5, 0.0, 3.0, Boundary::Open, 2));
  const auto from = b.rank(FockConfig{{2, 0}});
  const auto to = b.rank(FockConfig{{1, 1}});
  CHECK(h.at(to, from).real() == doctest::Approx(-0.5 * std::sqrt(2.0)));
  CHECK(h.at(from, from).real() == doctest::Approx(3.0));  // U/2 * 2 * 1
  CHECK(h.at(to, to).real() == doctest::Approx(0.0));
}

TEST_CASE("diagonal-only operator scales the vector") {
  const FockBasis b(3, 3, 3);
  const SparseOperator h = build_hamiltonian(b, params(0.0, 0.0, 2.0, Boundary::Open, 3));
  std::mt19937_64 rng(5);
  const auto x = gen::state(rng, b.dimension());
  const auto y = bhed::apply(h, x);
  for (std::size_t k = 0; k < b.dimension(); ++k) {
    double diag = 0.0;
    for (const auto n : b.occupations(k)) diag += n * (n - 1.0);
    CHECK(std::abs(y[k] - diag * x[k]) < 1e-14);
  }
}

TEST_CASE("bond lists") {
  using P = std::pair<int, int>;
  CHECK(chain_bonds(4, 1, Boundary::Open) == std::vector<P>{{0, 1}, {1, 2}, {2, 3}});
  CHECK(chain_bonds(4, 2, Boundary::Open) == std::vector<P>{{0, 2}, {1, 3}});
  CHECK(chain_bonds(5, 1, Boundary::Periodic).size() == 5);
  CHECK(chain_bonds(5, 2, Boundary::Periodic).size() == 5);
}

TEST_CASE("parameter validation") {
  const FockBasis b4(4, 2, 1);
  CHECK_THROWS_AS(build_hamiltonian(b4, params(1, -1, 0, Boundary::Periodic, 1, true)), InvalidArgument);
  CHECK_THROWS_AS(build_hamiltonian(b4, params(1, -1, 0, Boundary::Open, 2)), InvalidArgument);
  CHECK_THROWS_AS(params(1, -1, 0, Boundary::Open, 2, true).validate(), InvalidArgument);
  CHECK_THROWS_AS(params(NAN, -1, 0, Boundary::Open, 1).validate(), InvalidArgument);
  CHECK(parse_boundary("pbc") == Boundary::Periodic);
  CHECK(parse_boundary("open") == Boundary::Open);
  CHECK_THROWS_AS(parse_boundary("twisted"), InvalidArgument);
}

TEST_CASE("spin couplings of the hard-core limit") {
  CHECK(hardcore_spin_couplings(params(1, -1, 0, Boundary::Open, 1, true)).J1 == -2.0);
  CHECK(hardcore_spin_couplings(params(1, -1, 0, Boundary::Open, 1, true)).J2 == 2.0);
  CHECK(hardcore_spin_couplings(params(0, -1, 0, Boundary::Open, 1, true)).J1 == 0.0);
}

TEST_CASE("oracle: matrix equals tensor-product construction") {
  for (const auto seed : gen::seeds()) {
    std::mt19937_64 rng(seed);
    for (const auto& s : gen::shapes(6, 3, 3)) {
      for (const auto boundary : {Boundary::Open, Boundary::Periodic}) {
        if (boundary == Boundary::Periodic && s.sites < 5) continue;
        const double t1 = gen::uniform(rng, -3, 3), t2 = gen::uniform(rng, -2, 2), U = gen::uniform(rng, 0, 5);
        const FockBasis b(s.sites, s.particles, s.n_max);
        const SparseOperator h = build_hamiltonian(b, params(t1, t2, U, boundary, s.n_max));
        const Eigen::MatrixXcd ref = oracle::hamiltonian(
            {s.sites, s.particles, s.n_max, t1, t2, U, boundary == Boundary::Periodic});
        CAPTURE(s.sites);
        CAPTURE(s.particles);
        CAPTURE(s.n_max);
        CHECK((support::to_dense(h) - ref).cwiseAbs().maxCoeff() < 1e-13);
      }
    }
  }
}

TEST_CASE("property: stored matrix is Hermitian") {
  for (const auto seed : gen::seeds()) {
    std::mt19937_64 rng(seed);
    const int m = gen::integer(rng, 5, 9);
    const int cap = gen::integer(rng, 1, 3);
    const FockBasis b(m, m / 2, cap);
    const auto p = params(gen::uniform(rng, -3, 3), gen::uniform(rng, -2, 0), gen::uniform(rng, 0, 4),
                          seed % 2 ? Boundary::Periodic : Boundary::Open, cap);
    const SparseOperator h = build_hamiltonian(b, p);
    CHECK(h.hermitian());
    const auto rp = h.row_ptr();
    for (std::size_t r = 0; r < h.dimension(); ++r) {
      for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) {
        CHECK(std::abs(h.at(h.cols()[k], r) - std::conj(h.values()[k])) < 1e-14);
      }
    }
  }
}

TEST_CASE("property: gauge map t1 -> -t1 leaves the spectrum unchanged") {
  for (const auto seed : gen::seeds()) {
    std::mt19937_64 rng(seed);
    for (int m = 2; m <= 8; ++m) {
      const int cap = m <= 6 ? 2 : 1;
      const FockBasis b(m, m / 2, cap);
      const double t1 = gen::uniform(rng, -3, 3), t2 = gen::uniform(rng, -2, 2), U = gen::uniform(rng, 0, 4);
      const auto e_plus = spectrum_of(build_hamiltonian(b, params(t1, t2, U, Boundary::Open, cap)));
      const auto e_minus = spectrum_of(build_hamiltonian(b, params(-t1, t2, U, Boundary::Open, cap)));
      CHECK(support::max_abs_diff(e_plus, e_minus) < 1e-12);
    }
    // Periodic chains need even M for the stagger map to close.
    const FockBasis b6(6, 3, 1);
    const double t1 = gen::uniform(rng, -3, 3);
    CHECK(support::max_abs_diff(spectrum_of(build_hamiltonian(b6, params(t1, -1, 0, Boundary::Periodic, 1, true))),
                                spectrum_of(build_hamiltonian(b6, params(-t1, -1, 0, Boundary::Periodic, 1, true)))) <
          1e-12);
  }
}

TEST_CASE("property: site reversal symmetry") {
  for (const auto seed : gen::seeds()) {
    std::mt19937_64 rng(seed);
    const int m = gen::integer(rng, 3, 7);
    const int cap = gen::integer(rng, 1, 2);
    const FockBasis b(m, m / 2 + 1, cap);
    const SparseOperator h =
        build_hamiltonian(b, params(gen::uniform(rng, -3, 3), gen::uniform(rng, -2, 2), gen::uniform(rng, 0, 3),
                                    Boundary::Open, cap));
    // Explicit permutation: H must commute with reversal.
    std::vector<std::size_t> perm(b.dimension());
    for (std::size_t k = 0; k < b.dimension(); ++k) {
      FockConfig c = b.unrank(k);
      std::reverse(c.occupations.begin(), c.occupations.end());
      perm[k] = b.rank(c);
    }
    const Eigen::MatrixXcd d = support::to_dense(h);
    double worst = 0.0;
    for (std::size_t r = 0; r < b.dimension(); ++r) {
      for (std::size_t c = 0; c < b.dimension(); ++c) {
        worst = std::max(worst, std::abs(d(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) -
                                         d(static_cast<Eigen::Index>(perm[r]), static_cast<Eigen::Index>(perm[c]))));
      }
    }
    CHECK(worst < 1e-14);
  }
}

TEST_CASE("property: hard-core chain equals the XX J1-J2 spin chain") {
  for (const auto seed : gen::seeds()) {
    std::mt19937_64 rng(seed);
    const int m = gen::integer(rng, 3, 10);
    const double t1 = gen::uniform(rng, -2, 2), t2 = gen::uniform(rng, -2, 2);
    const bool periodic = m >= 5 && (seed % 2 == 1);
    const auto p = params(t1, t2, 0, periodic ? Boundary::Periodic : Boundary::Open, 1, true);
    const SpinCouplings J = hardcore_spin_couplings(p);
    std::vector<double> bosons;
    for (int n = 0; n <= m; ++n) {
      const auto e = spectrum_of(build_hamiltonian(FockBasis(m, n, 1), p));
      bosons.insert(bosons.end(), e.data(), e.data() + e.size());
    }
    std::sort(bosons.begin(), bosons.end());
    const Eigen::VectorXd spins = oracle::spin_xx_spectrum(m, J.J1, J.J2, periodic);
    CAPTURE(m);
    REQUIRE(static_cast<Eigen::Index>(bosons.size()) == spins.size());
    CHECK(support::max_abs_diff(Eigen::Map<Eigen::VectorXd>(bosons.data(), spins.size()), spins) < 1e-10);
  }
}
