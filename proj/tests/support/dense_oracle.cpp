#include "dense_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <unsupported/Eigen/KroneckerProduct>

namespace oracle {

std::size_t Space::full_dim() const {
  std::size_t dim = 1;
  for (int i = 0; i < sites; ++i) dim *= static_cast<std::size_t>(local_dim);
  return dim;
}

std::vector<int> Space::digits(std::size_t full_index) const {
  std::vector<int> out(static_cast<std::size_t>(sites));
  for (int i = sites - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<int>(full_index % static_cast<std::size_t>(local_dim));
    full_index /= static_cast<std::size_t>(local_dim);
  }
  return out;
}

std::size_t Space::index(const std::vector<int>& d) const {
  std::size_t idx = 0;
  for (const int v : d) idx = idx * static_cast<std::size_t>(local_dim) + static_cast<std::size_t>(v);
  return idx;
}

std::vector<std::size_t> sector(const Space& space, int particles) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < space.full_dim(); ++k) {
    const auto d = space.digits(k);
    if (std::accumulate(d.begin(), d.end(), 0) == particles) out.push_back(k);
  }
  return out;
}

namespace {

SpMat local_identity(int d) {
  SpMat id(d, d);
  id.setIdentity();
  return id;
}

SpMat local_lowering(int d) {
  SpMat b(d, d);
  for (int n = 1; n < d; ++n) b.insert(n - 1, n) = std::sqrt(static_cast<double>(n));
  b.makeCompressed();
  return b;
}

SpMat embed_site(const Space& space, int site, const SpMat& local) {
  SpMat out = local_identity(1);
  for (int i = 0; i < space.sites; ++i) {
    const SpMat factor = i == site ? local : local_identity(space.local_dim);
    SpMat next = Eigen::kroneckerProduct(out, factor).eval();
    out = next;
  }
  return out;
}

SpMat hop(const Space& space, int a, int b) { return creator(space, a) * annihilator(space, b); }

SpMat kinetic(const Space& space, int a, int b) {
  SpMat k = hop(space, a, b);
  SpMat hc = hop(space, b, a);
  return k + hc;
}

SpMat spin_half_term(int sites, int a, int b, const Eigen::Matrix2cd& pa, const Eigen::Matrix2cd& pb) {
  SpMat out = local_identity(1);
  for (int i = 0; i < sites; ++i) {
    Eigen::Matrix2cd f = Eigen::Matrix2cd::Identity();
    if (i == a) f = pa;
    if (i == b) f = pb;
    SpMat fs = f.sparseView();
    SpMat next = Eigen::kroneckerProduct(out, fs).eval();
    out = next;
  }
  return out;
}

}  // namespace

SpMat annihilator(const Space& space, int site) { return embed_site(space, site, local_lowering(space.local_dim)); }
SpMat creator(const Space& space, int site) { return SpMat(annihilator(space, site).adjoint()); }
SpMat number(const Space& space, int site) { return creator(space, site) * annihilator(space, site); }
SpMat identity(const Space& space) { return local_identity(static_cast<int>(space.full_dim())); }

Eigen::MatrixXcd restrict(const SpMat& op, const std::vector<std::size_t>& sec) {
  const Eigen::MatrixXcd dense(op);
  const auto n = static_cast<Eigen::Index>(sec.size());
  Eigen::MatrixXcd out(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      out(r, c) = dense(static_cast<Eigen::Index>(sec[r]), static_cast<Eigen::Index>(sec[c]));
    }
  }
  return out;
}

SpMat hamiltonian_full(const Space& space, const Model& m) {
  SpMat h(static_cast<Eigen::Index>(space.full_dim()), static_cast<Eigen::Index>(space.full_dim()));
  const int L = m.sites;
  for (int i = 0; i + 1 < L; ++i) h += cplx(-m.t1) * kinetic(space, i, i + 1);
  for (int i = 0; i + 2 < L; ++i) h += cplx(-m.t2) * kinetic(space, i, i + 2);
  if (m.periodic) {
    h += cplx(-m.t1) * kinetic(space, L - 1, 0);
    h += cplx(-m.t2) * kinetic(space, L - 2, 0);
    h += cplx(-m.t2) * kinetic(space, L - 1, 1);
  }
  const SpMat id = identity(space);
  for (int i = 0; i < L; ++i) {
    const SpMat n = number(space, i);
    h += cplx(m.U / 2.0) * SpMat(n * (n - id));
  }
  return h;
}

Eigen::MatrixXcd hamiltonian(const Model& m) {
  const Space space{m.sites, m.n_max + 1};
  return restrict(hamiltonian_full(space, m), sector(space, m.particles));
}

Eigen::VectorXd spectrum(const Model& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hamiltonian(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Eigen::VectorXd spin_xx_spectrum(int sites, double J1, double J2, bool periodic) {
  Eigen::Matrix2cd sx, sy;
  sx << 0, 0.5, 0.5, 0;
  sy << 0, cplx(0, -0.5), cplx(0, 0.5), 0;
  const auto n = static_cast<Eigen::Index>(std::size_t{1} << sites);
  SpMat h(n, n);
  const auto add = [&](int a, int b, double J) {
    h += cplx(J) * SpMat(spin_half_term(sites, a, b, sx, sx) + spin_half_term(sites, a, b, sy, sy));
  };
  for (int i = 0; i + 1 < sites; ++i) add(i, i + 1, J1);
  for (int i = 0; i + 2 < sites; ++i) add(i, i + 2, J2);
  if (periodic) {
    add(sites - 1, 0, J1);
    add(sites - 2, 0, J2);
    add(sites - 1, 1, J2);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Eigen::VectorXcd embed(const Space& space, const std::vector<std::size_t>& sec, const std::vector<cplx>& amps) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space.full_dim()));
  for (std::size_t k = 0; k < sec.size(); ++k) out(static_cast<Eigen::Index>(sec[k])) = amps[k];
  return out;
}

Eigen::MatrixXcd chiral(const Space& space, const std::vector<std::size_t>& sec, int bond) {
  const int a = bond - 1, b = bond;
  const SpMat current = hop(space, a, b) - hop(space, b, a);
  return restrict(SpMat(cplx(0, -0.5) * current), sec);
}

Eigen::MatrixXcd dimer_kinetic(const Space& space, const std::vector<std::size_t>& sec, int site) {
  const int l = site - 2, m = site - 1, r = site;
  return restrict(SpMat(cplx(0.5) * SpMat(kinetic(space, l, m) - kinetic(space, m, r))), sec);
}

Eigen::MatrixXcd dimer_current(const Space& space, const std::vector<std::size_t>& sec, int site) {
  return cplx(0, -1) * dimer_kinetic(space, sec, site);
}

Eigen::MatrixXcd dimer_zz(const Space& space, const std::vector<std::size_t>& sec, int site) {
  const SpMat id = identity(space);
  const auto s = [&](int i) { return SpMat(cplx(0.5) * id - number(space, i)); };
  const int l = site - 2, m = site - 1, r = site;
  return restrict(SpMat(s(m) * s(l) - s(r) * s(m)), sec);
}

double pair_value(const Eigen::VectorXcd& psi, const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return psi.dot(a * (b * psi)).real();
}

Eigen::MatrixXcd one_body(const Space& space, const std::vector<std::size_t>& sec, const Eigen::VectorXcd& psi) {
  Eigen::MatrixXcd g(space.sites, space.sites);
  for (int i = 0; i < space.sites; ++i) {
    for (int j = 0; j < space.sites; ++j) g(i, j) = psi.dot(restrict(hop(space, i, j), sec) * psi);
  }
  return g;
}

double momentum_density(const Eigen::MatrixXcd& G, double q) {
  cplx sum = 0.0;
  for (Eigen::Index i = 0; i < G.rows(); ++i) {
    for (Eigen::Index j = 0; j < G.cols(); ++j) sum += std::polar(1.0, q * static_cast<double>(j - i)) * G(i, j);
  }
  return sum.real() / static_cast<double>(G.rows());
}

std::vector<double> reduced_spectrum(const Space& space, const Eigen::VectorXcd& psi, std::uint64_t mask) {
  std::vector<int> a_sites, b_sites;
  for (int i = 0; i < space.sites; ++i) ((mask >> i) & 1u ? a_sites : b_sites).push_back(i);
  std::size_t dim_a = 1, dim_b = 1;
  for (std::size_t k = 0; k < a_sites.size(); ++k) dim_a *= static_cast<std::size_t>(space.local_dim);
  for (std::size_t k = 0; k < b_sites.size(); ++k) dim_b *= static_cast<std::size_t>(space.local_dim);
  Eigen::MatrixXcd amp = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim_a), static_cast<Eigen::Index>(dim_b));
  for (std::size_t k = 0; k < space.full_dim(); ++k) {
    const auto d = space.digits(k);
    std::size_t ia = 0, ib = 0;
    for (const int s : a_sites) ia = ia * static_cast<std::size_t>(space.local_dim) + static_cast<std::size_t>(d[static_cast<std::size_t>(s)]);
    for (const int s : b_sites) ib = ib * static_cast<std::size_t>(space.local_dim) + static_cast<std::size_t>(d[static_cast<std::size_t>(s)]);
    amp(static_cast<Eigen::Index>(ia), static_cast<Eigen::Index>(ib)) = psi(static_cast<Eigen::Index>(k));
  }
  // rho_A and rho_B share their nonzero spectrum; diagonalize the smaller one.
  const Eigen::MatrixXcd rho = dim_a <= dim_b ? Eigen::MatrixXcd(amp * amp.adjoint()) : Eigen::MatrixXcd(amp.adjoint() * amp);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.rbegin(), out.rend());
  return out;
}

double entropy(const std::vector<double>& spectrum) {
  double s = 0.0;
  for (const double l : spectrum) {
    if (l > 1e-300) s -= l * std::log(l);
  }
  return s;
}

Ggm ggm(const Space& space, const Eigen::VectorXcd& psi) {
  const std::uint64_t full = (std::uint64_t{1} << space.sites) - 1;
  Ggm best{1.0, 0};
  double top = -1.0;
  for (std::uint64_t mask = 1; mask < full; mask += 2) {
    const double l = reduced_spectrum(space, psi, mask).front();
    if (l > top + 1e-12) {
      top = l;
      best.argmax = mask;
    }
  }
  best.value = 1.0 - top;
  return best;
}

}  // namespace oracle
