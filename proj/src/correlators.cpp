#include "bhed/correlators.hpp"

#include <cmath>
#include <cstdlib>

#include "bhed/error.hpp"
#include "bhed/kernels.hpp"

namespace bhed {

namespace {

constexpr double kImagTolerance = 1e-12;

using Vec = std::vector<cplx>;

void check_bond(int sites, int bond) {
  if (bond < 1 || bond > sites - 1) {
    throw InvalidArgument("bond index " + std::to_string(bond) + " outside [1, " + std::to_string(sites - 1) + "]");
  }
}

void check_dimer_site(int sites, int site) {
  if (site < 2 || site > sites - 1) {
    throw InvalidArgument("dimer site " + std::to_string(site) + " outside [2, " + std::to_string(sites - 1) + "]");
  }
}

double real_part_checked(cplx value, const char* what) {
  if (std::abs(value.imag()) > kImagTolerance) {
    throw Error(std::string(what) + ": expectation of a Hermitian operator has imaginary part " +
                std::to_string(value.imag()));
  }
  return value.real();
}

/// Operator vectors O_j psi for j in [first, last], plus the sign s with
/// O_j^+ psi = s * O_j psi (Hermitian +1, anti-Hermitian -1).
struct Family {
  int first = 0;
  std::vector<Vec> vectors;
  std::vector<Vec> adjoint_vectors;  // only for OperatorSymmetry::General
  double sign = 1.0;

  template <typename MakeOp>
  Family(const GroundState& gs, int first_index, int last_index, MakeOp make) : first(first_index) {
    for (int j = first_index; j <= last_index; ++j) {
      const LocalOperator op = make(j);
      vectors.push_back(apply_local(*gs.basis, op, gs.amplitudes));
      switch (op.symmetry) {
        case OperatorSymmetry::Hermitian:
          sign = 1.0;
          break;
        case OperatorSymmetry::AntiHermitian:
          sign = -1.0;
          break;
        case OperatorSymmetry::General:
          adjoint_vectors.push_back(apply_local(*gs.basis, op.adjoint(), gs.amplitudes));
          break;
      }
    }
  }

  /// <psi| O_a O_b |psi>
  cplx pair(int a, int b) const {
    const auto ia = static_cast<std::size_t>(a - first);
    const auto ib = static_cast<std::size_t>(b - first);
    if (!adjoint_vectors.empty()) return kernels::dotc(adjoint_vectors[ia], vectors[ib]);
    return sign * kernels::dotc(vectors[ia], vectors[ib]);
  }
};

Family chiral_family(const GroundState& gs) {
  const int m = gs.sites();
  return Family(gs, 1, m - 1, [m](int j) { return chiral_operator(m, j); });
}

Family dimer_family(const GroundState& gs, DimerChannel channel, DimerVariant variant) {
  const int m = gs.sites();
  if (channel == DimerChannel::ZZ) return Family(gs, 2, m - 1, [m](int j) { return dimer_zz_operator(m, j); });
  return Family(gs, 2, m - 1, [m, variant](int j) { return dimer_xy_operator(m, j, variant); });
}

double chiral_delta(const Family& f, int sites, int delta) {
  const int d = std::abs(delta);
  double sum = 0.0;
  for (int j = 1; j <= sites - 1 - d; ++j) sum += f.pair(j, j + d).real();
  return sum;
}

double dimer_delta(const Family& f, int sites, int delta) {
  const int d = std::abs(delta);
  double sum = 0.0;
  for (int j = 2; j <= sites - 1 - d; ++j) sum += f.pair(j, j + d).real();
  return sum / (sites - 2 - d);
}

void require_dimer_chain(int sites) {
  if (sites < 4) throw InvalidArgument("dimer correlators need M >= 4, got " + std::to_string(sites));
}

}  // namespace

DimerVariant parse_dimer_variant(const std::string& name) {
  if (name == "kinetic" || name == "kinetic-bond") return DimerVariant::KineticBond;
  if (name == "current" || name == "current-bond") return DimerVariant::CurrentBond;
  throw InvalidArgument("unknown dimer xy variant '" + name + "' (expected kinetic-bond or current-bond)");
}

std::string to_string(DimerVariant v) { return v == DimerVariant::KineticBond ? "kinetic-bond" : "current-bond"; }

LocalOperator chiral_operator(int sites, int bond) {
  check_bond(sites, bond);
  const int a = bond - 1;
  const int b = bond;
  LocalOperator op;
  op.hops = {{a, b, cplx{0.0, -0.5}}, {b, a, cplx{0.0, 0.5}}};
  op.symmetry = OperatorSymmetry::Hermitian;
  return op;
}

LocalOperator dimer_xy_operator(int sites, int site, DimerVariant variant) {
  check_dimer_site(sites, site);
  const int left = site - 2;
  const int mid = site - 1;
  const int right = site;
  // Kinetic: (1/2)(K_left - K_right). Current: (1/2i)(K_left - K_right).
  const cplx c = variant == DimerVariant::KineticBond ? cplx{0.5, 0.0} : cplx{0.0, -0.5};
  LocalOperator op;
  op.hops = {{mid, left, c}, {left, mid, c}, {mid, right, -c}, {right, mid, -c}};
  op.symmetry = variant == DimerVariant::KineticBond ? OperatorSymmetry::Hermitian : OperatorSymmetry::AntiHermitian;
  return op;
}

LocalOperator dimer_zz_operator(int sites, int site) {
  check_dimer_site(sites, site);
  const auto left = static_cast<std::size_t>(site - 2);
  const auto mid = static_cast<std::size_t>(site - 1);
  const auto right = static_cast<std::size_t>(site);
  LocalOperator op;
  op.diagonal = [=](std::span<const Occupation> occ) {
    const double sl = 0.5 - occ[left];
    const double sm = 0.5 - occ[mid];
    const double sr = 0.5 - occ[right];
    return sm * sl - sr * sm;
  };
  op.symmetry = OperatorSymmetry::Hermitian;
  return op;
}

double chiral_local(const GroundState& gs, int bond) {
  return real_part_checked(expectation(*gs.basis, chiral_operator(gs.sites(), bond), gs.amplitudes), "chiral_local");
}

double chiral_correlator(const GroundState& gs, int delta) {
  const int m = gs.sites();
  if (std::abs(delta) > m - 2) {
    throw InvalidArgument("chiral_correlator: |Delta| = " + std::to_string(std::abs(delta)) + " exceeds M-2 = " +
                          std::to_string(m - 2));
  }
  return chiral_delta(chiral_family(gs), m, delta);
}

CorrelatorReport chiral_report(const GroundState& gs) {
  const int m = gs.sites();
  const Family f = chiral_family(gs);
  CorrelatorReport report;
  for (int d = 0; d <= m - 2; ++d) {
    const double v = chiral_delta(f, m, d);
    report.per_delta[d] = v;
    report.per_delta[-d] = v;
  }
  double sum = 0.0;
  for (const auto& [d, v] : report.per_delta) sum += v / (m - 1 - std::abs(d));
  report.average = sum / (2 * m - 3);
  return report;
}

double chiral_average(const GroundState& gs) { return chiral_report(gs).average; }

double dimer_local_xy(const GroundState& gs, int site, DimerVariant variant) {
  const cplx value = expectation(*gs.basis, dimer_xy_operator(gs.sites(), site, variant), gs.amplitudes);
  if (variant == DimerVariant::KineticBond) return real_part_checked(value, "dimer_local_xy");
  return real_part_checked(cplx{value.imag(), value.real()}, "dimer_local_xy");
}

double dimer_local_zz(const GroundState& gs, int site) {
  return real_part_checked(expectation(*gs.basis, dimer_zz_operator(gs.sites(), site), gs.amplitudes),
                           "dimer_local_zz");
}

double dimer_correlator(const GroundState& gs, int delta, DimerChannel channel, DimerVariant variant) {
  const int m = gs.sites();
  require_dimer_chain(m);
  if (std::abs(delta) > m - 3) {
    throw InvalidArgument("dimer_correlator: |Delta| = " + std::to_string(std::abs(delta)) + " exceeds M-3 = " +
                          std::to_string(m - 3));
  }
  return dimer_delta(dimer_family(gs, channel, variant), m, delta);
}

CorrelatorReport dimer_report(const GroundState& gs, DimerChannel channel, DimerVariant variant) {
  const int m = gs.sites();
  require_dimer_chain(m);
  const Family f = dimer_family(gs, channel, variant);
  CorrelatorReport report;
  if (channel == DimerChannel::XY) report.variant = variant;
  for (int d = 0; d <= m - 3; ++d) {
    const double v = dimer_delta(f, m, d);
    report.per_delta[d] = v;
    report.per_delta[-d] = v;
  }
  double sum = 0.0;
  for (const auto& [d, v] : report.per_delta) sum += v;
  report.average = sum / (2 * m - 5);
  return report;
}

double dimer_average(const GroundState& gs, DimerChannel channel, DimerVariant variant) {
  return dimer_report(gs, channel, variant).average;
}

}  // namespace bhed
