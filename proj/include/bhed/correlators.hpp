#pragma once

#include <map>
#include <optional>
#include <string>

#include "bhed/eigensolver.hpp"
#include "bhed/local_ops.hpp"

namespace bhed {

/// Two definitions of the bond-alternation (xy) dimer operator at site j:
///   KineticBond: (1/2)[(b_j^+ b_{j-1} + h.c.) - (b_j^+ b_{j+1} + h.c.)]
///   CurrentBond: j_j - j_{j+1} with j_k = (1/2i)(b_k^+ b_{k-1} + b_{k-1}^+ b_k)
/// CurrentBond equals -i times KineticBond, so its two-point functions carry
/// the opposite sign.
enum class DimerVariant { KineticBond, CurrentBond };
enum class DimerChannel { XY, ZZ };

DimerVariant parse_dimer_variant(const std::string& name);
std::string to_string(DimerVariant v);

/// Per-separation correlator values and their weighted average.
struct CorrelatorReport {
  std::map<int, double> per_delta;  ///< Delta in [-Delta_max, Delta_max]
  double average = 0.0;
  std::optional<DimerVariant> variant;  ///< set for the xy dimer channel only
};

// Site and bond indices below are 1-based: bonds j = 1..M-1 join sites j, j+1;
// dimer operators live on sites j = 2..M-1.

LocalOperator chiral_operator(int sites, int bond);
LocalOperator dimer_xy_operator(int sites, int site, DimerVariant variant);
LocalOperator dimer_zz_operator(int sites, int site);

/// <kappa^z_j> with kappa^z_j = (1/2i)(b_j^+ b_{j+1} - b_{j+1}^+ b_j).
double chiral_local(const GroundState& gs, int bond);

/// kappa_z^Delta = sum_{j=1}^{M-1-|Delta|} Re <kappa_j kappa_{j+|Delta|}>, |Delta| <= M-2.
double chiral_correlator(const GroundState& gs, int delta);

/// All Delta in [-(M-2), M-2]; average = 1/(2M-3) sum_Delta kappa^Delta / (M-1-|Delta|).
CorrelatorReport chiral_report(const GroundState& gs);
double chiral_average(const GroundState& gs);

/// Kinetic-bond: <D^xy_j>. Current-bond: the operator is anti-Hermitian, so
/// the returned value c satisfies <D^xy_j> = i c.
double dimer_local_xy(const GroundState& gs, int site, DimerVariant variant);

/// <(1/2 - n_j)(1/2 - n_{j-1}) - (1/2 - n_{j+1})(1/2 - n_j)>
double dimer_local_zz(const GroundState& gs, int site);

/// (1/(M-2-|Delta|)) sum_{j=2}^{M-1-|Delta|} Re <D_j D_{j+|Delta|}>, |Delta| <= M-3.
/// `variant` is ignored for the zz channel.
double dimer_correlator(const GroundState& gs, int delta, DimerChannel channel,
                        DimerVariant variant = DimerVariant::KineticBond);

/// Per-Delta values are already normalized, so the average applies only the
/// outer 1/(2M-5) weight.
CorrelatorReport dimer_report(const GroundState& gs, DimerChannel channel,
                              DimerVariant variant = DimerVariant::KineticBond);
double dimer_average(const GroundState& gs, DimerChannel channel, DimerVariant variant = DimerVariant::KineticBond);

}  // namespace bhed
