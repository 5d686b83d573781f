#include "bhed/dimer_oracle.hpp"

#include <cmath>
#include <cstdlib>

#include "bhed/error.hpp"

namespace bhed {

namespace {

void check_even(int sites, const char* what) {
  if (sites < 2 || sites % 2 != 0) {
    throw InvalidArgument(std::string(what) + ": needs even M >= 2, got " + std::to_string(sites));
  }
}

void check_closed_form_range(int sites, int delta) {
  if (sites < 8 || sites % 2 != 0) {
    throw InvalidArgument("closed-form dimer values need even M >= 8, got " + std::to_string(sites));
  }
  if (std::abs(delta) > sites - 3) {
    throw InvalidArgument("closed-form dimer values need |Delta| <= M-3, got " + std::to_string(delta));
  }
}

double alternating(int delta) { return std::abs(delta) % 2 == 0 ? 1.0 : -1.0; }

}  // namespace

DimerPairing DimerPairing::odd_even(int sites) {
  check_even(sites, "DimerPairing");
  DimerPairing p;
  for (int i = 1; i <= sites / 2; ++i) p.pairs.emplace_back(2 * i - 1, 2 * i);
  return p;
}

GroundState perfect_dimer_state(int sites) {
  check_even(sites, "perfect_dimer_state");
  const int pairs = sites / 2;
  auto basis = std::make_shared<const FockBasis>(sites, pairs, 1);
  std::vector<cplx> amps(basis->dimension());
  const double amplitude = std::pow(2.0, -0.25 * sites);
  std::vector<Occupation> occ(static_cast<std::size_t>(sites));
  // Bit i of `choice` puts the boson of pair i on its right site.
  for (std::uint64_t choice = 0; choice < (1ull << pairs); ++choice) {
    std::fill(occ.begin(), occ.end(), Occupation{0});
    for (int i = 0; i < pairs; ++i) occ[static_cast<std::size_t>(2 * i + ((choice >> i) & 1u))] = 1;
    amps[basis->index_of(occ)] = amplitude;
  }
  return GroundState::from_amplitudes(std::move(basis), std::move(amps));
}

GroundState embed_state(const GroundState& state, std::shared_ptr<const FockBasis> target) {
  const FockBasis& source = *state.basis;
  if (target->sites() != source.sites() || target->particles() != source.particles() ||
      target->n_max() < source.n_max()) {
    throw InvalidArgument("embed_state: target basis must share M and N and allow at least the source n_max");
  }
  std::vector<cplx> amps(target->dimension());
  for (std::size_t s = 0; s < source.dimension(); ++s) amps[target->index_of(source.occupations(s))] = state.amplitudes[s];
  return GroundState::from_amplitudes(std::move(target), std::move(amps));
}

double dimer_xy_delta_closed(int sites, int delta) {
  check_closed_form_range(sites, delta);
  const double m = sites;
  if (delta == 0) return -3.0 / 8.0;
  if (std::abs(delta) == 1) return (5.0 * m - 14.0) / (16.0 * (m - 3.0));
  return -0.25 * alternating(delta);
}

double dimer_zz_delta_closed(int sites, int delta) {
  check_closed_form_range(sites, delta);
  const double m = sites;
  if (delta == 0) return 1.0 / 8.0;
  if (std::abs(delta) == 1) return -(3.0 * m - 8.0) / (32.0 * (m - 3.0));
  return alternating(delta) / 16.0;
}

double dimer_average_closed(int sites, DimerChannel channel) {
  check_closed_form_range(sites, 0);
  const double m = sites;
  if (channel == DimerChannel::XY) return 1.0 / (8.0 * (m - 3.0));
  return (2.0 - m) / (16.0 * (2.0 * m - 5.0) * (m - 3.0));
}

}  // namespace bhed
