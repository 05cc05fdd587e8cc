#pragma once

#include "crnf/hypersurface.hpp"
#include "crnf/series.hpp"

namespace crnf {

/// Admissible free data for reconstruction: a series chi(z, zeta, zbar, u)
/// with zetabar-degree zero on every monomial. The surface rebuilt from chi
/// carries chi + conj(chi) minus the shared zeta-free slice verbatim as the
/// zeta-free-or-zetabar-free part of its graph; every remaining coefficient
/// is forced by the vanishing of the Levi determinant.
///
/// Constraints enforced by make_distinguished:
///   * every monomial has zetabar-degree 0 and zbar-degree >= 3;
///   * the zeta-free slice chi(z, 0, zbar, u) is conjugation-symmetric;
///   * the slots with (z, zeta, zbar)-exponents in
///     {(0,1,3), (0,1,4), (1,1,3), (1,1,4), (3,0,3)} are absent
///     (they are removable by the residual symmetries of the model);
///   * every monomial has total degree >= 5 in (z, zeta, zbar).
struct DistinguishedPart {
  WSeries chi;
};

/// Validates the constraints above; throws ValidationError on any breach.
DistinguishedPart make_distinguished(WSeries chi);

/// chi + conj(chi) - (zeta-free slice of chi): the part of the graph that
/// reconstruction preserves verbatim.
WSeries distinguished_two_sided(const DistinguishedPart& dp);

/// Restriction of a two-sided distinguished series to zetabar-degree 0;
/// inverse of distinguished_two_sided on its image.
WSeries beta_zero_part(const WSeries& two_sided);

/// Rebuilds the unique surface in normal form whose distinguished part is
/// chi. Starting from the graph v = P + distinguished_two_sided(chi), the
/// zeta*zetabar-divisible coefficients are filled in standard degree by
/// standard degree so that the Levi determinant of the complex defining
/// equation vanishes. The result is real, passes is_in_normal_form, has a
/// Levi determinant that is zero throughout its truncation, and carries
/// form = normal_form.
///
/// Throws SolveError with a "triangularity breach" message if a residual of
/// lower standard degree reappears after its elimination step, i.e. if the
/// degree-by-degree system stops being triangular.
Hypersurface reconstruct(const DistinguishedPart& dp);

/// Levi determinant of the complex defining equation of M: the obstruction
/// series whose vanishing reconstruct enforces, exposed for independent
/// verification. Identically zero (throughout its truncation) on every
/// surface reconstruct returns.
WSeries residual_check(const Hypersurface& M);

}  // namespace crnf
