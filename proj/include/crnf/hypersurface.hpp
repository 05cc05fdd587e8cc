#pragma once

#include <utility>

#include "crnf/mapjet.hpp"
#include "crnf/series.hpp"

namespace crnf {

// How the stored series phi relates to the graph function v = phi_graph(...):
//   raw_germ / prenormalized: phi IS the full graph function (leading z*zbar).
//   perturbation_of_P / normal_form: the graph is P + phi with phi of
//   weighted degree >= 3.
enum class FormTag { raw_germ, prenormalized, perturbation_of_P, normal_form };

struct Hypersurface {
  WSeries phi;
  FormTag form = FormTag::raw_germ;

  Trunc trunc() const { return phi.trunc(); }
  bool phi_carries_graph() const {
    return form == FormTag::raw_germ || form == FormTag::prenormalized;
  }
  WSeries graph() const;
};

// The model graph P = (z zbar + 1/2 z^2 zetabar + 1/2 zbar^2 zeta) * sum_j (zeta zetabar)^j,
// exact to the given truncation, and its z- and zeta-derivatives.
WSeries model_P(Trunc tr);
WSeries model_P_z(Trunc tr);
WSeries model_P_zeta(Trunc tr);

// Complex defining equation w = theta(z, zeta, zbar, zetabar, wbar); the
// u-slot of the backend stores wbar.
struct ComplexDefEq {
  WSeries theta;
};

// Solves w = wbar + 2i*phi(z, zeta, zbar, zetabar, (w + wbar)/2) for w.
// Throws ValidationError when the graph has content below weighted degree 2
// or a linear pure-u term (no germ shape); SolveError if iteration fails.
ComplexDefEq to_complex_defining(const Hypersurface& M);

// 3x3 determinant of (theta_zbar, theta_zetabar, theta_wbar) and its z- and
// zeta-derivative rows.  A nonnegative sdeg_cap restricts every product to
// standard degree <= sdeg_cap.
WSeries levi_determinant(const ComplexDefEq& E, int sdeg_cap = -1);

struct NondegReport {
  bool degenerate_to_order = false;
  bool kernel_rank_ok = false;
  bool two_nondeg_witness = false;
  bool all_ok() const { return degenerate_to_order && kernel_rank_ok && two_nondeg_witness; }
};

// Reports (never throws): Levi determinant vanishing to truncation, Levi
// kernel rank conditions, and the z^2 zetabar witness coefficient.
NondegReport validate_2nondegenerate(const Hypersurface& M);

// Pushes the hypersurface forward under the formal map T and re-solves the
// graph.  Form bookkeeping: graphs that included P keep the P-split
// (perturbation_of_P); raw/prenormalized inputs come back raw_germ.
Hypersurface pushforward(const Hypersurface& M, const MapJet& T);

// Removes harmonic terms and the low-zbar-degree killed shapes by explicit
// holomorphic changes of coordinates, iterating in ascending standard degree.
// Returns the prenormalized hypersurface and the composite map applied.
std::pair<Hypersurface, MapJet> prenormalize(const Hypersurface& M);

// Rewrites a prenormalized graph as P + Phi and checks that Phi has only
// weighted degrees >= 3; throws ValidationError listing offenders otherwise.
Hypersurface as_perturbation(const Hypersurface& M);

}  // namespace crnf
