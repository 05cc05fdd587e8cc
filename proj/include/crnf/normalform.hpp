#pragma once

#include <utility>
#include <vector>

#include "crnf/hypersurface.hpp"
#include "crnf/mapjet.hpp"
#include "crnf/series.hpp"

namespace crnf {

/// Linearized action of a map jet (f, g, h) on graph perturbations:
/// 2·Re(i·h + 2·f·P_z + 2·g·P_ζ) restricted to w = u + iP. Real output;
/// ℝ-linear (not ℂ-linear) in the jet.
WSeries homological_L(const MapJet& j, Trunc tr);

/// True iff the coefficient slot (k,l,a,b) is constrained to vanish in normal
/// form: either z̄-pair (a,b) or z-pair (k,l) lies in {(0,0),(1,0),(2,0)}, or
/// the slot is one of the ten exceptional low slots (five plus conjugates).
bool slot_constrained(const Mono5& mo);

struct NormalFormCheck {
  bool ok = true;
  std::vector<Mono5> violations;
};

/// Checks that no constrained slot carries a nonzero coefficient.
/// Expects a real series with weighted degrees >= 3.
NormalFormCheck is_in_normal_form(const WSeries& phi);

/// Splits psi into (n_part, r_part): n_part keeps exactly the unconstrained
/// slots and passes is_in_normal_form; r_part = psi - n_part.
std::pair<WSeries, WSeries> project_to_N(const WSeries& psi);

struct WeightSolution {
  MapJet j;
  WSeries n_remainder;
};

/// For real weight-m-homogeneous rhs, finds the unique jet with component
/// weights (m-1, m-2, m), the m=3/m=4 shape conditions f_zz = 0 and
/// Re h_ww = 0, and homological_L(j) + n_remainder = rhs with n_remainder
/// passing is_in_normal_form. Exact linear solve; the system matrix depends
/// only on (m, tr.zeta) and is cached process-wide. Throws SolveError
/// ("decomposition failure") on inconsistency or a nontrivial kernel.
WeightSolution solve_weight(int m, const WSeries& rhs, Trunc tr);

/// Free parameters of the normalization: chain direction a (grade-1 flows),
/// exact scaling lambda, and chain parameterization s (grade-2 flow).
struct NFParams {
  GaussQ a;
  GaussQ lambda = GaussQ(1);
  mpq_class s = 0;
};

struct NFReport {
  WSeries normal_phi;
  /// Composed near-identity factor of the normalizing transformation; the
  /// full transformation is this map applied after the lambda-scaling.
  MapJet map;
  NFParams params_used;
  /// Sphericity obstructions: coefficients at z^3 zetabar^2 and z^5 zetabar.
  /// Both zero iff the hypersurface is equivalent to the model.
  GaussQ phi3002_at_0, phi5001_at_0;
  WSeries distinguished;
};

/// Full normalization: applies the group element encoded by params, then for
/// each weight m = 3..W solves the weight-m slice and pushes the hypersurface
/// forward under the doubled jet, leaving exactly the unconstrained remainder.
/// Input must be in perturbation (or normal) form at the caller's working
/// truncation; the report is produced at that same truncation.
NFReport normalize(const Hypersurface& M, const NFParams& params = {});

/// Monomials of phi not divisible by ζζ̄ (the l = 0 or β = 0 slice), the free
/// data of a normal form. Requires phi in normal form; validates the slice
/// shape defensively.
WSeries extract_distinguished(const WSeries& phi);

/// Second-order transverse jet data (f_ww(0), g_w(0)) of the normalizing map
/// with chain direction a and default scaling/parameterization.
std::pair<GaussQ, GaussQ> chain_data(const Hypersurface& M, const GaussQ& a);

/// Kernel dimension of the homological operator on the unconstrained
/// origin-preserving jet space of grades 0..2 (no shape conditions); equals
/// the stability algebra dimension 5.
int stability_kernel_dim(Trunc tr);

}  // namespace crnf
