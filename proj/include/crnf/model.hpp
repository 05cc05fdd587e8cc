#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "crnf/hypersurface.hpp"
#include "crnf/mapjet.hpp"
#include "crnf/series.hpp"

namespace crnf {

/// Holomorphic vector field fz ∂/∂z + fzeta ∂/∂ζ + fw ∂/∂w with an optional
/// weighted grade. Derivations grade as [∂/∂z] = −1, [∂/∂ζ] = 0, [∂/∂w] = −2,
/// so a grade-m field has component weights (m+1, m, m+2).
struct VectorField {
  HolJet fz, fzeta, fw;
  std::optional<int> grade;

  explicit VectorField(Trunc tr) : fz(tr), fzeta(tr), fw(tr) {}
  VectorField(HolJet z_, HolJet zeta_, HolJet w_,
              std::optional<int> g = std::nullopt)
      : fz(std::move(z_)), fzeta(std::move(zeta_)), fw(std::move(w_)), grade(g) {}

  bool is_zero() const { return fz.is_zero() && fzeta.is_zero() && fw.is_zero(); }
  /// Every component monomial matches the declared grade (vacuous if unset).
  bool grade_consistent() const;

  friend bool operator==(const VectorField& x, const VectorField& y) {
    return x.fz == y.fz && x.fzeta == y.fzeta && x.fw == y.fw;
  }
};

VectorField operator+(const VectorField& x, const VectorField& y);
VectorField operator-(const VectorField& x, const VectorField& y);
VectorField vf_scaled(const VectorField& x, const GaussQ& c);

/// Directional derivative X(q) = fz q_z + fzeta q_ζ + fw q_w.
HolJet apply_field(const VectorField& X, const HolJet& q);

/// The ten basis fields of the model's graded infinitesimal automorphism
/// algebra, in grade order (−2, −1, −1, 0, 0, 0, 0, 1, 1, 2). Indices 3–4 are
/// the origin-preserving grade-0 pair, 7–8 the grade-1 pair, 9 the grade-2
/// field; together those five span the stability algebra of the origin.
std::vector<VectorField> algebra_basis(Trunc tr);

/// Flow generators of the stability group used by the normalization loop.
enum class FlowGen { g1_a, g1_b, g2 };
/// Index of the generator inside algebra_basis (g1_a → 7, g1_b → 8, g2 → 9).
int flow_gen_index(FlowGen g);

/// Lie bracket of vector fields. If both inputs carry grades and the result is
/// nonzero, the result carries the sum grade.
VectorField bracket(const VectorField& X, const VectorField& Y);

/// Defect measuring failure of X to be tangent to the model graph v = P:
/// Re(i·fw + 2·fz·P_z + 2·fzeta·P_ζ) restricted to w = u + iP. Zero exactly on
/// infinitesimal automorphisms.
WSeries tangency_defect(const VectorField& X, Trunc tr);

/// Membership of Y in the real linear span of `fields` (exact rational solve;
/// real coefficients, as the algebra is a real Lie algebra).
bool in_real_span(const VectorField& Y, const std::vector<VectorField>& fields);

/// A stability-group element: the exact scaling z ↦ λz, ζ ↦ (λ/λ̄)ζ,
/// w ↦ (λλ̄)w followed by time-t flows of the listed generators, in order.
struct GroupElement {
  GaussQ lambda = GaussQ(1);
  std::vector<std::pair<FlowGen, mpq_class>> flows;

  bool is_identity() const { return lambda == GaussQ(1) && flows.empty(); }
};

/// Factor picked up by the graph coefficient at `mo` under the scaling by λ:
/// ν λ^{−k} μ^{−l} λ̄^{−a} μ̄^{−b} ν^{−m} with μ = λ/λ̄, ν = λλ̄.
GaussQ scaling_factor(const GaussQ& lambda, const Mono5& mo);

/// Exact scaling applied to a hypersurface in perturbation (or normal) form.
/// The model part is scaling-invariant, so only phi is rescaled.
Hypersurface apply_scaling(const Hypersurface& M, const GaussQ& lambda);

/// The time-t flow exp(t X_gen) as a near-identity polynomial map, computed by
/// the terminating Lie series (each application raises weight by the grade).
MapJet flow_map(FlowGen gen, const mpq_class& t, Trunc tr);

/// Scaling followed by the listed flows. Input must be in perturbation or
/// normal form; output is in perturbation form.
Hypersurface apply_group(const Hypersurface& M, const GroupElement& g);

/// Admissible chain directions at the origin: ζ·u + i·z² = 0 with u ≠ 0.
bool canonical_cone_check(const GaussQ& z, const GaussQ& zeta, const mpq_class& u);

}  // namespace crnf
