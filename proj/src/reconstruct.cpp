#include "crnf/reconstruct.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "crnf/errors.hpp"
#include "crnf/linsolve.hpp"
#include "crnf/normalform.hpp"

namespace crnf {

namespace {

std::string slot_str(const Mono5& mo) {
  return "(" + std::to_string(mo.k) + "," + std::to_string(mo.l) + "," +
         std::to_string(mo.a) + "," + std::to_string(mo.b) + "," +
         std::to_string(mo.m) + ")";
}

// Slots removable by the residual symmetries of the model; they must be
// absent from admissible free data.
bool removable_slot(int k, int l, int a) {
  return (l == 1 && (k == 0 || k == 1) && (a == 3 || a == 4)) ||
         (k == 3 && l == 0 && a == 3);
}

}  // namespace

DistinguishedPart make_distinguished(WSeries chi) {
  for (const auto& [mo, c] : chi.terms()) {
    if (mo.b != 0)
      throw ValidationError("distinguished part: monomial " + slot_str(mo) +
                            " has nonzero zetabar-degree");
    if (mo.a < 3)
      throw ValidationError("distinguished part: monomial " + slot_str(mo) +
                            " has zbar-degree < 3");
    if (removable_slot(mo.k, mo.l, mo.a))
      throw ValidationError("distinguished part: removable slot " +
                            slot_str(mo) + " must vanish");
    if (mo.k + mo.l + mo.a < 5)
      throw ValidationError("distinguished part: monomial " + slot_str(mo) +
                            " has degree < 5 in (z, zeta, zbar)");
  }
  // The zeta-free slice must be fixed by conjugation: coefficient at
  // (k,0,a,0,m) equal to the conjugate of the one at (a,0,k,0,m).
  for (const auto& [mo, c] : chi.terms()) {
    if (mo.l != 0) continue;
    const GaussQ partner = chi.coeff({mo.a, mo.l, mo.k, mo.b, mo.m});
    if (partner != c.conj())
      throw ValidationError(
          "distinguished part: zeta-free slice is not conjugation-symmetric "
          "at " +
          slot_str(mo));
  }
  return DistinguishedPart{std::move(chi)};
}

WSeries distinguished_two_sided(const DistinguishedPart& dp) {
  WSeries out = dp.chi + dp.chi.conj();
  // The zeta-free slice is real and therefore counted by both summands.
  for (const auto& [mo, c] : dp.chi.terms())
    if (mo.l == 0) out.add_term(mo, -c);
  return out;
}

WSeries beta_zero_part(const WSeries& two_sided) {
  WSeries out(two_sided.trunc());
  for (const auto& [mo, c] : two_sided.terms())
    if (mo.b == 0) out.add_term(mo, c);
  return out;
}

Hypersurface reconstruct(const DistinguishedPart& dp) {
  make_distinguished(dp.chi);  // defensive revalidation of the constraints
  const Trunc tr = dp.chi.trunc();
  WSeries phi = distinguished_two_sided(dp);

  // One pass per standard degree: residuals of degree d in the Levi
  // determinant are linear in the yet-unknown zeta*zetabar-divisible
  // coefficients of degree d + 2, and every feedback of a correction lands
  // at degree > d, so the sweep is triangular.  A u-free correction only
  // responds on its own slot (with factor -4(l+1)(b+1)), but a u-power is
  // fed through the complex defining substitution u <- (theta + u)/2 and
  // sprays one correction across several same-degree slots; each step is
  // therefore a small exact linear system over conjugate-paired slots.
  // Truncating the determinant at degree d reduces its full linear response
  // to -4 * d/dzeta d/dzetabar of that substituted correction: every other
  // entry of the 3x3 determinant pairs the correction with cofactor content
  // of positive degree and lands beyond d.
  const int det_w = tr.weight >= 2 ? tr.weight - 2 : 0;
  const int det_z = tr.zeta >= 2 ? tr.zeta - 2 : 0;
  const GaussQ ii = GaussQ::i();
  for (int d = 1; d <= det_w + det_z; ++d) {
    const ComplexDefEq eq = to_complex_defining({phi, FormTag::normal_form});
    const WSeries det = levi_determinant(eq, d);
    WSeries resid(det.trunc());
    for (const auto& [mo, c] : det.terms()) {
      if (mo.sdeg() < d)
        throw SolveError("triangularity breach: residual at " + slot_str(mo) +
                         " survived its elimination step");
      if (mo.sdeg() == d) resid.add_term(mo, c);
    }
    if (resid.is_zero()) continue;

    const WSeries wbar_sub =
        (eq.theta + WSeries::variable(Var::u, eq.theta.trunc()))
            .scaled(GaussQ(mpq_class(1, 2)));
    auto response = [&](const WSeries& probe) {
      const WSeries full = substitute_u(probe, wbar_sub)
                               .diff(Var::zeta)
                               .diff(Var::zetabar)
                               .scaled(GaussQ(-4));
      WSeries out(full.trunc());
      for (const auto& [mo, c] : full.terms())
        if (mo.sdeg() == d) out.add_term(mo, c);
      return out;
    };

    // Real unknowns: one (real) or two (real + imaginary part) per
    // conjugate-paired slot of standard degree d + 2 inside the truncation.
    std::vector<WSeries> probes, cols;
    for (int m = 0; 2 * m <= tr.weight; ++m) {
      for (int k = 0; k + 2 * m <= tr.weight; ++k) {
        for (int a = 0; k + a + 2 * m <= tr.weight; ++a) {
          if (k + a + 2 * m < 3) continue;
          for (int l = 1; l <= tr.zeta; ++l) {
            const int b = d + 2 - k - l - a - 2 * m;
            if (b < 1 || l + b > tr.zeta) continue;
            const Mono5 mo{static_cast<int16_t>(k), static_cast<int16_t>(l),
                           static_cast<int16_t>(a), static_cast<int16_t>(b),
                           static_cast<int16_t>(m)};
            const Mono5 cj = mo.conj();
            if (Mono5Less{}(cj, mo)) continue;  // canonical representative
            WSeries pr(tr);
            pr.add_term(mo, GaussQ(1));
            if (!(mo == cj)) pr.add_term(cj, GaussQ(1));
            probes.push_back(pr);
            cols.push_back(response(pr));
            if (!(mo == cj)) {
              WSeries pi(tr);
              pi.add_term(mo, ii);
              pi.add_term(cj, -ii);
              probes.push_back(pi);
              cols.push_back(response(pi));
            }
          }
        }
      }
    }

    std::map<Mono5, std::size_t, Mono5Less> row_ix;
    for (const auto& [mo, c] : resid.terms()) row_ix.emplace(mo, 0);
    for (const WSeries& col : cols)
      for (const auto& [mo, c] : col.terms()) row_ix.emplace(mo, 0);
    std::size_t nrows = 0;
    for (auto& [mo, ix] : row_ix) ix = nrows++;

    QMat A(2 * nrows, QVec(cols.size(), mpq_class(0)));
    QVec rhs(2 * nrows, mpq_class(0));
    for (const auto& [mo, ix] : row_ix) {
      const GaussQ r = resid.coeff(mo);
      rhs[2 * ix] = -r.re();
      rhs[2 * ix + 1] = -r.im();
      for (std::size_t j = 0; j < cols.size(); ++j) {
        const GaussQ c = cols[j].coeff(mo);
        A[2 * ix][j] = c.re();
        A[2 * ix + 1][j] = c.im();
      }
    }
    const LinearSolution sol = EchelonSystem(std::move(A)).solve(rhs);
    if (!sol.consistent)
      throw SolveError(
          "triangularity breach: degree-" + std::to_string(d) +
          " step is not solvable at this truncation");
    for (std::size_t j = 0; j < probes.size(); ++j) {
      if (sgn(sol.x[j]) != 0) phi += probes[j].scaled(GaussQ(sol.x[j]));
    }
  }

  if (!phi.is_real())
    throw SolveError("reconstruction produced a non-real graph");
  const NormalFormCheck nf = is_in_normal_form(phi);
  if (!nf.ok)
    throw SolveError("reconstruction left the normal space at " +
                     slot_str(nf.violations.front()));
  Hypersurface out{phi, FormTag::normal_form};
  if (!residual_check(out).is_zero())
    throw SolveError(
        "triangularity breach: nonzero residual after the final sweep");
  return out;
}

WSeries residual_check(const Hypersurface& M) {
  return levi_determinant(to_complex_defining(M));
}

}  // namespace crnf
