#include "crnf/hypersurface.hpp"

#include <sstream>
#include <string>

#include "crnf/errors.hpp"

namespace crnf {

WSeries Hypersurface::graph() const {
  if (phi_carries_graph()) return phi;
  return model_P(phi.trunc()) + phi;
}

WSeries model_P(Trunc tr) {
  WSeries p(tr);
  for (int j = 0; 2 * j <= tr.zeta; ++j) {
    auto jj = static_cast<std::int16_t>(j);
    p.add_term({1, jj, 1, jj, 0}, GaussQ(1));
    p.add_term({2, jj, 0, static_cast<std::int16_t>(j + 1), 0}, GaussQ(mpq_class(1, 2)));
    p.add_term({0, static_cast<std::int16_t>(j + 1), 2, jj, 0}, GaussQ(mpq_class(1, 2)));
  }
  return p;
}

WSeries model_P_z(Trunc tr) { return model_P(Trunc(tr.weight + 1, tr.zeta)).diff(Var::z); }

WSeries model_P_zeta(Trunc tr) {
  return model_P(Trunc(tr.weight, tr.zeta + 1)).diff(Var::zeta);
}

ComplexDefEq to_complex_defining(const Hypersurface& M) {
  WSeries phi = M.graph();
  Trunc tr = phi.trunc();
  if (!phi.is_real()) throw ValidationError("to_complex_defining: graph is not real");
  for (const auto& [mo, c] : phi.terms()) {
    if (mo.weight() < 2) {
      throw ValidationError("to_complex_defining: graph has weighted degree < 2 content");
    }
  }
  if (!phi.coeff({0, 0, 0, 0, 1}).is_zero()) {
    throw ValidationError("to_complex_defining: graph has a linear pure-u term");
  }

  WSeries u = WSeries::variable(Var::u, tr);
  GaussQ half(mpq_class(1, 2));
  GaussQ two_i(mpq_class(0), mpq_class(2));
  WSeries theta = u;
  const int max_iter = tr.weight + tr.zeta + 4;
  bool stable = false;
  for (int it = 0; it < max_iter && !stable; ++it) {
    WSeries next = u + substitute_u(phi, (theta + u).scaled(half)).scaled(two_i);
    stable = (next == theta);
    theta = std::move(next);
  }
  if (!stable) throw SolveError("to_complex_defining: fixed point did not stabilize");

  // Back-substitution check: on the graph, wbar = u - i*phi must map theta
  // back to u + i*phi.
  WSeries wbar = u - phi.scaled(GaussQ::i());
  if (substitute_u(theta, wbar) != u + phi.scaled(GaussQ::i())) {
    throw SolveError("to_complex_defining: round-trip residual nonzero");
  }
  return ComplexDefEq{std::move(theta)};
}

WSeries levi_determinant(const ComplexDefEq& E, int sdeg_cap) {
  const WSeries& th = E.theta;
  // Derivatives of a polynomial jet are exact polynomials, but diff() shrinks
  // the bookkeeping window; multiplying the shrunken factors would discard
  // exact determinant content.  Widen every entry back to theta's window,
  // assemble the determinant there, and truncate to the window the result
  // actually certifies: terms of theta beyond (W, D) can contribute to the
  // determinant from weight W-1 / zeta-pair D-1 on (one u- or zeta-pair
  // derivative of an unknown term, times unit-weight known factors), so the
  // determinant is complete on (W-2, D-2).
  const Trunc full = th.trunc();
  WSeries tz = th.diff(Var::z);
  WSeries tzeta = th.diff(Var::zeta);

  auto wide = [&full](WSeries s) { return s.zero_extended(full); };
  WSeries a11 = wide(th.diff(Var::zbar));
  WSeries a12 = wide(th.diff(Var::zetabar));
  WSeries a13 = wide(th.diff(Var::u));
  WSeries a21 = wide(tz.diff(Var::zbar));
  WSeries a22 = wide(tz.diff(Var::zetabar));
  WSeries a23 = wide(tz.diff(Var::u));
  WSeries a31 = wide(tzeta.diff(Var::zbar));
  WSeries a32 = wide(tzeta.diff(Var::zetabar));
  WSeries a33 = wide(tzeta.diff(Var::u));

  auto mul = [sdeg_cap](const WSeries& x, const WSeries& y) {
    return sdeg_cap >= 0 ? mul_sdeg(x, y, sdeg_cap) : x * y;
  };
  WSeries det = mul(a11, mul(a22, a33) - mul(a23, a32));
  det -= mul(a12, mul(a21, a33) - mul(a23, a31));
  det += mul(a13, mul(a21, a32) - mul(a22, a31));
  const Trunc honest(full.weight >= 2 ? full.weight - 2 : 0,
                     full.zeta >= 2 ? full.zeta - 2 : 0);
  return det.truncated(honest);
}

NondegReport validate_2nondegenerate(const Hypersurface& M) {
  NondegReport rep;
  WSeries g = M.graph();
  rep.kernel_rank_ok =
      g.coeff({1, 0, 1, 0, 0}) == GaussQ(1) && g.coeff({0, 1, 0, 1, 0}).is_zero();
  rep.two_nondeg_witness = !g.coeff({2, 0, 0, 1, 0}).is_zero();
  try {
    rep.degenerate_to_order = levi_determinant(to_complex_defining(M)).is_zero();
  } catch (const std::exception&) {
    rep.degenerate_to_order = false;
  }
  return rep;
}

Hypersurface pushforward(const Hypersurface& M, const MapJet& T) {
  Hypersurface out;
  if (M.phi_carries_graph()) {
    out.phi = transport_graph(M.graph(), T);
    out.form = FormTag::raw_germ;
    return out;
  }
  // The model carries zeta-pair content beyond any cap.  Under a map with a
  // zeta correction, a tail term at zeta-pair D + j re-enters the window
  // zeta-pair <= D only after j zeta replacements, each costing at least one
  // unit of weight; so expanding the model to zeta-pair D + W - 2 makes all
  // weight <= W output content exact.
  const Trunc tr = M.phi.trunc();
  const Trunc wide(tr.weight, tr.zeta + (tr.weight >= 2 ? tr.weight - 2 : 0), tr.sdeg);
  MapJet Tw = T;
  Tw.f = T.f.zero_extended(wide);
  Tw.g = T.g.zero_extended(wide);
  Tw.h = T.h.zero_extended(wide);
  WSeries graph = model_P(wide) + M.phi.zero_extended(wide);
  out.phi = transport_graph(graph, Tw).truncated(tr) - model_P(tr);
  out.form = FormTag::perturbation_of_P;
  return out;
}

namespace {

std::string mono_str(const Mono5& mo) {
  std::ostringstream os;
  os << "(" << mo.k << "," << mo.l << "," << mo.a << "," << mo.b << "," << mo.m << ")";
  return os.str();
}

// Killed low-zbar-degree shapes: harmonic (a,b)=(0,0); (a,b)=(1,0) except
// z*zbar-type; (a,b)=(2,0) except the zbar^2*zeta skeleton slot; and their
// conjugates.
bool killed_shape(const Mono5& mo) {
  if (mo.a == 0 && mo.b == 0) return true;
  if (mo.a == 1 && mo.b == 0 && !(mo.k == 1 && mo.l == 0)) return true;
  if (mo.a == 2 && mo.b == 0 && !(mo.k == 0 && mo.l == 1)) return true;
  Mono5 cj = mo.conj();
  if (cj.a == 0 && cj.b == 0) return true;
  if (cj.a == 1 && cj.b == 0 && !(cj.k == 1 && cj.l == 0)) return true;
  if (cj.a == 2 && cj.b == 0 && !(cj.k == 0 && cj.l == 1)) return true;
  return false;
}

}  // namespace

std::pair<Hypersurface, MapJet> prenormalize(const Hypersurface& M) {
  if (!M.phi_carries_graph()) {
    throw ValidationError("prenormalize: expects a raw graph form");
  }
  WSeries graph = M.phi;
  Trunc tr = graph.trunc();
  if (!graph.is_real()) throw ValidationError("prenormalize: graph is not real");

  // The standard-degree-2 slice must be exactly z*zbar.
  for (const auto& [mo, c] : graph.terms()) {
    if (mo.sdeg() < 2) throw ValidationError("prenormalize: content below standard degree 2");
    if (mo.sdeg() == 2 && !(mo == Mono5{1, 0, 1, 0, 0})) {
      throw ValidationError("prenormalize: standard-degree-2 part is not z*zbar at " +
                            mono_str(mo));
    }
  }
  GaussQ c0 = graph.coeff({1, 0, 1, 0, 0});
  if (c0.is_zero()) throw ValidationError("prenormalize: z*zbar coefficient is zero");

  MapJet total = MapJet::identity(tr);

  // Normalize the z*zbar coefficient to 1 by the real scaling w -> w/c0.
  if (c0 != GaussQ(1)) {
    GaussQ nu = c0.inverse();  // real since the slot is self-conjugate
    graph = substitute_u(graph, WSeries::variable(Var::u, tr).scaled(nu.inverse())).scaled(nu);
    MapJet t = MapJet::identity(tr);
    t.h = HolJet::variable(HVar::w, tr).scaled(nu - GaussQ(1));
    total = compose(t, total);
  }

  // Normalize the z^2 zetabar witness to 1/2 by zeta -> mu*zeta.
  GaussQ cw = graph.coeff({2, 0, 0, 1, 0});
  if (cw.is_zero()) {
    throw ValidationError("prenormalize: z^2 zetabar witness coefficient is zero");
  }
  if (cw != GaussQ(mpq_class(1, 2))) {
    GaussQ mu = cw.conj() * GaussQ(2);
    WSeries zv = WSeries::variable(Var::z, tr);
    WSeries zetav = WSeries::variable(Var::zeta, tr).scaled(mu.inverse());
    graph = substitute(graph, zv, zetav, zv.conj(), zetav.conj(), WSeries::variable(Var::u, tr));
    MapJet t = MapJet::identity(tr);
    t.g = HolJet::variable(HVar::zeta, tr).scaled(mu - GaussQ(1));
    total = compose(t, total);
  }

  const int sdeg_max = tr.weight + tr.zeta;
  const GaussQ half(mpq_class(1, 2));
  const GaussQ minus_two_i(mpq_class(0), mpq_class(-2));

  for (int sweep = 0; sweep < 5; ++sweep) {
    bool changed = false;
    for (int d = 3; d <= sdeg_max; ++d) {
      // Pass A: harmonic terms of standard degree d absorbed into w.
      HolJet a(tr);
      for (const auto& [mo, c] : graph.terms()) {
        if (mo.a != 0 || mo.b != 0 || mo.sdeg() != d) continue;
        GaussQ coeff = (mo.k == 0 && mo.l == 0) ? c * half : c;
        a.add_term({mo.k, mo.l, mo.m}, coeff);
      }
      if (!a.is_zero()) {
        MapJet t = MapJet::identity(tr);
        t.h = a.scaled(minus_two_i);
        graph = transport_graph(graph, t);
        total = compose(t, total);
        changed = true;
      }

      // Pass B: zbar-linear terms killed by z -> z + chi(z, zeta, w).
      HolJet chi(tr);
      for (const auto& [mo, c] : graph.terms()) {
        if (mo.a != 1 || mo.b != 0 || mo.sdeg() != d) continue;
        if (mo.k == 1 && mo.l == 0) continue;
        chi.add_term({mo.k, mo.l, mo.m}, c);
      }
      if (!chi.is_zero()) {
        MapJet t = MapJet::identity(tr);
        t.f = chi;
        graph = transport_graph(graph, t);
        total = compose(t, total);
        changed = true;
      }

      // Pass C: zbar^2 terms killed by zeta -> zeta + rho(z, zeta, w); the
      // z-linear part of rho must go through the closed-form linear map.
      // The self-conjugate slot z^2 zbar^2 u^m is hit by rho and conj(rho)
      // at once, so it only needs half the correction.
      HolJet rho(tr);
      for (const auto& [mo, c] : graph.terms()) {
        if (mo.a != 2 || mo.b != 0 || mo.sdeg() != d) continue;
        if (mo.k == 0 && mo.l == 1) continue;
        const bool self_conj = (mo.k == 2 && mo.l == 0);
        rho.add_term({mo.k, mo.l, mo.m}, self_conj ? c : c * GaussQ(2));
      }
      GaussQ lin = rho.coeff({1, 0, 0});
      if (!lin.is_zero()) {
        graph = transport_graph_linear_mix(graph, GaussQ(), lin);
        MapJet t = MapJet::identity(tr);
        t.g = HolJet::variable(HVar::z, tr).scaled(lin);
        total = compose(t, total);
        rho.add_term({1, 0, 0}, -lin);
        changed = true;
      }
      if (!rho.is_zero()) {
        MapJet t = MapJet::identity(tr);
        t.g = rho;
        graph = transport_graph(graph, t);
        total = compose(t, total);
        changed = true;
      }
    }
    if (!changed) break;
  }

  for (const auto& [mo, c] : graph.terms()) {
    if (mo == Mono5{1, 0, 1, 0, 0} || mo == Mono5{2, 0, 0, 1, 0} || mo == Mono5{0, 1, 2, 0, 0}) {
      continue;
    }
    if (killed_shape(mo)) {
      throw SolveError("prenormalize: killed shape survived at " + mono_str(mo));
    }
  }

  Hypersurface out;
  out.phi = std::move(graph);
  out.form = FormTag::prenormalized;
  return {std::move(out), std::move(total)};
}

Hypersurface as_perturbation(const Hypersurface& M) {
  if (M.form == FormTag::perturbation_of_P || M.form == FormTag::normal_form) return M;
  if (M.form != FormTag::prenormalized) {
    throw ValidationError("as_perturbation: input must be prenormalized");
  }
  WSeries phi = M.phi - model_P(M.phi.trunc());
  std::string offenders;
  for (const auto& [mo, c] : phi.terms()) {
    if (mo.weight() < 3) offenders += " " + mono_str(mo);
  }
  if (!offenders.empty()) {
    throw ValidationError("as_perturbation: perturbation violation at" + offenders);
  }
  Hypersurface out;
  out.phi = std::move(phi);
  out.form = FormTag::perturbation_of_P;
  return out;
}

}  // namespace crnf
