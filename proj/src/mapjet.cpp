#include "crnf/mapjet.hpp"

#include "crnf/errors.hpp"

namespace crnf {

bool MapJet::vspace_shape_ok() const {
  for (const auto& [mo, c] : f.terms()) {
    if (mo.weight() < 2) return false;
  }
  if (!f.coeff({2, 0, 0}).is_zero()) return false;
  for (const auto& [mo, c] : g.terms()) {
    if (mo.weight() < 1) return false;
  }
  for (const auto& [mo, c] : h.terms()) {
    if (mo.weight() < 3) return false;
  }
  if (h.coeff({0, 0, 2}).re() != 0) return false;
  return true;
}

MapJet compose(const MapJet& after, const MapJet& before) {
  HolJet bz = before.full_z(), bzeta = before.full_zeta(), bw = before.full_w();
  Trunc tr = bz.trunc().meet(after.f.trunc());
  MapJet r;
  r.f = before.f.truncated(tr) + hol_compose(after.f, bz, bzeta, bw);
  r.g = before.g.truncated(tr) + hol_compose(after.g, bz, bzeta, bw);
  r.h = before.h.truncated(tr) + hol_compose(after.h, bz, bzeta, bw);
  r.shape = (after.shape == MapJet::Shape::vspace && before.shape == MapJet::Shape::vspace)
                ? MapJet::Shape::vspace
                : MapJet::Shape::general;
  return r;
}

WSeries transport_graph(const WSeries& graph_phi, const MapJet& T) {
  Trunc tr = graph_phi.trunc().meet(T.f.trunc()).meet(T.g.trunc()).meet(T.h.trunc());
  WSeries phi = graph_phi.truncated(tr);
  if (T.is_identity()) return phi;

  WSeries wser = WSeries::variable(Var::u, tr) + phi.scaled(GaussQ::i());
  WSeries F = WSeries::variable(Var::z, tr) + hol_on_graph(T.f, wser);
  WSeries G = WSeries::variable(Var::zeta, tr) + hol_on_graph(T.g, wser);
  WSeries H = wser + hol_on_graph(T.h, wser);
  WSeries Up = H.real_part();
  WSeries Vp = H.imag_part();

  Subst5 ctx(F, G, F.conj(), G.conj(), Up);
  WSeries out = phi;
  WSeries image = ctx.apply(out);
  const int max_iter = tr.weight + tr.zeta + 6;
  for (int it = 0; it < max_iter; ++it) {
    WSeries resid = Vp - image;
    if (resid.is_zero()) return out;
    out += resid;
    image += ctx.apply(resid);
  }
  throw SolveError("transport_graph: fixed-point iteration did not stabilize");
}

WSeries transport_graph_linear_mix(const WSeries& graph_phi, const GaussQ& z_from_zeta,
                                   const GaussQ& zeta_from_z) {
  GaussQ det = GaussQ(1) - z_from_zeta * zeta_from_z;
  if (det.is_zero()) {
    throw SolveError("transport_graph_linear_mix: non-invertible linear map");
  }
  GaussQ inv = det.inverse();
  Trunc tr = graph_phi.trunc();
  // Inverse of (z, zeta) |-> (z + c1*zeta, zeta + c2*z).
  WSeries iz = (WSeries::variable(Var::z, tr) -
                WSeries::variable(Var::zeta, tr).scaled(z_from_zeta))
                   .scaled(inv);
  WSeries izeta = (WSeries::variable(Var::zeta, tr) -
                   WSeries::variable(Var::z, tr).scaled(zeta_from_z))
                      .scaled(inv);
  return substitute(graph_phi, iz, izeta, iz.conj(), izeta.conj(),
                    WSeries::variable(Var::u, tr));
}

}  // namespace crnf
