#pragma once

#include "crnf/series.hpp"

namespace crnf {

// A formal transformation of the ambient space,
//   z |-> z + f(z, zeta, w),  zeta |-> zeta + g(z, zeta, w),  w |-> w + h(z, zeta, w),
// stored via its corrections (f, g, h).
struct MapJet {
  HolJet f, g, h;
  enum class Shape { vspace, general };
  Shape shape = Shape::general;

  static MapJet identity(Trunc tr) {
    return MapJet{HolJet(tr), HolJet(tr), HolJet(tr), Shape::general};
  }
  bool is_identity() const { return f.is_zero() && g.is_zero() && h.is_zero(); }

  // Full components z + f, zeta + g, w + h.
  HolJet full_z() const { return HolJet::variable(HVar::z, f.trunc()) + f; }
  HolJet full_zeta() const { return HolJet::variable(HVar::zeta, g.trunc()) + g; }
  HolJet full_w() const { return HolJet::variable(HVar::w, h.trunc()) + h; }

  // Checks the vspace shape: f only weights >= 2 with zero z^2-coefficient at
  // the origin jet, g only weights >= 1, h only weights >= 3 with purely
  // imaginary w^2-coefficient.
  bool vspace_shape_ok() const;
};

// Composition: the map sending p to after(before(p)).
MapJet compose(const MapJet& after, const MapJet& before);

// Pushforward of a graph {v = graph_phi(z, zeta, zbar, zetabar, u)} under T.
// Solves the transformed graph function by warm-started fixed-point iteration;
// requires that every correction term raises some admissible grading (true for
// origin-preserving triangular corrections).  Throws SolveError if the
// iteration fails to stabilize.
WSeries transport_graph(const WSeries& graph_phi, const MapJet& T);

// Pushforward under the invertible linear w-fixing map
//   z |-> z + cz*zeta,  zeta |-> zeta + cz2*z   (either coefficient may be 0),
// which has the closed form graph'(...) = graph(L^{-1}(...)).
WSeries transport_graph_linear_mix(const WSeries& graph_phi, const GaussQ& z_from_zeta,
                                   const GaussQ& zeta_from_z);

}  // namespace crnf
