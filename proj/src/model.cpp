#include "crnf/model.hpp"

#include <array>
#include <map>
#include <utility>

#include "crnf/errors.hpp"
#include "crnf/linsolve.hpp"

namespace crnf {

bool VectorField::grade_consistent() const {
  if (!grade) return true;
  int m = *grade;
  for (const auto& [mo, c] : fz.terms()) {
    if (mo.weight() != m + 1) return false;
  }
  for (const auto& [mo, c] : fzeta.terms()) {
    if (mo.weight() != m) return false;
  }
  for (const auto& [mo, c] : fw.terms()) {
    if (mo.weight() != m + 2) return false;
  }
  return true;
}

VectorField operator+(const VectorField& x, const VectorField& y) {
  std::optional<int> g;
  if (x.grade && y.grade && *x.grade == *y.grade) g = x.grade;
  return {x.fz + y.fz, x.fzeta + y.fzeta, x.fw + y.fw, g};
}

VectorField operator-(const VectorField& x, const VectorField& y) {
  std::optional<int> g;
  if (x.grade && y.grade && *x.grade == *y.grade) g = x.grade;
  return {x.fz - y.fz, x.fzeta - y.fzeta, x.fw - y.fw, g};
}

VectorField vf_scaled(const VectorField& x, const GaussQ& c) {
  return {x.fz.scaled(c), x.fzeta.scaled(c), x.fw.scaled(c), x.grade};
}

HolJet apply_field(const VectorField& X, const HolJet& q) {
  return X.fz * q.diff(HVar::z) + X.fzeta * q.diff(HVar::zeta) + X.fw * q.diff(HVar::w);
}

std::vector<VectorField> algebra_basis(Trunc tr) {
  const GaussQ one(1), i = GaussQ::i();
  auto jet = [&tr](std::initializer_list<std::pair<Mono3, GaussQ>> terms) {
    HolJet j(tr);
    for (const auto& [mo, c] : terms) j.add_term(mo, c);
    return j;
  };
  std::vector<VectorField> b;
  b.reserve(10);
  // Grade -2: d/dw.
  b.push_back({jet({}), jet({}), jet({{{0, 0, 0}, one}}), -2});
  // Grade -1: (1 - zeta) d/dz + 2iz d/dw  and  i(1 + zeta) d/dz + 2z d/dw.
  b.push_back({jet({{{0, 0, 0}, one}, {{0, 1, 0}, -one}}), jet({}),
               jet({{{1, 0, 0}, GaussQ(mpq_class(0), mpq_class(2))}}), -1});
  b.push_back({jet({{{0, 0, 0}, i}, {{0, 1, 0}, i}}), jet({}),
               jet({{{1, 0, 0}, GaussQ(2)}}), -1});
  // Grade 0, origin-preserving pair: z d/dz + 2w d/dw  and  iz d/dz + 2i zeta d/dzeta.
  b.push_back({jet({{{1, 0, 0}, one}}), jet({}), jet({{{0, 0, 1}, GaussQ(2)}}), 0});
  b.push_back({jet({{{1, 0, 0}, i}}), jet({{{0, 1, 0}, i * GaussQ(2)}}), jet({}), 0});
  // Grade 0, remaining pair:
  // -z zeta d/dz + (1 - zeta^2) d/dzeta + iz^2 d/dw,
  //  iz zeta d/dz + i(1 + zeta^2) d/dzeta + z^2 d/dw.
  b.push_back({jet({{{1, 1, 0}, -one}}), jet({{{0, 0, 0}, one}, {{0, 2, 0}, -one}}),
               jet({{{2, 0, 0}, i}}), 0});
  b.push_back({jet({{{1, 1, 0}, i}}), jet({{{0, 0, 0}, i}, {{0, 2, 0}, i}}),
               jet({{{2, 0, 0}, one}}), 0});
  // Grade 1: (z^2 + iw + i zeta w) d/dz + 2(z + z zeta) d/dzeta + 2zw d/dw,
  //          (iz^2 + w - zeta w) d/dz + 2i(z zeta - z) d/dzeta + 2izw d/dw.
  // The second one equals the bracket of the zeta-rotation with the first;
  // the sign of its zeta*w term is forced by tangency to the model.
  b.push_back({jet({{{2, 0, 0}, one}, {{0, 0, 1}, i}, {{0, 1, 1}, i}}),
               jet({{{1, 0, 0}, GaussQ(2)}, {{1, 1, 0}, GaussQ(2)}}),
               jet({{{1, 0, 1}, GaussQ(2)}}), 1});
  b.push_back({jet({{{2, 0, 0}, i}, {{0, 0, 1}, one}, {{0, 1, 1}, -one}}),
               jet({{{1, 1, 0}, i * GaussQ(2)}, {{1, 0, 0}, -(i * GaussQ(2))}}),
               jet({{{1, 0, 1}, i * GaussQ(2)}}), 1});
  // Grade 2: zw d/dz - iz^2 d/dzeta + w^2 d/dw.
  b.push_back({jet({{{1, 0, 1}, one}}), jet({{{2, 0, 0}, -i}}),
               jet({{{0, 0, 2}, one}}), 2});
  return b;
}

int flow_gen_index(FlowGen g) {
  switch (g) {
    case FlowGen::g1_a: return 7;
    case FlowGen::g1_b: return 8;
    case FlowGen::g2: return 9;
  }
  throw std::domain_error("flow_gen_index: bad generator");
}

VectorField bracket(const VectorField& X, const VectorField& Y) {
  VectorField r{apply_field(X, Y.fz) - apply_field(Y, X.fz),
                apply_field(X, Y.fzeta) - apply_field(Y, X.fzeta),
                apply_field(X, Y.fw) - apply_field(Y, X.fw)};
  if (X.grade && Y.grade && !r.is_zero()) r.grade = *X.grade + *Y.grade;
  return r;
}

WSeries tangency_defect(const VectorField& X, Trunc tr) {
  WSeries wser = WSeries::variable(Var::u, tr) + model_P(tr).scaled(GaussQ::i());
  WSeries acc = hol_on_graph(X.fw, wser).scaled(GaussQ::i());
  acc += hol_on_graph(X.fz, wser) * model_P_z(tr).scaled(GaussQ(2));
  acc += hol_on_graph(X.fzeta, wser) * model_P_zeta(tr).scaled(GaussQ(2));
  return acc.real_part();
}

bool in_real_span(const VectorField& Y, const std::vector<VectorField>& fields) {
  // Rows: one per (component, monomial, re/im) appearing anywhere; columns:
  // one real coefficient per candidate field.
  struct RowLess {
    bool operator()(const std::pair<int, Mono3>& x, const std::pair<int, Mono3>& y) const {
      if (x.first != y.first) return x.first < y.first;
      return Mono3Less{}(x.second, y.second);
    }
  };
  std::map<std::pair<int, Mono3>, std::size_t, RowLess> row_of;
  auto row_key = [&row_of](int comp, const Mono3& mo) {
    return row_of.emplace(std::make_pair(comp, mo), row_of.size()).first->second;
  };
  auto comps = [](const VectorField& X) {
    return std::array<const HolJet*, 3>{&X.fz, &X.fzeta, &X.fw};
  };
  for (const auto& f : fields) {
    int ci = 0;
    for (const auto* j : comps(f)) {
      for (const auto& [mo, c] : j->terms()) row_key(ci, mo);
      ++ci;
    }
  }
  {
    int ci = 0;
    for (const auto* j : comps(Y)) {
      for (const auto& [mo, c] : j->terms()) row_key(ci, mo);
      ++ci;
    }
  }
  const std::size_t nrows = 2 * row_of.size();
  QMat A(nrows, QVec(fields.size(), mpq_class(0)));
  QVec b(nrows, mpq_class(0));
  for (std::size_t col = 0; col < fields.size(); ++col) {
    int ci = 0;
    for (const auto* j : comps(fields[col])) {
      for (const auto& [mo, c] : j->terms()) {
        std::size_t r = row_key(ci, mo);
        A[2 * r][col] = c.re();
        A[2 * r + 1][col] = c.im();
      }
      ++ci;
    }
  }
  {
    int ci = 0;
    for (const auto* j : comps(Y)) {
      for (const auto& [mo, c] : j->terms()) {
        std::size_t r = row_key(ci, mo);
        b[2 * r] = c.re();
        b[2 * r + 1] = c.im();
      }
      ++ci;
    }
  }
  EchelonSystem sys(std::move(A));
  return sys.solve(b).consistent;
}

GaussQ scaling_factor(const GaussQ& lambda, const Mono5& mo) {
  GaussQ lbar = lambda.conj();
  GaussQ mu = lambda * lbar.inverse();
  GaussQ nu = lambda * lbar;  // real, positive modulus squared
  GaussQ f = nu;
  f = f * lambda.pow(-mo.k) * mu.pow(-mo.l) * lbar.pow(-mo.a) * mu.conj().pow(-mo.b) *
      nu.pow(-mo.m);
  return f;
}

Hypersurface apply_scaling(const Hypersurface& M, const GaussQ& lambda) {
  if (M.phi_carries_graph()) {
    throw ValidationError("apply_scaling: input must be in perturbation or normal form");
  }
  if (lambda.is_zero()) throw ValidationError("apply_scaling: lambda must be nonzero");
  Hypersurface out;
  out.form = FormTag::perturbation_of_P;
  WSeries phi(M.phi.trunc());
  for (const auto& [mo, c] : M.phi.terms()) phi.add_term(mo, c * scaling_factor(lambda, mo));
  out.phi = std::move(phi);
  return out;
}

MapJet flow_map(FlowGen gen, const mpq_class& t, Trunc tr) {
  // Work in an inflated window and re-expand after every application: each
  // directional derivative narrows the bookkeeping window even though the
  // data stays an exact polynomial, and intermediate monomials of a grade-1
  // series can exceed the zeta cap before dropping back below it. Weighted
  // degree never decreases under a positive-grade field, so weight head-room
  // of one application suffices, while the zeta cap needs head-room for the
  // whole tail of the series (at most one zeta per weight step).
  const Trunc wide(tr.weight + 2, tr.zeta + tr.weight + 3);
  const VectorField X = algebra_basis(wide)[static_cast<std::size_t>(flow_gen_index(gen))];
  MapJet T = MapJet::identity(tr);
  if (sgn(t) == 0) return T;
  auto lie = [&](HVar v) {
    HolJet term = HolJet::variable(v, wide);
    HolJet acc(tr);
    mpq_class coeff(1);
    const int max_n = 2 * (wide.weight + wide.zeta) + 4;
    for (int n = 1; !term.is_zero(); ++n) {
      if (n > max_n) throw SolveError("flow_map: Lie series did not terminate");
      term = apply_field(X, term).zero_extended(wide);
      coeff *= t;
      coeff /= n;
      acc += term.scaled(GaussQ(coeff)).truncated(tr);
    }
    return acc;
  };
  T.f = lie(HVar::z);
  T.g = lie(HVar::zeta);
  T.h = lie(HVar::w);
  T.shape = MapJet::Shape::general;
  return T;
}

Hypersurface apply_group(const Hypersurface& M, const GroupElement& g) {
  if (M.form != FormTag::perturbation_of_P && M.form != FormTag::normal_form) {
    throw ValidationError("apply_group: input must be in perturbation or normal form");
  }
  Hypersurface cur = (g.lambda == GaussQ(1)) ? M : apply_scaling(M, g.lambda);
  cur.form = FormTag::perturbation_of_P;
  for (const auto& [gen, t] : g.flows) {
    cur = pushforward(cur, flow_map(gen, t, cur.phi.trunc()));
  }
  return cur;
}

bool canonical_cone_check(const GaussQ& z, const GaussQ& zeta, const mpq_class& u) {
  if (sgn(u) == 0) return false;
  return (zeta * GaussQ(u) + GaussQ::i() * z * z).is_zero();
}

}  // namespace crnf
