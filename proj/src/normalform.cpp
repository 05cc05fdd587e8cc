#include "crnf/normalform.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

#include "crnf/errors.hpp"
#include "crnf/linsolve.hpp"
#include "crnf/model.hpp"

namespace crnf {

WSeries homological_L(const MapJet& j, Trunc tr) {
  return tangency_defect(VectorField{j.f, j.g, j.h}, tr).scaled(GaussQ(2));
}

bool slot_constrained(const Mono5& mo) {
  auto low = [](int x, int y) { return y == 0 && x <= 2; };
  if (low(mo.a, mo.b) || low(mo.k, mo.l)) return true;
  auto exceptional = [](int k, int l, int a, int b) {
    if (l == 0 && b == 1 && (a == 0 || a == 1) && (k == 3 || k == 4)) return true;
    return k == 3 && l == 0 && a == 3 && b == 0;
  };
  return exceptional(mo.k, mo.l, mo.a, mo.b) || exceptional(mo.a, mo.b, mo.k, mo.l);
}

NormalFormCheck is_in_normal_form(const WSeries& phi) {
  NormalFormCheck out;
  for (const auto& [mo, c] : phi.terms()) {
    if (slot_constrained(mo)) {
      out.ok = false;
      out.violations.push_back(mo);
    }
  }
  return out;
}

std::pair<WSeries, WSeries> project_to_N(const WSeries& psi) {
  WSeries n(psi.trunc()), r(psi.trunc());
  for (const auto& [mo, c] : psi.terms()) {
    (slot_constrained(mo) ? r : n).add_term(mo, c);
  }
  return {std::move(n), std::move(r)};
}

namespace {

struct UnknownSlot {
  int comp;  // 0 = f, 1 = g, 2 = h
  Mono3 mo;
  int part;  // 0: real basis coefficient, 1: imaginary
};

Mono5 canonical_slot(const Mono5& mo) {
  Mono5 cj = mo.conj();
  return Mono5Less{}(cj, mo) ? cj : mo;
}

// Shared evaluation context for images of unit jets: i h + 2 f P_z + 2 g P_ζ
// restricted to w = u + iP (complex-linear "core"; the operator itself is the
// core plus its conjugate).
struct CoreContext {
  Trunc tr;
  WSeries pz, pzeta;
  std::vector<WSeries> wpow;  // (u + iP)^p

  CoreContext(Trunc t, int max_p)
      : tr(t), pz(model_P_z(t)), pzeta(model_P_zeta(t)) {
    WSeries wser = WSeries::variable(Var::u, tr) + model_P(tr).scaled(GaussQ::i());
    wpow.reserve(static_cast<std::size_t>(max_p) + 1);
    wpow.push_back(WSeries::constant(GaussQ(1), tr));
    for (int p = 1; p <= max_p; ++p) wpow.push_back(wpow.back() * wser);
  }

  WSeries core(int comp, const Mono3& mo) const {
    WSeries base =
        WSeries::monomial({mo.k, mo.l, 0, 0, 0}, GaussQ(1), tr) * wpow[static_cast<std::size_t>(mo.p)];
    if (comp == 0) return base * pz.scaled(GaussQ(2));
    if (comp == 1) return base * pzeta.scaled(GaussQ(2));
    return base.scaled(GaussQ::i());
  }
};

struct WeightTables {
  std::vector<UnknownSlot> unknowns;
  std::vector<Mono5> rows;  // canonical constrained slots with a nonzero column
  std::size_t shape_rows;
  EchelonSystem sys;
};

// Assemble the two real columns (unit and i-unit jets) of every slot, collect
// the hit row set, and row-reduce once. `constrained_only` restricts equations
// to normal-form-constrained slots (the per-weight solver); without it every
// image slot becomes an equation (kernel computations).
struct AssembledSystem {
  std::vector<UnknownSlot> unknowns;
  std::vector<Mono5> rows;
  QMat a;
};

AssembledSystem assemble(const std::vector<std::pair<int, Mono3>>& slots, const CoreContext& ctx,
                         bool constrained_only, std::size_t shape_rows) {
  AssembledSystem out;
  out.unknowns.reserve(slots.size() * 2);
  std::vector<std::map<Mono5, GaussQ, Mono5Less>> cols;
  cols.reserve(slots.size() * 2);
  std::map<Mono5, std::size_t, Mono5Less> row_index;
  for (const auto& [comp, mo] : slots) {
    WSeries core = ctx.core(comp, mo);
    WSeries imag_core = core.scaled(GaussQ::i());
    for (int part = 0; part < 2; ++part) {
      const WSeries& cr = part == 0 ? core : imag_core;
      WSeries image = cr + cr.conj();
      std::map<Mono5, GaussQ, Mono5Less> col;
      for (const auto& [slot, coeff] : image.terms()) {
        if (constrained_only && !slot_constrained(slot)) continue;
        Mono5 cs = canonical_slot(slot);
        if (!(cs == slot)) continue;
        row_index.emplace(cs, 0);
        col.emplace(slot, coeff);
      }
      out.unknowns.push_back({comp, mo, part});
      cols.push_back(std::move(col));
    }
  }
  out.rows.reserve(row_index.size());
  for (auto& [slot, idx] : row_index) {
    idx = out.rows.size();
    out.rows.push_back(slot);
  }
  out.a.assign(2 * out.rows.size() + shape_rows, QVec(out.unknowns.size(), mpq_class(0)));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (const auto& [slot, coeff] : cols[c]) {
      std::size_t r = row_index.at(slot);
      out.a[2 * r][c] = coeff.re();
      out.a[2 * r + 1][c] = coeff.im();
    }
  }
  return out;
}

std::size_t unknown_column(const std::vector<UnknownSlot>& unknowns, int comp, const Mono3& mo,
                           int part) {
  for (std::size_t c = 0; c < unknowns.size(); ++c) {
    if (unknowns[c].comp == comp && unknowns[c].mo == mo && unknowns[c].part == part) return c;
  }
  throw SolveError("solve_weight: shape-constrained unknown slot missing");
}

std::shared_ptr<const WeightTables> weight_tables(int m, int cap) {
  static std::map<std::pair<int, int>, std::shared_ptr<const WeightTables>> cache;
  static std::mutex mu;
  {
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find({m, cap});
    if (it != cache.end()) return it->second;
  }

  CoreContext ctx(Trunc(m, cap), m / 2);
  std::vector<std::pair<int, Mono3>> slots;
  auto add_slots = [&](int comp, int wt) {
    for (int p = 0; 2 * p <= wt; ++p) {
      int k = wt - 2 * p;
      for (int l = 0; l <= cap; ++l) {
        slots.emplace_back(comp, Mono3{static_cast<std::int16_t>(k), static_cast<std::int16_t>(l),
                                       static_cast<std::int16_t>(p)});
      }
    }
  };
  add_slots(0, m - 1);
  add_slots(1, m - 2);
  add_slots(2, m);

  const std::size_t shape_rows = m == 3 ? 2 : (m == 4 ? 1 : 0);
  AssembledSystem as = assemble(slots, ctx, /*constrained_only=*/true, shape_rows);
  std::size_t sr = 2 * as.rows.size();
  if (m == 3) {
    as.a[sr][unknown_column(as.unknowns, 0, {2, 0, 0}, 0)] = 1;
    as.a[sr + 1][unknown_column(as.unknowns, 0, {2, 0, 0}, 1)] = 1;
  } else if (m == 4) {
    as.a[sr][unknown_column(as.unknowns, 2, {0, 0, 2}, 0)] = 1;
  }

  auto tbl = std::make_shared<WeightTables>(WeightTables{
      std::move(as.unknowns), std::move(as.rows), shape_rows, EchelonSystem(std::move(as.a))});
  if (tbl->sys.kernel_dim() != 0) {
    throw SolveError("decomposition failure: nontrivial kernel at weight " + std::to_string(m));
  }
  std::lock_guard<std::mutex> lk(mu);
  auto [it, inserted] = cache.emplace(std::make_pair(m, cap), std::move(tbl));
  return it->second;
}

}  // namespace

WeightSolution solve_weight(int m, const WSeries& rhs, Trunc tr) {
  if (m < 3 || m > tr.weight) {
    throw ValidationError("solve_weight: weight must lie in [3, truncation weight]");
  }
  if (!rhs.is_real()) throw ValidationError("solve_weight: rhs must be real");
  bool has_constrained = false;
  for (const auto& [mo, c] : rhs.terms()) {
    if (mo.weight() != m) throw ValidationError("solve_weight: rhs is not weight-homogeneous");
    has_constrained = has_constrained || slot_constrained(mo);
  }
  MapJet j = MapJet::identity(tr);
  if (!has_constrained) return {std::move(j), rhs};

  auto tbl = weight_tables(m, tr.zeta);
  QVec b(2 * tbl->rows.size() + tbl->shape_rows, mpq_class(0));
  for (std::size_t r = 0; r < tbl->rows.size(); ++r) {
    GaussQ c = rhs.coeff(tbl->rows[r]);
    b[2 * r] = c.re();
    b[2 * r + 1] = c.im();
  }
  LinearSolution sol = tbl->sys.solve(b);
  if (!sol.consistent) {
    throw SolveError("decomposition failure: inconsistent system at weight " + std::to_string(m));
  }
  for (std::size_t c = 0; c < tbl->unknowns.size(); ++c) {
    if (sgn(sol.x[c]) == 0) continue;
    const UnknownSlot& us = tbl->unknowns[c];
    GaussQ add = us.part == 0 ? GaussQ(sol.x[c]) : GaussQ(mpq_class(0), sol.x[c]);
    HolJet& target = us.comp == 0 ? j.f : (us.comp == 1 ? j.g : j.h);
    target.add_term(us.mo, add);
  }
  WSeries n = rhs - homological_L(j, rhs.trunc());
  NormalFormCheck chk = is_in_normal_form(n);
  if (!chk.ok) {
    throw SolveError("decomposition failure: remainder escapes the normal space at weight " +
                     std::to_string(m) + " (zeta margin too small)");
  }
  return {std::move(j), std::move(n)};
}

NFReport normalize(const Hypersurface& M, const NFParams& params) {
  if (M.form != FormTag::perturbation_of_P && M.form != FormTag::normal_form) {
    throw ValidationError("normalize: input must be in perturbation (or normal) form");
  }
  if (!M.phi.is_real()) throw ValidationError("normalize: phi must be real");
  for (const auto& [mo, c] : M.phi.terms()) {
    if (mo.weight() < 3) {
      throw ValidationError("normalize: perturbation carries weighted degree < 3 content");
    }
  }
  const Trunc tr = M.phi.trunc();
  Hypersurface cur = M;
  cur.form = FormTag::perturbation_of_P;
  MapJet total = MapJet::identity(tr);
  if (!(params.lambda == GaussQ(1))) cur = apply_scaling(cur, params.lambda);
  auto run_flow = [&](FlowGen gen, const mpq_class& t) {
    if (sgn(t) == 0) return;
    MapJet T = flow_map(gen, t, tr);
    cur = pushforward(cur, T);
    total = compose(T, total);
  };
  run_flow(FlowGen::g1_b, params.a.re());
  run_flow(FlowGen::g1_a, params.a.im());
  run_flow(FlowGen::g2, params.s);

  for (int m = 3; m <= tr.weight; ++m) {
    // Under a standard-degree cap C the weight-m slice lives entirely at
    // zeta-pair <= C - m, so the solve shrinks to that window; the discarded
    // jet content only ever produces output above the cap.
    Trunc sub = tr;
    if (tr.sdeg >= 0) {
      int dm = tr.sdeg - m;
      sub = Trunc(tr.weight, std::min(tr.zeta, dm < 0 ? 0 : dm), tr.sdeg);
    }
    WSeries psi = cur.phi.weighted_component(m).truncated(sub);
    WeightSolution ws = solve_weight(m, psi, sub);
    if (ws.j.is_identity()) continue;
    MapJet H = MapJet::identity(tr);
    H.f = ws.j.f.scaled(GaussQ(2)).zero_extended(tr);
    H.g = ws.j.g.scaled(GaussQ(2)).zero_extended(tr);
    H.h = ws.j.h.scaled(GaussQ(2)).zero_extended(tr);
    Hypersurface next = pushforward(cur, H);
    WSeries delta = next.phi - cur.phi;
    for (const auto& [mo, c] : delta.terms()) {
      if (mo.weight() < m) {
        throw SolveError("normalize: transformation disturbed weight below " + std::to_string(m));
      }
    }
    if (!(next.phi.weighted_component(m) == ws.n_remainder)) {
      throw SolveError("normalize: weight-" + std::to_string(m) + " slice mismatch after transport");
    }
    cur = std::move(next);
    total = compose(H, total);
  }

  NFReport rep;
  rep.normal_phi = cur.phi;
  NormalFormCheck chk = is_in_normal_form(rep.normal_phi);
  if (!chk.ok || !rep.normal_phi.is_real()) {
    throw SolveError("normalize: output failed normal-form validation");
  }
  rep.map = std::move(total);
  rep.params_used = params;
  rep.phi3002_at_0 = rep.normal_phi.coeff({3, 0, 0, 2, 0});
  rep.phi5001_at_0 = rep.normal_phi.coeff({5, 0, 0, 1, 0});
  rep.distinguished = extract_distinguished(rep.normal_phi);
  return rep;
}

WSeries extract_distinguished(const WSeries& phi) {
  NormalFormCheck chk = is_in_normal_form(phi);
  if (!chk.ok) throw ValidationError("extract_distinguished: input is not in normal form");
  WSeries out(phi.trunc());
  for (const auto& [mo, c] : phi.terms()) {
    if (mo.l != 0 && mo.b != 0) continue;
    if (slot_constrained(mo) || mo.k + mo.l + mo.a + mo.b < 5) {
      throw SolveError("extract_distinguished: distinguished slice violates its shape constraints");
    }
    out.add_term(mo, c);
  }
  return out;
}

std::pair<GaussQ, GaussQ> chain_data(const Hypersurface& M, const GaussQ& a) {
  NFParams params;
  params.a = a;
  NFReport rep = normalize(M, params);
  GaussQ f_ww0 = rep.map.f.coeff({0, 0, 2}) * GaussQ(2);
  GaussQ g_w0 = rep.map.g.coeff({0, 0, 1});
  return {f_ww0, g_w0};
}

int stability_kernel_dim(Trunc tr) {
  CoreContext ctx(tr, 2);
  std::vector<std::pair<int, Mono3>> slots;
  auto add_range = [&](int comp, int wlo, int whi) {
    for (int wt = wlo; wt <= whi; ++wt) {
      for (int p = 0; 2 * p <= wt; ++p) {
        int k = wt - 2 * p;
        for (int l = 0; l <= tr.zeta; ++l) {
          if (k == 0 && l == 0 && p == 0) continue;  // origin-preserving: no constants
          slots.emplace_back(comp, Mono3{static_cast<std::int16_t>(k),
                                         static_cast<std::int16_t>(l),
                                         static_cast<std::int16_t>(p)});
        }
      }
    }
  };
  add_range(0, 1, 3);
  add_range(1, 0, 2);
  add_range(2, 2, 4);
  AssembledSystem as = assemble(slots, ctx, /*constrained_only=*/false, 0);
  EchelonSystem sys(std::move(as.a));
  return static_cast<int>(sys.kernel_dim());
}

}  // namespace crnf
