#include "crnf/series.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace crnf {

namespace {

// Removes terms that fall outside the (possibly shrunken) truncation.
template <typename Terms, typename Keep>
void refilter(Terms& t, Keep keep) {
  for (auto it = t.begin(); it != t.end();) {
    if (!keep(it->first)) {
      it = t.erase(it);
    } else {
      ++it;
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// WSeries

WSeries WSeries::monomial(const Mono5& mo, const GaussQ& c, Trunc tr) {
  WSeries s(tr);
  s.add_term(mo, c);
  return s;
}

WSeries WSeries::variable(Var v, Trunc tr) {
  Mono5 mo;
  switch (v) {
    case Var::z: mo.k = 1; break;
    case Var::zeta: mo.l = 1; break;
    case Var::zbar: mo.a = 1; break;
    case Var::zetabar: mo.b = 1; break;
    case Var::u: mo.m = 1; break;
  }
  return monomial(mo, GaussQ(1), tr);
}

WSeries WSeries::constant(const GaussQ& c, Trunc tr) { return monomial(Mono5{}, c, tr); }

void WSeries::add_term(const Mono5& mo, const GaussQ& c) {
  if (c.is_zero() || !contains(mo)) return;
  auto [it, fresh] = t_.try_emplace(mo, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }
}

WSeries& WSeries::operator+=(const WSeries& o) {
  tr_ = tr_.meet(o.tr_);
  refilter(t_, [this](const Mono5& mo) { return contains(mo); });
  for (const auto& [mo, c] : o.t_) add_term(mo, c);
  return *this;
}

WSeries& WSeries::operator-=(const WSeries& o) {
  tr_ = tr_.meet(o.tr_);
  refilter(t_, [this](const Mono5& mo) { return contains(mo); });
  for (const auto& [mo, c] : o.t_) add_term(mo, -c);
  return *this;
}

WSeries operator+(const WSeries& x, const WSeries& y) {
  WSeries r = x;
  r += y;
  return r;
}

WSeries operator-(const WSeries& x, const WSeries& y) {
  WSeries r = x;
  r -= y;
  return r;
}

WSeries WSeries::operator-() const {
  WSeries r(tr_);
  for (const auto& [mo, c] : t_) r.t_.emplace(mo, -c);
  return r;
}

WSeries operator*(const WSeries& x, const WSeries& y) {
  Trunc tr = x.trunc().meet(y.trunc());
  if (tr.sdeg >= 0) return mul_sdeg(x, y, tr.sdeg);
  WSeries r(tr);
  for (const auto& [mx, cx] : x.terms()) {
    int wbudget = tr.weight - mx.weight();
    int zbudget = tr.zeta - mx.zpair();
    if (wbudget < 0) break;  // terms sorted by weight first
    for (const auto& [my, cy] : y.terms()) {
      if (my.weight() > wbudget) break;
      if (my.zpair() > zbudget) continue;
      r.add_term(mx + my, cx * cy);
    }
  }
  return r;
}

WSeries mul_sdeg(const WSeries& x, const WSeries& y, int sdeg_cap) {
  Trunc tr = x.trunc().meet(y.trunc());
  WSeries r(tr);
  for (const auto& [mx, cx] : x.terms()) {
    int wbudget = tr.weight - mx.weight();
    int zbudget = tr.zeta - mx.zpair();
    int sbudget = sdeg_cap - mx.sdeg();
    if (wbudget < 0) break;
    for (const auto& [my, cy] : y.terms()) {
      if (my.weight() > wbudget) break;
      if (my.zpair() > zbudget || my.sdeg() > sbudget) continue;
      r.add_term(mx + my, cx * cy);
    }
  }
  return r;
}

WSeries WSeries::scaled(const GaussQ& c) const {
  WSeries r(tr_);
  if (c.is_zero()) return r;
  for (const auto& [mo, cv] : t_) r.t_.emplace(mo, cv * c);
  return r;
}

WSeries WSeries::conj() const {
  WSeries r(tr_);
  for (const auto& [mo, c] : t_) r.t_.emplace(mo.conj(), c.conj());
  return r;
}

bool WSeries::is_real() const {
  for (const auto& [mo, c] : t_) {
    if (coeff(mo.conj()) != c.conj()) return false;
  }
  return true;
}

WSeries WSeries::real_part() const {
  return (*this + conj()).scaled(GaussQ(mpq_class(1, 2)));
}

WSeries WSeries::imag_part() const {
  // 1/(2i) = -i/2
  return (*this - conj()).scaled(GaussQ(mpq_class(0), mpq_class(-1, 2)));
}

WSeries WSeries::diff(Var v) const {
  Trunc tr = tr_;
  switch (v) {
    case Var::z:
    case Var::zbar:
      tr.weight = std::max(0, tr.weight - 1);
      break;
    case Var::u:
      tr.weight = std::max(0, tr.weight - 2);
      break;
    case Var::zeta:
    case Var::zetabar:
      tr.zeta = std::max(0, tr.zeta - 1);
      break;
  }
  WSeries r(tr);
  for (const auto& [mo, c] : t_) {
    Mono5 d = mo;
    int e = 0;
    switch (v) {
      case Var::z: e = d.k--; break;
      case Var::zeta: e = d.l--; break;
      case Var::zbar: e = d.a--; break;
      case Var::zetabar: e = d.b--; break;
      case Var::u: e = d.m--; break;
    }
    if (e == 0) continue;
    r.add_term(d, c * GaussQ(e));
  }
  return r;
}

WSeries WSeries::weighted_component(int m) const {
  WSeries r(tr_);
  for (const auto& [mo, c] : t_) {
    if (mo.weight() == m) r.t_.emplace(mo, c);
  }
  return r;
}

WSeries WSeries::weighted_tail(int m) const {
  WSeries r(tr_);
  for (const auto& [mo, c] : t_) {
    if (mo.weight() >= m) r.t_.emplace(mo, c);
  }
  return r;
}

std::vector<GaussQ> WSeries::coeff_fn(int k, int l, int a, int b) const {
  std::vector<GaussQ> out;
  for (const auto& [mo, c] : t_) {
    if (mo.k == k && mo.l == l && mo.a == a && mo.b == b) {
      if (out.size() <= static_cast<std::size_t>(mo.m)) out.resize(mo.m + 1);
      out[mo.m] = c;
    }
  }
  return out;
}

WSeries WSeries::truncated(Trunc tr) const {
  WSeries r(tr_.meet(tr));
  for (const auto& [mo, c] : t_) {
    if (r.contains(mo)) r.t_.emplace(mo, c);
  }
  return r;
}

WSeries WSeries::zero_extended(Trunc tr) const {
  WSeries r(tr);
  for (const auto& [mo, c] : t_) {
    if (r.contains(mo)) r.t_.emplace(mo, c);
  }
  return r;
}

WSeries WSeries::sdeg_truncated(int cap) const {
  WSeries r(tr_);
  for (const auto& [mo, c] : t_) {
    if (mo.sdeg() <= cap) r.t_.emplace(mo, c);
  }
  return r;
}

// ---------------------------------------------------------------------------
// HolJet

HolJet HolJet::monomial(const Mono3& mo, const GaussQ& c, Trunc tr) {
  HolJet s(tr);
  s.add_term(mo, c);
  return s;
}

HolJet HolJet::variable(HVar v, Trunc tr) {
  Mono3 mo;
  switch (v) {
    case HVar::z: mo.k = 1; break;
    case HVar::zeta: mo.l = 1; break;
    case HVar::w: mo.p = 1; break;
  }
  return monomial(mo, GaussQ(1), tr);
}

HolJet HolJet::constant(const GaussQ& c, Trunc tr) { return monomial(Mono3{}, c, tr); }

void HolJet::add_term(const Mono3& mo, const GaussQ& c) {
  if (c.is_zero() || !contains(mo)) return;
  auto [it, fresh] = t_.try_emplace(mo, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }
}

HolJet& HolJet::operator+=(const HolJet& o) {
  tr_ = tr_.meet(o.tr_);
  refilter(t_, [this](const Mono3& mo) { return contains(mo); });
  for (const auto& [mo, c] : o.t_) add_term(mo, c);
  return *this;
}

HolJet& HolJet::operator-=(const HolJet& o) {
  tr_ = tr_.meet(o.tr_);
  refilter(t_, [this](const Mono3& mo) { return contains(mo); });
  for (const auto& [mo, c] : o.t_) add_term(mo, -c);
  return *this;
}

HolJet operator+(const HolJet& x, const HolJet& y) {
  HolJet r = x;
  r += y;
  return r;
}

HolJet operator-(const HolJet& x, const HolJet& y) {
  HolJet r = x;
  r -= y;
  return r;
}

HolJet operator*(const HolJet& x, const HolJet& y) {
  Trunc tr = x.trunc().meet(y.trunc());
  HolJet r(tr);
  for (const auto& [mx, cx] : x.terms()) {
    int wbudget = tr.weight - mx.weight();
    int zbudget = tr.zeta - mx.l;
    if (wbudget < 0) break;
    for (const auto& [my, cy] : y.terms()) {
      if (my.weight() > wbudget) break;
      if (my.l > zbudget) continue;
      r.add_term(mx + my, cx * cy);
    }
  }
  return r;
}

HolJet HolJet::operator-() const {
  HolJet r(tr_);
  for (const auto& [mo, c] : t_) r.t_.emplace(mo, -c);
  return r;
}

HolJet HolJet::scaled(const GaussQ& c) const {
  HolJet r(tr_);
  if (c.is_zero()) return r;
  for (const auto& [mo, cv] : t_) r.t_.emplace(mo, cv * c);
  return r;
}

HolJet HolJet::diff(HVar v) const {
  Trunc tr = tr_;
  switch (v) {
    case HVar::z: tr.weight = std::max(0, tr.weight - 1); break;
    case HVar::w: tr.weight = std::max(0, tr.weight - 2); break;
    case HVar::zeta: tr.zeta = std::max(0, tr.zeta - 1); break;
  }
  HolJet r(tr);
  for (const auto& [mo, c] : t_) {
    Mono3 d = mo;
    int e = 0;
    switch (v) {
      case HVar::z: e = d.k--; break;
      case HVar::zeta: e = d.l--; break;
      case HVar::w: e = d.p--; break;
    }
    if (e == 0) continue;
    r.add_term(d, c * GaussQ(e));
  }
  return r;
}

std::vector<GaussQ> HolJet::coeff_fn(int k, int l) const {
  std::vector<GaussQ> out;
  for (const auto& [mo, c] : t_) {
    if (mo.k == k && mo.l == l) {
      if (out.size() <= static_cast<std::size_t>(mo.p)) out.resize(mo.p + 1);
      out[mo.p] = c;
    }
  }
  return out;
}

HolJet HolJet::zero_extended(Trunc tr) const {
  HolJet r(tr);
  for (const auto& [mo, c] : t_) {
    if (r.contains(mo)) r.t_.emplace(mo, c);
  }
  return r;
}

HolJet HolJet::truncated(Trunc tr) const {
  HolJet r(tr_.meet(tr));
  for (const auto& [mo, c] : t_) {
    if (r.contains(mo)) r.t_.emplace(mo, c);
  }
  return r;
}

HolJet HolJet::weighted_component(int m) const {
  HolJet r(tr_);
  for (const auto& [mo, c] : t_) {
    if (mo.weight() == m) r.t_.emplace(mo, c);
  }
  return r;
}

HolJet HolJet::weighted_tail(int m) const {
  HolJet r(tr_);
  for (const auto& [mo, c] : t_) {
    if (mo.weight() >= m) r.t_.emplace(mo, c);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Substitution

PowerCache::PowerCache(WSeries base) : base_(std::move(base)) {
  pw_.push_back(WSeries::constant(GaussQ(1), base_.trunc()));
  pw_.push_back(base_);
}

const WSeries& PowerCache::pow(int n) {
  if (n < 0) throw std::invalid_argument("PowerCache: negative exponent");
  while (pw_.size() <= static_cast<std::size_t>(n)) {
    pw_.push_back(pw_.back() * base_);
  }
  return pw_[n];
}

Subst5::Subst5(const WSeries& sz, const WSeries& szeta, const WSeries& szbar,
               const WSeries& szetabar, const WSeries& su)
    : tr_(sz.trunc()
              .meet(szeta.trunc())
              .meet(szbar.trunc())
              .meet(szetabar.trunc())
              .meet(su.trunc())),
      pz_(sz.truncated(tr_)),
      pzeta_(szeta.truncated(tr_)),
      pzbar_(szbar.truncated(tr_)),
      pzetabar_(szetabar.truncated(tr_)),
      pu_(su.truncated(tr_)),
      // When the barred arguments are the conjugates of the unbarred ones the
      // barred pair products come from conjugation instead of fresh multiplies.
      conj_pair_(szbar.truncated(tr_) == sz.truncated(tr_).conj() &&
                 szetabar.truncated(tr_) == szeta.truncated(tr_).conj()) {}

const WSeries& Subst5::hol_pair(int k, int l) {
  auto it = hol_.find({k, l});
  if (it == hol_.end()) it = hol_.emplace(PairKey{k, l}, pz_.pow(k) * pzeta_.pow(l)).first;
  return it->second;
}

const WSeries& Subst5::bar_pair(int a, int b) {
  auto it = bar_.find({a, b});
  if (it == bar_.end()) {
    WSeries v = conj_pair_ ? hol_pair(a, b).conj() : pzbar_.pow(a) * pzetabar_.pow(b);
    it = bar_.emplace(PairKey{a, b}, std::move(v)).first;
  }
  return it->second;
}

WSeries Subst5::apply(const WSeries& a) {
  WSeries r(tr_);
  for (const auto& [mo, c] : a.terms()) {
    WSeries prod = hol_pair(mo.k, mo.l) * bar_pair(mo.a, mo.b);
    if (mo.m > 0) prod = prod * pu_.pow(mo.m);
    r += prod.scaled(c);
  }
  return r;
}

WSeries substitute(const WSeries& a, const WSeries& sz, const WSeries& szeta,
                   const WSeries& szbar, const WSeries& szetabar, const WSeries& su) {
  Subst5 ctx(sz, szeta, szbar, szetabar, su);
  return ctx.apply(a);
}

WSeries substitute_u(const WSeries& a, const WSeries& su) {
  Trunc tr = a.trunc().meet(su.trunc());
  // Group terms by the power of u, then evaluate with a Horner scheme.
  int max_m = 0;
  for (const auto& [mo, c] : a.terms()) max_m = std::max(max_m, static_cast<int>(mo.m));
  std::vector<WSeries> bucket(max_m + 1, WSeries(tr));
  for (const auto& [mo, c] : a.terms()) {
    Mono5 base = mo;
    int m = base.m;
    base.m = 0;
    bucket[m].add_term(base, c);
  }
  WSeries su_t = su.truncated(tr);
  WSeries r = bucket[max_m];
  for (int m = max_m - 1; m >= 0; --m) {
    r = r * su_t + bucket[m];
  }
  return r;
}

namespace {

struct IntPair {
  int first, second;
  bool operator<(const IntPair& o) const {
    return first != o.first ? first < o.first : second < o.second;
  }
};

}  // namespace

WSeries hol_substitute(const HolJet& a, const WSeries& sz, const WSeries& szeta,
                       const WSeries& sw) {
  Trunc tr = sz.trunc().meet(szeta.trunc()).meet(sw.trunc());
  WSeries r(tr);
  if (a.is_zero()) return r;

  PowerCache pz(sz.truncated(tr)), pzeta(szeta.truncated(tr)), pw(sw.truncated(tr));
  std::map<IntPair, WSeries> hol;
  auto hol_pair = [&](int k, int l) -> const WSeries& {
    auto it = hol.find({k, l});
    if (it == hol.end()) it = hol.emplace(IntPair{k, l}, pz.pow(k) * pzeta.pow(l)).first;
    return it->second;
  };

  for (const auto& [mo, c] : a.terms()) {
    WSeries prod = hol_pair(mo.k, mo.l);
    if (mo.p > 0) prod = prod * pw.pow(mo.p);
    r += prod.scaled(c);
  }
  return r;
}

HolJet hol_compose(const HolJet& a, const HolJet& bz, const HolJet& bzeta, const HolJet& bw) {
  Trunc tr = bz.trunc().meet(bzeta.trunc()).meet(bw.trunc());
  HolJet r(tr);
  if (a.is_zero()) return r;

  auto powers = [&](const HolJet& base) {
    std::vector<HolJet> pw;
    pw.push_back(HolJet::constant(GaussQ(1), tr));
    pw.push_back(base.truncated(tr));
    return pw;
  };
  std::vector<HolJet> pz = powers(bz), pzeta = powers(bzeta), pw = powers(bw);
  auto pow_of = [&](std::vector<HolJet>& pw_list, int n) -> const HolJet& {
    while (pw_list.size() <= static_cast<std::size_t>(n)) {
      pw_list.push_back(pw_list.back() * pw_list[1]);
    }
    return pw_list[n];
  };

  for (const auto& [mo, c] : a.terms()) {
    HolJet prod = pow_of(pz, mo.k) * pow_of(pzeta, mo.l);
    if (mo.p > 0) prod = prod * pow_of(pw, mo.p);
    r += prod.scaled(c);
  }
  return r;
}

WSeries hol_on_graph(const HolJet& a, const WSeries& w_series) {
  Trunc tr = w_series.trunc();
  return hol_substitute(a, WSeries::variable(Var::z, tr), WSeries::variable(Var::zeta, tr),
                        w_series);
}

}  // namespace crnf
