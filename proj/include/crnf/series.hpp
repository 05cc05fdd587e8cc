#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "crnf/gaussq.hpp"

namespace crnf {

// Variables of the real series backend.  A hypersurface graph function
// phi(z, zeta, zbar, zetabar, u) lives here; the complex defining equation
// reuses the same backend with the u slot standing for wbar.
enum class Var : int { z = 0, zeta = 1, zbar = 2, zetabar = 3, u = 4 };

// Dual truncation.  weight caps the weighted degree k + a + 2m where z, zbar
// have weight 1, u weight 2 and zeta, zetabar weight 0; zeta caps the total
// zeta-pair degree l + b.  Binary operations truncate to the meet.
//
// sdeg is an optional extra cap on the standard degree k + l + a + b + 2m
// (-1 = none).  Substitution, transport and the homological solve only ever
// replace a variable by content of standard degree >= that variable's own, so
// standard degree never decreases along the pipeline: pruning above a cap C
// keeps every coefficient of standard degree <= C exact while discarding
// rectangle corners that cannot influence them.
struct Trunc {
  int weight = 0;
  int zeta = 0;
  int sdeg = -1;

  Trunc() = default;
  Trunc(int w, int d) : weight(w), zeta(d) {
    if (w < 0 || d < 0) throw std::invalid_argument("Trunc: negative cap");
  }
  Trunc(int w, int d, int s) : weight(w), zeta(d), sdeg(s) {
    if (w < 0 || d < 0 || s < -1) throw std::invalid_argument("Trunc: negative cap");
  }

  Trunc meet(const Trunc& o) const {
    Trunc r(weight < o.weight ? weight : o.weight, zeta < o.zeta ? zeta : o.zeta);
    if (sdeg >= 0 && o.sdeg >= 0) {
      r.sdeg = sdeg < o.sdeg ? sdeg : o.sdeg;
    } else {
      r.sdeg = sdeg < 0 ? o.sdeg : sdeg;
    }
    return r;
  }
  bool operator==(const Trunc& o) const = default;
};

// Exponent tuple of one monomial z^k zeta^l zbar^a zetabar^b u^m.
struct Mono5 {
  std::int16_t k = 0, l = 0, a = 0, b = 0, m = 0;

  int weight() const { return k + a + 2 * m; }
  int zpair() const { return l + b; }
  int sdeg() const { return k + l + a + b + 2 * m; }  // standard degree, u counts 2
  Mono5 conj() const { return {a, b, k, l, m}; }
  Mono5 operator+(const Mono5& o) const {
    return {static_cast<std::int16_t>(k + o.k), static_cast<std::int16_t>(l + o.l),
            static_cast<std::int16_t>(a + o.a), static_cast<std::int16_t>(b + o.b),
            static_cast<std::int16_t>(m + o.m)};
  }
  bool operator==(const Mono5& o) const = default;
};

// Canonical term order: graded lexicographic on (weighted degree, k, l, a, b, m).
struct Mono5Less {
  bool operator()(const Mono5& x, const Mono5& y) const {
    int wx = x.weight(), wy = y.weight();
    if (wx != wy) return wx < wy;
    if (x.k != y.k) return x.k < y.k;
    if (x.l != y.l) return x.l < y.l;
    if (x.a != y.a) return x.a < y.a;
    if (x.b != y.b) return x.b < y.b;
    return x.m < y.m;
  }
};

// Sparse truncated power series over GaussQ in the five backend variables.
// Invariant: every stored monomial passes the truncation and has a nonzero
// coefficient; terms iterate in canonical order.
class WSeries {
 public:
  using Terms = std::map<Mono5, GaussQ, Mono5Less>;

  WSeries() : tr_(0, 0) {}
  explicit WSeries(Trunc tr) : tr_(tr) {}

  static WSeries monomial(const Mono5& mo, const GaussQ& c, Trunc tr);
  static WSeries variable(Var v, Trunc tr);
  static WSeries constant(const GaussQ& c, Trunc tr);

  const Trunc& trunc() const { return tr_; }
  const Terms& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  std::size_t size() const { return t_.size(); }

  bool contains(const Mono5& mo) const {
    return mo.weight() <= tr_.weight && mo.zpair() <= tr_.zeta &&
           (tr_.sdeg < 0 || mo.sdeg() <= tr_.sdeg);
  }

  GaussQ coeff(const Mono5& mo) const {
    auto it = t_.find(mo);
    return it == t_.end() ? GaussQ() : it->second;
  }

  // Adds c to the coefficient at mo, dropping out-of-cap or zero results.
  void add_term(const Mono5& mo, const GaussQ& c);

  WSeries& operator+=(const WSeries& o);
  WSeries& operator-=(const WSeries& o);
  friend WSeries operator+(const WSeries& x, const WSeries& y);
  friend WSeries operator-(const WSeries& x, const WSeries& y);
  friend WSeries operator*(const WSeries& x, const WSeries& y);
  WSeries operator-() const;

  WSeries scaled(const GaussQ& c) const;

  // Complex conjugate: swaps z<->zbar, zeta<->zetabar, conjugates coefficients
  // (u is a real variable).
  WSeries conj() const;
  bool is_real() const;
  WSeries real_part() const;  // (s + conj s)/2
  WSeries imag_part() const;  // (s - conj s)/(2i)

  // Partial derivative.  Caps shrink by the weight of the variable (1 for
  // z/zbar, 2 for u) or by one zeta degree for zeta/zetabar.
  WSeries diff(Var v) const;

  // Weighted-homogeneous slice of weighted degree m.
  WSeries weighted_component(int m) const;
  // Terms of weighted degree >= m.
  WSeries weighted_tail(int m) const;
  // Coefficient function of z^k zeta^l zbar^a zetabar^b as u-polynomial
  // coefficients, index = power of u.
  std::vector<GaussQ> coeff_fn(int k, int l, int a, int b) const;

  // Copy truncated to (the meet with) tr.
  WSeries truncated(Trunc tr) const;
  // Copy with a wider claimed truncation; absent terms are declared zero.
  // This is an explicit semantic statement, use with care.
  WSeries zero_extended(Trunc tr) const;
  // Drops terms of standard degree > cap (an extra filter; Trunc unchanged).
  WSeries sdeg_truncated(int cap) const;

  friend bool operator==(const WSeries& x, const WSeries& y) { return x.t_ == y.t_; }

 private:
  Trunc tr_;
  Terms t_;
};

// Product with an additional standard-degree cap applied to every output
// term (used by degree-by-degree sweeps to keep intermediate work small).
WSeries mul_sdeg(const WSeries& x, const WSeries& y, int sdeg_cap);

// ---------------------------------------------------------------------------
// Holomorphic jets: polynomials in (z, zeta, w) with weights 1, 0, 2.

struct Mono3 {
  std::int16_t k = 0, l = 0, p = 0;  // z^k zeta^l w^p

  int weight() const { return k + 2 * p; }
  Mono3 operator+(const Mono3& o) const {
    return {static_cast<std::int16_t>(k + o.k), static_cast<std::int16_t>(l + o.l),
            static_cast<std::int16_t>(p + o.p)};
  }
  bool operator==(const Mono3& o) const = default;
};

struct Mono3Less {
  bool operator()(const Mono3& x, const Mono3& y) const {
    int wx = x.weight(), wy = y.weight();
    if (wx != wy) return wx < wy;
    if (x.k != y.k) return x.k < y.k;
    if (x.l != y.l) return x.l < y.l;
    return x.p < y.p;
  }
};

enum class HVar : int { z = 0, zeta = 1, w = 2 };

class HolJet {
 public:
  using Terms = std::map<Mono3, GaussQ, Mono3Less>;

  HolJet() : tr_(0, 0) {}
  explicit HolJet(Trunc tr) : tr_(tr) {}

  static HolJet monomial(const Mono3& mo, const GaussQ& c, Trunc tr);
  static HolJet variable(HVar v, Trunc tr);
  static HolJet constant(const GaussQ& c, Trunc tr);

  const Trunc& trunc() const { return tr_; }
  const Terms& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }

  bool contains(const Mono3& mo) const {
    return mo.weight() <= tr_.weight && mo.l <= tr_.zeta;
  }
  GaussQ coeff(const Mono3& mo) const {
    auto it = t_.find(mo);
    return it == t_.end() ? GaussQ() : it->second;
  }
  void add_term(const Mono3& mo, const GaussQ& c);

  HolJet& operator+=(const HolJet& o);
  HolJet& operator-=(const HolJet& o);
  friend HolJet operator+(const HolJet& x, const HolJet& y);
  friend HolJet operator-(const HolJet& x, const HolJet& y);
  friend HolJet operator*(const HolJet& x, const HolJet& y);
  HolJet operator-() const;
  HolJet scaled(const GaussQ& c) const;

  HolJet diff(HVar v) const;

  // Coefficient function of z^k zeta^l as w-polynomial coefficients.
  std::vector<GaussQ> coeff_fn(int k, int l) const;

  HolJet truncated(Trunc tr) const;
  // Copy with a wider claimed truncation; absent terms are declared zero.
  // This is an explicit semantic statement, use with care.
  HolJet zero_extended(Trunc tr) const;
  // Terms of weighted degree == m / >= m.
  HolJet weighted_component(int m) const;
  HolJet weighted_tail(int m) const;

  friend bool operator==(const HolJet& x, const HolJet& y) { return x.t_ == y.t_; }

 private:
  Trunc tr_;
  Terms t_;
};

// ---------------------------------------------------------------------------
// Substitution.

// Lazily extended list of powers of a fixed series.
class PowerCache {
 public:
  explicit PowerCache(WSeries base);
  const WSeries& pow(int n);

 private:
  WSeries base_;
  std::vector<WSeries> pw_;
};

// Reusable five-variable substitution context: power and pair-product caches
// survive across repeated applications against the same arguments.
class Subst5 {
 public:
  Subst5(const WSeries& sz, const WSeries& szeta, const WSeries& szbar,
         const WSeries& szetabar, const WSeries& su);

  const Trunc& trunc() const { return tr_; }
  // Evaluates a(sz, szeta, szbar, szetabar, su), truncated to trunc().
  WSeries apply(const WSeries& a);

 private:
  struct PairKey {
    int first, second;
    bool operator<(const PairKey& o) const {
      return first != o.first ? first < o.first : second < o.second;
    }
  };
  const WSeries& hol_pair(int k, int l);
  const WSeries& bar_pair(int a, int b);

  Trunc tr_;
  PowerCache pz_, pzeta_, pzbar_, pzetabar_, pu_;
  bool conj_pair_;
  std::map<PairKey, WSeries> hol_, bar_;
};

// Substitutes series for all five variables of a.  Output truncation is the
// meet of the argument truncations (the caller is responsible for margins
// when argument weights can drop below the variable weight).
WSeries substitute(const WSeries& a, const WSeries& sz, const WSeries& szeta,
                   const WSeries& szbar, const WSeries& szetabar, const WSeries& su);

// Fast path: replaces only u by su, other variables kept.
WSeries substitute_u(const WSeries& a, const WSeries& su);

// Evaluates a holomorphic jet on series arguments (z, zeta, w slots).
WSeries hol_substitute(const HolJet& a, const WSeries& sz, const WSeries& szeta,
                       const WSeries& sw);

// Jet-in-jet composition a(bz, bzeta, bw).
HolJet hol_compose(const HolJet& a, const HolJet& bz, const HolJet& bzeta, const HolJet& bw);

// View of a jet inside the real backend with w := the given series
// (typically u + i*phi).  Equivalent to hol_substitute(a, z, zeta, wseries).
WSeries hol_on_graph(const HolJet& a, const WSeries& w_series);

}  // namespace crnf
