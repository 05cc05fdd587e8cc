#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "crnf/gaussq.hpp"
#include "crnf/mapjet.hpp"
#include "crnf/series.hpp"

namespace testutil {

// Deterministic splitmix64 stream so seeded tests are reproducible across
// platforms and runs.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [lo, hi], inclusive.
  int range(int lo, int hi) {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  mpq_class rat(int max_num = 6, int max_den = 4) {
    mpq_class q(range(-max_num, max_num), range(1, max_den));
    q.canonicalize();
    return q;
  }

  mpq_class rat_nonzero(int max_num = 6, int max_den = 4) {
    for (;;) {
      mpq_class q = rat(max_num, max_den);
      if (sgn(q) != 0) return q;
    }
  }

  crnf::GaussQ gauss(int max_num = 6, int max_den = 4) {
    return crnf::GaussQ(rat(max_num, max_den), rat(max_num, max_den));
  }

  crnf::GaussQ gauss_nonzero(int max_num = 6, int max_den = 4) {
    for (;;) {
      crnf::GaussQ c = gauss(max_num, max_den);
      if (!c.is_zero()) return c;
    }
  }
};

// The three monomial families (and conjugates) whose right-hand-side content
// couples the low-order jet relations; homogeneous seeds avoid them so the
// closed-form relations between solution coefficients stay homogeneous.
inline bool coupled_slot(const crnf::Mono5& mo) {
  auto match = [](const crnf::Mono5& s, int k, int l, int a, int b) {
    return s.k == k && s.l == l && s.a == a && s.b == b;
  };
  return match(mo, 1, 0, 0, 0) || match(mo, 0, 0, 1, 0) ||
         match(mo, 2, 0, 0, 0) || match(mo, 0, 0, 2, 0) ||
         match(mo, 0, 1, 1, 0) || match(mo, 1, 0, 0, 1);
}

// Random real series homogeneous of weighted degree m within tr: a few
// conjugate-closed pairs with small rational coefficients.
inline crnf::WSeries random_real_homogeneous(Rng& rng, int m, crnf::Trunc tr,
                                             int pairs = 5,
                                             bool avoid_coupled = false) {
  crnf::WSeries s(tr);
  int made = 0, guard = 0;
  while (made < pairs && ++guard < 400) {
    const int k = rng.range(0, m);
    const int rest = m - k;
    const int a = rng.range(0, rest);
    if ((rest - a) % 2 != 0) continue;
    const int mu = (rest - a) / 2;
    const int l = rng.range(0, tr.zeta);
    const int b = rng.range(0, tr.zeta - l);
    const crnf::Mono5 mo{static_cast<int16_t>(k), static_cast<int16_t>(l),
                         static_cast<int16_t>(a), static_cast<int16_t>(b),
                         static_cast<int16_t>(mu)};
    if (avoid_coupled && coupled_slot(mo)) continue;
    if (mo == mo.conj()) {
      s.add_term(mo, crnf::GaussQ(rng.rat_nonzero()));
    } else {
      const crnf::GaussQ c = rng.gauss_nonzero();
      s.add_term(mo, c);
      s.add_term(mo.conj(), c.conj());
    }
    ++made;
  }
  return s;
}

// Random invertible map with the vspace shape: f of weight >= 2 without a
// z^2 origin coefficient, g of weight >= 1, h of weight >= 3 plus an
// optional purely imaginary w^2 term.
inline crnf::MapJet random_vspace_map(Rng& rng, crnf::Trunc tr, int terms = 4) {
  using crnf::Mono3;
  crnf::MapJet H = crnf::MapJet::identity(tr);
  H.shape = crnf::MapJet::Shape::vspace;
  const int zc = tr.zeta;
  auto pick = [&](const std::vector<Mono3>& slots, crnf::HolJet& target) {
    const Mono3 mo = slots[static_cast<std::size_t>(
        rng.range(0, static_cast<int>(slots.size()) - 1))];
    if (!target.contains(mo)) return;
    target.add_term(mo, rng.gauss(3, 3));
  };
  std::vector<Mono3> fslots, gslots, hslots;
  for (int l = 0; l <= zc && l <= 3; ++l) {
    fslots.push_back({2, static_cast<int16_t>(l + 1), 0});  // z^2 zeta^(l+1)
    fslots.push_back({3, static_cast<int16_t>(l), 0});
    fslots.push_back({1, static_cast<int16_t>(l), 1});
    fslots.push_back({0, static_cast<int16_t>(l), 1});      // weight 2
    gslots.push_back({1, static_cast<int16_t>(l), 0});
    gslots.push_back({2, static_cast<int16_t>(l), 0});
    gslots.push_back({0, static_cast<int16_t>(l), 1});
    hslots.push_back({3, static_cast<int16_t>(l), 0});
    hslots.push_back({1, static_cast<int16_t>(l), 1});
    hslots.push_back({2, static_cast<int16_t>(l), 1});      // weight 4
  }
  for (int t = 0; t < terms; ++t) {
    pick(fslots, H.f);
    pick(gslots, H.g);
    pick(hslots, H.h);
  }
  if (rng.range(0, 1) == 1)
    H.h.add_term({0, 0, 2}, crnf::GaussQ(mpq_class(0), rng.rat(3, 3)));
  return H;
}

}  // namespace testutil
