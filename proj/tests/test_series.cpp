#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crnf/hypersurface.hpp"
#include "crnf/series.hpp"
#include "testutil.hpp"

using namespace crnf;

namespace {

WSeries random_series(testutil::Rng& rng, Trunc tr, int terms) {
  WSeries s(tr);
  for (int t = 0; t < terms; ++t) {
    for (int tries = 0; tries < 100; ++tries) {
      Mono5 mo{static_cast<int16_t>(rng.range(0, 3)), static_cast<int16_t>(rng.range(0, 2)),
               static_cast<int16_t>(rng.range(0, 3)), static_cast<int16_t>(rng.range(0, 2)),
               static_cast<int16_t>(rng.range(0, 1))};
      if (!s.contains(mo)) continue;
      s.add_term(mo, rng.gauss(4, 3));
      break;
    }
  }
  return s;
}

}  // namespace

TEST_CASE("Mono5 bookkeeping") {
  Mono5 mo{2, 1, 0, 3, 1};
  CHECK(mo.weight() == 4);   // k + a + 2m
  CHECK(mo.zpair() == 4);    // l + b
  CHECK(mo.sdeg() == 8);     // k + l + a + b + 2m
  CHECK(mo.conj() == Mono5{0, 3, 2, 1, 1});
  CHECK(mo.conj().conj() == mo);
  CHECK(mo + Mono5{1, 0, 2, 0, 0} == Mono5{3, 1, 2, 3, 1});

  Mono5Less lt;
  CHECK(lt(Mono5{1, 0, 1, 0, 0}, Mono5{0, 0, 1, 0, 1}));  // weight 2 < 3
  CHECK(lt(Mono5{1, 0, 1, 0, 0}, Mono5{2, 0, 0, 0, 0}));  // same weight, k
  CHECK_FALSE(lt(Mono5{1, 0, 1, 0, 0}, Mono5{1, 0, 1, 0, 0}));
}

TEST_CASE("truncation gates and zero extension") {
  Trunc tr(4, 2);
  WSeries s(tr);
  s.add_term({1, 0, 1, 0, 0}, GaussQ(1));
  s.add_term({3, 0, 0, 0, 1}, GaussQ(7));   // weight 5 > 4: silently dropped
  s.add_term({0, 2, 0, 1, 0}, GaussQ(7));   // zpair 3 > 2: silently dropped
  CHECK(s.terms().size() == 1);
  CHECK(s.coeff({3, 0, 0, 0, 1}) == GaussQ());

  CHECK_THROWS_AS(Trunc(-1, 0), std::invalid_argument);
  CHECK_THROWS_AS(Trunc(0, -2), std::invalid_argument);
  CHECK(Trunc(4, 2).meet(Trunc(3, 5)) == Trunc(3, 2));

  const WSeries big = s.zero_extended(Trunc(8, 6));
  CHECK(big.trunc() == Trunc(8, 6));
  CHECK(big == s.truncated(tr).zero_extended(Trunc(8, 6)));
  CHECK(big.truncated(tr) == s);

  // Truncating drops exactly the out-of-cap terms.
  WSeries t(Trunc(6, 3));
  t.add_term({1, 0, 1, 0, 0}, GaussQ(2));
  t.add_term({2, 1, 2, 1, 1}, GaussQ(3));  // weight 6, zpair 2
  const WSeries cut = t.truncated(Trunc(4, 2));
  CHECK(cut.terms().size() == 1);
  CHECK(cut.coeff({1, 0, 1, 0, 0}) == GaussQ(2));
}

TEST_CASE("square of the model prefactor") {
  const Trunc tr(4, 2);
  WSeries f(tr);
  f.add_term({1, 0, 1, 0, 0}, GaussQ(1));
  f.add_term({2, 0, 0, 1, 0}, GaussQ(1, 2));
  f.add_term({0, 1, 2, 0, 0}, GaussQ(1, 2));

  const WSeries sq = f * f;
  CHECK(sq.terms().size() == 6);
  CHECK(sq.coeff({2, 0, 2, 0, 0}) == GaussQ(1));
  CHECK(sq.coeff({4, 0, 0, 2, 0}) == GaussQ(1, 4));
  CHECK(sq.coeff({0, 2, 4, 0, 0}) == GaussQ(1, 4));
  CHECK(sq.coeff({3, 0, 1, 1, 0}) == GaussQ(1));
  CHECK(sq.coeff({1, 1, 3, 0, 0}) == GaussQ(1));
  CHECK(sq.coeff({2, 1, 2, 1, 0}) == GaussQ(1, 2));
}

TEST_CASE("derivative of the model graph") {
  const WSeries pz = model_P(Trunc(4, 3)).diff(Var::z);
  CHECK(pz.trunc() == Trunc(3, 3));
  CHECK(pz.terms().size() == 4);
  CHECK(pz.coeff({0, 0, 1, 0, 0}) == GaussQ(1));  // zbar
  CHECK(pz.coeff({1, 0, 0, 1, 0}) == GaussQ(1));  // z zetabar
  CHECK(pz.coeff({0, 1, 1, 1, 0}) == GaussQ(1));  // zbar zeta zetabar
  CHECK(pz.coeff({1, 1, 0, 2, 0}) == GaussQ(1));  // z zeta zetabar^2

  // diff clamps the truncation at zero instead of throwing.
  WSeries c = WSeries::constant(GaussQ(3), Trunc(0, 0));
  CHECK(c.diff(Var::z).is_zero());
  CHECK(c.diff(Var::u).trunc() == Trunc(0, 0));
}

TEST_CASE("holomorphic jet on a graph") {
  const Trunc tr(4, 2);
  const HolJet w2 = HolJet::monomial({0, 0, 2}, GaussQ(1), tr);
  WSeries w(tr);
  w.add_term({0, 0, 0, 0, 1}, GaussQ(1));            // u
  w.add_term({1, 0, 1, 0, 0}, GaussQ::i());          // i z zbar
  const WSeries out = hol_on_graph(w2, w);
  CHECK(out.terms().size() == 3);
  CHECK(out.coeff({0, 0, 0, 0, 2}) == GaussQ(1));        // u^2
  CHECK(out.coeff({1, 0, 1, 0, 1}) == GaussQ(mpq_class(0), mpq_class(2)));     // 2i u z zbar
  CHECK(out.coeff({2, 0, 2, 0, 0}) == GaussQ(-1));       // -z^2 zbar^2
}

TEST_CASE("ring laws on random series") {
  testutil::Rng rng(0x5eed0011);
  const Trunc tr(5, 3);
  for (int t = 0; t < 12; ++t) {
    const WSeries x = random_series(rng, tr, 4);
    const WSeries y = random_series(rng, tr, 4);
    const WSeries z = random_series(rng, tr, 4);
    CHECK(x + y == y + x);
    CHECK(x * y == y * x);
    CHECK((x + y) + z == x + (y + z));
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * (y + z) == x * y + x * z);
    CHECK(x - x == WSeries(tr));
    CHECK((-x) + x == WSeries(tr));
    CHECK(x.scaled(GaussQ(3, 2)) == x * WSeries::constant(GaussQ(3, 2), tr));
  }
}

TEST_CASE("conjugation") {
  testutil::Rng rng(0x5eed0012);
  const Trunc tr(5, 3);
  for (int t = 0; t < 10; ++t) {
    const WSeries x = random_series(rng, tr, 4);
    const WSeries y = random_series(rng, tr, 4);
    CHECK(x.conj().conj() == x);
    CHECK((x * y).conj() == x.conj() * y.conj());
    CHECK((x + y).conj() == x.conj() + y.conj());
    const WSeries re = x.real_part(), im = x.imag_part();
    CHECK(re.is_real());
    CHECK(im.is_real());
    CHECK(re + im.scaled(GaussQ::i()) == x);
  }
  WSeries s(tr);
  s.add_term({2, 1, 0, 0, 0}, GaussQ(1, 2));
  CHECK(s.conj().coeff({0, 0, 2, 1, 0}) == GaussQ(1, 2));
  CHECK_FALSE(s.is_real());
  CHECK((s + s.conj()).is_real());
}

TEST_CASE("weighted components partition the series") {
  testutil::Rng rng(0x5eed0013);
  const Trunc tr(6, 3);
  const WSeries x = random_series(rng, tr, 10);
  WSeries sum(tr);
  for (int m = 0; m <= tr.weight; ++m) {
    const WSeries xm = x.weighted_component(m);
    for (const auto& [mo, c] : xm.terms()) CHECK(mo.weight() == m);
    sum += xm;
  }
  CHECK(sum == x);
  CHECK(x.weighted_tail(0) == x);
  CHECK(x.weighted_tail(tr.weight + 1).is_zero());
  CHECK(x.weighted_component(2) + x.weighted_tail(3) == x.weighted_tail(2));
}

TEST_CASE("derivatives commute and obey Leibniz") {
  testutil::Rng rng(0x5eed0014);
  const Trunc tr(6, 3);
  for (int t = 0; t < 6; ++t) {
    const WSeries x = random_series(rng, tr, 5);
    const WSeries y = random_series(rng, tr, 5);
    CHECK(x.diff(Var::z).diff(Var::zbar) == x.diff(Var::zbar).diff(Var::z));
    CHECK(x.diff(Var::zeta).diff(Var::u) == x.diff(Var::u).diff(Var::zeta));
    for (Var v : {Var::z, Var::zeta, Var::zbar, Var::zetabar, Var::u}) {
      const WSeries lhs = (x * y).diff(v);
      // Compare within the truncation the product rule can certify.
      const Trunc common = lhs.trunc();
      CHECK(lhs == (x.diff(v) * y + x * y.diff(v)).truncated(common));
    }
  }
}

TEST_CASE("u substitution") {
  testutil::Rng rng(0x5eed0015);
  const Trunc tr(6, 3);
  const WSeries u = WSeries::variable(Var::u, tr);
  for (int t = 0; t < 6; ++t) {
    const WSeries x = random_series(rng, tr, 5);
    CHECK(substitute_u(x, u) == x);
  }
  // w^... style composite: phi(u -> u + z zbar) on phi = u^2.
  WSeries phi(tr);
  phi.add_term({0, 0, 0, 0, 2}, GaussQ(1));
  WSeries repl = u;
  repl.add_term({1, 0, 1, 0, 0}, GaussQ(1));
  const WSeries out = substitute_u(phi, repl);
  CHECK(out.coeff({0, 0, 0, 0, 2}) == GaussQ(1));
  CHECK(out.coeff({1, 0, 1, 0, 1}) == GaussQ(2));
  CHECK(out.coeff({2, 0, 2, 0, 0}) == GaussQ(1));
  CHECK(out.terms().size() == 3);
}

TEST_CASE("general substitution matches monomial evaluation") {
  const Trunc tr(4, 2);
  // a = z zbar + zeta u; substitute z -> z + zbar, zeta -> zeta^2, rest identity.
  WSeries a(tr);
  a.add_term({1, 0, 1, 0, 0}, GaussQ(1));
  a.add_term({0, 1, 0, 0, 1}, GaussQ(1));
  WSeries sz = WSeries::variable(Var::z, tr) + WSeries::variable(Var::zbar, tr);
  WSeries szeta(tr);
  szeta.add_term({0, 2, 0, 0, 0}, GaussQ(1));
  const WSeries out = substitute(a, sz, szeta, WSeries::variable(Var::zbar, tr),
                                 WSeries::variable(Var::zetabar, tr),
                                 WSeries::variable(Var::u, tr));
  WSeries want(tr);
  want.add_term({1, 0, 1, 0, 0}, GaussQ(1));   // z zbar
  want.add_term({0, 0, 2, 0, 0}, GaussQ(1));   // zbar^2
  want.add_term({0, 2, 0, 0, 1}, GaussQ(1));   // zeta^2 u
  CHECK(out == want);
}

TEST_CASE("sdeg truncation and sdeg-capped products") {
  const Trunc tr(6, 4);
  WSeries x(tr);
  x.add_term({1, 0, 1, 0, 0}, GaussQ(1));  // sdeg 2
  x.add_term({1, 1, 1, 1, 0}, GaussQ(1));  // sdeg 4
  x.add_term({0, 0, 0, 0, 2}, GaussQ(1));  // sdeg 4
  CHECK(x.sdeg_truncated(3).terms().size() == 1);
  CHECK(x.sdeg_truncated(4) == x);
  const WSeries full = x * x;
  CHECK(mul_sdeg(x, x, 100) == full);
  CHECK(mul_sdeg(x, x, 5) == full.sdeg_truncated(5));
}

TEST_CASE("holomorphic jet arithmetic") {
  const Trunc tr(4, 2);
  const HolJet z = HolJet::variable(HVar::z, tr);
  const HolJet zeta = HolJet::variable(HVar::zeta, tr);
  const HolJet w = HolJet::variable(HVar::w, tr);
  const HolJet p = z * z * zeta + w.scaled(GaussQ::i());
  CHECK(p.coeff({2, 1, 0}) == GaussQ(1));
  CHECK(p.coeff({0, 0, 1}) == GaussQ::i());
  CHECK(p.diff(HVar::z).coeff({1, 1, 0}) == GaussQ(2));
  CHECK(p.diff(HVar::w).coeff({0, 0, 0}) == GaussQ::i());
  CHECK(p.diff(HVar::zeta).coeff({2, 0, 0}) == GaussQ(1));
  CHECK(Mono3{1, 0, 1}.weight() == 3);

  // contains() gates on weight and zeta separately.
  HolJet q(Trunc(3, 1));
  q.add_term({0, 2, 0}, GaussQ(1));  // zeta^2 over the cap: dropped
  q.add_term({4, 0, 0}, GaussQ(1));  // weight 4 over the cap: dropped
  CHECK(q.is_zero());

  const auto cf = p.coeff_fn(0, 0);
  REQUIRE(cf.size() >= 2);
  CHECK(cf[0] == GaussQ());
  CHECK(cf[1] == GaussQ::i());
}

TEST_CASE("holomorphic substitution into series variables") {
  const Trunc tr(4, 2);
  // a(z, zeta, w) = z^2 + zeta w evaluated at z -> zbar, zeta -> zeta, w -> u.
  HolJet a(tr);
  a.add_term({2, 0, 0}, GaussQ(1));
  a.add_term({0, 1, 1}, GaussQ(1));
  const WSeries out = hol_substitute(a, WSeries::variable(Var::zbar, tr),
                                     WSeries::variable(Var::zeta, tr),
                                     WSeries::variable(Var::u, tr));
  WSeries want(tr);
  want.add_term({0, 0, 2, 0, 0}, GaussQ(1));
  want.add_term({0, 1, 0, 0, 1}, GaussQ(1));
  CHECK(out == want);
}
