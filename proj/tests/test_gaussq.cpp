#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "crnf/gaussq.hpp"
#include "testutil.hpp"

using crnf::GaussQ;
using crnf::rat_parse;
using crnf::rat_str;

TEST_CASE("imaginary unit squares to minus one") {
  CHECK(GaussQ::i() * GaussQ::i() == GaussQ(-1));
  CHECK(GaussQ::i().pow(4) == GaussQ(1));
}

TEST_CASE("field laws on random values") {
  testutil::Rng rng(0x5eed0001);
  for (int t = 0; t < 200; ++t) {
    const GaussQ a = rng.gauss(), b = rng.gauss(), c = rng.gauss();
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK(a - a == GaussQ());
    if (!a.is_zero()) {
      CHECK(a * a.inverse() == GaussQ(1));
      CHECK(a / a == GaussQ(1));
    }
  }
}

TEST_CASE("conjugation is a ring involution") {
  testutil::Rng rng(0x5eed0002);
  for (int t = 0; t < 100; ++t) {
    const GaussQ a = rng.gauss(), b = rng.gauss();
    CHECK((a * b).conj() == a.conj() * b.conj());
    CHECK((a + b).conj() == a.conj() + b.conj());
    CHECK(a.conj().conj() == a);
    CHECK(a * a.conj() == GaussQ(a.norm()));
    CHECK((a * a.conj()).is_real());
  }
}

TEST_CASE("powers, including negative exponents") {
  const GaussQ a(mpq_class(2, 3), mpq_class(-1, 5));
  CHECK(a.pow(0) == GaussQ(1));
  CHECK(a.pow(3) == a * a * a);
  CHECK(a.pow(-2) == (a * a).inverse());
  CHECK(GaussQ(2).pow(-1) == GaussQ(1, 2));
}

TEST_CASE("division by zero throws") {
  CHECK_THROWS_AS(GaussQ(1) / GaussQ(), std::domain_error);
  CHECK_THROWS_AS(GaussQ().inverse(), std::domain_error);
}

TEST_CASE("rational strings are canonical and round trip") {
  CHECK(rat_str(mpq_class(4, 6)) == "2/3");
  CHECK(rat_str(rat_parse("-10/4")) == "-5/2");
  CHECK(rat_str(rat_parse("7")) == "7");
  CHECK(rat_parse("0/5") == 0);
  CHECK_THROWS_AS(rat_parse(""), std::invalid_argument);
  CHECK_THROWS_AS(rat_parse("1/"), std::invalid_argument);
  CHECK_THROWS_AS(rat_parse("/2"), std::invalid_argument);
  CHECK_THROWS_AS(rat_parse("1//2"), std::invalid_argument);
  CHECK_THROWS_AS(rat_parse("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(rat_parse("3.5"), std::invalid_argument);
  CHECK_THROWS_AS(rat_parse("2+3"), std::invalid_argument);
  CHECK_THROWS_AS(rat_parse(" 1"), std::invalid_argument);
}

TEST_CASE("component parsing") {
  const GaussQ q = GaussQ::parse("3/4", "-2/5");
  CHECK(q.re() == mpq_class(3, 4));
  CHECK(q.im() == mpq_class(-2, 5));
}

TEST_CASE("string rendering") {
  CHECK(GaussQ().str() == "0");
  CHECK(GaussQ(1).str() == "1");
  CHECK(GaussQ(-1).str() == "-1");
  CHECK(GaussQ::i().str() == "i");
  CHECK((-GaussQ::i()).str() == "-i");
  CHECK(GaussQ(1, 2).str() == "1/2");
  CHECK(GaussQ(mpq_class(3), mpq_class(2)).str() == "3+2i");
  CHECK(GaussQ(mpq_class(3), mpq_class(-1)).str() == "3-i");
  CHECK(GaussQ(mpq_class(0), mpq_class(-1, 2)).str() == "-1/2i");
  CHECK(GaussQ(mpq_class(-1, 2), mpq_class(1, 3)).str() == "-1/2+1/3i");
}
