#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <vector>

#include "doctest.h"
#include "galgeo/exec.hpp"
#include "galgeo/qpoly.hpp"

using namespace galgeo;

namespace {

FieldTower make_tower(uint32_t p, uint32_t n) {
  TowerParams pr;
  pr.p = p;
  pr.n = n;
  return FieldTower(pr);
}

// Oracle: kernel size by exhaustive root counting.
uint32_t kernel_dim_by_roots(const QPoly& f) {
  const Layer& l = f.tower->layer(LayerId::fqn);
  uint64_t roots = 0;
  for (uint64_t x = 0; x < l.size(); ++x)
    if (eval_enc(f, uint32_t(x)) == 0) ++roots;
  uint64_t q = f.tower->q();
  uint32_t dim = 0;
  uint64_t want = 1;
  while (want < roots) {
    want *= q;
    ++dim;
  }
  REQUIRE(want == roots);  // root count must be a q-power
  return dim;
}

}  // namespace

TEST_CASE("eval basics") {
  FieldTower tw = make_tower(2, 2);  // F_4
  SUBCASE("identity monomial") {
    QPoly id = qpoly_monomial(tw, 0);
    for (uint32_t a = 0; a < 4; ++a) CHECK(eval_enc(id, a) == a);
  }
  SUBCASE("x^q on F_4 sends omega to omega+1") {
    QPoly fr = qpoly_monomial(tw, 1);
    CHECK(eval_enc(fr, 2) == 3);
    CHECK(eval_enc(fr, 3) == 2);
  }
  SUBCASE("x^q - x on F_8 vanishes exactly on F_2") {
    FieldTower t8 = make_tower(2, 3);
    const Layer& l = t8.layer(LayerId::fqn);
    QPoly f = add(qpoly_monomial(t8, 1), scale(qpoly_monomial(t8, 0), l.neg(1)));
    for (uint32_t a = 0; a < 8; ++a) CHECK((eval_enc(f, a) == 0) == (a < 2));
  }
  SUBCASE("F_q-linearity, exhaustive over F_9") {
    FieldTower t9 = make_tower(3, 2);
    const Layer& l = t9.layer(LayerId::fqn);
    QPoly f = qpoly_from_coeffs(t9, {5, 7});
    for (uint32_t a = 0; a < 3; ++a)
      for (uint32_t b = 0; b < 3; ++b)
        for (uint32_t x = 0; x < 9; ++x)
          for (uint32_t y = 0; y < 9; ++y) {
            uint32_t lhs = eval_enc(f, l.add(l.mul(a, x), l.mul(b, y)));
            uint32_t rhs = l.add(l.mul(a, eval_enc(f, x)), l.mul(b, eval_enc(f, y)));
            REQUIRE(lhs == rhs);
          }
  }
}

TEST_CASE("compose") {
  FieldTower tw = make_tower(2, 3);
  const Layer& l = tw.layer(LayerId::fqn);
  SUBCASE("monomial reduction") {
    CHECK(compose(qpoly_monomial(tw, 1), qpoly_monomial(tw, 1)) == qpoly_monomial(tw, 2));
    CHECK(compose(qpoly_monomial(tw, 2), qpoly_monomial(tw, 1)) == qpoly_monomial(tw, 0));
  }
  SUBCASE("inner coefficient picks up a Frobenius twist") {
    for (uint32_t a = 1; a < 8; ++a)
      for (uint32_t b = 1; b < 8; ++b) {
        QPoly lhs = compose(qpoly_monomial(tw, 1, a), qpoly_monomial(tw, 1, b));
        QPoly rhs = qpoly_monomial(tw, 2, l.mul(a, l.frob_q(b, 1)));
        CHECK(lhs == rhs);
      }
  }
  SUBCASE("compose agrees with pointwise evaluation, sampled sweep") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
      QPoly f = qpoly_from_coeffs(tw, {uint32_t(rng.below(8)), uint32_t(rng.below(8)), uint32_t(rng.below(8))});
      QPoly g = qpoly_from_coeffs(tw, {uint32_t(rng.below(8)), uint32_t(rng.below(8)), uint32_t(rng.below(8))});
      QPoly h = compose(f, g);
      for (uint32_t x = 0; x < 8; ++x) REQUIRE(eval_enc(h, x) == eval_enc(f, eval_enc(g, x)));
    }
  }
  SUBCASE("associativity and identity on random triples") {
    SplitMix64 rng(11);
    QPoly id = qpoly_monomial(tw, 0);
    for (int trial = 0; trial < 30; ++trial) {
      QPoly f = qpoly_from_coeffs(tw, {uint32_t(rng.below(8)), uint32_t(rng.below(8)), uint32_t(rng.below(8))});
      QPoly g = qpoly_from_coeffs(tw, {uint32_t(rng.below(8)), uint32_t(rng.below(8)), uint32_t(rng.below(8))});
      QPoly h = qpoly_from_coeffs(tw, {uint32_t(rng.below(8)), uint32_t(rng.below(8)), uint32_t(rng.below(8))});
      REQUIRE(compose(compose(f, g), h) == compose(f, compose(g, h)));
      REQUIRE(compose(f, id) == f);
      REQUIRE(compose(id, f) == f);
    }
  }
}

TEST_CASE("adjoint") {
  FieldTower tw = make_tower(2, 3);
  const Layer& l = tw.layer(LayerId::fqn);
  SUBCASE("identity is self-adjoint") { CHECK(adjoint(qpoly_monomial(tw, 0)) == qpoly_monomial(tw, 0)); }
  SUBCASE("a x^q maps to a^{q^{n-1}} x^{q^{n-1}}") {
    for (uint32_t a = 0; a < 8; ++a)
      CHECK(adjoint(qpoly_monomial(tw, 1, a)) == qpoly_monomial(tw, 2, l.frob_q(a, 2)));
  }
  SUBCASE("involution, exhaustive over <=2 nonzero coefficients") {
    for (uint32_t i = 0; i < 3; ++i)
      for (uint32_t j = 0; j < 3; ++j) {
        if (i == j) continue;
        for (uint32_t a = 0; a < 8; ++a)
          for (uint32_t b = 0; b < 8; ++b) {
            QPoly f = qpoly_zero(tw);
            f.c[i] = a;
            f.c[j] = b;
            REQUIRE(adjoint(adjoint(f)) == f);
          }
      }
  }
  SUBCASE("anti-homomorphism over composition") {
    SplitMix64 rng(13);
    for (int trial = 0; trial < 40; ++trial) {
      QPoly f = qpoly_from_coeffs(tw, {uint32_t(rng.below(8)), uint32_t(rng.below(8)), uint32_t(rng.below(8))});
      QPoly g = qpoly_from_coeffs(tw, {uint32_t(rng.below(8)), uint32_t(rng.below(8)), uint32_t(rng.below(8))});
      REQUIRE(adjoint(compose(f, g)) == compose(adjoint(g), adjoint(f)));
    }
    for (uint32_t i = 0; i < 3; ++i)
      for (uint32_t j = 0; j < 3; ++j)
        REQUIRE(adjoint(compose(qpoly_monomial(tw, i), qpoly_monomial(tw, j))) ==
                compose(adjoint(qpoly_monomial(tw, j)), adjoint(qpoly_monomial(tw, i))));
  }
  SUBCASE("trace bilinear form oracle") {
    CHECK(trace_bilinear_check(qpoly_monomial(tw, 0)));
    CHECK(trace_bilinear_check(qpoly_monomial(tw, 1)));
    QPoly f = qpoly_from_coeffs(tw, {3, 0, 5});
    CHECK(trace_bilinear_check(f));
    // negative control: corrupt the adjoint
    QPoly bad = adjoint(f);
    bad.c[0] = tw.layer(LayerId::fqn).add(bad.c[0], 1);
    CHECK(!trace_bilinear_check_against(f, bad));
  }
  SUBCASE("adjoint preserves rank, exhaustive over F_8") {
    for (uint32_t enc = 0; enc < 512; ++enc) {
      QPoly f = qpoly_from_coeffs(tw, {enc % 8, (enc / 8) % 8, enc / 64});
      REQUIRE(rank(adjoint(f)) == rank(f));
    }
  }
}

TEST_CASE("fq_matrix, kernel and rank") {
  SUBCASE("identity has full rank") {
    FieldTower tw = make_tower(2, 3);
    CHECK(rank(qpoly_monomial(tw, 0)) == 3);
    CHECK(kernel_dim(qpoly_monomial(tw, 0)) == 0);
  }
  SUBCASE("x^{q^2} - x over F_16 has kernel F_4") {
    FieldTower tw = make_tower(2, 4);
    QPoly f = add(qpoly_monomial(tw, 2), qpoly_monomial(tw, 0));  // char 2: minus = plus
    CHECK(kernel_dim(f) == 2);
    CHECK(rank(f) == 2);
  }
  SUBCASE("kernel dim matches root-count oracle, exhaustive over F_8") {
    FieldTower tw = make_tower(2, 3);
    for (uint32_t enc = 0; enc < 512; ++enc) {
      QPoly f = qpoly_from_coeffs(tw, {enc % 8, (enc / 8) % 8, enc / 64});
      REQUIRE(kernel_dim(f) == kernel_dim_by_roots(f));
      REQUIRE(kernel_dim(f) + rank(f) == 3);
    }
  }
  SUBCASE("kernel dim matches root-count oracle, exhaustive over F_9") {
    FieldTower tw = make_tower(3, 2);
    for (uint32_t enc = 0; enc < 81; ++enc) {
      QPoly f = qpoly_from_coeffs(tw, {enc % 9, enc / 9});
      REQUIRE(kernel_dim(f) == kernel_dim_by_roots(f));
    }
  }
  SUBCASE("x^q - lambda x over F_8, value fixed by root count") {
    FieldTower tw = make_tower(2, 3);
    const Layer& l = tw.layer(LayerId::fqn);
    QPoly f = add(qpoly_monomial(tw, 1), scale(qpoly_monomial(tw, 0), l.neg(2)));
    CHECK(kernel_dim(f) == kernel_dim_by_roots(f));
  }
}

TEST_CASE("text form round trip") {
  FieldTower tw = make_tower(2, 3);
  CHECK(to_text(qpoly_zero(tw)) == "0");
  QPoly f = qpoly_from_coeffs(tw, {5, 0, 3});
  CHECK(to_text(f) == "5 + 3*X^q2");
  CHECK(qpoly_from_text(tw, to_text(f)) == f);
  QPoly g = qpoly_from_coeffs(tw, {0, 7, 0});
  CHECK(to_text(g) == "7*X^q");
  CHECK(qpoly_from_text(tw, to_text(g)) == g);
  SplitMix64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    QPoly h = qpoly_from_coeffs(tw, {uint32_t(rng.below(8)), uint32_t(rng.below(8)), uint32_t(rng.below(8))});
    REQUIRE(qpoly_from_text(tw, to_text(h)) == h);
  }
  CHECK_THROWS_AS(qpoly_from_text(tw, "5 + junk"), Error);
  CHECK_THROWS_AS(qpoly_from_text(tw, "1*X^q9"), Error);
}
