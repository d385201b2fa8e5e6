// Copyright (c) 2026 the edsearch authors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "eds/sequence.hpp"
#include "testutil.hpp"

using namespace eds;
using edstest::E;

namespace {

EDSTuple zt(const char* u2, const char* u3, const char* u4, long long d) {
  FieldSpec F = FieldSpec::make(d);
  return make_tuple(E(u2), E(u3), E(u4), F);
}

}  // namespace

TEST_CASE("tuple validation", "[sequence]") {
  CHECK_THROWS_AS(zt("0", "1", "1", 3), InvalidTupleError);
  CHECK_THROWS_AS(zt("1", "0", "1", 3), InvalidTupleError);
  CHECK_THROWS_AS(zt("2", "1", "1", 3), InvalidTupleError);  // 2 does not divide 1
  CHECK_NOTHROW(zt("2", "1", "4", 3));
  CHECK_NOTHROW(zt("1+w", "-2-2*w", "-10-2*w", -7));
}

TEST_CASE("initial block", "[sequence]") {
  // integer sequence 1,-1,1: u5 = u4 u2^3 - u3^3 = 1 + 1 = 2
  Block b = initial_block(zt("1", "-1", "1", 3));
  CHECK(b.center == 2);
  const char* expect[7] = {"-1", "0", "1", "1", "-1", "1", "2"};
  for (int i = 0; i < 7; ++i) CHECK(b.terms[i] == E(expect[i]));

  Block tb = initial_block(zt("1", "1", "1", 3));
  CHECK(tb.terms[6].is_zero());  // u5 = 1 - 1 = 0

  // D=3 tuple (1, w-1, 2w-2): u5 = (2w-2) - (w-1)^3 = 8-4w
  Block db = initial_block(zt("1", "-1+w", "-2+2*w", 3));
  CHECK(db.terms[6] == E("8-4*w"));
}

TEST_CASE("block doubling matches hand-computed window", "[sequence]") {
  EDSTuple t = zt("1", "-1", "1", 3);
  Block b = initial_block(t);
  OpCount oc;
  Block b4 = double_block(b, t, &oc);
  CHECK(b4.center == 4);
  const char* expect[7] = {"1", "1", "-1", "1", "2", "-1", "-3"};
  for (int i = 0; i < 7; ++i) CHECK(b4.terms[i] == E(expect[i]));
  CHECK(oc.squarings == 5);
  CHECK(oc.multiplications == 22);
  CHECK(oc.exact_divs == 3);
  Block b8 = double_block(b4, t);
  CHECK(b8.center == 8);
  SequenceOracle o(t);
  for (int i = 0; i < 7; ++i) CHECK(b8.terms[i] == o.term(8 - 3 + i));
}

TEST_CASE("torsion zeros propagate through doubling", "[sequence]") {
  EDSTuple t = zt("1", "1", "1", 3);
  Block b = initial_block(t);
  SequenceOracle o(t);
  for (int lev = 0; lev < 4; ++lev) {
    b = double_block(b, t);
    for (int i = 0; i < 7; ++i) CHECK(b.terms[i] == o.term(b.center - 3 + i));
  }
  CHECK(b.center == 32);
  // zero at every index divisible by 5: u30 sits at slot 1
  CHECK(b.terms[1].is_zero());
  CHECK_FALSE(b.terms[0].is_zero());
}

TEST_CASE("term_naive basics", "[sequence]") {
  EDSTuple t = zt("1", "-1", "1", 3);
  CHECK(term_naive(t, 10) == E("-4"));
  CHECK(term_naive(t, 1) == E("1"));
  CHECK(term_naive(t, 0).is_zero());
  CHECK(term_naive(t, -2) == neg(t.u2));
  CHECK(term_naive(t, 5) == E("2"));

  for (const auto& F : edstest::all_fields()) {
    edstest::TupleGen gen(41 + static_cast<unsigned long>(F.D), 2);
    EDSTuple rt = gen.tuple(F);
    SequenceOracle o(rt);
    for (long n = 1; n <= 32; ++n) CHECK(o.term(-n) == neg(o.term(n)));
  }
}

TEST_CASE("terms_at_power", "[sequence]") {
  EDSTuple t = zt("1", "-1", "1", 3);
  auto [a0, b0] = terms_at_power(t, 0);
  CHECK(a0 == t.u2);
  CHECK(b0 == t.u3);
  auto [a2, b2] = terms_at_power(t, 2);
  CHECK(a2 == E("-5"));
  CHECK(b2 == E("7"));

  EDSTuple tor = zt("1", "1", "1", 3);
  SequenceOracle o(tor);
  auto [a, b] = terms_at_power(tor, 2);
  CHECK(a == o.term(8));
  CHECK(b == o.term(9));
  auto [a3, b3] = terms_at_power(tor, 3);  // n = 16
  CHECK(a3 == o.term(16));
  CHECK(b3 == o.term(17));
  CHECK(o.term(15).is_zero());
}

TEST_CASE("tuple symmetries", "[sequence]") {
  EDSTuple t = zt("w", "4-2*w", "16-8*w", -7);
  EDSTuple c = conj_tuple(t);
  CHECK(c.u2 == E("1-w"));
  CHECK(c.u3 == E("2+2*w"));
  CHECK(c.u4 == E("8+8*w"));
  EDSTuple cc = conj_tuple(c);
  CHECK((cc.u2 == t.u2 && cc.u3 == t.u3 && cc.u4 == t.u4));

  EDSTuple n = negate_tuple(zt("1", "-1+w", "-2+2*w", 3));
  CHECK(n.u2 == E("-1"));
  CHECK(n.u3 == E("-1+w"));
  CHECK(n.u4 == E("2-2*w"));
}

TEST_CASE("oracle equivalence on power-of-two indices", "[sequence]") {
  for (const auto& F : edstest::all_fields()) {
    edstest::TupleGen gen(43 + static_cast<unsigned long>(F.D), 2);
    for (int rep = 0; rep < 10; ++rep) {
      EDSTuple t = gen.tuple(F);
      SequenceOracle o(t);
      for (int I = 0; I <= 6; ++I) {
        long n = 1L << (I + 1);
        auto [un, un1] = terms_at_power(t, I);
        CHECK(un == o.term(n));
        CHECK(un1 == o.term(n + 1));
      }
    }
  }
}

TEST_CASE("recursion identity holds on oracle sequences", "[sequence]") {
  for (const auto& F : edstest::all_fields()) {
    edstest::TupleGen gen(47 + static_cast<unsigned long>(F.D), 2);
    EDSTuple t = gen.tuple(F);
    SequenceOracle o(t);
    for (long m = 1; m <= 12; ++m) {
      for (long n = 1; n <= m && m + n <= 24; ++n) {
        RingElem lhs = mul(o.term(m + n), o.term(m - n), F);
        RingElem rhs = sub(mul(mul(o.term(m + 1), o.term(m - 1), F), square(o.term(n), F), F),
                           mul(mul(o.term(n + 1), o.term(n - 1), F), square(o.term(m), F), F),
                           F);
        CHECK(lhs == rhs);
      }
    }
  }
}

TEST_CASE("divisibility along index multiples", "[sequence]") {
  for (const auto& F : edstest::all_fields()) {
    edstest::TupleGen gen(53 + static_cast<unsigned long>(F.D), 2);
    EDSTuple t = gen.tuple(F);
    SequenceOracle o(t);
    for (long n = 2; n <= 24; ++n) {
      for (long m = 2 * n; m <= 48; m += n) {
        RingElem un = o.term(n);
        if (un.is_zero()) continue;
        CHECK(divides(un, o.term(m), F));
      }
    }
  }
}

TEST_CASE("conjugation commutes with the sequence", "[sequence]") {
  for (const auto& F : edstest::all_fields()) {
    edstest::TupleGen gen(59 + static_cast<unsigned long>(F.D), 2);
    EDSTuple t = gen.tuple(F);
    SequenceOracle ot(t);
    SequenceOracle oc(conj_tuple(t));
    for (long n = 1; n <= 40; ++n) CHECK(oc.term(n) == conj(ot.term(n), F));
  }
}

TEST_CASE("doubling cost is five squarings and twenty-two multiplications", "[sequence]") {
  EDSTuple t = zt("1+w", "-2-2*w", "-10-2*w", -7);
  OpCount oc;
  terms_at_power(t, 4, &oc);
  CHECK(oc.squarings == 4 * 5);
  CHECK(oc.multiplications == 4 * 22);
  CHECK(oc.exact_divs == 4 * 3);
}
