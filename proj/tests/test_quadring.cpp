// Copyright (c) 2026 the edsearch authors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "eds/quadring.hpp"
#include "testutil.hpp"

using namespace eds;
using edstest::E;

TEST_CASE("field spec construction", "[quadring]") {
  for (long long d : edstest::paper_field_list()) {
    FieldSpec f = FieldSpec::make(d);
    CHECK(f.D == d);
    if ((((d % 4) + 4) % 4) == 1) {
      CHECK(f.kind == OmegaKind::HalfPlusSqrtOver2);
      CHECK(f.s == (d - 1) / 4);
      CHECK(f.t == 1);
    } else {
      CHECK(f.kind == OmegaKind::Sqrt);
      CHECK(f.s == d);
      CHECK(f.t == 0);
    }
  }
  CHECK_THROWS_AS(FieldSpec::make(0), ConfigError);
  CHECK_THROWS_AS(FieldSpec::make(1), ConfigError);
  CHECK_THROWS_AS(FieldSpec::make(4), ConfigError);
  CHECK_THROWS_AS(FieldSpec::make(12), ConfigError);
  CHECK_THROWS_AS(FieldSpec::make(-4), ConfigError);
  CHECK_THROWS_AS(FieldSpec::make(-75), ConfigError);
}

TEST_CASE("multiplication reduces by the minimal polynomial", "[quadring]") {
  FieldSpec f7 = FieldSpec::make(-7);
  RingElem w{0, 1};
  CHECK(mul(w, w, f7) == E("-2+w"));

  FieldSpec f3 = FieldSpec::make(3);
  CHECK(mul(E("1+w"), E("1+w"), f3) == E("4+2*w"));

  for (const auto& F : edstest::all_fields()) {
    CHECK(mul(w, w, F) == RingElem(F.s, F.t));
    edstest::TupleGen gen(7 + static_cast<unsigned long>(F.D));
    for (int i = 0; i < 20; ++i) {
      RingElem a = gen.nonzero_elem();
      CHECK(mul(a, RingElem{1, 0}, F) == a);
      RingElem b = gen.nonzero_elem();
      CHECK(mul(a, b, F) == mul(b, a, F));
    }
  }
}

TEST_CASE("conjugation", "[quadring]") {
  FieldSpec f7 = FieldSpec::make(-7);
  CHECK(conj(E("w"), f7) == E("1-w"));
  FieldSpec f3 = FieldSpec::make(3);
  CHECK(conj(E("2+5*w"), f3) == E("2-5*w"));
  for (const auto& F : edstest::all_fields()) {
    edstest::TupleGen gen(11 + static_cast<unsigned long>(F.D));
    for (int i = 0; i < 20; ++i) {
      RingElem a = gen.nonzero_elem(), b = gen.nonzero_elem();
      CHECK(conj(conj(a, F), F) == a);
      CHECK(conj(mul(a, b, F), F) == mul(conj(a, F), conj(b, F), F));
    }
  }
}

TEST_CASE("norm is multiplicative and matches a*conj(a)", "[quadring]") {
  CHECK(norm(E("1+w"), FieldSpec::make(-7)) == 4);
  CHECK(norm(E("1+w"), FieldSpec::make(3)) == -2);
  for (const auto& F : edstest::all_fields()) {
    edstest::TupleGen gen(13 + static_cast<unsigned long>(F.D));
    for (int i = 0; i < 20; ++i) {
      RingElem a = gen.nonzero_elem(), b = gen.nonzero_elem();
      CHECK(norm(mul(a, b, F), F) == norm(a, F) * norm(b, F));
      RingElem ac = mul(a, conj(a, F), F);
      CHECK(ac.x == norm(a, F));
      CHECK(sgn(ac.y) == 0);
      CHECK((norm(a, F) == 0) == a.is_zero());
    }
  }
}

TEST_CASE("norm with 64-bit scale coordinates", "[quadring]") {
  // exercises sizes past one limb
  for (const auto& F : edstest::all_fields()) {
    std::mt19937_64 rng(17u + static_cast<unsigned long>(F.D));
    for (int i = 0; i < 10; ++i) {
      RingElem a{mpz_class(rng()) - mpz_class(rng()), mpz_class(rng()) - mpz_class(rng())};
      RingElem b{mpz_class(rng()) - mpz_class(rng()), mpz_class(rng()) - mpz_class(rng())};
      CHECK(norm(mul(a, b, F), F) == norm(a, F) * norm(b, F));
      if (!b.is_zero()) CHECK(exact_div(mul(a, b, F), b, F) == a);
    }
  }
}

TEST_CASE("exact division", "[quadring]") {
  FieldSpec f7 = FieldSpec::make(-7);
  CHECK(exact_div(E("24-8*w"), E("4"), f7) == E("6-2*w"));
  CHECK(exact_div(E("10+2*w"), E("1+w"), f7) == E("6-2*w"));
  CHECK(mul(E("1+w"), E("6-2*w"), f7) == E("10+2*w"));

  for (const auto& F : edstest::all_fields()) {
    edstest::TupleGen gen(19 + static_cast<unsigned long>(F.D));
    for (int i = 0; i < 20; ++i) {
      RingElem a = gen.nonzero_elem(), b = gen.nonzero_elem();
      CHECK(exact_div(a, a, F) == RingElem(1, 0));
      CHECK(exact_div(mul(a, b, F), b, F) == a);
    }
  }
  CHECK_THROWS_AS(exact_div(E("1"), E("2"), FieldSpec::make(3)), NotDivisibleError);
  CHECK_THROWS_AS(exact_div(E("w"), E("0"), FieldSpec::make(3)), NotDivisibleError);
  CHECK(divides(E("1+w"), E("10+2*w"), f7));
  CHECK_FALSE(divides(E("2"), E("1"), f7));
}

TEST_CASE("field elements embed ring arithmetic", "[quadring]") {
  for (const auto& F : edstest::all_fields()) {
    edstest::TupleGen gen(23 + static_cast<unsigned long>(F.D));
    for (int i = 0; i < 20; ++i) {
      RingElem a = gen.nonzero_elem(), b = gen.nonzero_elem();
      FieldElem fa{a}, fb{b};
      CHECK(add(fa, fb, F) == FieldElem{add(a, b, F)});
      CHECK(sub(fa, fb, F) == FieldElem{sub(a, b, F)});
      CHECK(mul(fa, fb, F) == FieldElem{mul(a, b, F)});
      CHECK(square(fa, F) == FieldElem{square(a, F)});
      // (a/b)*b == a in the fraction field
      CHECK(mul(div(fa, fb, F), fb, F) == fa);
    }
  }
}

TEST_CASE("field element normalization is canonical", "[quadring]") {
  FieldSpec f3 = FieldSpec::make(3);
  FieldElem a{E("2+2*w"), mpz_class(2)};
  CHECK(a == FieldElem{E("1+w")});
  CHECK(a.is_integral());
  FieldElem b{E("2+4*w"), mpz_class(6)};
  CHECK(b.num == E("1+2*w"));
  CHECK(b.den == 3);
  FieldElem z{E("0"), mpz_class(5)};
  CHECK(z.is_zero());
  CHECK(z.den == 1);
  // same value, different construction path
  CHECK(div(FieldElem{E("2+4*w")}, FieldElem{E("6")}, f3) == b);
}

TEST_CASE("element formatting conventions", "[quadring]") {
  CHECK(format_elem(E("-2+3*w")) == "-2+3*w");
  CHECK(format_elem(RingElem(5, 0)) == "5");
  CHECK(format_elem(RingElem(0, 1)) == "w");
  CHECK(format_elem(RingElem(0, -1)) == "-w");
  CHECK(format_elem(RingElem(1, -1)) == "1-w");
  CHECK(format_elem(RingElem(0, 0)) == "0");
  CHECK(format_elem(RingElem(0, -3)) == "-3*w");
  CHECK(format_elem(RingElem(-10, -2)) == "-10-2*w");
  CHECK(format_elem(FieldElem{E("1+w"), mpz_class(4)}) == "(1+w)/4");
  CHECK(format_elem(FieldElem{E("3"), mpz_class(4)}) == "3/4");
  CHECK(format_elem(FieldElem{E("w")}) == "w");
}

TEST_CASE("parsing round trip and liberal forms", "[quadring]") {
  for (const auto& F : edstest::all_fields()) {
    edstest::TupleGen gen(29 + static_cast<unsigned long>(F.D), 1000);
    for (int i = 0; i < 50; ++i) {
      RingElem a = gen.nonzero_elem();
      CHECK(parse_elem(format_elem(a)) == a);
    }
  }
  CHECK(parse_elem("w+1") == E("1+w"));
  CHECK(parse_elem(" -2 + 3*w ") == E("-2+3*w"));
  CHECK(parse_elem("1*w") == E("w"));
  CHECK(parse_elem("-0") == RingElem(0, 0));
  CHECK_THROWS_AS(parse_elem(""), ParseError);
  CHECK_THROWS_AS(parse_elem("x+1"), ParseError);
  CHECK_THROWS_AS(parse_elem("1++2"), ParseError);
  CHECK_THROWS_AS(parse_elem("3*"), ParseError);

  CHECK(parse_field_elem("(1+w)/4") == FieldElem{E("1+w"), mpz_class(4)});
  CHECK(parse_field_elem("3/4") == FieldElem{E("3"), mpz_class(4)});
  CHECK(parse_field_elem("w") == FieldElem{E("w")});
  CHECK_THROWS_AS(parse_field_elem("(1+w)/0"), ParseError);
}

TEST_CASE("ring powers", "[quadring]") {
  FieldSpec f3 = FieldSpec::make(3);
  CHECK(ring_pow(E("1+w"), 5, f3) == E("76+44*w"));
  CHECK(ring_pow(E("2"), 0, f3) == RingElem(1, 0));
  FieldElem half{E("1"), mpz_class(2)};
  CHECK(field_pow(half, 3, f3) == FieldElem{E("1"), mpz_class(8)});
}
