// Copyright (c) 2026 the edsearch authors
// SPDX-License-Identifier: Apache-2.0
//
// Exact arithmetic in O_K = Z[w], the ring of integers of a quadratic field
// Q(sqrt(D)), and in its fraction field.  Elements are stored on the basis
// {1, w} where w = (1+sqrt(D))/2 if D = 1 mod 4 and w = sqrt(D) otherwise,
// so w^2 = s + t*w with (s,t) = ((D-1)/4, 1) or (D, 0).

#ifndef EDS_QUADRING_HPP
#define EDS_QUADRING_HPP

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <string_view>

#include "eds/errors.hpp"

namespace eds {

enum class OmegaKind { Sqrt, HalfPlusSqrtOver2 };

struct FieldSpec {
  long long D = 0;
  OmegaKind kind = OmegaKind::Sqrt;
  long long s = 0;  // w^2 = s + t*w
  int t = 0;

  static constexpr int degree = 2;

  static FieldSpec make(long long D) {
    if (D == 0 || D == 1) throw ConfigError("D must be a squarefree integer != 0, 1");
    long long a = D < 0 ? -D : D;
    for (long long p = 2; p * p <= a; ++p)
      if (a % (p * p) == 0) throw ConfigError("D must be squarefree");
    FieldSpec f;
    f.D = D;
    if (((D % 4) + 4) % 4 == 1) {
      f.kind = OmegaKind::HalfPlusSqrtOver2;
      f.s = (D - 1) / 4;
      f.t = 1;
    } else {
      f.kind = OmegaKind::Sqrt;
      f.s = D;
      f.t = 0;
    }
    return f;
  }

  bool operator==(const FieldSpec& o) const { return D == o.D; }
};

/// x + y*w with arbitrary-precision coordinates.
struct RingElem {
  mpz_class x, y;

  RingElem() : x(0), y(0) {}
  RingElem(long xv, long yv) : x(xv), y(yv) {}
  RingElem(mpz_class xv, mpz_class yv) : x(std::move(xv)), y(std::move(yv)) {}

  bool is_zero() const { return sgn(x) == 0 && sgn(y) == 0; }
  bool operator==(const RingElem& o) const { return x == o.x && y == o.y; }
  bool operator!=(const RingElem& o) const { return !(*this == o); }
};

struct RingScratch {
  mpz_class t0, t1, t2, t3;
};

namespace detail {

// Writes do not begin until all reads of a and b are done, so r may alias
// either input.  Multiplication by s and t stays in word arithmetic: both
// fit a long for any sane D.
inline void mul_into(RingElem& r, const RingElem& a, const RingElem& b,
                     const FieldSpec& F, RingScratch& S) {
  mpz_mul(S.t0.get_mpz_t(), a.x.get_mpz_t(), b.x.get_mpz_t());
  mpz_mul(S.t1.get_mpz_t(), a.y.get_mpz_t(), b.y.get_mpz_t());
  mpz_add(S.t2.get_mpz_t(), a.x.get_mpz_t(), a.y.get_mpz_t());
  mpz_add(S.t3.get_mpz_t(), b.x.get_mpz_t(), b.y.get_mpz_t());
  mpz_mul(S.t2.get_mpz_t(), S.t2.get_mpz_t(), S.t3.get_mpz_t());
  mpz_sub(S.t2.get_mpz_t(), S.t2.get_mpz_t(), S.t0.get_mpz_t());
  mpz_sub(S.t2.get_mpz_t(), S.t2.get_mpz_t(), S.t1.get_mpz_t());
  if (F.s >= 0)
    mpz_addmul_ui(S.t0.get_mpz_t(), S.t1.get_mpz_t(), static_cast<unsigned long>(F.s));
  else
    mpz_submul_ui(S.t0.get_mpz_t(), S.t1.get_mpz_t(), static_cast<unsigned long>(-F.s));
  if (F.t) mpz_add(S.t2.get_mpz_t(), S.t2.get_mpz_t(), S.t1.get_mpz_t());
  mpz_swap(r.x.get_mpz_t(), S.t0.get_mpz_t());
  mpz_swap(r.y.get_mpz_t(), S.t2.get_mpz_t());
}

inline void sqr_into(RingElem& r, const RingElem& a, const FieldSpec& F, RingScratch& S) {
  mpz_mul(S.t0.get_mpz_t(), a.x.get_mpz_t(), a.x.get_mpz_t());
  mpz_mul(S.t1.get_mpz_t(), a.y.get_mpz_t(), a.y.get_mpz_t());
  mpz_mul(S.t2.get_mpz_t(), a.x.get_mpz_t(), a.y.get_mpz_t());
  mpz_mul_2exp(S.t2.get_mpz_t(), S.t2.get_mpz_t(), 1);
  if (F.s >= 0)
    mpz_addmul_ui(S.t0.get_mpz_t(), S.t1.get_mpz_t(), static_cast<unsigned long>(F.s));
  else
    mpz_submul_ui(S.t0.get_mpz_t(), S.t1.get_mpz_t(), static_cast<unsigned long>(-F.s));
  if (F.t) mpz_add(S.t2.get_mpz_t(), S.t2.get_mpz_t(), S.t1.get_mpz_t());
  mpz_swap(r.x.get_mpz_t(), S.t0.get_mpz_t());
  mpz_swap(r.y.get_mpz_t(), S.t2.get_mpz_t());
}

inline void norm_into(mpz_class& r, const RingElem& a, const FieldSpec& F, RingScratch& S) {
  mpz_mul(S.t0.get_mpz_t(), a.x.get_mpz_t(), a.x.get_mpz_t());
  mpz_mul(S.t1.get_mpz_t(), a.y.get_mpz_t(), a.y.get_mpz_t());
  if (F.t) {
    mpz_mul(S.t2.get_mpz_t(), a.x.get_mpz_t(), a.y.get_mpz_t());
    mpz_add(S.t0.get_mpz_t(), S.t0.get_mpz_t(), S.t2.get_mpz_t());
  }
  if (F.s >= 0)
    mpz_submul_ui(S.t0.get_mpz_t(), S.t1.get_mpz_t(), static_cast<unsigned long>(F.s));
  else
    mpz_addmul_ui(S.t0.get_mpz_t(), S.t1.get_mpz_t(), static_cast<unsigned long>(-F.s));
  mpz_swap(r.get_mpz_t(), S.t0.get_mpz_t());
}

inline void add_into(RingElem& r, const RingElem& a, const RingElem& b) {
  mpz_add(r.x.get_mpz_t(), a.x.get_mpz_t(), b.x.get_mpz_t());
  mpz_add(r.y.get_mpz_t(), a.y.get_mpz_t(), b.y.get_mpz_t());
}

inline void sub_into(RingElem& r, const RingElem& a, const RingElem& b) {
  mpz_sub(r.x.get_mpz_t(), a.x.get_mpz_t(), b.x.get_mpz_t());
  mpz_sub(r.y.get_mpz_t(), a.y.get_mpz_t(), b.y.get_mpz_t());
}

// q = a / d coordinate-wise, failing if either division is inexact.
inline bool divexact_coords(RingElem& a, const mpz_class& d, RingScratch& S) {
  mpz_tdiv_qr(S.t0.get_mpz_t(), S.t1.get_mpz_t(), a.x.get_mpz_t(), d.get_mpz_t());
  if (mpz_sgn(S.t1.get_mpz_t()) != 0) return false;
  mpz_tdiv_qr(S.t2.get_mpz_t(), S.t1.get_mpz_t(), a.y.get_mpz_t(), d.get_mpz_t());
  if (mpz_sgn(S.t1.get_mpz_t()) != 0) return false;
  mpz_swap(a.x.get_mpz_t(), S.t0.get_mpz_t());
  mpz_swap(a.y.get_mpz_t(), S.t2.get_mpz_t());
  return true;
}

}  // namespace detail

inline RingElem conj(const RingElem& a, const FieldSpec& F) {
  if (F.kind == OmegaKind::HalfPlusSqrtOver2) return RingElem{a.x + a.y, -a.y};
  return RingElem{a.x, -a.y};
}

inline RingElem add(const RingElem& a, const RingElem& b, const FieldSpec&) {
  return RingElem{a.x + b.x, a.y + b.y};
}

inline RingElem sub(const RingElem& a, const RingElem& b, const FieldSpec&) {
  return RingElem{a.x - b.x, a.y - b.y};
}

inline RingElem neg(const RingElem& a) { return RingElem{-a.x, -a.y}; }

inline RingElem mul(const RingElem& a, const RingElem& b, const FieldSpec& F) {
  RingScratch S;
  RingElem r;
  detail::mul_into(r, a, b, F, S);
  return r;
}

inline RingElem square(const RingElem& a, const FieldSpec& F) {
  RingScratch S;
  RingElem r;
  detail::sqr_into(r, a, F, S);
  return r;
}

inline mpz_class norm(const RingElem& a, const FieldSpec& F) {
  RingScratch S;
  mpz_class r;
  detail::norm_into(r, a, F, S);
  return r;
}

inline RingElem ring_pow(const RingElem& a, unsigned long e, const FieldSpec& F) {
  RingElem r{1, 0};
  RingElem base = a;
  while (e) {
    if (e & 1) r = mul(r, base, F);
    e >>= 1;
    if (e) base = square(base, F);
  }
  return r;
}

/// Cached conjugate and norm of a fixed divisor, so repeated exact divisions
/// by the same element cost one multiplication plus two integer divisions.
struct U2Context {
  RingElem u2, u2_conj;
  mpz_class u2_norm;

  U2Context() = default;
  U2Context(const RingElem& e, const FieldSpec& F)
      : u2(e), u2_conj(conj(e, F)), u2_norm(norm(e, F)) {
    if (sgn(u2_norm) == 0) throw NotDivisibleError("division context for zero element");
  }
};

namespace detail {

// r = a / ctx.u2 using a * conj(u2) / norm(u2); both coordinate divisions
// must be exact.
inline bool exact_div_into(RingElem& r, const RingElem& a, const U2Context& ctx,
                           const FieldSpec& F, RingScratch& S) {
  mul_into(r, a, ctx.u2_conj, F, S);
  return divexact_coords(r, ctx.u2_norm, S);
}

}  // namespace detail

inline RingElem exact_div(const RingElem& a, const RingElem& b, const FieldSpec& F) {
  if (b.is_zero()) throw NotDivisibleError("exact_div by zero");
  U2Context ctx(b, F);
  RingScratch S;
  RingElem r;
  if (!detail::exact_div_into(r, a, ctx, F, S))
    throw NotDivisibleError("exact_div: quotient not in O_K");
  return r;
}

inline bool divides(const RingElem& b, const RingElem& a, const FieldSpec& F) {
  if (b.is_zero()) return a.is_zero();
  U2Context ctx(b, F);
  RingScratch S;
  RingElem r;
  return detail::exact_div_into(r, a, ctx, F, S);
}

// ---------------------------------------------------------------------------
// Fraction-field elements: num / den with den a positive rational integer and
// gcd(den, content(num)) = 1, so equal values have equal representations.

struct FieldElem {
  RingElem num;
  mpz_class den;

  FieldElem() : num(), den(1) {}
  FieldElem(const RingElem& n) : num(n), den(1) {}
  FieldElem(long v) : num(v, 0), den(1) {}
  FieldElem(RingElem n, mpz_class d) : num(std::move(n)), den(std::move(d)) { normalize(); }

  bool is_zero() const { return num.is_zero(); }
  bool is_integral() const { return den == 1; }

  bool operator==(const FieldElem& o) const { return den == o.den && num == o.num; }
  bool operator!=(const FieldElem& o) const { return !(*this == o); }

  void normalize() {
    if (sgn(den) == 0) throw Error("FieldElem with zero denominator");
    if (sgn(den) < 0) {
      den = -den;
      num = neg(num);
    }
    if (num.is_zero()) {
      den = 1;
      return;
    }
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), num.x.get_mpz_t(), num.y.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), den.get_mpz_t());
    if (g != 1) {
      mpz_divexact(num.x.get_mpz_t(), num.x.get_mpz_t(), g.get_mpz_t());
      mpz_divexact(num.y.get_mpz_t(), num.y.get_mpz_t(), g.get_mpz_t());
      mpz_divexact(den.get_mpz_t(), den.get_mpz_t(), g.get_mpz_t());
    }
  }
};

inline FieldElem add(const FieldElem& a, const FieldElem& b, const FieldSpec&) {
  RingElem n{a.num.x * b.den + b.num.x * a.den, a.num.y * b.den + b.num.y * a.den};
  return FieldElem{std::move(n), a.den * b.den};
}

inline FieldElem sub(const FieldElem& a, const FieldElem& b, const FieldSpec&) {
  RingElem n{a.num.x * b.den - b.num.x * a.den, a.num.y * b.den - b.num.y * a.den};
  return FieldElem{std::move(n), a.den * b.den};
}

inline FieldElem neg(const FieldElem& a) { return FieldElem{neg(a.num), a.den}; }

inline FieldElem mul(const FieldElem& a, const FieldElem& b, const FieldSpec& F) {
  return FieldElem{mul(a.num, b.num, F), a.den * b.den};
}

inline FieldElem square(const FieldElem& a, const FieldSpec& F) {
  return FieldElem{square(a.num, F), a.den * a.den};
}

inline FieldElem conj(const FieldElem& a, const FieldSpec& F) {
  return FieldElem{conj(a.num, F), a.den};
}

/// a / b = a * den_b * conj(num_b) / N(num_b).
inline FieldElem div(const FieldElem& a, const FieldElem& b, const FieldSpec& F) {
  if (b.is_zero()) throw Error("field division by zero");
  RingElem n = mul(a.num, conj(b.num, F), F);
  n.x *= b.den;
  n.y *= b.den;
  return FieldElem{std::move(n), a.den * norm(b.num, F)};
}

inline FieldElem mul_scalar(const FieldElem& a, long k, const FieldSpec&) {
  return FieldElem{RingElem{a.num.x * k, a.num.y * k}, a.den};
}

inline FieldElem field_pow(const FieldElem& a, unsigned long e, const FieldSpec& F) {
  FieldElem r{1};
  FieldElem base = a;
  while (e) {
    if (e & 1) r = mul(r, base, F);
    e >>= 1;
    if (e) base = square(base, F);
  }
  return r;
}

/// Rational-integer norm num/den -> N(num)/den^2 as a canonical fraction.
inline std::pair<mpz_class, mpz_class> norm_fraction(const FieldElem& a, const FieldSpec& F) {
  mpz_class n = norm(a.num, F);
  mpz_class d = a.den * a.den;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  if (g != 1) {
    mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(d.get_mpz_t(), d.get_mpz_t(), g.get_mpz_t());
  }
  return {n, d};
}

// ---------------------------------------------------------------------------
// Textual form "x+y*w": no leading '+', coefficient 1 on w elided, e.g.
// "-2+3*w", "5", "w", "1-w".

inline std::string format_elem(const RingElem& a) {
  std::string out;
  const bool have_x = sgn(a.x) != 0;
  const bool have_y = sgn(a.y) != 0;
  if (!have_y) return a.x.get_str();
  if (have_x) {
    out = a.x.get_str();
    if (sgn(a.y) > 0) out += '+';
  }
  if (a.y == -1) {
    out += "-w";
  } else if (a.y == 1) {
    out += 'w';
  } else {
    out += a.y.get_str();
    out += "*w";
  }
  return out;
}

inline std::string format_elem(const FieldElem& a) {
  if (a.den == 1) return format_elem(a.num);
  if (sgn(a.num.y) == 0) return a.num.x.get_str() + "/" + a.den.get_str();
  return "(" + format_elem(a.num) + ")/" + a.den.get_str();
}

namespace detail {

inline void skip_ws(std::string_view s, size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

}  // namespace detail

inline RingElem parse_elem(std::string_view s) {
  RingElem r;
  size_t i = 0;
  detail::skip_ws(s, i);
  if (i == s.size()) throw ParseError("empty element");
  bool first = true;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      if (s[i] == '-') sign = -1;
      ++i;
      detail::skip_ws(s, i);
    } else if (!first) {
      throw ParseError("expected '+' or '-' in element: " + std::string(s));
    }
    first = false;
    size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    mpz_class coeff;
    bool have_digits = j > i;
    if (have_digits) {
      coeff = mpz_class(std::string(s.substr(i, j - i)), 10);
      i = j;
      detail::skip_ws(s, i);
      if (i < s.size() && s[i] == '*') {
        ++i;
        detail::skip_ws(s, i);
        if (i >= s.size() || s[i] != 'w') throw ParseError("expected 'w' after '*'");
      }
    } else {
      coeff = 1;
    }
    if (i < s.size() && s[i] == 'w') {
      ++i;
      if (sign < 0) coeff = -coeff;
      r.y += coeff;
    } else {
      if (!have_digits) throw ParseError("expected digits or 'w' in element: " + std::string(s));
      if (sign < 0) coeff = -coeff;
      r.x += coeff;
    }
    detail::skip_ws(s, i);
  }
  return r;
}

inline FieldElem parse_field_elem(std::string_view s) {
  size_t slash = std::string_view::npos;
  int depth = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    else if (s[i] == ')') --depth;
    else if (s[i] == '/' && depth == 0) { slash = i; break; }
  }
  if (slash == std::string_view::npos) return FieldElem{parse_elem(s)};
  std::string_view numpart = s.substr(0, slash);
  std::string_view denpart = s.substr(slash + 1);
  size_t b = 0, e = numpart.size();
  detail::skip_ws(numpart, b);
  while (e > b && (numpart[e - 1] == ' ' || numpart[e - 1] == '\t')) --e;
  if (e > b + 1 && numpart[b] == '(' && numpart[e - 1] == ')') {
    numpart = numpart.substr(b + 1, e - b - 2);
  }
  size_t db = 0;
  detail::skip_ws(denpart, db);
  mpz_class den;
  try {
    den = mpz_class(std::string(denpart.substr(db)), 10);
  } catch (const std::invalid_argument&) {
    throw ParseError("bad denominator: " + std::string(denpart));
  }
  if (sgn(den) <= 0) throw ParseError("denominator must be positive");
  return FieldElem{parse_elem(numpart), den};
}

}  // namespace eds

#endif  // EDS_QUADRING_HPP
