// Copyright (c) 2026 the edsearch authors
// SPDX-License-Identifier: Apache-2.0
//
// Generalized Weierstrass curves y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
// over Q(sqrt(D)) and division-polynomial values psi_n(P).  Coefficients live
// in the fraction field so that recovered (possibly non-integral) models are
// representable; all arithmetic is exact.

#ifndef EDS_DIVPOLY_HPP
#define EDS_DIVPOLY_HPP

#include <map>

#include "eds/quadring.hpp"

namespace eds {

struct Curve {
  FieldElem a1, a2, a3, a4, a6;
  FieldElem b2, b4, b6, b8;
  FieldElem delta;
  FieldSpec field;
};

inline Curve make_curve(const FieldElem& a1, const FieldElem& a2, const FieldElem& a3,
                        const FieldElem& a4, const FieldElem& a6, const FieldSpec& F) {
  Curve c{a1, a2, a3, a4, a6, {}, {}, {}, {}, {}, F};
  c.b2 = add(square(a1, F), mul_scalar(a2, 4, F), F);
  c.b4 = add(mul_scalar(a4, 2, F), mul(a1, a3, F), F);
  c.b6 = add(square(a3, F), mul_scalar(a6, 4, F), F);
  c.b8 = sub(add(add(mul(square(a1, F), a6, F), mul_scalar(mul(a2, a6, F), 4, F), F),
                 sub(mul(a2, square(a3, F), F), mul(mul(a1, a3, F), a4, F), F), F),
             square(a4, F), F);
  // delta = -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6
  FieldElem d = neg(mul(square(c.b2, F), c.b8, F));
  d = sub(d, mul_scalar(mul(c.b4, square(c.b4, F), F), 8, F), F);
  d = sub(d, mul_scalar(square(c.b6, F), 27, F), F);
  d = add(d, mul_scalar(mul(c.b2, mul(c.b4, c.b6, F), F), 9, F), F);
  c.delta = d;
  return c;
}

inline bool is_nonsingular(const Curve& c) { return !c.delta.is_zero(); }

/// c4^3 / delta with c4 = b2^2 - 24 b4.
inline FieldElem j_invariant(const Curve& c) {
  if (c.delta.is_zero()) throw SingularCurveError("j-invariant of singular curve");
  const FieldSpec& F = c.field;
  FieldElem c4 = sub(square(c.b2, F), mul_scalar(c.b4, 24, F), F);
  return div(mul(c4, square(c4, F), F), c.delta, F);
}

struct Point {
  bool inf = true;
  FieldElem x, y;

  static Point infinity() { return Point{}; }
  static Point xy(FieldElem px, FieldElem py) { return Point{false, std::move(px), std::move(py)}; }
};

inline bool point_on_curve(const Curve& c, const Point& p) {
  if (p.inf) return true;
  const FieldSpec& F = c.field;
  FieldElem lhs = add(square(p.y, F), add(mul(mul(c.a1, p.x, F), p.y, F), mul(c.a3, p.y, F), F), F);
  FieldElem x2 = square(p.x, F);
  FieldElem rhs = add(mul(x2, p.x, F), add(mul(c.a2, x2, F), add(mul(c.a4, p.x, F), c.a6, F), F), F);
  return lhs == rhs;
}

/// Evaluates psi_n at a fixed finite point, memoizing along the double-style
/// recursion.  Even steps divide by psi_2(P); if that vanishes the point is
/// 2-torsion and the caller learns it via EvenRecursionDivisionByZeroError.
class PsiEvaluator {
 public:
  PsiEvaluator(const Curve& c, const Point& p) : c_(c), p_(p) {
    if (p.inf) throw Error("psi_eval needs a finite point");
  }

  FieldElem psi(long n) {
    if (n < 0) throw Error("psi_eval: n must be >= 0");
    if (n > kMaxIndex) throw Error("psi_eval: index beyond implementation bound");
    auto it = memo_.find(n);
    if (it != memo_.end()) return it->second;
    FieldElem r = compute(n);
    memo_.emplace(n, r);
    return r;
  }

 private:
  FieldElem compute(long n) {
    const FieldSpec& F = c_.field;
    switch (n) {
      case 0: return FieldElem{0};
      case 1: return FieldElem{1};
      case 2:
        return add(mul_scalar(p_.y, 2, F), add(mul(c_.a1, p_.x, F), c_.a3, F), F);
      case 3: {
        FieldElem x2 = square(p_.x, F);
        FieldElem x3 = mul(x2, p_.x, F);
        FieldElem x4 = square(x2, F);
        FieldElem r = mul_scalar(x4, 3, F);
        r = add(r, mul(c_.b2, x3, F), F);
        r = add(r, mul_scalar(mul(c_.b4, x2, F), 3, F), F);
        r = add(r, mul_scalar(mul(c_.b6, p_.x, F), 3, F), F);
        return add(r, c_.b8, F);
      }
      case 4: {
        FieldElem x2 = square(p_.x, F);
        FieldElem x3 = mul(x2, p_.x, F);
        FieldElem x4 = square(x2, F);
        FieldElem x5 = mul(x4, p_.x, F);
        FieldElem x6 = mul(x4, x2, F);
        FieldElem inner = mul_scalar(x6, 2, F);
        inner = add(inner, mul(c_.b2, x5, F), F);
        inner = add(inner, mul_scalar(mul(c_.b4, x4, F), 5, F), F);
        inner = add(inner, mul_scalar(mul(c_.b6, x3, F), 10, F), F);
        inner = add(inner, mul_scalar(mul(c_.b8, x2, F), 10, F), F);
        inner = add(inner, mul(sub(mul(c_.b2, c_.b8, F), mul(c_.b4, c_.b6, F), F), p_.x, F), F);
        inner = add(inner, sub(mul(c_.b4, c_.b8, F), square(c_.b6, F), F), F);
        return mul(psi(2), inner, F);
      }
      default: break;
    }
    if (n % 2) {
      long m = (n + 1) / 2;  // psi_{2m-1} = psi_{m+1} psi_{m-1}^3 - psi_{m-2} psi_m^3
      FieldElem pm1 = psi(m - 1);
      FieldElem pm = psi(m);
      FieldElem a = mul(psi(m + 1), mul(pm1, square(pm1, F), F), F);
      FieldElem b = mul(psi(m - 2), mul(pm, square(pm, F), F), F);
      return sub(a, b, F);
    }
    long m = n / 2;  // psi_{2m} = psi_m (psi_{m+2} psi_{m-1}^2 - psi_{m-2} psi_{m+1}^2) / psi_2
    FieldElem p2 = psi(2);
    if (p2.is_zero())
      throw EvenRecursionDivisionByZeroError("psi_2(P) = 0: P is 2-torsion");
    FieldElem a = mul(psi(m + 2), square(psi(m - 1), F), F);
    FieldElem b = mul(psi(m - 2), square(psi(m + 1), F), F);
    return div(mul(psi(m), sub(a, b, F), F), p2, F);
  }

  static constexpr long kMaxIndex = 512;

  Curve c_;
  Point p_;
  std::map<long, FieldElem> memo_;
};

inline FieldElem psi_eval(const Curve& c, const Point& p, long n) {
  PsiEvaluator ev(c, p);
  return ev.psi(n);
}

}  // namespace eds

#endif  // EDS_DIVPOLY_HPP
