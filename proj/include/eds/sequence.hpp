// Copyright (c) 2026 the edsearch authors
// SPDX-License-Identifier: Apache-2.0
//
// Elliptic divisibility sequences over O_K: tuple validation, the naive
// recursion oracle, and septuple block doubling.
//
// A proper sequence has u0=0, u1=1, u2*u3 != 0 and is determined by
// (u2, u3, u4) with u2 | u4.  Doubling advances the seven-term window
// <u_k> = [u_{k-3} .. u_{k+3}] to <u_{2k}> using
//   u_{2l}   = u_l (u_{l+2} u_{l-1}^2 - u_{l-2} u_{l+1}^2) / u2
//   u_{2l+1} = u_{l+2} u_l^3 - u_{l-1} u_{l+1}^3
// with the A_i = u_i^2, B_i = u_{i-1} u_{i+1} precomputation, costing
// exactly 5 squarings and 22 multiplications per step.

#ifndef EDS_SEQUENCE_HPP
#define EDS_SEQUENCE_HPP

#include <array>
#include <map>
#include <utility>

#include "eds/quadring.hpp"

namespace eds {

struct EDSTuple {
  RingElem u2, u3, u4;
  FieldSpec field;
};

inline void validate_tuple(const EDSTuple& t) {
  if (t.u2.is_zero() || t.u3.is_zero())
    throw InvalidTupleError("proper sequence requires u2 != 0 and u3 != 0");
  if (!divides(t.u2, t.u4, t.field))
    throw InvalidTupleError("u2 must divide u4 in O_K");
}

inline EDSTuple make_tuple(RingElem u2, RingElem u3, RingElem u4, const FieldSpec& F) {
  EDSTuple t{std::move(u2), std::move(u3), std::move(u4), F};
  validate_tuple(t);
  return t;
}

inline EDSTuple conj_tuple(const EDSTuple& t) {
  return EDSTuple{conj(t.u2, t.field), conj(t.u3, t.field), conj(t.u4, t.field), t.field};
}

inline EDSTuple negate_tuple(const EDSTuple& t) {
  return EDSTuple{neg(t.u2), t.u3, neg(t.u4), t.field};
}

/// Seven consecutive terms [u_{k-3} .. u_{k+3}] centered at index k.
struct Block {
  long center = 2;
  std::array<RingElem, 7> terms;
};

struct OpCount {
  std::uint64_t squarings = 0;
  std::uint64_t multiplications = 0;
  std::uint64_t exact_divs = 0;
};

struct EdsWorkspace {
  std::array<RingElem, 6> A, B;  // 1-based, slot 0 unused
  RingElem T0, T1;
  std::array<RingElem, 7> W;
  RingScratch S;
};

namespace detail {

// <u_2> = [-1, 0, 1, u2, u3, u4, u5] with u5 = u4 u2^3 - u3^3.  Divisibility
// is the caller's responsibility here; the public wrapper validates.
inline Block initial_block_unchecked(const EDSTuple& t) {
  Block b;
  b.center = 2;
  b.terms[0] = RingElem{-1, 0};
  b.terms[1] = RingElem{0, 0};
  b.terms[2] = RingElem{1, 0};
  b.terms[3] = t.u2;
  b.terms[4] = t.u3;
  b.terms[5] = t.u4;
  const FieldSpec& F = t.field;
  b.terms[6] = sub(mul(t.u4, mul(t.u2, square(t.u2, F), F), F),
                   mul(t.u3, square(t.u3, F), F), F);
  return b;
}

inline void double_block_inplace(Block& b, const U2Context& ctx, const FieldSpec& F,
                                 EdsWorkspace& ws, OpCount* oc = nullptr) {
  auto& V = b.terms;
  for (int i = 1; i <= 5; ++i) {
    sqr_into(ws.A[i], V[i], F, ws.S);          // A[i] = V[i+1]^2, 1-based
    mul_into(ws.B[i], V[i - 1], V[i + 1], F, ws.S);
  }
  for (int i = 0; i <= 3; ++i) {
    mul_into(ws.T0, ws.B[i + 2], ws.A[i + 1], F, ws.S);
    mul_into(ws.T1, ws.B[i + 1], ws.A[i + 2], F, ws.S);
    sub_into(ws.W[2 * i], ws.T0, ws.T1);
    if (i > 0) {
      mul_into(ws.T0, ws.B[i + 2], ws.A[i], F, ws.S);
      mul_into(ws.T1, ws.B[i], ws.A[i + 2], F, ws.S);
      sub_into(ws.T0, ws.T0, ws.T1);
      if (!exact_div_into(ws.W[2 * i - 1], ws.T0, ctx, F, ws.S))
        throw NotDivisibleError("double: block is not a genuine sequence window");
    }
  }
  if (oc) {
    oc->squarings += 5;
    oc->multiplications += 22;  // exact_div counted as its conjugate multiply
    oc->exact_divs += 3;
  }
  for (int i = 0; i < 7; ++i) {
    mpz_swap(V[i].x.get_mpz_t(), ws.W[i].x.get_mpz_t());
    mpz_swap(V[i].y.get_mpz_t(), ws.W[i].y.get_mpz_t());
  }
  b.center *= 2;
}

}  // namespace detail

inline Block initial_block(const EDSTuple& t) {
  validate_tuple(t);
  return detail::initial_block_unchecked(t);
}

inline Block double_block(const Block& b, const EDSTuple& u2_ctx, OpCount* oc = nullptr) {
  Block out = b;
  U2Context ctx(u2_ctx.u2, u2_ctx.field);
  EdsWorkspace ws;
  detail::double_block_inplace(out, ctx, u2_ctx.field, ws, oc);
  return out;
}

/// (u_n, u_{n+1}) for n = 2^(I+1): I doublings of the initial block, then
/// positions 4 and 5 of the window.
inline std::pair<RingElem, RingElem> terms_at_power(const EDSTuple& t, int I,
                                                    OpCount* oc = nullptr) {
  if (I < 0) throw Error("terms_at_power: I must be >= 0");
  Block b = initial_block(t);
  U2Context ctx(t.u2, t.field);
  EdsWorkspace ws;
  for (int i = 0; i < I; ++i) detail::double_block_inplace(b, ctx, t.field, ws, oc);
  return {b.terms[3], b.terms[4]};
}

/// Memoized term-by-index oracle, applying the doubling identities top-down.
/// Intended for moderate indices (tests, screening); the block path is the
/// fast route.
class SequenceOracle {
 public:
  explicit SequenceOracle(const EDSTuple& t) : t_(t), ctx_(t.u2, t.field) {
    validate_tuple(t);
  }

  RingElem term(long n) {
    if (n < 0) return neg(term(-n));
    return term_nonneg(n);
  }

 private:
  RingElem term_nonneg(long n) {
    if (n > kMaxIndex) throw Error("term_naive: index beyond implementation bound");
    switch (n) {
      case 0: return RingElem{0, 0};
      case 1: return RingElem{1, 0};
      case 2: return t_.u2;
      case 3: return t_.u3;
      case 4: return t_.u4;
      default: break;
    }
    auto it = memo_.find(n);
    if (it != memo_.end()) return it->second;
    const FieldSpec& F = t_.field;
    RingElem r;
    if (n % 2 == 0) {
      long l = n / 2;
      RingElem a = mul(sub_term(l + 2), square(sub_term(l - 1), F), F);
      RingElem b = mul(sub_term(l - 2), square(sub_term(l + 1), F), F);
      RingElem num = mul(sub_term(l), sub(a, b, F), F);
      RingScratch S;
      if (!detail::exact_div_into(r, num, ctx_, F, S))
        throw NotDivisibleError("term_naive: even-step division inexact");
    } else {
      long l = (n - 1) / 2;
      RingElem u_l = sub_term(l);
      RingElem a = mul(sub_term(l + 2), mul(u_l, square(u_l, F), F), F);
      RingElem u_l1 = sub_term(l + 1);
      RingElem b = mul(sub_term(l - 1), mul(u_l1, square(u_l1, F), F), F);
      r = sub(a, b, F);
    }
    memo_.emplace(n, r);
    return r;
  }

  RingElem sub_term(long n) { return n < 0 ? neg(term_nonneg(-n)) : term_nonneg(n); }

  static constexpr long kMaxIndex = 1 << 14;

  EDSTuple t_;
  U2Context ctx_;
  std::map<long, RingElem> memo_;
};

inline RingElem term_naive(const EDSTuple& t, long n) {
  SequenceOracle o(t);
  return o.term(n);
}

}  // namespace eds

#endif  // EDS_SEQUENCE_HPP
