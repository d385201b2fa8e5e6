// Copyright (c) 2026 the edsearch authors
// SPDX-License-Identifier: Apache-2.0
//
// Height estimators for proper elliptic divisibility sequences:
//
//   h~_n      = log(E_n / gcd(E_n, E_{n+1})) / (d n^2),   E_n = |N(u_n)|
//   h_full_n  = log(E_n * prod_{p in T} |E_n|_p) / (d n^2),
//
// where T is the set of rational primes dividing N(discriminant).  Logs of
// huge integers go through MPFR at 128-bit precision, so the relative error
// is far below the 1e-12 the estimates are specified to.

#ifndef EDS_HEIGHTS_HPP
#define EDS_HEIGHTS_HPP

#include <mpfr.h>

#include <algorithm>
#include <optional>
#include <vector>

#include "eds/divpoly.hpp"
#include "eds/sequence.hpp"

namespace eds {

inline double log_mpz(const mpz_class& v) {
  if (sgn(v) <= 0) throw Error("log_mpz: argument must be positive");
  if (v == 1) return 0.0;
  mpfr_t t;
  mpfr_init2(t, 128);
  mpfr_set_z(t, v.get_mpz_t(), MPFR_RNDN);
  mpfr_log(t, t, MPFR_RNDN);
  double r = mpfr_get_d(t, MPFR_RNDN);
  mpfr_clear(t);
  return r;
}

inline double log10_mpz(const mpz_class& v) { return log_mpz(v) / 2.302585092994045684; }

/// E-term |N_{K|Q}(u)|.
inline mpz_class abs_norm_term(const RingElem& u, const FieldSpec& F) {
  mpz_class n = norm(u, F);
  mpz_abs(n.get_mpz_t(), n.get_mpz_t());
  return n;
}

struct GcdEstimate {
  long n = 0;
  mpz_class En, En1, g;
  double value = 0.0;
  int d = FieldSpec::degree;
};

/// h~_n at n = 2^(I+1); throws TorsionSuspectedError when E_n or E_{n+1}
/// vanishes.  A gcd absorbing E_n entirely yields value 0, which the search
/// filter treats as torsion-suspect via its strict 0 < h~ test.
inline GcdEstimate gcd_estimate(const EDSTuple& t, int I, OpCount* oc = nullptr) {
  if (I < 1) throw Error("gcd_estimate: I must be >= 1");
  GcdEstimate est;
  est.n = 1L << (I + 1);
  auto [un, un1] = terms_at_power(t, I, oc);
  est.En = abs_norm_term(un, t.field);
  est.En1 = abs_norm_term(un1, t.field);
  if (sgn(est.En) == 0 || sgn(est.En1) == 0)
    throw TorsionSuspectedError("E_n = 0: sequence has a zero term");
  mpz_gcd(est.g.get_mpz_t(), est.En.get_mpz_t(), est.En1.get_mpz_t());
  mpz_class q;
  mpz_divexact(q.get_mpz_t(), est.En.get_mpz_t(), est.g.get_mpz_t());
  est.value = log_mpz(q) / (static_cast<double>(est.d) * static_cast<double>(est.n) *
                            static_cast<double>(est.n));
  return est;
}

/// Distinct prime factors by trial division up to `bound`; a remaining
/// cofactor must pass a strong probable-prime test or the set cannot be
/// certified.
inline std::vector<mpz_class> prime_factors_trial(const mpz_class& m0, unsigned long bound) {
  mpz_class m = abs(m0);
  std::vector<mpz_class> out;
  if (m <= 1) return out;
  auto strip = [&](unsigned long p) {
    if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      out.push_back(mpz_class(p));
      mpz_class q;
      mpz_class pz(p);
      mpz_remove(q.get_mpz_t(), m.get_mpz_t(), pz.get_mpz_t());
      m = q;
    }
  };
  strip(2);
  for (unsigned long p = 3; p <= bound; p += 2) {
    if (mpz_cmp_ui(m.get_mpz_t(), 1) == 0) break;
    if (mpz_cmp_ui(m.get_mpz_t(), p) < 0) break;
    strip(p);
    if (p <= 4294967295UL && mpz_cmp_ui(m.get_mpz_t(), p * p) < 0) {
      // no factor <= p remains and m < p^2, so m is prime
      if (m > 1) { out.push_back(m); m = 1; }
      break;
    }
  }
  if (m > 1) {
    if (mpz_probab_prime_p(m.get_mpz_t(), 30) == 0)
      throw IncompleteFactorizationError(
          "composite cofactor beyond trial-division bound: " + m.get_str());
    out.push_back(m);
  }
  return out;
}

struct FullEstimate {
  long n = 0;
  mpz_class Fn;
  std::vector<mpz_class> primes;  // T
  double value = 0.0;
  int d = FieldSpec::degree;
};

/// Full T-adic estimate at n = 2^(I+1): strips every prime of T from E_n.
/// T defaults to the primes dividing numerator or denominator of the
/// rational integer N(delta), found by trial division.
inline FullEstimate full_estimate(const EDSTuple& t, const Curve& c, int I,
                                  const std::vector<mpz_class>* factors = nullptr,
                                  unsigned long trial_bound = 1000000) {
  if (I < 1) throw Error("full_estimate: I must be >= 1");
  if (c.delta.is_zero()) throw SingularCurveError("full_estimate: singular curve");
  FullEstimate est;
  est.n = 1L << (I + 1);
  auto [un, un1] = terms_at_power(t, I);
  (void)un1;
  mpz_class En = abs_norm_term(un, t.field);
  if (sgn(En) == 0) throw TorsionSuspectedError("E_n = 0: sequence has a zero term");

  if (factors) {
    est.primes = *factors;
  } else {
    auto [nd_num, nd_den] = norm_fraction(c.delta, c.field);
    est.primes = prime_factors_trial(nd_num, trial_bound);
    for (auto& p : prime_factors_trial(nd_den, trial_bound)) est.primes.push_back(p);
  }
  std::sort(est.primes.begin(), est.primes.end());
  est.primes.erase(std::unique(est.primes.begin(), est.primes.end()), est.primes.end());

  est.Fn = En;
  mpz_class q;
  for (const auto& p : est.primes) {
    if (p <= 1) continue;
    mpz_remove(q.get_mpz_t(), est.Fn.get_mpz_t(), p.get_mpz_t());
    mpz_swap(est.Fn.get_mpz_t(), q.get_mpz_t());
  }
  est.value = log_mpz(est.Fn) / (static_cast<double>(est.d) * static_cast<double>(est.n) *
                                 static_cast<double>(est.n));
  return est;
}

/// Naive height of an integral element: (1/d) * sum over archimedean places
/// of log max(1, |a|_v) with the standard normalizations (one complex place
/// with |.|^2 for imaginary D, two real places for real D).
inline double naive_height(const RingElem& a, const FieldSpec& F) {
  if (a.is_zero()) return 0.0;
  if (F.D < 0) {
    mpz_class n = norm(a, F);  // = |sigma(a)|^2 > 0
    if (n <= 1) return 0.0;
    return 0.5 * log_mpz(n);
  }
  mpfr_prec_t prec = static_cast<mpfr_prec_t>(
      std::max(mpz_sizeinbase(a.x.get_mpz_t(), 2), mpz_sizeinbase(a.y.get_mpz_t(), 2)) + 64);
  mpfr_t w, e1, e2, yw;
  mpfr_inits2(prec, w, e1, e2, yw, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_si(w, F.D, MPFR_RNDN);
  mpfr_sqrt(w, w, MPFR_RNDN);
  if (F.kind == OmegaKind::HalfPlusSqrtOver2) {
    mpfr_add_si(w, w, 1, MPFR_RNDN);
    mpfr_div_2ui(w, w, 1, MPFR_RNDN);  // (1+sqrt(D))/2
  }
  double h = 0.0;
  for (int sign = 0; sign < 2; ++sign) {
    // second embedding: w -> conj(w) = -w (Sqrt) or 1-w (half case)
    if (sign == 1) {
      if (F.kind == OmegaKind::HalfPlusSqrtOver2) {
        mpfr_si_sub(w, 1, w, MPFR_RNDN);
      } else {
        mpfr_neg(w, w, MPFR_RNDN);
      }
    }
    mpfr_mul_z(yw, w, a.y.get_mpz_t(), MPFR_RNDN);
    mpfr_set_z(e1, a.x.get_mpz_t(), MPFR_RNDN);
    mpfr_add(e1, e1, yw, MPFR_RNDN);
    mpfr_abs(e1, e1, MPFR_RNDN);
    if (mpfr_cmp_ui(e1, 1) > 0) {
      mpfr_log(e2, e1, MPFR_RNDN);
      h += mpfr_get_d(e2, MPFR_RNDN);
    }
  }
  mpfr_clears(w, e1, e2, yw, static_cast<mpfr_ptr>(nullptr));
  return 0.5 * h;
}

}  // namespace eds

#endif  // EDS_HEIGHTS_HPP
