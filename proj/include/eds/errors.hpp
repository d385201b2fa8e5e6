// Copyright (c) 2026 the edsearch authors
// SPDX-License-Identifier: Apache-2.0
#ifndef EDS_ERRORS_HPP
#define EDS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace eds {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Textual input could not be parsed.
struct ParseError : Error { using Error::Error; };

/// A quotient that must be exact in O_K was not.
struct NotDivisibleError : Error { using Error::Error; };

/// Tuple violates properness (u2*u3 != 0) or the u2 | u4 condition.
struct InvalidTupleError : Error { using Error::Error; };

/// A sequence term norm vanished where a nontorsion point requires it nonzero.
struct TorsionSuspectedError : Error { using Error::Error; };

/// psi_2(P) = 0 while an even-index recursion step needed to divide by it.
struct EvenRecursionDivisionByZeroError : Error { using Error::Error; };

struct SingularCurveError : Error { using Error::Error; };

/// A recovery route produced a model with vanishing discriminant.
struct DegenerateModelError : Error { using Error::Error; };

/// Ward-recovered data failed the y^2 = 4x^3 - g2*x - g3 identity.
struct TranscriptionInconsistentError : Error { using Error::Error; };

struct RecoveryFailedError : Error { using Error::Error; };

/// Trial division could not certify the prime set and none was supplied.
struct IncompleteFactorizationError : Error { using Error::Error; };

struct CorruptCheckpointError : Error { using Error::Error; };

/// Bad search/CLI configuration.
struct ConfigError : Error { using Error::Error; };

}  // namespace eds

#endif  // EDS_ERRORS_HPP
