#pragma once

#include <stdexcept>
#include <string>

namespace latnet {

// Base class for every validation, guard, and parse failure raised by the
// library. All messages carry a witness (the offending pair/element) where
// one exists, so test failures are actionable.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Order-theoretic validation.
struct NotPartialOrder : Error { using Error::Error; };
struct NotALattice : Error { using Error::Error; };
struct NotMonotone : Error { using Error::Error; };
struct NotJoinPreserving : Error { using Error::Error; };
struct NotMeetPreserving : Error { using Error::Error; };
struct NotDistributive : Error { using Error::Error; };
struct InvalidConnection : Error { using Error::Error; };

// Structural / size failures.
struct ShapeMismatch : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };
struct NotAPath : Error { using Error::Error; };
struct MetricUndefined : Error { using Error::Error; };

// Dynamics. Most iteration routines report non-convergence through their
// result structs (the partial trace is data, not an exception); this type is
// for contexts where no result can flow back.
struct NotConverged : Error { using Error::Error; };

// Formula evaluation and text input.
struct UnknownAtom : Error { using Error::Error; };
struct BadAgent : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace latnet
