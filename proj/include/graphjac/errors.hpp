#pragma once

#include <stdexcept>
#include <string>

namespace graphjac {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// graph-core
struct DuplicateId : Error { using Error::Error; };
struct DanglingEndpoint : Error { using Error::Error; };
struct EmptyVertexSet : Error { using Error::Error; };
struct UnknownEdge : Error { using Error::Error; };
struct StarCollision : Error { using Error::Error; };

// exact-linalg
struct NotASubgroup : Error { using Error::Error; };
struct NotInSubgroup : Error { using Error::Error; };
struct NotWellDefined : Error { using Error::Error; };

// jacobian / genjac
struct NotConnected : Error { using Error::Error; };
struct NonZeroDegree : Error { using Error::Error; };
struct NotPositiveDefinite : Error { using Error::Error; };
struct NotHarmonic : Error { using Error::Error; };
struct AdjointnessViolated : Error { using Error::Error; };

// sheaf-pic
struct IsolatedVertex : Error { using Error::Error; };

// morphisms
struct NotHarmonicAt : Error { using Error::Error; };
struct PreconditionViolated : Error { using Error::Error; };

// A verified theorem failed on a concrete instance. Always carries a witness;
// reaching this indicates an implementation bug, never expected behaviour.
struct TheoremViolation : Error { using Error::Error; };

}  // namespace graphjac
