#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lgcrit {

enum class ErrorCode {
    // toric-core
    NotReflexive,
    NotSmooth,
    DegenerateInput,
    SingularBasis,
    UnboundedPolytope,
    UnboundedRegion,
    NotStronglyExceptional,
    LengthMismatch,
    // catalog
    SpecInvariantViolated,
    ParameterTooSmall,
    BadModelSpec,
    // solver
    SingularJacobian,
    Diverged,
    LeftTorus,
    IncompleteSolve,
    PathJump,
    IncompleteStart,
    // exceptional map
    NotStabilized,
    // monodromy
    RecipeUnavailable,
    MatchAmbiguous,
    NonBijective,
    AlignmentFailure,
    NotEquivalent,
    // io
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Numerical failures map to exit code 3, verification failures to 1,
/// malformed input to 2.
enum class ErrorKind { Usage, Verification, Numerical };
ErrorKind kind_of(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace lgcrit
