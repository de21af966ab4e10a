#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lgcrit/catalog.hpp"
#include "lgcrit/solver.hpp"
#include "lgcrit/toric.hpp"

namespace lgcrit {

struct EmapOptions {
    double snapEps = 1e-6;
    /// Profile entries this close to 0 or 1 are read as their limit value 0.
    double limitSnap = 1e-2;
    double tCap = 48.0;
    SolveOptions solve;
};

struct EmapAssignment {
    std::string label;
    RDivisor profile;
    RPicClass coords;
    PicClass cls;
};

struct ExceptionalMapResult {
    double t = 0.0;
    std::vector<EmapAssignment> assignments;
    bool bijective = false;
    bool stabilized = false;

    const EmapAssignment* find(std::string_view label) const;
    std::vector<PicClass> image() const;
};

/// E(z) for a single point: floor of the class coordinates of its argument profile.
EmapAssignment classify_point(const ToricModel& model, const SolutionPoint& p, const EmapOptions& opts = {});

/// Runs at t, compares with 1.5 t, doubles |t| up to the cap until the two agree.
/// Throws IncompleteSolve or NotStabilized.
ExceptionalMapResult exceptional_map(const LGFamily& family, double t, const EmapOptions& opts = {});

struct EmapVerification {
    ExceptionalMapResult map;
    bool bijectionOk = false;  // image equals the reference classes
    bool labelsOk = false;     // each solution lands on the class carrying its own label
    bool strongOk = false;
    std::vector<std::string> mismatched;  // "label: got (..) expected (..)"
    ExceptionalityReport strong;
    /// BlowupBundle only: which closed form the w = i limit arguments follow.
    std::optional<std::string> family2Form;
};

/// Starts from `t`, or the family's default parameter.
EmapVerification verify_exceptional_map(const LGFamily& family, const EmapOptions& opts = {},
                                        std::optional<double> t = std::nullopt);

enum class FrobeniusMode {
    Characters,  // D = P m mod l over m in (Z/l)^n; the summands of the pushforward
    FullCube,    // every D in {0..l-1}^rays
};

struct FrobeniusImage {
    int l = 0;
    FrobeniusMode mode = FrobeniusMode::Characters;
    std::vector<PicClass> classes;            // sorted
    std::vector<std::int64_t> multiplicities;  // parallel to classes
    bool stabilized = false;

    std::int64_t total() const;
};

FrobeniusImage frobenius_image(const ToricModel& model, int l, FrobeniusMode mode = FrobeniusMode::Characters);
/// Starts at l = 2 (max |ray entry| + 2) and doubles until two consecutive images agree.
FrobeniusImage frobenius_stable(const ToricModel& model, FrobeniusMode mode = FrobeniusMode::Characters,
                                int maxDoublings = 3);

enum class SetRelation { Equal, ProperSubset, Superset, Incomparable };
std::string_view to_string(SetRelation r) noexcept;

struct SetComparison {
    SetRelation relation = SetRelation::Equal;
    std::vector<PicClass> onlyInA;
    std::vector<PicClass> onlyInB;
};

SetComparison compare_collections(std::span<const PicClass> a, std::span<const PicClass> b);

}  // namespace lgcrit
