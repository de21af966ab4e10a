#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lgcrit/catalog.hpp"
#include "lgcrit/emap.hpp"
#include "lgcrit/solver.hpp"
#include "lgcrit/toric.hpp"

namespace lgcrit {

enum class LoopRecipe { Direct, Conjugated };
/// Connecting path for the conjugated recipe. U relaxes the w-side coefficients
/// of a BlowupProduct family from e^{-t} to 1, V relaxes the z-side ones.
enum class ConnectingSide { U, V };

/// Straight segment in log-coefficient space: c(s) = start * exp(s * logDelta), s in [0,1].
struct LoopLeg {
    std::vector<cplx> start;
    std::vector<cplx> logDelta;
};

struct LoopSpec {
    double t = 0.0;
    IntVec winding;  // per ray
    LoopRecipe recipe = LoopRecipe::Direct;
    std::optional<ConnectingSide> side;
    std::vector<LoopLeg> legs;

    std::vector<cplx> basepoint() const { return legs.empty() ? std::vector<cplx>{} : legs.front().start; }
};

/// Loop winding each coefficient c_F once around the origin d_F times; the rest frozen at c(t).
LoopSpec divisor_loop(const LGFamily& family, double t, std::span<const std::int64_t> winding);
/// Generator loop of one ray. The conjugated recipe is defined for BlowupProduct only;
/// `side` overrides the default connecting path of the ray.
LoopSpec generator_loop(const LGFamily& family, double t, int ray, LoopRecipe recipe = LoopRecipe::Direct,
                        std::optional<ConnectingSide> side = std::nullopt);
/// Same legs traversed backwards.
LoopSpec reversed(const LoopSpec& loop);

/// Bijection on solution labels; image[i] is the index of the label that labels[i] goes to.
class Permutation {
public:
    Permutation() = default;
    Permutation(std::vector<std::string> labels, std::vector<int> image);
    static Permutation identity(std::vector<std::string> labels);

    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::vector<int>& image() const noexcept { return image_; }
    std::size_t size() const noexcept { return labels_.size(); }

    int index_of(std::string_view label) const;
    const std::string& operator()(std::string_view label) const;
    /// `next` after this.
    Permutation then(const Permutation& next) const;
    Permutation inverse() const;
    Permutation power(std::int64_t k) const;
    bool is_identity() const;
    bool is_bijective() const;
    std::string cycles() const;

    bool operator==(const Permutation&) const = default;

private:
    std::vector<std::string> labels_;
    std::vector<int> image_;
};

struct TrackOptions {
    double initialStep = 1e-2;
    double minStep = 1e-9;
    double maxPredictorError = 0.1;  // log distance between predictor and corrected point
    int correctorIter = 12;
    double dedupTol = 1e-8;
    double matchRatio = 0.1;
    NewtonOptions newton;
};

/// Continues every point along the legs together; throws PathJump.
std::vector<Point> track_points(const ToricModel& model, std::span<const LoopLeg> legs, std::span<const Point> starts,
                                const TrackOptions& opts = {});

/// Tracks the loop from every point of `start` and matches endpoints back to it.
/// Throws PathJump, MatchAmbiguous, NonBijective.
Permutation track_loop(const LoopSpec& loop, const ToricModel& model, const SolutionSet& start,
                       const TrackOptions& opts = {});

struct MonodromyOptions {
    SolveOptions solve;
    TrackOptions track;
    LoopRecipe recipe = LoopRecipe::Direct;
};

/// Solutions at one basepoint plus a cache of generator permutations. Safe to share between threads.
class MonodromyEngine {
public:
    MonodromyEngine(LGFamily family, double t, MonodromyOptions opts = {});

    const LGFamily& family() const noexcept { return family_; }
    const ToricModel& model() const noexcept { return family_.model; }
    double t() const noexcept { return t_; }
    const SolutionSet& start() const noexcept { return start_; }
    const MonodromyOptions& options() const noexcept { return opts_; }

    Permutation track(const LoopSpec& loop) const;
    /// Generator permutation of a ray under the engine's recipe, cached.
    Permutation generator(int ray);
    /// Generator permutations composed in ascending ray order with multiplicity d_F.
    Permutation of_divisor(const TDivisor& d);
    /// One loop winding all coefficients at once.
    Permutation of_divisor_single_loop(const TDivisor& d) const;

private:
    LGFamily family_;
    double t_;
    MonodromyOptions opts_;
    SolutionSet start_;
    std::mutex mutex_;
    std::map<int, Permutation> cache_;
};

/// Divisors among `candidates` with M_D(from) = to.
std::vector<TDivisor> hom_mon(MonodromyEngine& engine, std::string_view from, std::string_view to,
                              std::span<const TDivisor> candidates);

/// Effective divisors D on a Bundle model with 0 <= k + |D|_1 <= s and 0 <= l + |D|_2 <= r;
/// `strict` replaces the lower bounds by 0 <.
std::vector<TDivisor> div_plus(const Bundle& spec, int k, int l, bool strict = false);

struct AlignmentViolation {
    std::string from;
    std::string to;
    TDivisor divisor;
    std::string actual;  // M_D(from)
};

struct DimensionMismatch {
    std::string from;
    std::string to;
    std::size_t homDim = 0;
    std::size_t monDim = 0;
};

struct MonodromyReport {
    std::vector<Permutation> generators;  // per ray
    std::size_t instances = 0;            // (pair, D) checks performed
    std::vector<AlignmentViolation> violations;
    bool generatorsCommute = true;
    std::vector<std::pair<int, int>> noncommuting;
    // Bundle only
    std::vector<DimensionMismatch> dimensionMismatches;
    std::vector<DimensionMismatch> dimensionMismatchesStrict;
    std::size_t additivityChecks = 0;
    std::size_t additivityFailures = 0;

    bool aligned() const noexcept { return violations.empty(); }
};

/// M-alignment check over all ordered pairs of solutions and all Hom-splitting divisors
/// between their classes under `classes` (label -> class).
MonodromyReport check_m_aligned(MonodromyEngine& engine, const std::map<std::string, PicClass>& classes);
/// Uses the exceptional map at the engine's t.
MonodromyReport check_m_aligned(MonodromyEngine& engine, const EmapOptions& emap = {});

struct RelationCheck {
    std::string name;
    std::size_t checked = 0;
    std::vector<std::string> failures;  // "from -> got (expected)"
    bool holds() const noexcept { return failures.empty() && checked > 0; }
};

/// Five generator relations for BlowupProduct (conjugated generators) and BlowupBundle
/// (direct generators). Throws RecipeUnavailable for other classes.
std::vector<RelationCheck> check_generator_relations(MonodromyEngine& engine);

/// Bundle generator rule: V(v_j) sends (k,l) to (k+1,l), V(e_j) sends it to (k - a_j, l+1),
/// indices reduced modulo the lattice spanned by (s+1,0) and (-sum a, r+1).
std::vector<RelationCheck> check_bundle_generators(MonodromyEngine& engine);

struct TorusRescale {
    std::vector<cplx> lambda;
    cplx scale{1.0, 0.0};
    double residual = 0.0;

    /// Sends a critical point of the A system to one of the B system: z -> z / lambda.
    Point apply(std::span<const cplx> z) const;
};

/// Solves scale * lambda^{n_F} * a_F = b_F in logarithms; throws NotEquivalent if the
/// least-squares residual exceeds tol.
TorusRescale torus_rescale(std::span<const IntVec> support, std::span<const cplx> a, std::span<const cplx> b,
                           double tol = 1e-9);

}  // namespace lgcrit
