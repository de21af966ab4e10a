#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lgcrit/catalog.hpp"
#include "lgcrit/toric.hpp"

namespace lgcrit {

using cplx = std::complex<double>;
using Point = std::vector<cplx>;

/// g_i(z) = sum_F c_F (n_F)_i z^{n_F}, the logarithmic gradient of the potential.
struct LaurentSystem {
    int n = 0;
    std::vector<IntVec> exponents;
    std::vector<cplx> coeffs;

    std::vector<cplx> residual(std::span<const cplx> z) const;
    /// z_j d g_i / d z_j, row-major n x n.
    std::vector<cplx> log_jacobian(std::span<const cplx> z) const;
};

LaurentSystem critical_system(const LGFamily& family, double t);

struct NewtonOptions {
    double tol = 1e-12;
    int maxIter = 50;
    double maxStep = 0.5;  // cap on the log-coordinate update, infinity norm
};

enum class NewtonStatus { Converged, SingularJacobian, Diverged, LeftTorus };
std::string_view to_string(NewtonStatus s) noexcept;

struct SolutionPoint {
    Point coords;
    std::string label;
    double residualNorm = 0.0;
};

struct NewtonResult {
    SolutionPoint point;
    NewtonStatus status = NewtonStatus::Diverged;
    int iterations = 0;
    bool converged() const noexcept { return status == NewtonStatus::Converged; }
};

/// Caches row recombinations per dominance pattern. Not thread-safe; use one per thread.
class NewtonWorkspace {
public:
    NewtonWorkspace();
    ~NewtonWorkspace();
    NewtonWorkspace(NewtonWorkspace&&) noexcept;
    NewtonWorkspace& operator=(NewtonWorkspace&&) noexcept;

    struct Impl;
    Impl& impl() { return *impl_; }

private:
    std::unique_ptr<Impl> impl_;
};

/// Damped Newton in log coordinates. Each equation is recombined so that it is
/// dominated by one monomial at the current point and then scaled by its largest
/// term; the residual reported is the largest scaled row.
NewtonResult newton_refine(const LaurentSystem& system, std::span<const cplx> start, const NewtonOptions& opts = {},
                           NewtonWorkspace* workspace = nullptr);

struct SolveOptions {
    NewtonOptions newton;
    double dedupTol = 1e-8;
    std::uint64_t seed = 0x4C47;
    int multistartFactor = 200;
    int threads = 1;  // seed refinement workers
};

struct SolutionSet {
    double t = 0.0;
    std::vector<SolutionPoint> points;
    bool complete = false;
    int expected = 0;
    int multistartAttempts = 0;

    const SolutionPoint* find(std::string_view label) const;
};

/// Max over coordinates of |a_i - b_i| / max(|a_i|, |b_i|).
double relative_distance(std::span<const cplx> a, std::span<const cplx> b);
/// Max over coordinates of |log(a_i / b_i)|, arguments wrapped to (-pi, pi].
double log_distance(std::span<const cplx> a, std::span<const cplx> b);

/// Solves from the asymptotic seeds, then multistart if the count falls short.
/// Never throws IncompleteSolve; check `complete`.
SolutionSet solve_all(const LGFamily& family, double t, const SolveOptions& opts = {});

/// frac(arg(z^{n_F}) / 2pi) per ray.
RDivisor argument_profile(const ToricModel& model, std::span<const cplx> z);

struct Trajectory {
    std::string label;
    std::vector<double> ts;
    std::vector<Point> samples;
    RDivisor startProfile;
    RDivisor endProfile;
    std::vector<double> startArgs;  // per coordinate, fractions of a turn
    std::vector<double> endArgs;
};

/// Continues every solution at tStart to tEnd with steps + 1 recorded samples.
std::vector<Trajectory> sweep_parameter(const LGFamily& family, double tStart, double tEnd, int steps,
                                        const SolveOptions& opts = {});

}  // namespace lgcrit
