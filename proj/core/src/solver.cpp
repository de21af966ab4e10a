#include "lgcrit/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <thread>

#include "lgcrit/errors.hpp"
#include "lgcrit/rng.hpp"
#include "newton_core.hpp"

namespace lgcrit {

struct NewtonWorkspace::Impl : detail::NewtonWorkspaceImpl {};

NewtonWorkspace::NewtonWorkspace() : impl_(std::make_unique<Impl>()) {}
NewtonWorkspace::~NewtonWorkspace() = default;
NewtonWorkspace::NewtonWorkspace(NewtonWorkspace&&) noexcept = default;
NewtonWorkspace& NewtonWorkspace::operator=(NewtonWorkspace&&) noexcept = default;

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;
constexpr double kMaxLog = 690.0;

double wrap_pi(double a) {
    a = std::remainder(a, kTau);
    return a;
}

double frac(double x) {
    double f = x - std::floor(x);
    return f >= 1.0 ? 0.0 : f;
}

Eigen::MatrixXd adapted_weights(const std::vector<IntVec>& exps, const std::vector<int>& flag, int n) {
    IntMatrix f(n, n);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) f(k, j) = exps[flag[k]][j];
    RationalInverse inv;
    if (!invert(f, inv)) throw Error(ErrorCode::SingularJacobian, "dependent flag");
    int R = int(exps.size());
    Eigen::MatrixXd w(n, R);
    for (int k = 0; k < n; ++k) {
        IntVec u(n);
        for (int j = 0; j < n; ++j) u[j] = inv.numerators(j, k);
        auto g = gcd_of(u);
        for (auto& x : u) x /= g;
        if (dot(u, exps[flag[k]]) < 0)
            for (auto& x : u) x = -x;
        for (int F = 0; F < R; ++F) w(k, F) = double(dot(u, exps[F]));
    }
    return w;
}

}  // namespace

namespace detail {

Eigen::VectorXcd to_log(std::span<const cplx> z) {
    Eigen::VectorXcd x(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) x[i] = std::log(z[i]);
    return x;
}

Point from_log(const Eigen::VectorXcd& x) {
    Point z(x.size());
    for (int i = 0; i < x.size(); ++i) z[i] = std::exp(x[i]);
    return z;
}

double log_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    double d = 0.0;
    for (int i = 0; i < a.size(); ++i) {
        cplx diff = a[i] - b[i];
        d = std::max(d, std::abs(cplx(diff.real(), wrap_pi(diff.imag()))));
    }
    return d;
}

Evaluation evaluate_adapted(const LaurentSystem& sys, const Eigen::VectorXcd& x, NewtonWorkspaceImpl& ws) {
    int n = sys.n;
    int R = int(sys.exponents.size());
    if (ws.exponents != sys.exponents) {
        ws.exponents = sys.exponents;
        ws.weights.clear();
    }
    std::vector<cplx> logmon(R);
    for (int F = 0; F < R; ++F) {
        cplx s = std::log(sys.coeffs[F]);
        for (int i = 0; i < n; ++i) s += double(sys.exponents[F][i]) * x[i];
        logmon[F] = s;
    }
    std::vector<int> order(R);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return logmon[a].real() > logmon[b].real(); });

    // Greedy flag of dominant independent exponents (Gram-Schmidt in doubles).
    std::vector<int> flag;
    std::vector<Eigen::VectorXd> ortho;
    for (int F : order) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = double(sys.exponents[F][i]);
        double norm0 = v.norm();
        for (const auto& q : ortho) v -= q.dot(v) * q;
        if (v.norm() > 1e-9 * std::max(1.0, norm0)) {
            flag.push_back(F);
            ortho.push_back(v.normalized());
            if (int(flag.size()) == n) break;
        }
    }
    if (int(flag.size()) < n) throw Error(ErrorCode::SingularJacobian, "support does not span");

    auto it = ws.weights.find(flag);
    if (it == ws.weights.end()) it = ws.weights.emplace(flag, adapted_weights(sys.exponents, flag, n)).first;
    const Eigen::MatrixXd& w = it->second;

    Evaluation ev;
    ev.g = Eigen::VectorXcd::Zero(n);
    ev.J = Eigen::MatrixXcd::Zero(n, n);
    ev.terms = Eigen::MatrixXcd::Zero(n, R);
    for (int k = 0; k < n; ++k) {
        double top = -std::numeric_limits<double>::infinity();
        for (int F = 0; F < R; ++F)
            if (w(k, F) != 0.0) top = std::max(top, std::log(std::abs(w(k, F))) + logmon[F].real());
        double biggest = 0.0;
        for (int F = 0; F < R; ++F) {
            if (w(k, F) == 0.0) continue;
            cplx term = w(k, F) * std::exp(logmon[F] - top);
            ev.terms(k, F) = term;
            ev.g[k] += term;
            for (int j = 0; j < n; ++j) ev.J(k, j) += term * double(sys.exponents[F][j]);
            biggest = std::max(biggest, std::abs(term));
        }
        ev.residual = std::max(ev.residual, std::abs(ev.g[k]) / std::max(biggest, 1e-300));
    }
    return ev;
}

Eigen::VectorXcd tangent(const Evaluation& ev, const Eigen::VectorXcd& dlogc) {
    Eigen::VectorXcd rhs = ev.terms * dlogc;
    return ev.J.partialPivLu().solve(-rhs);
}

RefineResult refine_log(const LaurentSystem& sys, Eigen::VectorXcd x, const NewtonOptions& opts, NewtonWorkspaceImpl& ws) {
    RefineResult out;
    for (int it = 0; it <= opts.maxIter; ++it) {
        for (int i = 0; i < x.size(); ++i)
            if (!std::isfinite(x[i].real()) || !std::isfinite(x[i].imag())) {
                out.status = NewtonStatus::Diverged;
                out.x = x;
                out.iterations = it;
                return out;
            }
        for (int i = 0; i < x.size(); ++i)
            if (std::abs(x[i].real()) > kMaxLog) {
                out.status = NewtonStatus::LeftTorus;
                out.x = x;
                out.iterations = it;
                return out;
            }
        Evaluation ev;
        try {
            ev = evaluate_adapted(sys, x, ws);
        } catch (const Error&) {
            out.status = NewtonStatus::SingularJacobian;
            out.x = x;
            out.iterations = it;
            return out;
        }
        out.residual = ev.residual;
        if (ev.residual < opts.tol) {
            out.status = NewtonStatus::Converged;
            out.x = x;
            out.iterations = it;
            return out;
        }
        if (it == opts.maxIter) break;
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(ev.J);
        if (!(lu.rcond() > 1e-14)) {
            out.status = NewtonStatus::SingularJacobian;
            out.x = x;
            out.iterations = it;
            return out;
        }
        Eigen::VectorXcd d = lu.solve(-ev.g);
        double step = d.cwiseAbs().maxCoeff();
        if (!std::isfinite(step)) break;
        if (step > opts.maxStep) d *= opts.maxStep / step;
        x += d;
        for (int i = 0; i < x.size(); ++i) x[i] = cplx(x[i].real(), wrap_pi(x[i].imag()));
    }
    out.status = NewtonStatus::Diverged;
    out.x = x;
    out.iterations = opts.maxIter;
    return out;
}

}  // namespace detail

std::string_view to_string(NewtonStatus s) noexcept {
    switch (s) {
        case NewtonStatus::Converged: return "Converged";
        case NewtonStatus::SingularJacobian: return "SingularJacobian";
        case NewtonStatus::Diverged: return "Diverged";
        case NewtonStatus::LeftTorus: return "LeftTorus";
    }
    return "Unknown";
}

std::vector<cplx> LaurentSystem::residual(std::span<const cplx> z) const {
    std::vector<cplx> g(n, 0.0);
    for (std::size_t F = 0; F < exponents.size(); ++F) {
        cplx mon = coeffs[F];
        for (int i = 0; i < n; ++i) mon *= std::pow(z[i], double(exponents[F][i]));
        for (int i = 0; i < n; ++i) g[i] += double(exponents[F][i]) * mon;
    }
    return g;
}

std::vector<cplx> LaurentSystem::log_jacobian(std::span<const cplx> z) const {
    std::vector<cplx> j(std::size_t(n) * n, 0.0);
    for (std::size_t F = 0; F < exponents.size(); ++F) {
        cplx mon = coeffs[F];
        for (int i = 0; i < n; ++i) mon *= std::pow(z[i], double(exponents[F][i]));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) j[std::size_t(a) * n + b] += double(exponents[F][a] * exponents[F][b]) * mon;
    }
    return j;
}

LaurentSystem critical_system(const LGFamily& family, double t) {
    return {family.model.dim(), family.support(), family.coefficients(t)};
}

NewtonResult newton_refine(const LaurentSystem& system, std::span<const cplx> start, const NewtonOptions& opts,
                           NewtonWorkspace* workspace) {
    if (int(start.size()) != system.n) throw Error(ErrorCode::LengthMismatch, "start point dimension");
    for (auto c : start)
        if (std::abs(c) <= 1e-300) {
            NewtonResult bad;
            bad.point.coords.assign(start.begin(), start.end());
            bad.status = NewtonStatus::LeftTorus;
            return bad;
        }
    NewtonWorkspace local;
    auto& ws = workspace ? workspace->impl() : local.impl();
    auto r = detail::refine_log(system, detail::to_log(start), opts, ws);
    NewtonResult out;
    out.point.coords = detail::from_log(r.x);
    out.point.residualNorm = r.residual;
    out.status = r.status;
    out.iterations = r.iterations;
    return out;
}

const SolutionPoint* SolutionSet::find(std::string_view label) const {
    for (const auto& p : points)
        if (p.label == label) return &p;
    return nullptr;
}

double relative_distance(std::span<const cplx> a, std::span<const cplx> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double scale = std::max({std::abs(a[i]), std::abs(b[i]), 1e-300});
        d = std::max(d, std::abs(a[i] - b[i]) / scale);
    }
    return d;
}

double log_distance(std::span<const cplx> a, std::span<const cplx> b) {
    return detail::log_distance(detail::to_log(a), detail::to_log(b));
}

SolutionSet solve_all(const LGFamily& family, double t, const SolveOptions& opts) {
    SolutionSet out;
    out.t = t;
    out.expected = family.model.euler();
    auto sys = critical_system(family, t);
    auto seeds = asymptotic_seeds(family.spec, t);
    NewtonWorkspace ws;

    auto is_new = [&](const Point& z) {
        for (const auto& p : out.points)
            if (relative_distance(p.coords, z) < opts.dedupTol) return false;
        return true;
    };

    std::vector<Eigen::VectorXcd> seedLogs;
    for (const auto& s : seeds.seeds) seedLogs.push_back(detail::to_log(s.point()));
    // seeds are refined independently; merging happens in seed order
    std::vector<NewtonResult> refined(seeds.seeds.size());
    int workers = std::clamp(opts.threads, 1, std::max(1, int(seeds.seeds.size())));
    auto refine_range = [&](int w) {
        NewtonWorkspace local;
        for (std::size_t s = w; s < seeds.seeds.size(); s += workers)
            refined[s] = newton_refine(sys, seeds.seeds[s].point(), opts.newton, &local);
    };
    if (workers == 1) {
        refine_range(0);
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(refine_range, w);
    }
    for (std::size_t s = 0; s < seeds.seeds.size(); ++s) {
        auto& r = refined[s];
        if (!r.converged() || !is_new(r.point.coords)) continue;
        r.point.label = seeds.seeds[s].label;
        out.points.push_back(std::move(r.point));
    }

    if (int(out.points.size()) < out.expected) {
        // Multistart: log-moduli drawn from the seed range per coordinate.
        int n = sys.n;
        std::vector<double> lo(n, 0.0), hi(n, 0.0);
        for (int i = 0; i < n; ++i) {
            lo[i] = hi[i] = seedLogs.front()[i].real();
            for (const auto& x : seedLogs) {
                lo[i] = std::min(lo[i], x[i].real());
                hi[i] = std::max(hi[i], x[i].real());
            }
            lo[i] -= 1.0;
            hi[i] += 1.0;
        }
        SplitMix64 rng(opts.seed);
        int budget = opts.multistartFactor * out.expected;
        int extra = 0;
        for (int a = 0; a < budget && int(out.points.size()) < out.expected; ++a) {
            ++out.multistartAttempts;
            Eigen::VectorXcd x(n);
            for (int i = 0; i < n; ++i) x[i] = cplx(rng.uniform(lo[i], hi[i]), kTau * rng.uniform() - std::numbers::pi);
            auto r = detail::refine_log(sys, x, {opts.newton.tol, 100, opts.newton.maxStep}, ws.impl());
            if (r.status != NewtonStatus::Converged) continue;
            auto z = detail::from_log(r.x);
            if (!is_new(z)) continue;
            // nearest seed whose label is still free
            std::string label;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t s = 0; s < seeds.seeds.size(); ++s) {
                const auto& cand = seeds.seeds[s].label;
                bool taken = std::any_of(out.points.begin(), out.points.end(), [&](const auto& p) { return p.label == cand; });
                if (taken) continue;
                double d = detail::log_distance(seedLogs[s], r.x);
                if (d < best) {
                    best = d;
                    label = cand;
                }
            }
            if (label.empty()) label = "extra" + std::to_string(extra++);
            out.points.push_back({z, label, r.residual});
        }
    }
    std::stable_sort(out.points.begin(), out.points.end(),
                     [](const auto& a, const auto& b) { return a.label < b.label; });
    out.complete = int(out.points.size()) == out.expected;
    return out;
}

RDivisor argument_profile(const ToricModel& model, std::span<const cplx> z) {
    if (int(z.size()) != model.dim()) throw Error(ErrorCode::LengthMismatch, "point dimension");
    RDivisor d;
    for (const auto& ray : model.rays()) {
        double a = 0.0;
        for (std::size_t i = 0; i < ray.size(); ++i) a += double(ray[i]) * std::arg(z[i]) / kTau;
        d.coeffs.push_back(frac(a));
    }
    return d;
}

std::vector<Trajectory> sweep_parameter(const LGFamily& family, double tStart, double tEnd, int steps,
                                        const SolveOptions& opts) {
    if (steps < 0) throw Error(ErrorCode::LengthMismatch, "negative step count");
    auto start = solve_all(family, tStart, opts);
    if (!start.complete) throw Error(ErrorCode::IncompleteStart, "solve at the start parameter is incomplete");
    const auto& model = family.model;
    int R = model.ray_count();
    Eigen::VectorXcd rates(R);
    for (int F = 0; F < R; ++F) rates[F] = family.rules[F].rate;

    std::vector<Trajectory> out;
    std::vector<Eigen::VectorXcd> cur;
    for (const auto& p : start.points) {
        Trajectory tr;
        tr.label = p.label;
        tr.ts.push_back(tStart);
        tr.samples.push_back(p.coords);
        out.push_back(std::move(tr));
        cur.push_back(detail::to_log(p.coords));
    }
    NewtonWorkspace ws;
    double span = std::abs(tEnd - tStart);
    double minStep = 1e-9 * std::max(span, 1.0);
    NewtonOptions corr{opts.newton.tol, 12, opts.newton.maxStep};
    for (int s = 1; s <= steps && span > 0; ++s) {
        double tPrev = tStart + (tEnd - tStart) * (s - 1) / steps;
        double tNext = tStart + (tEnd - tStart) * s / steps;
        // all trajectories advance together so collisions can be detected
        double t = tPrev;
        double h = tNext - tPrev;
        while ((h > 0) ? t < tNext : t > tNext) {
            if (std::abs(h) > std::abs(tNext - t)) h = tNext - t;
            auto sysNext = critical_system(family, t + h);
            auto sysHere = critical_system(family, t);
            std::vector<Eigen::VectorXcd> next;
            bool ok = true;
            for (auto& x : cur) {
                auto ev = detail::evaluate_adapted(sysHere, x, ws.impl());
                Eigen::VectorXcd pred = x + h * detail::tangent(ev, rates);
                auto r = detail::refine_log(sysNext, pred, corr, ws.impl());
                if (r.status != NewtonStatus::Converged || detail::log_distance(r.x, pred) > 0.1) {
                    ok = false;
                    break;
                }
                next.push_back(r.x);
            }
            for (std::size_t i = 0; ok && i < next.size(); ++i)
                for (std::size_t j = i + 1; ok && j < next.size(); ++j)
                    if (detail::log_distance(next[i], next[j]) < 10 * opts.dedupTol) ok = false;
            if (!ok) {
                h /= 2;
                if (std::abs(h) < minStep) throw Error(ErrorCode::PathJump, "step halving exhausted in parameter sweep");
                continue;
            }
            cur = std::move(next);
            t += h;
            h *= 1.5;
        }
        for (std::size_t i = 0; i < cur.size(); ++i) {
            out[i].ts.push_back(tNext);
            out[i].samples.push_back(detail::from_log(cur[i]));
        }
    }
    for (auto& tr : out) {
        tr.startProfile = argument_profile(model, tr.samples.front());
        tr.endProfile = argument_profile(model, tr.samples.back());
        for (auto c : tr.samples.front()) tr.startArgs.push_back(frac(std::arg(c) / kTau));
        for (auto c : tr.samples.back()) tr.endArgs.push_back(frac(std::arg(c) / kTau));
    }
    return out;
}

}  // namespace lgcrit
