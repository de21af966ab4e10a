#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "lgcrit/errors.hpp"
#include "lgcrit/monodromy.hpp"
#include "newton_core.hpp"

namespace lgcrit {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

bool is_blowup_product(const LGFamily& f) { return std::holds_alternative<BlowupProduct>(f.spec); }

}  // namespace

LoopSpec divisor_loop(const LGFamily& family, double t, std::span<const std::int64_t> winding) {
    int R = family.model.ray_count();
    if (int(winding.size()) != R) throw Error(ErrorCode::LengthMismatch, "winding length");
    LoopSpec loop;
    loop.t = t;
    loop.winding.assign(winding.begin(), winding.end());
    LoopLeg leg{family.coefficients(t), std::vector<cplx>(R)};
    for (int F = 0; F < R; ++F) leg.logDelta[F] = cplx(0.0, kTau * double(winding[F]));
    loop.legs.push_back(std::move(leg));
    return loop;
}

LoopSpec generator_loop(const LGFamily& family, double t, int ray, LoopRecipe recipe,
                        std::optional<ConnectingSide> side) {
    int R = family.model.ray_count();
    if (ray < 0 || ray >= R) throw Error(ErrorCode::LengthMismatch, "ray index out of range");
    IntVec wind(R, 0);
    wind[ray] = 1;
    if (recipe == LoopRecipe::Direct) return divisor_loop(family, t, wind);

    if (!is_blowup_product(family))
        throw Error(ErrorCode::RecipeUnavailable, "conjugated loops exist for blow-ups of products only");
    const auto& bp = std::get<BlowupProduct>(family.spec);
    int n = bp.n, q = bp.n - bp.r;
    int v1 = n, v2 = n + 1, v3 = n + 2;

    // which connecting path and which winding at its far end
    ConnectingSide s;
    IntVec w(R, 0);
    if (ray < q) {
        s = ConnectingSide::U;
        w[ray] = 1;
    } else if (ray < n) {
        s = ConnectingSide::V;
        w[ray] = 1;
    } else if (ray == v1) {
        s = ConnectingSide::U;
        w[0] = 1;
        w[v3] = -1;
    } else if (ray == v2) {
        s = ConnectingSide::V;
        w[q] = 1;
        w[v3] = -1;
    } else {
        s = side.value_or(ConnectingSide::U);
        w[v3] = s == ConnectingSide::U ? 1 : -1;
    }
    if (side && ray != v3) s = *side;

    LoopSpec loop;
    loop.t = t;
    loop.winding = wind;
    loop.recipe = recipe;
    loop.side = s;
    auto base = family.coefficients(t);
    LoopLeg connect{base, std::vector<cplx>(R)};
    int lo = s == ConnectingSide::U ? q : 0;
    int hi = s == ConnectingSide::U ? n : q;
    for (int F = lo; F < hi; ++F) connect.logDelta[F] = t;  // e^{-t} -> 1
    std::vector<cplx> far = base;
    for (int F = lo; F < hi; ++F) far[F] = 1.0;
    LoopLeg wind_leg{far, std::vector<cplx>(R)};
    for (int F = 0; F < R; ++F) wind_leg.logDelta[F] = cplx(0.0, kTau * double(w[F]));
    LoopLeg back{far, std::vector<cplx>(R)};
    for (int F = 0; F < R; ++F) back.logDelta[F] = -connect.logDelta[F];
    loop.legs = {connect, wind_leg, back};
    return loop;
}

LoopSpec reversed(const LoopSpec& loop) {
    LoopSpec out = loop;
    out.legs.clear();
    for (auto it = loop.legs.rbegin(); it != loop.legs.rend(); ++it) {
        LoopLeg leg;
        leg.start.resize(it->start.size());
        leg.logDelta.resize(it->logDelta.size());
        for (std::size_t F = 0; F < it->start.size(); ++F) {
            leg.start[F] = it->start[F] * std::exp(it->logDelta[F]);
            leg.logDelta[F] = -it->logDelta[F];
        }
        out.legs.push_back(std::move(leg));
    }
    for (auto& w : out.winding) w = -w;
    return out;
}

Permutation::Permutation(std::vector<std::string> labels, std::vector<int> image)
    : labels_(std::move(labels)), image_(std::move(image)) {
    if (labels_.size() != image_.size()) throw Error(ErrorCode::LengthMismatch, "permutation size");
}

Permutation Permutation::identity(std::vector<std::string> labels) {
    std::vector<int> img(labels.size());
    std::iota(img.begin(), img.end(), 0);
    return {std::move(labels), std::move(img)};
}

int Permutation::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label) return int(i);
    return -1;
}

const std::string& Permutation::operator()(std::string_view label) const {
    int i = index_of(label);
    if (i < 0) throw Error(ErrorCode::LengthMismatch, "unknown label " + std::string(label));
    return labels_[image_[i]];
}

Permutation Permutation::then(const Permutation& next) const {
    if (next.labels_ != labels_) throw Error(ErrorCode::LengthMismatch, "permutations on different labels");
    std::vector<int> img(image_.size());
    for (std::size_t i = 0; i < image_.size(); ++i) img[i] = next.image_[image_[i]];
    return {labels_, std::move(img)};
}

Permutation Permutation::inverse() const {
    std::vector<int> img(image_.size());
    for (std::size_t i = 0; i < image_.size(); ++i) img[image_[i]] = int(i);
    return {labels_, std::move(img)};
}

Permutation Permutation::power(std::int64_t k) const {
    Permutation base = k < 0 ? inverse() : *this;
    Permutation out = identity(labels_);
    for (std::int64_t i = 0; i < std::abs(k); ++i) out = out.then(base);
    return out;
}

bool Permutation::is_identity() const {
    for (std::size_t i = 0; i < image_.size(); ++i)
        if (image_[i] != int(i)) return false;
    return true;
}

bool Permutation::is_bijective() const {
    std::vector<bool> hit(image_.size(), false);
    for (int j : image_) {
        if (j < 0 || j >= int(image_.size()) || hit[j]) return false;
        hit[j] = true;
    }
    return true;
}

std::string Permutation::cycles() const {
    std::ostringstream os;
    std::vector<bool> done(image_.size(), false);
    bool any = false;
    for (std::size_t i = 0; i < image_.size(); ++i) {
        if (done[i] || image_[i] == int(i)) continue;
        os << '(';
        std::size_t j = i;
        bool first = true;
        while (!done[j]) {
            done[j] = true;
            os << (first ? "" : " ") << labels_[j];
            first = false;
            j = image_[j];
        }
        os << ')';
        any = true;
    }
    return any ? os.str() : "()";
}

std::vector<Point> track_points(const ToricModel& model, std::span<const LoopLeg> legs, std::span<const Point> starts,
                                const TrackOptions& opts) {
    int n = model.dim();
    int R = model.ray_count();
    std::vector<Eigen::VectorXcd> cur;
    for (const auto& p : starts) cur.push_back(detail::to_log(p));
    detail::NewtonWorkspaceImpl ws;
    NewtonOptions corr = opts.newton;
    corr.maxIter = opts.correctorIter;

    for (const auto& leg : legs) {
        if (int(leg.start.size()) != R || int(leg.logDelta.size()) != R)
            throw Error(ErrorCode::LengthMismatch, "loop leg size");
        bool moving = std::any_of(leg.logDelta.begin(), leg.logDelta.end(), [](cplx d) { return d != 0.0; });
        if (!moving) continue;
        Eigen::VectorXcd delta(R);
        for (int F = 0; F < R; ++F) delta[F] = leg.logDelta[F];
        auto system_at = [&](double s) {
            LaurentSystem sys{n, model.rays(), std::vector<cplx>(R)};
            for (int F = 0; F < R; ++F) sys.coeffs[F] = leg.start[F] * std::exp(s * leg.logDelta[F]);
            return sys;
        };
        double s = 0.0;
        double h = opts.initialStep;
        while (s < 1.0) {
            h = std::min(h, 1.0 - s);
            auto here = system_at(s);
            auto next = system_at(s + h);
            std::vector<Eigen::VectorXcd> moved;
            bool ok = true;
            for (auto& x : cur) {
                auto ev = detail::evaluate_adapted(here, x, ws);
                Eigen::VectorXcd pred = x + h * detail::tangent(ev, delta);
                auto r = detail::refine_log(next, pred, corr, ws);
                if (r.status != NewtonStatus::Converged || detail::log_distance(r.x, pred) > opts.maxPredictorError) {
                    ok = false;
                    break;
                }
                moved.push_back(std::move(r.x));
            }
            for (std::size_t i = 0; ok && i < moved.size(); ++i)
                for (std::size_t j = i + 1; ok && j < moved.size(); ++j)
                    if (detail::log_distance(moved[i], moved[j]) < 10 * opts.dedupTol) ok = false;
            if (!ok) {
                h /= 2;
                if (h < opts.minStep) throw Error(ErrorCode::PathJump, "step halving exhausted at s = " + std::to_string(s));
                continue;
            }
            cur = std::move(moved);
            s += h;
            h *= 1.5;
        }
    }
    std::vector<Point> out;
    for (const auto& x : cur) out.push_back(detail::from_log(x));
    return out;
}

Permutation track_loop(const LoopSpec& loop, const ToricModel& model, const SolutionSet& start,
                       const TrackOptions& opts) {
    std::vector<std::string> labels;
    std::vector<Point> pts;
    for (const auto& p : start.points) {
        labels.push_back(p.label);
        pts.push_back(p.coords);
    }
    auto ends = track_points(model, loop.legs, pts, opts);
    std::vector<int> img(pts.size());
    for (std::size_t i = 0; i < ends.size(); ++i) {
        double best = INFINITY, second = INFINITY;
        int arg = -1;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            double d = log_distance(ends[i], pts[j]);
            if (d < best) {
                second = best;
                best = d;
                arg = int(j);
            } else if (d < second) {
                second = d;
            }
        }
        if (pts.size() > 1 && !(best < opts.matchRatio * second))
            throw Error(ErrorCode::MatchAmbiguous, "endpoint of " + labels[i] + " has no clear nearest solution");
        img[i] = arg;
    }
    Permutation p(std::move(labels), std::move(img));
    if (!p.is_bijective()) throw Error(ErrorCode::NonBijective, "loop endpoints are not a permutation");
    return p;
}

Point TorusRescale::apply(std::span<const cplx> z) const {
    Point out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] / lambda[i];
    return out;
}

TorusRescale torus_rescale(std::span<const IntVec> support, std::span<const cplx> a, std::span<const cplx> b,
                           double tol) {
    if (support.empty() || a.size() != support.size() || b.size() != support.size())
        throw Error(ErrorCode::LengthMismatch, "rescale inputs");
    int R = int(support.size());
    int n = int(support.front().size());
    // unknowns: log scale, log lambda_1..n
    Eigen::MatrixXd A(R, n + 1);
    Eigen::VectorXcd rhs(R);
    for (int F = 0; F < R; ++F) {
        if (std::abs(a[F]) == 0.0 || std::abs(b[F]) == 0.0) throw Error(ErrorCode::DegenerateInput, "zero coefficient");
        A(F, 0) = 1.0;
        for (int j = 0; j < n; ++j) A(F, j + 1) = double(support[F][j]);
        rhs[F] = std::log(b[F] / a[F]);
    }
    auto qr = A.colPivHouseholderQr();
    Eigen::VectorXd re = qr.solve(rhs.real());
    Eigen::VectorXd im = qr.solve(rhs.imag());
    double worst = 0.0;
    for (int F = 0; F < R; ++F) {
        double dr = A.row(F).dot(re) - rhs[F].real();
        double di = std::remainder(A.row(F).dot(im) - rhs[F].imag(), kTau);
        worst = std::max(worst, std::hypot(dr, di));
    }
    if (worst > tol) throw Error(ErrorCode::NotEquivalent, "coefficient vectors are not torus-equivalent, residual " +
                                                                std::to_string(worst));
    TorusRescale out;
    out.residual = worst;
    out.scale = std::exp(cplx(re[0], im[0]));
    for (int j = 0; j < n; ++j) out.lambda.push_back(std::exp(cplx(re[j + 1], im[j + 1])));
    return out;
}

}  // namespace lgcrit
