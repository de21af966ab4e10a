#include "lgcrit/emap.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "lgcrit/errors.hpp"

namespace lgcrit {

namespace {

std::string format_class(const PicClass& c) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < c.coords.size(); ++i) os << (i ? "," : "") << c.coords[i];
    os << ')';
    return os.str();
}

bool same_assignment(const ExceptionalMapResult& a, const ExceptionalMapResult& b) {
    if (a.assignments.size() != b.assignments.size()) return false;
    for (const auto& x : a.assignments) {
        const auto* y = b.find(x.label);
        if (!y || y->cls != x.cls) return false;
    }
    return true;
}

ExceptionalMapResult map_at(const LGFamily& family, double t, const EmapOptions& opts) {
    auto sols = solve_all(family, t, opts.solve);
    if (!sols.complete) throw Error(ErrorCode::IncompleteSolve, "critical set incomplete at t = " + std::to_string(t));
    ExceptionalMapResult r;
    r.t = t;
    for (const auto& p : sols.points) r.assignments.push_back(classify_point(family.model, p, opts));
    std::set<PicClass> seen;
    for (const auto& a : r.assignments) seen.insert(a.cls);
    r.bijective = seen.size() == r.assignments.size() && int(seen.size()) == family.model.euler();
    return r;
}

double circular_gap(double a, double b) {
    double d = std::abs(a - b);
    d -= std::floor(d);
    return std::min(d, 1.0 - d);
}

}  // namespace

const EmapAssignment* ExceptionalMapResult::find(std::string_view label) const {
    for (const auto& a : assignments)
        if (a.label == label) return &a;
    return nullptr;
}

std::vector<PicClass> ExceptionalMapResult::image() const {
    std::vector<PicClass> out;
    for (const auto& a : assignments) out.push_back(a.cls);
    return out;
}

EmapAssignment classify_point(const ToricModel& model, const SolutionPoint& p, const EmapOptions& opts) {
    EmapAssignment a;
    a.label = p.label;
    a.profile = argument_profile(model, p.coords);
    RDivisor limit = a.profile;
    for (auto& x : limit.coeffs)
        if (x < opts.limitSnap || x > 1.0 - opts.limitSnap) x = 0.0;
    a.coords = real_class_coords(model, limit);
    a.cls = floor_class(a.coords, opts.snapEps);
    return a;
}

ExceptionalMapResult exceptional_map(const LGFamily& family, double t, const EmapOptions& opts) {
    double sign = static_cast<int>(family.tSign);
    bool constant = std::all_of(family.rules.begin(), family.rules.end(), [](const auto& r) { return r.rate == 0.0; });
    double cur = t;
    for (;;) {
        auto here = map_at(family, cur, opts);
        if (constant) {
            here.stabilized = true;
            return here;
        }
        auto further = map_at(family, 1.5 * cur, opts);
        here.stabilized = same_assignment(here, further);
        if (here.stabilized) return here;
        if (std::abs(cur) * 2 > opts.tCap + 1e-9) {
            throw Error(ErrorCode::NotStabilized,
                        "class assignment still changing at |t| = " + std::to_string(std::abs(cur)));
        }
        cur = 2 * std::abs(cur) * sign;
    }
}

EmapVerification verify_exceptional_map(const LGFamily& family, const EmapOptions& opts, std::optional<double> t) {
    EmapVerification v;
    v.map = exceptional_map(family, t.value_or(family.default_t()), opts);
    auto ref = reference_collection(family.spec);
    auto refClasses = ref.classes();

    auto image = v.map.image();
    std::set<PicClass> img(image.begin(), image.end());
    std::set<PicClass> want(refClasses.begin(), refClasses.end());
    v.bijectionOk = v.map.bijective && img == want;
    v.labelsOk = true;
    for (const auto& a : v.map.assignments) {
        const auto* e = ref.find(a.label);
        if (!e || e->cls != a.cls) {
            v.labelsOk = false;
            v.mismatched.push_back(a.label + ": got " + format_class(a.cls) + " expected " +
                                   (e ? format_class(e->cls) : std::string("none")));
        }
    }
    // strong exceptionality of the image, listed in reference order
    std::vector<PicClass> ordered;
    for (const auto& e : ref.entries)
        if (img.contains(e.cls)) ordered.push_back(e.cls);
    for (const auto& c : img)
        if (!want.contains(c)) ordered.push_back(c);
    v.strong = is_strongly_exceptional(family.model, ordered);
    v.strongOk = v.strong.isStrong;

    if (const auto* bb = std::get_if<BlowupBundle>(&family.spec)) {
        auto forms = blowup_bundle_family2_forms(*bb);
        auto sols = solve_all(family, v.map.t, opts.solve);
        auto matches = [&](const std::vector<double>& set) {
            for (const auto& p : sols.points) {
                if (p.label.empty() || p.label[0] != 'F') continue;
                double arg = std::arg(p.coords[0]) / (2 * std::numbers::pi);
                bool hit = std::any_of(set.begin(), set.end(), [&](double f) { return circular_gap(arg, f) < 1e-3; });
                if (!hit) return false;
            }
            return true;
        };
        bool elim = matches(forms.elimination);
        bool closed = matches(forms.closedForm);
        v.family2Form = elim && closed ? "both" : elim ? "elimination" : closed ? "closed-form" : "neither";
    }
    return v;
}

std::int64_t FrobeniusImage::total() const {
    std::int64_t s = 0;
    for (auto m : multiplicities) s += m;
    return s;
}

FrobeniusImage frobenius_image(const ToricModel& model, int l, FrobeniusMode mode) {
    if (l < 2) throw Error(ErrorCode::ParameterTooSmall, "Frobenius level must be at least 2");
    const auto& C = model.class_matrix();
    const auto& P = model.principal_matrix();
    int R = model.ray_count();
    int n = model.dim();
    int rho = model.pic_rank();
    int width = mode == FrobeniusMode::Characters ? n : R;
    double cube = std::pow(double(l), width);
    if (cube > 5e7) throw Error(ErrorCode::DegenerateInput, "Frobenius cube too large: " + std::to_string(cube));

    std::map<PicClass, std::int64_t> counts;
    IntVec idx(width, 0);
    IntVec d(R);
    IntVec numer(rho);
    for (;;) {
        if (mode == FrobeniusMode::Characters) {
            for (int F = 0; F < R; ++F) {
                std::int64_t v = 0;
                for (int j = 0; j < n; ++j) v += P(F, j) * idx[j];
                v %= l;
                d[F] = v < 0 ? v + l : v;
            }
        } else {
            d = idx;
        }
        for (int i = 0; i < rho; ++i) {
            std::int64_t v = 0;
            for (int F = 0; F < R; ++F) v += C(i, F) * d[F];
            numer[i] = v;
        }
        counts[floor_rational(numer, l)]++;
        int k = width - 1;
        while (k >= 0 && ++idx[k] == l) idx[k--] = 0;
        if (k < 0) break;
    }
    FrobeniusImage img;
    img.l = l;
    img.mode = mode;
    for (auto& [c, m] : counts) {
        img.classes.push_back(c);
        img.multiplicities.push_back(m);
    }
    return img;
}

FrobeniusImage frobenius_stable(const ToricModel& model, FrobeniusMode mode, int maxDoublings) {
    std::int64_t maxEntry = 0;
    for (const auto& r : model.rays())
        for (auto x : r) maxEntry = std::max<std::int64_t>(maxEntry, std::abs(x));
    int l = int(2 * (maxEntry + 2));
    auto prev = frobenius_image(model, l, mode);
    for (int k = 0; k < maxDoublings; ++k) {
        FrobeniusImage next;
        try {
            next = frobenius_image(model, 2 * l, mode);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::DegenerateInput) return prev;  // cube budget exhausted
            throw;
        }
        if (next.classes == prev.classes) {
            next.stabilized = true;
            return next;
        }
        prev = std::move(next);
        l *= 2;
    }
    return prev;
}

std::string_view to_string(SetRelation r) noexcept {
    switch (r) {
        case SetRelation::Equal: return "equal";
        case SetRelation::ProperSubset: return "properSubset";
        case SetRelation::Superset: return "superset";
        case SetRelation::Incomparable: return "incomparable";
    }
    return "?";
}

SetComparison compare_collections(std::span<const PicClass> a, std::span<const PicClass> b) {
    std::set<PicClass> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    SetComparison c;
    std::set_difference(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(c.onlyInA));
    std::set_difference(sb.begin(), sb.end(), sa.begin(), sa.end(), std::back_inserter(c.onlyInB));
    if (c.onlyInA.empty() && c.onlyInB.empty())
        c.relation = SetRelation::Equal;
    else if (c.onlyInA.empty())
        c.relation = SetRelation::ProperSubset;
    else if (c.onlyInB.empty())
        c.relation = SetRelation::Superset;
    else
        c.relation = SetRelation::Incomparable;
    return c;
}

}  // namespace lgcrit
