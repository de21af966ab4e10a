#include "lgcrit/monodromy.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "lgcrit/errors.hpp"

namespace lgcrit {

MonodromyEngine::MonodromyEngine(LGFamily family, double t, MonodromyOptions opts)
    : family_(std::move(family)), t_(t), opts_(std::move(opts)) {
    start_ = solve_all(family_, t_, opts_.solve);
    if (!start_.complete) throw Error(ErrorCode::IncompleteSolve, "basepoint solve incomplete");
}

Permutation MonodromyEngine::track(const LoopSpec& loop) const {
    return track_loop(loop, family_.model, start_, opts_.track);
}

Permutation MonodromyEngine::generator(int ray) {
    {
        std::lock_guard lock(mutex_);
        if (auto it = cache_.find(ray); it != cache_.end()) return it->second;
    }
    auto p = track(generator_loop(family_, t_, ray, opts_.recipe));
    std::lock_guard lock(mutex_);
    return cache_.emplace(ray, std::move(p)).first->second;
}

Permutation MonodromyEngine::of_divisor(const TDivisor& d) {
    if (int(d.coeffs.size()) != model().ray_count()) throw Error(ErrorCode::LengthMismatch, "divisor length");
    std::vector<std::string> labels;
    for (const auto& p : start_.points) labels.push_back(p.label);
    auto out = Permutation::identity(std::move(labels));
    for (std::size_t F = 0; F < d.coeffs.size(); ++F)
        if (d.coeffs[F] != 0) out = out.then(generator(int(F)).power(d.coeffs[F]));
    return out;
}

Permutation MonodromyEngine::of_divisor_single_loop(const TDivisor& d) const {
    return track(divisor_loop(family_, t_, d.coeffs));
}

std::vector<TDivisor> hom_mon(MonodromyEngine& engine, std::string_view from, std::string_view to,
                              std::span<const TDivisor> candidates) {
    std::vector<TDivisor> out;
    for (const auto& d : candidates)
        if (engine.of_divisor(d)(from) == to) out.push_back(d);
    return out;
}

std::vector<TDivisor> div_plus(const Bundle& spec, int k, int l, bool strict) {
    int s = spec.s;
    int r = int(spec.a.size());
    int R = s + 1 + r + 1;
    int lower = strict ? 1 : 0;
    std::vector<TDivisor> out;
    TDivisor d = TDivisor::zero(R);

    // coefficients of e_0..e_r first, then spread the v-total over v_0..v_s
    std::function<void(int, int, int)> fill_v = [&](int idx, int left, int) {
        if (idx == s) {
            d.coeffs[idx] = left;
            out.push_back(d);
            return;
        }
        for (int c = 0; c <= left; ++c) {
            d.coeffs[idx] = c;
            fill_v(idx + 1, left - c, 0);
        }
    };
    std::function<void(int, int, int)> fill_e = [&](int j, int mSum, int twist) {
        if (j == r + 1) {
            if (l + mSum < lower) return;
            int lo = std::max(0, twist - k + lower);
            int hi = s - k + twist;
            for (int total = lo; total <= hi; ++total) fill_v(0, total, 0);
            return;
        }
        int aj = j == 0 ? 0 : spec.a[j - 1];
        for (int m = 0; l + mSum + m <= r; ++m) {
            d.coeffs[s + 1 + j] = m;
            fill_e(j + 1, mSum + m, twist + aj * m);
        }
        d.coeffs[s + 1 + j] = 0;
    };
    fill_e(0, 0, 0);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::vector<std::string> start_labels(const MonodromyEngine& engine) {
    std::vector<std::string> labels;
    for (const auto& p : engine.start().points) labels.push_back(p.label);
    return labels;
}

void fill_generator_data(MonodromyEngine& engine, MonodromyReport& rep) {
    int R = engine.model().ray_count();
    for (int F = 0; F < R; ++F) rep.generators.push_back(engine.generator(F));
    for (int i = 0; i < R; ++i)
        for (int j = i + 1; j < R; ++j)
            if (rep.generators[i].then(rep.generators[j]) != rep.generators[j].then(rep.generators[i])) {
                rep.generatorsCommute = false;
                rep.noncommuting.emplace_back(i, j);
            }
}

void bundle_dimension_checks(MonodromyEngine& engine, const Bundle& spec, MonodromyReport& rep) {
    auto ref = reference_collection(spec);
    const auto& model = engine.model();
    std::map<std::pair<std::string, std::string>, std::set<TDivisor>> mon;
    for (const auto& e1 : ref.entries) {
        auto cands = div_plus(spec, e1.indices[0], e1.indices[1], false);
        auto strict = div_plus(spec, e1.indices[0], e1.indices[1], true);
        for (const auto& e2 : ref.entries) {
            std::size_t dim = hom_basis(model, e1.cls, e2.cls).size();
            auto hm = hom_mon(engine, e1.label, e2.label, cands);
            auto hs = hom_mon(engine, e1.label, e2.label, strict);
            if (hm.size() != dim) rep.dimensionMismatches.push_back({e1.label, e2.label, dim, hm.size()});
            if (hs.size() != dim) rep.dimensionMismatchesStrict.push_back({e1.label, e2.label, dim, hs.size()});
            mon[{e1.label, e2.label}] = std::set<TDivisor>(hm.begin(), hm.end());
        }
    }
    for (const auto& a : ref.entries)
        for (const auto& b : ref.entries)
            for (const auto& c : ref.entries) {
                const auto& ab = mon[{a.label, b.label}];
                const auto& bc = mon[{b.label, c.label}];
                const auto& ac = mon[{a.label, c.label}];
                for (const auto& d1 : ab)
                    for (const auto& d2 : bc) {
                        ++rep.additivityChecks;
                        if (!ac.contains(d1 + d2)) ++rep.additivityFailures;
                    }
            }
}

}  // namespace

MonodromyReport check_m_aligned(MonodromyEngine& engine, const std::map<std::string, PicClass>& classes) {
    MonodromyReport rep;
    fill_generator_data(engine, rep);
    const auto& model = engine.model();
    auto labels = start_labels(engine);
    for (const auto& a : labels) {
        auto ia = classes.find(a);
        if (ia == classes.end()) throw Error(ErrorCode::LengthMismatch, "no class for " + a);
        for (const auto& b : labels) {
            auto ib = classes.find(b);
            if (ib == classes.end()) throw Error(ErrorCode::LengthMismatch, "no class for " + b);
            auto hb = hom_basis(model, ia->second, ib->second);
            for (const auto& e : hb.entries) {
                ++rep.instances;
                std::string got = engine.of_divisor(e.divisor)(a);
                if (got != b) rep.violations.push_back({a, b, e.divisor, got});
            }
        }
    }
    if (const auto* bundle = std::get_if<Bundle>(&engine.family().spec)) bundle_dimension_checks(engine, *bundle, rep);
    return rep;
}

MonodromyReport check_m_aligned(MonodromyEngine& engine, const EmapOptions& emap) {
    std::map<std::string, PicClass> classes;
    for (const auto& p : engine.start().points) classes[p.label] = classify_point(engine.model(), p, emap).cls;
    return check_m_aligned(engine, classes);
}

namespace {

struct Expectation {
    std::string from;
    std::string to;
};

RelationCheck run_relation(std::string name, const std::function<Permutation()>& perm,
                           const std::vector<Expectation>& expected) {
    RelationCheck rc;
    rc.name = std::move(name);
    Permutation p;
    try {
        p = perm();
    } catch (const Error& e) {
        rc.failures.push_back(std::string("tracking failed: ") + e.what());
        return rc;
    }
    for (const auto& x : expected) {
        ++rc.checked;
        const auto& got = p(x.from);
        if (got != x.to) rc.failures.push_back(x.from + " -> " + got + " (expected " + x.to + ")");
    }
    return rc;
}

}  // namespace

std::vector<RelationCheck> check_generator_relations(MonodromyEngine& engine) {
    const auto& family = engine.family();
    double t = engine.t();
    std::vector<RelationCheck> out;
    auto loop = [&](int ray, LoopRecipe recipe, std::optional<ConnectingSide> side = std::nullopt) {
        return [&engine, &family, t, ray, recipe, side] {
            return engine.track(generator_loop(family, t, ray, recipe, side));
        };
    };
    auto E = [](int k, int l) { return grid_label('E', {k, l}); };

    if (const auto* bp = std::get_if<BlowupProduct>(&family.spec)) {
        int n = bp->n, r = bp->r, q = n - r;
        auto Fp = [](int m, int c) { return grid_label('F', {m + 1, c + 1}); };  // (z'_m, w'_c)
        const auto rec = LoopRecipe::Conjugated;
        std::vector<Expectation> ex;
        for (int k = 0; k + 1 <= q; ++k)
            for (int l = 0; l <= r; ++l) ex.push_back({E(k, l), E(k + 1, l)});
        for (int m = 0; m + 1 <= q - 1; ++m)
            for (int c = 0; c <= r - 1; ++c) ex.push_back({Fp(m, c), Fp(m + 1, c)});
        for (int ray = 0; ray < q; ++ray)
            out.push_back(run_relation("(1) " + family.model.ray_names()[ray], loop(ray, rec), ex));
        ex.clear();
        for (int k = 0; k <= q; ++k)
            for (int l = 0; l + 1 <= r; ++l) ex.push_back({E(k, l), E(k, l + 1)});
        for (int m = 0; m <= q - 1; ++m)
            for (int c = 0; c + 1 <= r - 1; ++c) ex.push_back({Fp(m, c), Fp(m, c + 1)});
        for (int ray = q; ray < n; ++ray)
            out.push_back(run_relation("(2) " + family.model.ray_names()[ray], loop(ray, rec), ex));
        ex.clear();
        for (int k = 0; k + 1 <= q - 1; ++k)
            for (int l = 0; l <= r - 1; ++l) ex.push_back({E(k, l), Fp(k + 1, l)});
        out.push_back(run_relation("(3) " + family.model.ray_names()[n], loop(n, rec), ex));
        ex.clear();
        for (int k = 0; k <= q - 1; ++k)
            for (int l = 0; l + 1 <= r - 1; ++l) ex.push_back({E(k, l), Fp(k, l + 1)});
        out.push_back(run_relation("(4) " + family.model.ray_names()[n + 1], loop(n + 1, rec), ex));
        ex.clear();
        for (int k = 0; k <= q - 1; ++k)
            for (int l = 0; l <= r - 1; ++l) ex.push_back({Fp(k, l), E(k, l)});
        out.push_back(run_relation("(5) " + family.model.ray_names()[n + 2], loop(n + 2, rec, ConnectingSide::U), ex));
        out.push_back(
            run_relation("(5') " + family.model.ray_names()[n + 2], loop(n + 2, rec, ConnectingSide::V), ex));
        return out;
    }
    if (const auto* bb = std::get_if<BlowupBundle>(&family.spec)) {
        int n = bb->n, b = bb->b;
        auto F = [](int m) { return grid_label('F', {m}); };
        const auto rec = LoopRecipe::Direct;
        std::vector<Expectation> ex;
        for (int k = 0; k + 1 <= n - 1; ++k)
            for (int l = 0; l <= 1; ++l) ex.push_back({E(k, l), E(k + 1, l)});
        for (int m = 1; m + 1 <= n - 1; ++m) ex.push_back({F(m), F(m + 1)});
        for (int ray = 0; ray < n - 1; ++ray)
            out.push_back(run_relation("(1) " + family.model.ray_names()[ray], loop(ray, rec), ex));
        ex.clear();
        for (int k = b + 1; k <= n - 1; ++k) ex.push_back({E(k, 0), E(k - b, 1)});
        out.push_back(run_relation("(2) " + family.model.ray_names()[n - 1], loop(n - 1, rec), ex));
        ex.clear();
        for (int k = b + 1; k <= n - 1; ++k) ex.push_back({E(k, 0), F(k - b)});
        out.push_back(run_relation("(3) " + family.model.ray_names()[n], loop(n, rec), ex));
        ex.clear();
        for (int k = 0; k <= n - 2; ++k) ex.push_back({E(k, 1), F(k + 1)});
        out.push_back(run_relation("(4) " + family.model.ray_names()[n + 1], loop(n + 1, rec), ex));
        ex.clear();
        for (int k = 1; k <= n - 1; ++k) ex.push_back({F(k), E(k, 1)});
        out.push_back(run_relation("(5) " + family.model.ray_names()[n + 2], loop(n + 2, rec), ex));
        return out;
    }
    throw Error(ErrorCode::RecipeUnavailable, "generator relations are tabulated for blow-up models only");
}

std::vector<RelationCheck> check_bundle_generators(MonodromyEngine& engine) {
    const auto* spec = std::get_if<Bundle>(&engine.family().spec);
    if (!spec) throw Error(ErrorCode::RecipeUnavailable, "bundle generator rule needs a Bundle model");
    int s = spec->s;
    int r = int(spec->a.size());
    int A = 0;
    for (int x : spec->a) A += x;
    auto reduce = [&](int k, int l) {
        int lr = ((l % (r + 1)) + r + 1) % (r + 1);
        int shift = (l - lr) / (r + 1);
        int kr = ((k + shift * A) % (s + 1) + s + 1) % (s + 1);
        return grid_label('E', {kr, lr});
    };
    auto ref = reference_collection(*spec);
    std::vector<RelationCheck> out;
    int R = engine.model().ray_count();
    for (int F = 0; F < R; ++F) {
        int dk = 1, dl = 0;
        if (F > s) {
            int j = F - (s + 1);
            dk = j == 0 ? 0 : -spec->a[j - 1];
            dl = 1;
        }
        std::vector<Expectation> ex;
        for (const auto& e : ref.entries)
            ex.push_back({e.label, reduce(e.indices[0] + dk, e.indices[1] + dl)});
        out.push_back(run_relation(engine.model().ray_names()[F], [&engine, F] { return engine.generator(F); }, ex));
    }
    return out;
}

}  // namespace lgcrit
