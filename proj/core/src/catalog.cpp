#include "lgcrit/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "lgcrit/errors.hpp"

namespace lgcrit {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

double frac(double x) {
    double f = x - std::floor(x);
    return f >= 1.0 ? 0.0 : f;
}

int parse_int(std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw Error(ErrorCode::BadModelSpec, "not an integer: " + std::string(s));
    return v;
}

IntVec unit(int len, int i) {
    IntVec v(len, 0);
    v[i] = 1;
    return v;
}


struct Built {
    std::vector<IntVec> rays;
    std::vector<std::string> names;
    PicBasisSpec basis;
};

TDivisor unit_div(int rays, int i) { return TDivisor::unit(rays, i); }

Built build_rays(const ModelSpec& spec) {
    Built b;
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ProjectiveSpace>) {
                int s = m.s;
                b.rays.push_back(IntVec(s, -1));
                b.names.push_back("v0");
                for (int i = 0; i < s; ++i) {
                    b.rays.push_back(unit(s, i));
                    b.names.push_back("v" + std::to_string(i + 1));
                }
                b.basis = {{unit_div(s + 1, 0)}, {"H"}};
            } else if constexpr (std::is_same_v<T, Bundle>) {
                int s = m.s, r = int(m.a.size()), n = s + r;
                IntVec v0(n, 0);
                for (int i = 0; i < s; ++i) v0[i] = -1;
                for (int j = 0; j < r; ++j) v0[s + j] = m.a[j];
                b.rays.push_back(v0);
                b.names.push_back("v0");
                for (int i = 0; i < s; ++i) {
                    b.rays.push_back(unit(n, i));
                    b.names.push_back("v" + std::to_string(i + 1));
                }
                IntVec e0(n, 0);
                for (int j = 0; j < r; ++j) e0[s + j] = -1;
                b.rays.push_back(e0);
                b.names.push_back("e0");
                for (int j = 0; j < r; ++j) {
                    b.rays.push_back(unit(n, s + j));
                    b.names.push_back("e" + std::to_string(j + 1));
                }
                int rc = int(b.rays.size());
                b.basis = {{unit_div(rc, 0), unit_div(rc, s + 1)}, {"pi*H", "xi"}};
            } else if constexpr (std::is_same_v<T, BlowupProduct>) {
                int n = m.n, q = m.n - m.r;
                for (int i = 0; i < n; ++i) {
                    b.rays.push_back(unit(n, i));
                    b.names.push_back("e" + std::to_string(i + 1));
                }
                IntVec v1(n, 0), v2(n, 0), v3(n, -1);
                for (int i = 0; i < q; ++i) v1[i] = -1;
                for (int i = q; i < n; ++i) v2[i] = -1;
                b.rays.insert(b.rays.end(), {v1, v2, v3});
                b.names.insert(b.names.end(), {"v1", "v2", "v3"});
                int rc = int(b.rays.size());
                b.basis = {{unit_div(rc, 0), unit_div(rc, n - 1), unit_div(rc, n + 2)}, {"U", "V", "E"}};
            } else {
                int n = m.n;
                for (int i = 0; i < n; ++i) {
                    b.rays.push_back(unit(n, i));
                    b.names.push_back("e" + std::to_string(i + 1));
                }
                IntVec u1(n, 0), u2(n, -1), u3(n, -1);
                u1[n - 1] = -1;
                u2[n - 1] = -m.b;
                u3[n - 1] = -(m.b + 1);
                b.rays.insert(b.rays.end(), {u1, u2, u3});
                b.names.insert(b.names.end(), {"u1", "u2", "u3"});
                int rc = int(b.rays.size());
                b.basis = {{unit_div(rc, 0), unit_div(rc, n + 2), unit_div(rc, n)}, {"V", "Y", "T"}};
            }
        },
        spec);
    return b;
}

// Floor class of an argument profile evaluated at exact seed arguments.
PicClass seed_class(const ToricModel& model, const std::vector<double>& argFrac) {
    RDivisor d;
    for (const auto& ray : model.rays()) {
        double a = 0.0;
        for (std::size_t i = 0; i < ray.size(); ++i) a += double(ray[i]) * argFrac[i];
        double f = frac(a);
        if (f < 1e-9 || f > 1.0 - 1e-9) f = 0.0;
        d.coeffs.push_back(f);
    }
    return floor_class(real_class_coords(model, d));
}

}  // namespace

std::string grid_label(char family, std::initializer_list<int> idx) {
    std::string out(1, family);
    bool compact = std::all_of(idx.begin(), idx.end(), [](int i) { return i >= 0 && i < 10; });
    bool first = true;
    for (int i : idx) {
        if (!compact && !first) out += '_';
        out += std::to_string(i);
        first = false;
    }
    return out;
}

ModelSpec parse_model_spec(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos) throw Error(ErrorCode::BadModelSpec, "missing ':' in " + std::string(text));
    auto kind = text.substr(0, colon);
    auto rest = text.substr(colon + 1);
    // key=value pairs; a value list continues through bare integers.
    std::vector<std::pair<std::string, std::vector<int>>> kv;
    std::size_t pos = 0;
    while (pos <= rest.size()) {
        auto next = rest.find(',', pos);
        auto tok = rest.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
        if (tok.empty()) throw Error(ErrorCode::BadModelSpec, "empty field in " + std::string(text));
        auto eq = tok.find('=');
        if (eq != std::string_view::npos) {
            kv.push_back({std::string(tok.substr(0, eq)), {parse_int(tok.substr(eq + 1))}});
        } else {
            if (kv.empty()) throw Error(ErrorCode::BadModelSpec, "value without key in " + std::string(text));
            kv.back().second.push_back(parse_int(tok));
        }
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    auto get = [&](const std::string& key) -> const std::vector<int>& {
        for (const auto& [k, v] : kv)
            if (k == key) return v;
        throw Error(ErrorCode::BadModelSpec, "missing key '" + key + "' in " + std::string(text));
    };
    auto scalar = [&](const std::string& key) {
        const auto& v = get(key);
        if (v.size() != 1) throw Error(ErrorCode::BadModelSpec, "key '" + key + "' takes one value");
        return v.front();
    };
    auto expect_keys = [&](std::initializer_list<std::string_view> keys) {
        for (const auto& [k, v] : kv)
            if (std::find(keys.begin(), keys.end(), k) == keys.end())
                throw Error(ErrorCode::BadModelSpec, "unknown key '" + k + "'");
    };
    ModelSpec spec;
    if (kind == "ps") {
        expect_keys({"s"});
        spec = ProjectiveSpace{scalar("s")};
    } else if (kind == "pb") {
        expect_keys({"s", "a"});
        spec = Bundle{scalar("s"), get("a")};
    } else if (kind == "bp") {
        expect_keys({"n", "r"});
        spec = BlowupProduct{scalar("n"), scalar("r")};
    } else if (kind == "bb") {
        expect_keys({"n", "b"});
        spec = BlowupBundle{scalar("n"), scalar("b")};
    } else {
        throw Error(ErrorCode::BadModelSpec, "unknown model kind '" + std::string(kind) + "'");
    }
    validate(spec);
    return spec;
}

std::string to_string(const ModelSpec& spec) {
    return std::visit(
        [](const auto& m) -> std::string {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ProjectiveSpace>) {
                return "ps:s=" + std::to_string(m.s);
            } else if constexpr (std::is_same_v<T, Bundle>) {
                std::string out = "pb:s=" + std::to_string(m.s) + ",a=";
                for (std::size_t i = 0; i < m.a.size(); ++i) out += (i ? "," : "") + std::to_string(m.a[i]);
                return out;
            } else if constexpr (std::is_same_v<T, BlowupProduct>) {
                return "bp:n=" + std::to_string(m.n) + ",r=" + std::to_string(m.r);
            } else {
                return "bb:n=" + std::to_string(m.n) + ",b=" + std::to_string(m.b);
            }
        },
        spec);
}

void validate(const ModelSpec& spec) {
    std::visit(
        [](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            auto fail = [](const std::string& why) { throw Error(ErrorCode::SpecInvariantViolated, why); };
            if constexpr (std::is_same_v<T, ProjectiveSpace>) {
                if (m.s < 1) fail("projective space needs s >= 1");
            } else if constexpr (std::is_same_v<T, Bundle>) {
                if (m.s < 1) fail("bundle needs s >= 1");
                if (m.a.empty()) fail("bundle needs at least one twist");
                if (m.a.front() < 0 || !std::is_sorted(m.a.begin(), m.a.end())) fail("twists must satisfy 0 <= a_1 <= ... <= a_r");
                long sum = 0;
                for (int x : m.a) sum += x;
                if (sum > m.s) fail("sum of twists exceeds s: not Fano");
            } else if constexpr (std::is_same_v<T, BlowupProduct>) {
                if (m.r < 1 || m.r > m.n - 1) fail("need 1 <= r <= n-1");
            } else {
                if (m.n < 2) fail("need n >= 2");
                if (m.b < 0 || m.b >= m.n - 1) fail("need 0 <= b < n-1");
            }
        },
        spec);
}

ToricModel make_model(const ModelSpec& spec) {
    validate(spec);
    auto b = build_rays(spec);
    return build_model(std::move(b.rays), std::move(b.basis), std::move(b.names));
}

std::vector<PicClass> ReferenceCollection::classes() const {
    std::vector<PicClass> out;
    for (const auto& e : entries) out.push_back(e.cls);
    return out;
}

const CollectionEntry* ReferenceCollection::find(const PicClass& cls) const {
    for (const auto& e : entries)
        if (e.cls == cls) return &e;
    return nullptr;
}

const CollectionEntry* ReferenceCollection::find(std::string_view label) const {
    for (const auto& e : entries)
        if (e.label == label) return &e;
    return nullptr;
}

ReferenceCollection reference_collection(const ModelSpec& spec) {
    validate(spec);
    ReferenceCollection rc;
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ProjectiveSpace>) {
                for (int k = 0; k <= m.s; ++k) rc.entries.push_back({grid_label('E', {k}), 'E', {k}, {{k}}});
            } else if constexpr (std::is_same_v<T, Bundle>) {
                int r = int(m.a.size());
                for (int l = 0; l <= r; ++l)
                    for (int k = 0; k <= m.s; ++k) rc.entries.push_back({grid_label('E', {k, l}), 'E', {k, l}, {{k, l}}});
            } else if constexpr (std::is_same_v<T, BlowupProduct>) {
                int q = m.n - m.r;
                for (int l = 0; l <= m.r; ++l)
                    for (int k = 0; k <= q; ++k) rc.entries.push_back({grid_label('E', {k, l}), 'E', {k, l}, {{k, l, 0}}});
                for (int a = 1; a <= q; ++a)
                    for (int c = 1; c <= m.r; ++c) rc.entries.push_back({grid_label('F', {a, c}), 'F', {a, c}, {{a, c, -1}}});
            } else {
                // E_kl = kV + l(Y + T + bV), F_m = (m + b)V + T
                for (int l = 0; l <= 1; ++l)
                    for (int k = 0; k < m.n; ++k)
                        rc.entries.push_back({grid_label('E', {k, l}), 'E', {k, l}, {{k + l * m.b, l, l}}});
                for (int j = 1; j <= m.n - 1; ++j) rc.entries.push_back({grid_label('F', {j}), 'F', {j}, {{j + m.b, 0, 1}}});
            }
        },
        spec);

    // Stable topological order: A precedes B whenever some Ext^i(A, B) is nonzero.
    auto model = make_model(spec);
    auto k = rc.entries.size();
    std::vector<std::vector<bool>> before(k, std::vector<bool>(k, false));
    std::vector<int> indeg(k, 0);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
            if (a == b) continue;
            auto h = line_bundle_cohomology(model, representative(model, rc.entries[b].cls - rc.entries[a].cls));
            if (std::any_of(h.dims.begin(), h.dims.end(), [](auto d) { return d != 0; })) {
                before[a][b] = true;
                ++indeg[b];
            }
        }
    std::vector<CollectionEntry> ordered;
    std::vector<bool> done(k, false);
    while (ordered.size() < k) {
        std::size_t pick = k;
        for (std::size_t a = 0; a < k; ++a)
            if (!done[a] && indeg[a] == 0) { pick = a; break; }
        if (pick == k) {
            // cyclic Ext: not exceptional in any order, keep the remaining entries as listed
            for (std::size_t a = 0; a < k; ++a)
                if (!done[a]) ordered.push_back(rc.entries[a]);
            break;
        }
        done[pick] = true;
        ordered.push_back(rc.entries[pick]);
        for (std::size_t b = 0; b < k; ++b)
            if (before[pick][b]) --indeg[b];
    }
    rc.entries = std::move(ordered);
    return rc;
}

std::vector<std::complex<double>> LGFamily::coefficients(double t) const {
    std::vector<std::complex<double>> c;
    c.reserve(rules.size());
    for (const auto& r : rules) c.push_back(r.base * std::exp(r.rate * t));
    return c;
}

LGFamily lg_family(const ModelSpec& spec) {
    LGFamily fam{spec, make_model(spec), {}, LimitSign::Negative};
    int rc = fam.model.ray_count();
    fam.rules.assign(rc, CoefficientRule{});
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ProjectiveSpace>) {
                fam.tSign = LimitSign::Negative;
            } else if constexpr (std::is_same_v<T, Bundle>) {
                fam.rules[0].rate = 1.0;
                fam.tSign = LimitSign::Negative;
            } else if constexpr (std::is_same_v<T, BlowupProduct>) {
                for (int i = 0; i < m.n; ++i) fam.rules[i].rate = -1.0;
                fam.tSign = LimitSign::Positive;
            } else {
                for (int i = 0; i < m.n; ++i) fam.rules[i].rate = -1.0;
                fam.rules[m.n + 2].base = {0.0, -1.0};
                fam.tSign = LimitSign::Positive;
            }
        },
        spec);
    return fam;
}

std::vector<std::complex<double>> Seed::point() const {
    std::vector<std::complex<double>> z;
    for (std::size_t i = 0; i < modulus.size(); ++i) z.push_back(std::polar(modulus[i], kTau * argFrac[i]));
    return z;
}

Family2Forms blowup_bundle_family2_forms(const BlowupBundle& m) {
    Family2Forms f;
    int d = m.n - 1;
    for (int j = 0; j < d; ++j) {
        f.elimination.push_back(frac((1.0 - m.b) / (4.0 * d) + double(j) / d));
        f.closedForm.push_back(frac(3.0 * (m.b + 1) / (4.0 * d) + double(j) / d));
    }
    return f;
}

SeedSet asymptotic_seeds(const ModelSpec& spec, double t, double tMin) {
    validate(spec);
    SeedSet out{t, {}};
    auto push = [&](std::string label, std::vector<double> mod, std::vector<double> args) {
        for (auto& a : args) a = frac(a);
        out.seeds.push_back({std::move(label), std::move(mod), std::move(args)});
    };
    auto require_t = [&](LimitSign sign) {
        if (std::abs(t) < tMin) throw Error(ErrorCode::ParameterTooSmall, "|t| below tMin");
        if ((sign == LimitSign::Negative) != (t < 0)) throw Error(ErrorCode::ParameterTooSmall, "t has the wrong sign for this family");
    };
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ProjectiveSpace>) {
                for (int k = 0; k <= m.s; ++k)
                    push(grid_label('E', {k}), std::vector<double>(m.s, 1.0), std::vector<double>(m.s, double(k) / (m.s + 1)));
            } else if constexpr (std::is_same_v<T, Bundle>) {
                require_t(LimitSign::Negative);
                int s = m.s, r = int(m.a.size());
                int A = 0;
                for (int x : m.a) A += x;
                for (int l = 0; l <= r; ++l)
                    for (int k = 0; k <= s; ++k) {
                        double zArg = double(l * A) / ((s + 1) * (r + 1)) + double(k) / (s + 1);
                        double wArg = double(l) / (r + 1);
                        std::vector<double> mod(s, std::exp(t / (s + 1))), args(s, zArg);
                        mod.insert(mod.end(), r, 1.0);
                        args.insert(args.end(), r, wArg);
                        push(grid_label('E', {k, l}), mod, args);
                    }
            } else if constexpr (std::is_same_v<T, BlowupProduct>) {
                require_t(LimitSign::Positive);
                int q = m.n - m.r, r = m.r;
                for (int l = 0; l <= r; ++l)
                    for (int k = 0; k <= q; ++k) {
                        std::vector<double> mod(q, std::exp(t / (q + 1))), args(q, double(k) / (q + 1));
                        mod.insert(mod.end(), r, std::exp(t / (r + 1)));
                        args.insert(args.end(), r, double(l) / (r + 1));
                        push(grid_label('E', {k, l}), mod, args);
                    }
                for (int a = 0; a < q; ++a)
                    for (int c = 0; c < r; ++c) {
                        std::vector<double> mod(m.n, 1.0), args(q, 1.0 / (2 * q) + double(a) / q);
                        args.insert(args.end(), r, 1.0 / (2 * r) + double(c) / r);
                        push(grid_label('F', {a + 1, c + 1}), mod, args);
                    }
            } else {
                require_t(LimitSign::Positive);
                int n = m.n, b = m.b;
                for (int l = 0; l <= 1; ++l)
                    for (int k = 0; k < n; ++k) {
                        double zArg = double(k) / n + (l == 1 ? double(b) / (2 * n) : 0.0);
                        std::vector<double> mod(n - 1, std::exp((2.0 - b) * t / (2.0 * n))), args(n - 1, zArg);
                        mod.push_back(std::exp(t / 2.0));
                        args.push_back(l == 1 ? 0.5 : 0.0);
                        push(grid_label('E', {k, l}), mod, args);
                    }
                // w = i family; labels read off the floor class when it lands on an unused F class.
                auto model = make_model(spec);
                auto coll = reference_collection(spec);
                auto forms = blowup_bundle_family2_forms(m);
                std::set<std::string> used;
                std::vector<std::pair<std::vector<double>, std::string>> pending;
                for (int j = 0; j < n - 1; ++j) {
                    std::vector<double> args(n - 1, forms.elimination[j]);
                    args.push_back(0.25);
                    auto cls = seed_class(model, args);
                    const auto* hit = coll.find(cls);
                    std::string label;
                    if (hit && hit->family == 'F' && !used.count(hit->label)) label = hit->label;
                    pending.push_back({args, label});
                    if (!label.empty()) used.insert(label);
                }
                for (int j = 0; j < n - 1; ++j) {
                    auto& [args, label] = pending[j];
                    if (label.empty()) {
                        // fall back to the closed-form index, skipping labels already taken
                        for (int c = j + 1;; c = c % (n - 1) + 1) {
                            auto cand = grid_label('F', {c});
                            if (!used.count(cand)) {
                                label = cand;
                                used.insert(cand);
                                break;
                            }
                        }
                    }
                    push(label, std::vector<double>(n, 1.0), args);
                }
            }
        },
        spec);
    return out;
}

}  // namespace lgcrit
