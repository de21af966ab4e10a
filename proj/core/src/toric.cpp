#include "lgcrit/toric.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "lgcrit/errors.hpp"
#include "model_data.hpp"

namespace lgcrit {

namespace {

void for_each_subset(int total, int size, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> idx(size);
    std::iota(idx.begin(), idx.end(), 0);
    if (size > total) return;
    while (true) {
        fn(idx);
        int i = size - 1;
        while (i >= 0 && idx[i] == total - size + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
}

IntMatrix rows_of(const std::vector<IntVec>& rays, const std::vector<int>& pick, int n) {
    IntMatrix m(int(pick.size()), n);
    for (std::size_t i = 0; i < pick.size(); ++i)
        for (int j = 0; j < n; ++j) m(int(i), j) = rays[pick[i]][j];
    return m;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

// Rank of an integer matrix modulo a prime.
int rank_mod(std::vector<std::vector<std::int64_t>> a, std::int64_t p) {
    if (a.empty()) return 0;
    int rows = int(a.size()), cols = int(a[0].size());
    for (auto& r : a)
        for (auto& x : r) x = ((x % p) + p) % p;
    auto inv = [p](std::int64_t x) {
        std::int64_t r = 1, e = p - 2;
        while (e) {
            if (e & 1) r = r * x % p;
            x = x * x % p;
            e >>= 1;
        }
        return r;
    };
    int rk = 0;
    for (int c = 0; c < cols && rk < rows; ++c) {
        int piv = -1;
        for (int i = rk; i < rows; ++i)
            if (a[i][c]) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(a[piv], a[rk]);
        auto s = inv(a[rk][c]);
        for (int j = c; j < cols; ++j) a[rk][j] = a[rk][j] * s % p;
        for (int i = rk + 1; i < rows; ++i) {
            if (!a[i][c]) continue;
            auto f = a[i][c];
            for (int j = c; j < cols; ++j) a[i][j] = ((a[i][j] - f * a[rk][j]) % p + p) % p;
        }
        ++rk;
    }
    return rk;
}

int boundary_rank(const std::vector<std::uint32_t>& upper, const std::vector<std::uint32_t>& lower) {
    if (upper.empty() || lower.empty()) return 0;
    std::map<std::uint32_t, int> where;
    for (std::size_t i = 0; i < lower.size(); ++i) where[lower[i]] = int(i);
    std::vector<std::vector<std::int64_t>> m(upper.size(), std::vector<std::int64_t>(lower.size(), 0));
    for (std::size_t i = 0; i < upper.size(); ++i) {
        int pos = 0;
        for (int bit = 0; bit < 32; ++bit) {
            if (!(upper[i] >> bit & 1u)) continue;
            auto face = upper[i] & ~(1u << bit);
            auto it = where.find(face);
            if (it != where.end()) m[i][it->second] = (pos % 2 == 0) ? 1 : -1;
            ++pos;
        }
    }
    // Two large primes; torsion in these tiny complexes cannot involve them.
    return std::max(rank_mod(m, 2147483647), rank_mod(m, 2147483629));
}

std::vector<std::int64_t> reduced_cohomology(const std::vector<std::uint32_t>& simplices, std::uint32_t mask, int n) {
    // by dimension -1 .. n-1
    std::vector<std::vector<std::uint32_t>> byDim(n + 1);
    for (auto s : simplices)
        if ((s & ~mask) == 0) byDim[std::popcount(s)].push_back(s);
    std::vector<int> ranks(n + 2, 0);  // ranks[k] = rank of boundary from dim k-1 to k-2
    for (int k = 1; k <= n; ++k) ranks[k] = boundary_rank(byDim[k], byDim[k - 1]);
    std::vector<std::int64_t> out(n + 1, 0);
    bool any = false;
    for (int k = 0; k <= n; ++k) {
        out[k] = std::int64_t(byDim[k].size()) - ranks[k] - ranks[k + 1];
        any = any || out[k] != 0;
    }
    if (!any) return {};
    return out;
}

// Is the cone {m : <m,n_F> <= 0 for F in mask, >= 0 otherwise} nonzero?
bool recession_nonzero(const std::vector<IntVec>& rays, std::uint32_t mask, int n) {
    int r = int(rays.size());
    auto feasible = [&](const IntVec& d) {
        for (int f = 0; f < r; ++f) {
            auto v = dot(d, rays[f]);
            if ((mask >> f & 1u) ? v > 0 : v < 0) return false;
        }
        return true;
    };
    if (n == 1) return feasible(IntVec{1}) || feasible(IntVec{-1});
    bool found = false;
    for_each_subset(r, n - 1, [&](const std::vector<int>& pick) {
        if (found) return;
        auto m = rows_of(rays, pick, n);
        auto ker = integer_kernel(m);
        if (ker.size() != 1) return;
        IntVec neg = ker[0];
        for (auto& x : neg) x = -x;
        found = feasible(ker[0]) || feasible(neg);
    });
    return found;
}

struct Bounds {
    // lower[F] <= <m, n_F> <= upper[F]; absent side encoded by flags
    std::vector<std::int64_t> value;
    std::vector<bool> isUpper;
};

Bounds region_bounds(const TDivisor& d, std::uint32_t mask) {
    Bounds b;
    int r = int(d.coeffs.size());
    b.value.resize(r);
    b.isUpper.resize(r);
    for (int f = 0; f < r; ++f) {
        bool in = mask >> f & 1u;
        b.isUpper[f] = in;
        b.value[f] = in ? -d.coeffs[f] - 1 : -d.coeffs[f];
    }
    return b;
}

bool satisfies(const Bounds& b, const std::vector<IntVec>& rays, std::span<const std::int64_t> num, std::int64_t den) {
    for (std::size_t f = 0; f < rays.size(); ++f) {
        auto v = dot(num, rays[f]);
        auto lim = b.value[f] * den;
        if (b.isUpper[f] ? v > lim : v < lim) return false;
    }
    return true;
}

// Integer bounding box of the region's vertices; nullopt when the region has no vertex.
std::optional<std::pair<IntVec, IntVec>> region_box(const detail::ModelData& md, const Bounds& b) {
    int n = md.n;
    IntVec lo(n, std::numeric_limits<std::int64_t>::max()), hi(n, std::numeric_limits<std::int64_t>::min());
    bool any = false;
    IntVec rhs(n), num(n);
    for (const auto& s : md.solvers) {
        for (int i = 0; i < n; ++i) rhs[i] = b.value[s.rays[i]];
        num = s.inverse.apply(rhs);
        if (!satisfies(b, md.rays, num, s.denominator)) continue;
        any = true;
        for (int i = 0; i < n; ++i) {
            lo[i] = std::min(lo[i], floor_div(num[i], s.denominator));
            hi[i] = std::max(hi[i], ceil_div(num[i], s.denominator));
        }
    }
    if (!any) return std::nullopt;
    return std::make_pair(lo, hi);
}

template <class Fn>
void scan_box(const IntVec& lo, const IntVec& hi, Fn&& fn) {
    int n = int(lo.size());
    IntVec m = lo;
    while (true) {
        fn(m);
        int i = n - 1;
        while (i >= 0 && m[i] == hi[i]) {
            m[i] = lo[i];
            --i;
        }
        if (i < 0) return;
        ++m[i];
    }
}

void check_length(const ToricModel& model, std::size_t len) {
    if (int(len) != model.ray_count()) throw Error(ErrorCode::LengthMismatch, "divisor length does not match ray count");
}

}  // namespace

TDivisor TDivisor::unit(int rays, int index) {
    TDivisor d = zero(rays);
    d.coeffs.at(index) = 1;
    return d;
}

TDivisor TDivisor::operator+(const TDivisor& o) const {
    if (coeffs.size() != o.coeffs.size()) throw Error(ErrorCode::LengthMismatch, "divisor sum");
    TDivisor r = *this;
    for (std::size_t i = 0; i < coeffs.size(); ++i) r.coeffs[i] += o.coeffs[i];
    return r;
}

TDivisor TDivisor::operator-(const TDivisor& o) const { return *this + o * -1; }

TDivisor TDivisor::operator*(std::int64_t k) const {
    TDivisor r = *this;
    for (auto& c : r.coeffs) c *= k;
    return r;
}

bool TDivisor::is_effective() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](auto c) { return c >= 0; });
}

bool TDivisor::is_zero() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](auto c) { return c == 0; });
}

PicClass PicClass::operator+(const PicClass& o) const {
    if (coords.size() != o.coords.size()) throw Error(ErrorCode::LengthMismatch, "class sum");
    PicClass r = *this;
    for (std::size_t i = 0; i < coords.size(); ++i) r.coords[i] += o.coords[i];
    return r;
}

PicClass PicClass::operator-(const PicClass& o) const {
    if (coords.size() != o.coords.size()) throw Error(ErrorCode::LengthMismatch, "class difference");
    PicClass r = *this;
    for (std::size_t i = 0; i < coords.size(); ++i) r.coords[i] -= o.coords[i];
    return r;
}

int ToricModel::dim() const noexcept { return data_->n; }
int ToricModel::ray_count() const noexcept { return int(data_->rays.size()); }
int ToricModel::pic_rank() const noexcept { return ray_count() - dim(); }
int ToricModel::euler() const noexcept { return int(data_->facets.size()); }
const std::vector<IntVec>& ToricModel::rays() const noexcept { return data_->rays; }
const std::vector<std::string>& ToricModel::ray_names() const noexcept { return data_->names; }
const std::vector<Facet>& ToricModel::facets() const noexcept { return data_->facets; }
const std::vector<std::string>& ToricModel::basis_labels() const noexcept { return data_->basisLabels; }
const std::vector<TDivisor>& ToricModel::basis_representatives() const noexcept { return data_->basisReps; }
const IntMatrix& ToricModel::class_matrix() const noexcept { return data_->classMatrix; }
const IntMatrix& ToricModel::principal_matrix() const noexcept { return data_->principal; }
const std::vector<int>& ToricModel::representative_support() const noexcept { return data_->repSupport; }

TDivisor ToricModel::principal_divisor(std::span<const std::int64_t> character) const {
    return {data_->principal.apply(character)};
}

TDivisor ToricModel::anticanonical() const { return {IntVec(ray_count(), 1)}; }

std::string ToricModel::format_divisor(const TDivisor& d) const {
    check_length(*this, d.coeffs.size());
    std::string out;
    for (int f = 0; f < ray_count(); ++f) {
        auto c = d.coeffs[f];
        if (c == 0) continue;
        if (c > 0 && !out.empty()) out += '+';
        if (c == -1) out += '-';
        else if (c != 1) out += std::to_string(c);
        out += "V(" + data_->names[f] + ")";
    }
    return out.empty() ? "0" : out;
}

ToricModel build_model(std::vector<IntVec> vertices, std::optional<PicBasisSpec> basis, std::vector<std::string> rayNames) {
    auto md = std::make_shared<detail::ModelData>();
    if (vertices.empty()) throw Error(ErrorCode::DegenerateInput, "no vertices");
    int n = int(vertices.front().size());
    int r = int(vertices.size());
    if (n < 1 || r < n + 1) throw Error(ErrorCode::DegenerateInput, "need at least n+1 vertices");
    if (r > 31) throw Error(ErrorCode::DegenerateInput, "too many rays");
    for (const auto& v : vertices) {
        if (int(v.size()) != n) throw Error(ErrorCode::DegenerateInput, "vertices of mixed dimension");
        if (gcd_of(v) != 1) throw Error(ErrorCode::DegenerateInput, "vertex is not primitive");
    }
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j)
            if (vertices[i] == vertices[j]) throw Error(ErrorCode::DegenerateInput, "duplicate vertex");
    if (rank(IntMatrix::from_rows(vertices, n)) < n) throw Error(ErrorCode::DegenerateInput, "vertices do not span");

    if (rayNames.empty())
        for (int i = 0; i < r; ++i) rayNames.push_back("r" + std::to_string(i));
    if (int(rayNames.size()) != r) throw Error(ErrorCode::LengthMismatch, "ray name count");

    md->n = n;
    md->rays = vertices;
    md->names = std::move(rayNames);

    // Facets by subset scan.
    for_each_subset(r, n, [&](const std::vector<int>& pick) {
        auto a = rows_of(vertices, pick, n);
        RationalInverse inv;
        if (!invert(a, inv)) return;
        IntVec ones(n, 1);
        auto num = inv.numerators.apply(ones);  // normal = num / den
        auto den = inv.denominator;
        bool supporting = true, touching = false;
        for (int f = 0; f < r && supporting; ++f) {
            if (std::find(pick.begin(), pick.end(), f) != pick.end()) continue;
            auto v = dot(num, vertices[f]);
            if (v > den) supporting = false;
            else if (v == den) touching = true;
        }
        if (!supporting) return;
        if (touching) throw Error(ErrorCode::NotSmooth, "non-simplicial facet");
        for (auto x : num)
            if (x % den != 0) throw Error(ErrorCode::NotReflexive, "facet hyperplane not at lattice distance 1");
        if (std::abs(determinant(a)) != 1) throw Error(ErrorCode::NotSmooth, "facet is not a lattice basis");
        Facet fct;
        fct.rays = pick;
        for (auto x : num) fct.normal.push_back(x / den);
        md->facets.push_back(std::move(fct));
    });

    // Completeness: every ridge lies on exactly two facets.
    {
        std::map<std::vector<int>, int> ridges;
        for (const auto& f : md->facets)
            for (int skip = 0; skip < n; ++skip) {
                std::vector<int> ridge;
                for (int i = 0; i < n; ++i)
                    if (i != skip) ridge.push_back(f.rays[i]);
                ++ridges[ridge];
            }
        if (md->facets.empty()) throw Error(ErrorCode::NotReflexive, "origin not interior");
        for (const auto& [ridge, count] : ridges)
            if (count != 2) throw Error(ErrorCode::NotReflexive, "origin not interior");
    }

    md->principal = IntMatrix::from_rows(vertices, n);
    int rho = r - n;

    std::vector<int> complement;
    {
        const auto& f0 = md->facets.front().rays;
        for (int f = 0; f < r; ++f)
            if (std::find(f0.begin(), f0.end(), f) == f0.end()) complement.push_back(f);
    }

    if (basis) {
        if (int(basis->representatives.size()) != rho || int(basis->labels.size()) != rho)
            throw Error(ErrorCode::SingularBasis, "basis size does not match Picard rank");
        md->basisReps = basis->representatives;
        md->basisLabels = basis->labels;
    } else {
        for (int f : complement) {
            md->basisReps.push_back(TDivisor::unit(r, f));
            md->basisLabels.push_back("V(" + md->names[f] + ")");
        }
    }
    for (const auto& rep : md->basisReps)
        if (int(rep.coeffs.size()) != r) throw Error(ErrorCode::LengthMismatch, "basis representative length");

    // [reps | principal] must be unimodular; its inverse's first rho rows give the class map.
    {
        IntMatrix m(r, r);
        for (int j = 0; j < rho; ++j)
            for (int i = 0; i < r; ++i) m(i, j) = md->basisReps[j].coeffs[i];
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < r; ++i) m(i, rho + j) = md->principal(i, j);
        RationalInverse inv;
        if (!invert(m, inv) || inv.denominator != 1)
            throw Error(ErrorCode::SingularBasis, "representatives and principal divisors do not span");
        md->classMatrix = IntMatrix(rho, r);
        for (int i = 0; i < rho; ++i)
            for (int j = 0; j < r; ++j) md->classMatrix(i, j) = inv.numerators(i, j);
        if (!(md->classMatrix * md->principal).is_zero())
            throw Error(ErrorCode::SingularBasis, "class map does not kill principal divisors");
    }

    md->repSupport = complement;
    {
        IntMatrix sub(rho, rho);
        for (int i = 0; i < rho; ++i)
            for (int j = 0; j < rho; ++j) sub(i, j) = md->classMatrix(i, complement[j]);
        RationalInverse inv;
        if (!invert(sub, inv) || inv.denominator != 1)
            throw Error(ErrorCode::SingularBasis, "representative support is not unimodular");
        md->repInverse = inv.numerators;
    }

    // Boundary complex of the fan.
    std::set<std::uint32_t> simplexSet;
    for (const auto& f : md->facets) {
        std::uint32_t full = 0;
        for (int v : f.rays) full |= 1u << v;
        for (std::uint32_t sub = full;; sub = (sub - 1) & full) {
            simplexSet.insert(sub);
            if (sub == 0) break;
        }
    }
    std::vector<std::uint32_t> simplices(simplexSet.begin(), simplexSet.end());
    std::uint32_t masks = 1u << r;
    md->reducedCohomology.resize(masks);
    md->unboundedMask.assign(masks, false);
    for (std::uint32_t mask = 0; mask < masks; ++mask) {
        md->reducedCohomology[mask] = reduced_cohomology(simplices, mask, n);
        if (md->reducedCohomology[mask].empty()) continue;
        md->nonzeroMasks.push_back(mask);
        md->unboundedMask[mask] = recession_nonzero(vertices, mask, n);
    }

    for_each_subset(r, n, [&](const std::vector<int>& pick) {
        RationalInverse inv;
        if (!invert(rows_of(vertices, pick, n), inv)) return;
        if (inv.denominator < 0) {
            inv.denominator = -inv.denominator;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) inv.numerators(i, j) = -inv.numerators(i, j);
        }
        md->solvers.push_back({pick, inv.numerators, inv.denominator});
    });

    ToricModel model;
    model.data_ = std::move(md);
    return model;
}

PicClass divisor_class(const ToricModel& model, const TDivisor& d) {
    check_length(model, d.coeffs.size());
    return {model.class_matrix().apply(std::span<const std::int64_t>(d.coeffs))};
}

RPicClass real_class_coords(const ToricModel& model, const RDivisor& d) {
    check_length(model, d.coeffs.size());
    return {model.class_matrix().apply(std::span<const double>(d.coeffs))};
}

IntVec rational_class_numerators(const ToricModel& model, const TDivisor& numer) {
    return divisor_class(model, numer).coords;
}

PicClass floor_class(const RPicClass& b, double snapEps) {
    PicClass out;
    out.coords.reserve(b.coords.size());
    for (double x : b.coords) {
        double r = std::round(x);
        if (std::abs(x - r) <= snapEps) x = r;
        out.coords.push_back(static_cast<std::int64_t>(std::floor(x)));
    }
    return out;
}

PicClass floor_rational(std::span<const std::int64_t> numer, std::int64_t denominator) {
    PicClass out;
    for (auto x : numer) out.coords.push_back(floor_div(x, denominator));
    return out;
}

TDivisor representative(const ToricModel& model, const PicClass& cls) {
    const auto& md = model.data();
    if (int(cls.coords.size()) != model.pic_rank()) throw Error(ErrorCode::LengthMismatch, "class length");
    auto x = md.repInverse.apply(std::span<const std::int64_t>(cls.coords));
    TDivisor d = TDivisor::zero(model.ray_count());
    for (std::size_t i = 0; i < x.size(); ++i) d.coeffs[md.repSupport[i]] = x[i];
    return d;
}

HomBasis hom_basis(const ToricModel& model, const PicClass& source, const PicClass& target) {
    const auto& md = model.data();
    HomBasis out{source, target, {}};
    auto rep = representative(model, target - source);
    auto bounds = region_bounds(rep, 0);
    auto box = region_box(md, bounds);
    if (!box) return out;
    scan_box(box->first, box->second, [&](const IntVec& m) {
        if (!satisfies(bounds, md.rays, m, 1)) return;
        out.entries.push_back({m, rep + model.principal_divisor(m)});
    });
    return out;
}

CohomologyTable line_bundle_cohomology(const ToricModel& model, const TDivisor& d) {
    check_length(model, d.coeffs.size());
    const auto& md = model.data();
    CohomologyTable table{std::vector<std::int64_t>(md.n + 1, 0)};
    for (auto mask : md.nonzeroMasks) {
        auto bounds = region_bounds(d, mask);
        auto box = region_box(md, bounds);
        if (!box) continue;
        if (md.unboundedMask[mask]) throw Error(ErrorCode::UnboundedRegion, "sign region with nonzero cohomology is unbounded");
        std::int64_t count = 0;
        scan_box(box->first, box->second, [&](const IntVec& m) {
            if (satisfies(bounds, md.rays, m, 1)) ++count;
        });
        if (count == 0) continue;
        const auto& dims = md.reducedCohomology[mask];
        // dims[k] = H~^{k-1}, contributing to h^k
        for (int k = 0; k <= md.n; ++k) table.dims[k] += dims[k] * count;
    }
    return table;
}

ExceptionalityReport is_strongly_exceptional(const ToricModel& model, std::span<const PicClass> collection) {
    ExceptionalityReport rep;
    int k = int(collection.size());
    int n = model.dim();
    rep.sizeMatchesEuler = (k == model.euler());
    bool exceptional = true, strong = true;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            // Ext^p(E_i, E_j) = H^p(E_j - E_i)
            auto h = line_bundle_cohomology(model, representative(model, collection[j] - collection[i]));
            for (int p = 0; p <= n; ++p) {
                auto dim = h.dims[p];
                bool bad = false;
                if (i == j) {
                    bad = (p == 0) ? dim != 1 : dim != 0;
                    if (bad) exceptional = false;
                } else if (i > j) {
                    bad = dim != 0;
                    if (bad) exceptional = false;
                } else if (p > 0) {
                    bad = dim != 0;
                    if (bad) strong = false;
                }
                if (bad) rep.failures.push_back({i, j, p, dim});
            }
        }
    rep.isExceptional = exceptional;
    rep.isStrong = exceptional && strong;
    return rep;
}

Quiver build_quiver(const ToricModel& model, std::span<const PicClass> collection) {
    auto report = is_strongly_exceptional(model, collection);
    if (!report.isStrong) throw Error(ErrorCode::NotStronglyExceptional, "quiver requires a strongly exceptional collection");
    int k = int(collection.size());
    Quiver q;
    q.vertices.assign(collection.begin(), collection.end());
    std::vector<std::vector<std::set<IntVec>>> homs(k, std::vector<std::set<IntVec>>(k));
    std::vector<std::vector<HomBasis>> bases(k, std::vector<HomBasis>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            if (i == j) continue;
            bases[i][j] = hom_basis(model, collection[i], collection[j]);
            for (const auto& e : bases[i][j].entries) homs[i][j].insert(e.divisor.coeffs);
        }
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            if (i == j) continue;
            for (const auto& e : bases[i][j].entries) {
                bool factors = false;
                for (int mid = 0; mid < k && !factors; ++mid) {
                    if (mid == i || mid == j) continue;
                    for (const auto& first : homs[i][mid]) {
                        IntVec rest = e.divisor.coeffs;
                        for (std::size_t f = 0; f < rest.size(); ++f) rest[f] -= first[f];
                        if (homs[mid][j].count(rest)) { factors = true; break; }
                    }
                }
                if (!factors) q.edges.push_back({i, j, e.divisor});
            }
        }
    return q;
}

}  // namespace lgcrit
