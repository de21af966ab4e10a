#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "lgcrit/errors.hpp"
#include "lgcrit/lattice.hpp"
#include "lgcrit/toric.hpp"
#include "support.hpp"

using namespace lgcrit;
using lgtest::unit;

TEST_SUITE("lattice") {
    TEST_CASE("determinant and rank") {
        auto m = IntMatrix::from_rows({{2, 1, 0}, {1, 3, 1}, {0, 1, 4}}, 3);
        CHECK(determinant(m) == 2 * (12 - 1) - 1 * (4 - 0));
        CHECK(rank(m) == 3);
        auto s = IntMatrix::from_rows({{1, 2, 3}, {2, 4, 6}}, 3);
        CHECK(rank(s) == 1);
        CHECK(determinant(IntMatrix::from_rows({{1, 2}, {2, 4}}, 2)) == 0);
    }

    TEST_CASE("integer kernel is primitive and annihilated") {
        auto m = IntMatrix::from_rows({{1, 0, -1, 0}, {0, 1, 1, -1}}, 4);
        auto ker = integer_kernel(m);
        REQUIRE(ker.size() == 2);
        for (const auto& v : ker) {
            CHECK(m.apply(v) == IntVec{0, 0});
            CHECK(gcd_of(v) == 1);
        }
    }

    TEST_CASE("exact inverse") {
        auto m = IntMatrix::from_rows({{2, 1}, {1, 1}}, 2);
        RationalInverse inv;
        REQUIRE(invert(m, inv));
        CHECK_FALSE(invert(IntMatrix::from_rows({{1, 2}, {2, 4}}, 2), inv));
    }

    TEST_CASE("length mismatch") { CHECK_THROWS_AS(dot(IntVec{1, 2}, IntVec{1}), Error); }
}

TEST_SUITE("toric") {
    TEST_CASE("projective plane") {
        auto m = build_model({{1, 0}, {0, 1}, {-1, -1}});
        CHECK(m.facets().size() == 3);
        CHECK(m.euler() == 3);
        CHECK(m.pic_rank() == 1);
        for (int F = 0; F < 3; ++F) CHECK(std::abs(divisor_class(m, unit(m, F)).coords[0]) == 1);
    }

    TEST_CASE("hirzebruch from raw vertices") {
        auto m = build_model({{1, 0}, {0, 1}, {-1, 1}, {0, -1}});
        CHECK(m.facets().size() == 4);
        CHECK(m.pic_rank() == 2);
    }

    TEST_CASE("bad polytopes") {
        CHECK_THROWS_AS(build_model({{1, 0}, {0, 1}}), Error);
        try {
            build_model({{1, 0}, {0, 1}, {-1, -2}});
            FAIL("expected NotSmooth or NotReflexive");
        } catch (const Error& e) {
            CHECK((e.code() == ErrorCode::NotSmooth || e.code() == ErrorCode::NotReflexive));
        }
        try {
            build_model({{1, 0, 0}, {0, 1, 0}, {-1, -1, 0}});
            FAIL("expected DegenerateInput");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::DegenerateInput);
        }
        try {
            build_model({{1, 0}, {0, 1}, {1, 1}});
            FAIL("expected NotReflexive");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NotReflexive);
        }
    }

    TEST_CASE("class map of the hirzebruch surface") {
        auto m = make_model(lgtest::kHirzebruch);
        // rays v0, v1, e0, e1
        CHECK(divisor_class(m, unit(m, 0)).coords == IntVec{1, 0});
        CHECK(divisor_class(m, unit(m, 3)).coords == IntVec{-1, 1});
        CHECK(divisor_class(m, unit(m, 1) - unit(m, 0)).coords == IntVec{0, 0});
        CHECK_THROWS_AS(divisor_class(m, TDivisor{{1, 2}}), Error);
    }

    TEST_CASE("real class coordinates") {
        auto m = make_model(lgtest::kHirzebruch);
        auto b = real_class_coords(m, RDivisor{{0.25, 0.25, 0.5, 0.5}});
        REQUIRE(b.coords.size() == 2);
        CHECK(b.coords[0] == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(b.coords[1] == doctest::Approx(1.0).epsilon(1e-12));
        auto z = real_class_coords(m, RDivisor{{0, 0, 0, 0}});
        CHECK(z.coords == std::vector<double>{0.0, 0.0});
        TDivisor d{{2, -1, 3, 1}};
        auto r = real_class_coords(m, RDivisor{{2, -1, 3, 1}});
        auto c = divisor_class(m, d);
        for (int i = 0; i < 2; ++i) CHECK(r.coords[i] == doctest::Approx(double(c.coords[i])));
    }

    TEST_CASE("floor class") {
        CHECK(floor_class(RPicClass{{1.0, 2.0}}).coords == IntVec{1, 2});
        CHECK(floor_class(RPicClass{{0.74999, 0.5}}, 1e-6).coords == IntVec{0, 0});
        CHECK(floor_class(RPicClass{{1.9999999, 1.25}}, 1e-6).coords == IntVec{2, 1});
        CHECK(floor_class(RPicClass{{-0.5, -1e-9}}).coords == IntVec{-1, 0});
    }

    TEST_CASE("floor class is the identity on integers and monotone") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        for (int trial = 0; trial < 500; ++trial) {
            std::int64_t k = std::int64_t(std::floor(u(rng)));
            CHECK(floor_class(RPicClass{{double(k)}}).coords[0] == k);
            double a = u(rng), b = u(rng);
            if (a > b) std::swap(a, b);
            CHECK(floor_class(RPicClass{{a}}).coords[0] <= floor_class(RPicClass{{b}}).coords[0]);
        }
    }

    TEST_CASE("hom basis on the hirzebruch surface") {
        auto m = make_model(lgtest::kHirzebruch);
        PicClass zero{{0, 0}}, H{{1, 0}}, xi{{0, 1}};
        auto toXi = hom_basis(m, zero, xi);
        std::set<TDivisor> got;
        for (const auto& e : toXi.entries) got.insert(e.divisor);
        std::set<TDivisor> want{unit(m, 2), unit(m, 3) + unit(m, 0), unit(m, 3) + unit(m, 1)};
        CHECK(got == want);
        CHECK(hom_basis(m, zero, H).size() == 2);
        CHECK(hom_basis(m, xi, zero).size() == 0);
        for (const auto& e : toXi.entries) CHECK(e.divisor.is_effective());
    }

    TEST_CASE("hirzebruch cohomology") {
        auto m = make_model(lgtest::kHirzebruch);
        CHECK(line_bundle_cohomology(m, TDivisor::zero(4)).dims == std::vector<std::int64_t>{1, 0, 0});
        CHECK(line_bundle_cohomology(m, TDivisor{{-1, -1, 0, 0}}).dims == std::vector<std::int64_t>{0, 1, 0});
        CHECK(line_bundle_cohomology(m, TDivisor{{-1, -1, -1, -1}}).dims == std::vector<std::int64_t>{0, 0, 1});
    }

    TEST_CASE("h0 against brute force lattice point count") {
        std::mt19937_64 rng(5);
        for (auto spec : {ModelSpec{lgtest::kHirzebruch}, ModelSpec{ProjectiveSpace{2}}, ModelSpec{ProjectiveSpace{3}}}) {
            auto m = make_model(spec);
            for (int trial = 0; trial < 40; ++trial) {
                auto d = lgtest::random_divisor(rng, m.ray_count(), -3, 3);
                CHECK(line_bundle_cohomology(m, d).dims[0] == lgtest::brute_h0(m, d, 12));
            }
        }
    }

    TEST_CASE("projective space h0 is a binomial coefficient") {
        for (int s = 1; s <= 4; ++s) {
            auto m = make_model(ProjectiveSpace{s});
            for (int d = 0; d <= 4; ++d) {
                auto D = unit(m, 0) * d;
                CHECK(line_bundle_cohomology(m, D).dims[0] == lgtest::binomial(s + d, s));
            }
            // top cohomology of O(-d) is C(d-1, s)
            for (int d = s + 1; d <= s + 3; ++d)
                CHECK(line_bundle_cohomology(m, unit(m, 0) * -d).dims[s] == lgtest::binomial(d - 1, s));
        }
    }

    TEST_CASE("model invariants") {
        for (const auto& spec : lgtest::desk_models()) {
            auto m = make_model(spec);
            CAPTURE(to_string(spec));
            CHECK((m.class_matrix() * m.principal_matrix()).is_zero());
            CHECK(int(m.facets().size()) == m.euler());
            for (const auto& f : m.facets()) {
                IntMatrix a(m.dim(), m.dim());
                for (int i = 0; i < m.dim(); ++i)
                    for (int j = 0; j < m.dim(); ++j) a(i, j) = m.rays()[f.rays[i]][j];
                CHECK(std::abs(determinant(a)) == 1);
            }
        }
    }

    TEST_CASE("serre duality on random divisors") {
        std::vector<ModelSpec> specs = lgtest::desk_models();
        specs.push_back(ProjectiveSpace{2});
        specs.push_back(ProjectiveSpace{3});
        std::mt19937_64 rng(2024);
        for (const auto& spec : specs) {
            auto m = make_model(spec);
            const int n = m.dim();
            CAPTURE(to_string(spec));
            for (int trial = 0; trial < 200; ++trial) {
                auto d = lgtest::random_divisor(rng, m.ray_count(), -3, 3);
                auto K = TDivisor::zero(m.ray_count()) - m.anticanonical();
                auto a = line_bundle_cohomology(m, d);
                auto b = line_bundle_cohomology(m, K - d);
                for (int i = 0; i <= n; ++i) CHECK(a.dims[i] == b.dims[n - i]);
            }
        }
    }

    TEST_CASE("h0 equals the hom basis size") {
        std::mt19937_64 rng(99);
        for (const auto& spec : lgtest::desk_models()) {
            auto m = make_model(spec);
            PicClass zero{IntVec(m.pic_rank(), 0)};
            for (int trial = 0; trial < 30; ++trial) {
                auto d = lgtest::random_divisor(rng, m.ray_count(), -1, 3);
                auto cls = divisor_class(m, d);
                auto rep = representative(m, cls);
                CHECK(line_bundle_cohomology(m, rep).dims[0] == std::int64_t(hom_basis(m, zero, cls).size()));
                CHECK(line_bundle_cohomology(m, d).dims[0] == std::int64_t(hom_basis(m, zero, cls).size()));
            }
        }
    }

    TEST_CASE("hom basis is every effective divisor in the class") {
        auto m = make_model(lgtest::kBundle312);
        PicClass source{{1, 0}};
        PicClass target{{3, 1}};
        auto basis = hom_basis(m, source, target);
        std::multiset<TDivisor> got;
        for (const auto& e : basis.entries) got.insert(e.divisor);
        std::multiset<TDivisor> want;
        TDivisor d = TDivisor::zero(m.ray_count());
        while (true) {
            if (divisor_class(m, d) == target - source) want.insert(d);
            int i = 0;
            while (i < m.ray_count() && d.coeffs[i] == 4) d.coeffs[i++] = 0;
            if (i == m.ray_count()) break;
            ++d.coeffs[i];
        }
        CHECK(got == want);
    }

    TEST_CASE("strong exceptionality") {
        auto p2 = make_model(ProjectiveSpace{2});
        std::vector<PicClass> beilinson{{{0}}, {{1}}, {{2}}};
        auto r = is_strongly_exceptional(p2, beilinson);
        CHECK(r.isExceptional);
        CHECK(r.isStrong);
        CHECK(r.sizeMatchesEuler);

        auto h = make_model(lgtest::kHirzebruch);
        std::vector<PicClass> coll{{{0, 0}}, {{1, 0}}, {{0, 1}}, {{1, 1}}};
        CHECK(is_strongly_exceptional(h, coll).isStrong);
        // Hom(pi*H, xi) is nonzero, so xi may not precede pi*H
        std::vector<PicClass> swapped{{{0, 0}}, {{0, 1}}, {{1, 0}}, {{1, 1}}};
        CHECK_FALSE(is_strongly_exceptional(h, swapped).isStrong);
        std::vector<PicClass> bad{{{0, 0}}, {{2, 0}}};
        auto rb = is_strongly_exceptional(h, bad);
        CHECK_FALSE(rb.isExceptional);
        CHECK_FALSE(rb.failures.empty());
    }
}

namespace {

/// Edges by divisor-sum factorisation, computed from hom_basis alone.
std::size_t irreducible_edges(const ToricModel& m, const std::vector<PicClass>& c) {
    std::size_t edges = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = 0; j < c.size(); ++j) {
            if (i == j) continue;
            for (const auto& e : hom_basis(m, c[i], c[j]).entries) {
                bool factors = false;
                for (std::size_t k = 0; k < c.size() && !factors; ++k) {
                    if (k == i || k == j) continue;
                    auto first = hom_basis(m, c[i], c[k]);
                    auto second = hom_basis(m, c[k], c[j]);
                    for (const auto& a : first.entries)
                        for (const auto& b : second.entries)
                            if (!a.divisor.is_zero() && !b.divisor.is_zero() && a.divisor + b.divisor == e.divisor)
                                factors = true;
                }
                edges += !factors;
            }
        }
    return edges;
}

}  // namespace

TEST_SUITE("quiver") {
    TEST_CASE("hirzebruch quiver") {
        auto m = make_model(lgtest::kHirzebruch);
        auto c = reference_collection(lgtest::kHirzebruch).classes();
        auto q = build_quiver(m, c);
        CHECK(q.vertices.size() == 4);
        CHECK(q.edges.size() == irreducible_edges(m, c));
        CHECK(q.edges.size() == 7);
        std::size_t toE10 = std::count_if(q.edges.begin(), q.edges.end(), [](const QuiverEdge& e) {
            return e.from == 0 && e.to == 1;
        });
        CHECK(toE10 == 2);
    }

    TEST_CASE("bundle quiver has four parallel arrows from E00 to E10") {
        auto m = make_model(lgtest::kBundle312);
        auto ref = reference_collection(lgtest::kBundle312);
        auto c = ref.classes();
        auto q = build_quiver(m, c);
        CHECK(q.vertices.size() == 12);
        int from = -1, to = -1;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (ref.entries[i].label == "E00") from = int(i);
            if (ref.entries[i].label == "E10") to = int(i);
        }
        std::set<TDivisor> labels;
        for (const auto& e : q.edges)
            if (e.from == from && e.to == to) labels.insert(e.label);
        CHECK(labels == std::set<TDivisor>{unit(m, 0), unit(m, 1), unit(m, 2), unit(m, 3)});
    }

    TEST_CASE("single vertex") {
        auto m = make_model(lgtest::kHirzebruch);
        std::vector<PicClass> one{{{0, 0}}};
        auto q = build_quiver(m, one);
        CHECK(q.vertices.size() == 1);
        CHECK(q.edges.empty());
    }

    TEST_CASE("quiver requires strong exceptionality") {
        auto m = make_model(lgtest::kHirzebruch);
        std::vector<PicClass> bad{{{0, 0}}, {{2, 0}}};
        try {
            build_quiver(m, bad);
            FAIL("expected NotStronglyExceptional");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NotStronglyExceptional);
        }
    }
}
