#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "lgcrit/catalog.hpp"
#include "lgcrit/errors.hpp"
#include "lgcrit/solver.hpp"
#include "support.hpp"

using namespace lgcrit;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::IoError;
}

double frac(double x) { return x - std::floor(x); }

}  // namespace

TEST_SUITE("catalog") {
    TEST_CASE("model spec parsing") {
        for (std::string s : {"ps:s=2", "pb:s=3,a=1,2", "bp:n=4,r=2", "bb:n=5,b=0"})
            CHECK(to_string(parse_model_spec(s)) == s);
        auto b = std::get<Bundle>(parse_model_spec("pb:s=3,a=1,2"));
        CHECK(b.s == 3);
        CHECK(b.a == std::vector<int>{1, 2});
        for (std::string s : {"", "ps", "xx:s=1", "ps:s=", "ps:q=2", "pb:s=3", "bp:n=4,r=x"})
            CHECK(code_of([&] { parse_model_spec(s); }) == ErrorCode::BadModelSpec);
    }

    TEST_CASE("parameter validation") {
        CHECK(code_of([] { validate(ProjectiveSpace{0}); }) == ErrorCode::SpecInvariantViolated);
        CHECK(code_of([] { validate(Bundle{1, {2}}); }) == ErrorCode::SpecInvariantViolated);
        CHECK(code_of([] { validate(Bundle{3, {2, 1}}); }) == ErrorCode::SpecInvariantViolated);
        CHECK(code_of([] { validate(BlowupProduct{4, 4}); }) == ErrorCode::SpecInvariantViolated);
        CHECK(code_of([] { validate(BlowupBundle{5, 4}); }) == ErrorCode::SpecInvariantViolated);
    }

    TEST_CASE("desk models") {
        auto p2 = make_model(ProjectiveSpace{2});
        CHECK(p2.euler() == 3);
        CHECK(p2.pic_rank() == 1);
        auto b = make_model(lgtest::kBundle312);
        CHECK(b.euler() == 12);
        CHECK(b.pic_rank() == 2);
        CHECK(b.basis_labels() == std::vector<std::string>{"pi*H", "xi"});
        auto bp = make_model(lgtest::kBlowupProduct42);
        CHECK(bp.euler() == 13);
        CHECK(bp.pic_rank() == 3);
        auto bb = make_model(lgtest::kBlowupBundle50);
        CHECK(bb.euler() == 14);
        CHECK(bb.pic_rank() == 3);
        CHECK(bb.basis_labels() == std::vector<std::string>{"V", "Y", "T"});
    }

    TEST_CASE("facet counts follow the closed forms") {
        for (int s = 1; s <= 4; ++s)
            for (int r = 1; r <= 3; ++r) {
                std::vector<int> a(r, 0);
                a.back() = std::min(1, s);
                CHECK(make_model(Bundle{s, a}).euler() == (s + 1) * (r + 1));
            }
        for (int n = 2; n <= 6; ++n)
            for (int r = 1; r <= n - 1; ++r)
                CHECK(make_model(BlowupProduct{n, r}).euler() == (n - r + 1) * (r + 1) + (n - r) * r);
        for (int n = 2; n <= 6; ++n)
            for (int b = 0; b < n - 1; ++b) CHECK(make_model(BlowupBundle{n, b}).euler() == 3 * n - 1);
    }

    TEST_CASE("reference collections") {
        auto h = reference_collection(lgtest::kHirzebruch);
        REQUIRE(h.size() == 4);
        CHECK(h.find("E00")->cls.coords == IntVec{0, 0});
        CHECK(h.find("E10")->cls.coords == IntVec{1, 0});
        CHECK(h.find("E01")->cls.coords == IntVec{0, 1});
        CHECK(h.find("E11")->cls.coords == IntVec{1, 1});

        auto bp = reference_collection(lgtest::kBlowupProduct42);
        CHECK(bp.size() == 13);
        CHECK(std::count_if(bp.entries.begin(), bp.entries.end(), [](auto& e) { return e.family == 'E'; }) == 9);
        CHECK(std::count_if(bp.entries.begin(), bp.entries.end(), [](auto& e) { return e.family == 'F'; }) == 4);

        auto bb = reference_collection(lgtest::kBlowupBundle50);
        CHECK(bb.size() == 14);
        CHECK(std::count_if(bb.entries.begin(), bb.entries.end(), [](auto& e) { return e.family == 'E'; }) == 10);
        CHECK(std::count_if(bb.entries.begin(), bb.entries.end(), [](auto& e) { return e.family == 'F'; }) == 4);
    }

    TEST_CASE("reference collections are strongly exceptional and full sized") {
        for (const auto& spec : lgtest::desk_models()) {
            CAPTURE(to_string(spec));
            auto m = make_model(spec);
            auto ref = reference_collection(spec);
            auto classes = ref.classes();
            CHECK(std::set<PicClass>(classes.begin(), classes.end()).size() == classes.size());
            auto r = is_strongly_exceptional(m, classes);
            CHECK(r.isStrong);
            CHECK(r.sizeMatchesEuler);
        }
    }

    TEST_CASE("grid labels") {
        CHECK(grid_label('E', {0, 1}) == "E01");
        CHECK(grid_label('F', {3}) == "F3");
        CHECK(grid_label('E', {1, 10}) == "E1_10");
    }

    TEST_CASE("family coefficients") {
        auto h = lg_family(lgtest::kHirzebruch);
        for (auto c : h.coefficients(0.0)) CHECK(std::abs(c - std::complex<double>(1.0, 0.0)) < 1e-15);

        auto bb = lg_family(lgtest::kBlowupBundle50);
        for (double t : {10.0, 40.0}) CHECK(std::abs(bb.coefficients(t)[7] - std::complex<double>(0.0, -1.0)) < 1e-15);

        auto bp = lg_family(lgtest::kBlowupProduct42);
        auto c = bp.coefficients(30.0);
        for (int i = 0; i < 4; ++i) CHECK(std::abs(c[i] - std::exp(-30.0)) < 1e-20);
        for (int i = 4; i < 7; ++i) CHECK(std::abs(c[i] - 1.0) < 1e-15);
    }

    TEST_CASE("hirzebruch seeds") {
        auto seeds = asymptotic_seeds(lgtest::kHirzebruch, -30.0);
        REQUIRE(seeds.seeds.size() == 4);
        std::multiset<std::pair<long, long>> got;
        for (const auto& s : seeds.seeds)
            got.insert({std::lround(frac(s.argFrac[0]) * 4) % 4, std::lround(frac(s.argFrac[1]) * 4) % 4});
        // (0,0), (1/2,0), (1/4,1/2), (3/4,1/2) in quarter turns
        std::multiset<std::pair<long, long>> want{{0, 0}, {2, 0}, {1, 2}, {3, 2}};
        CHECK(got == want);
    }

    TEST_CASE("projective space seeds are roots of unity") {
        for (int s = 1; s <= 4; ++s) {
            auto seeds = asymptotic_seeds(ProjectiveSpace{s}, -30.0);
            REQUIRE(int(seeds.seeds.size()) == s + 1);
            std::set<long> ks;
            for (const auto& seed : seeds.seeds) {
                auto z = seed.point();
                for (auto c : z) CHECK(std::abs(c - z[0]) < 1e-12);
                CHECK(std::abs(std::pow(z[0], s + 1) - 1.0) < 1e-12);
                ks.insert(std::lround(frac(std::arg(z[0]) / (2 * std::numbers::pi)) * (s + 1)) % (s + 1));
            }
            CHECK(int(ks.size()) == s + 1);
        }
    }

    TEST_CASE("blowup product seed moduli") {
        const double t = 30.0;
        auto seeds = asymptotic_seeds(lgtest::kBlowupProduct42, t);
        REQUIRE(seeds.seeds.size() == 13);
        int large = 0, unitModulus = 0;
        for (const auto& s : seeds.seeds) {
            auto z = s.point();
            bool allLarge = std::all_of(z.begin(), z.end(), [&](auto c) { return std::abs(std::log(std::abs(c)) - t / 3) < 1e-9; });
            bool allUnit = std::all_of(z.begin(), z.end(), [](auto c) { return std::abs(std::abs(c) - 1.0) < 1e-9; });
            large += allLarge;
            unitModulus += allUnit;
        }
        CHECK(large == 9);
        CHECK(unitModulus == 4);
    }

    TEST_CASE("seed counts match the reference collection") {
        for (int s = 1; s <= 6; ++s) CHECK(asymptotic_seeds(ProjectiveSpace{s}, -24.0).seeds.size() == std::size_t(s + 1));
        for (int n = 2; n <= 6; ++n)
            for (int r = 1; r <= n - 1; ++r) {
                BlowupProduct spec{n, r};
                CHECK(asymptotic_seeds(spec, 24.0).seeds.size() == reference_collection(spec).size());
                CHECK(int(reference_collection(spec).size()) == make_model(spec).euler());
            }
        for (int n = 2; n <= 6; ++n)
            for (int b = 0; b < n - 1; ++b) {
                BlowupBundle spec{n, b};
                CHECK(asymptotic_seeds(spec, 24.0).seeds.size() == reference_collection(spec).size());
                CHECK(int(reference_collection(spec).size()) == make_model(spec).euler());
            }
        for (int s = 1; s <= 4; ++s) {
            Bundle spec{s, {0, 1}};
            CHECK(asymptotic_seeds(spec, -24.0).seeds.size() == reference_collection(spec).size());
            CHECK(int(reference_collection(spec).size()) == make_model(spec).euler());
        }
    }

    TEST_CASE("seeds refine to nearby critical points") {
        struct Case {
            ModelSpec spec;
            double t;
        };
        for (const auto& [spec, t] : {Case{lgtest::kHirzebruch, -30.0}, Case{lgtest::kBundle312, -30.0},
                                      Case{lgtest::kBlowupProduct42, 30.0}, Case{lgtest::kBlowupBundle50, 30.0}}) {
            CAPTURE(to_string(spec));
            auto family = lg_family(spec);
            auto system = critical_system(family, t);
            for (const auto& seed : asymptotic_seeds(spec, t).seeds) {
                CAPTURE(seed.label);
                auto start = seed.point();
                auto r = newton_refine(system, start);
                REQUIRE(r.converged());
                CHECK(r.point.residualNorm < 1e-10);
                CHECK(relative_distance(start, r.point.coords) < 0.2);
            }
        }
    }

    TEST_CASE("seed parameter guard") {
        CHECK(code_of([] { asymptotic_seeds(lgtest::kHirzebruch, -5.0); }) == ErrorCode::ParameterTooSmall);
        CHECK(code_of([] { asymptotic_seeds(lgtest::kHirzebruch, 30.0); }) == ErrorCode::ParameterTooSmall);
    }
}
