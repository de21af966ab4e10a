#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "commands.hpp"
#include "export.hpp"
#include "lgcrit/catalog.hpp"
#include "lgcrit/errors.hpp"
#include "serialize.hpp"
#include "support.hpp"

using namespace lgcrit;
using io::json;

namespace {

std::size_t count_lines(const std::string& s) { return std::count(s.begin(), s.end(), '\n'); }

std::size_t count_of(const std::string& s, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_SUITE("io") {
    TEST_CASE("solutions round trip through json") {
        auto set = solve_all(lg_family(lgtest::kHirzebruch), -30.0);
        auto j = io::solutions_json(set);
        auto back = io::solutions_from_json(json::parse(j.dump()));
        CHECK(back.t == set.t);
        CHECK(back.complete == set.complete);
        REQUIRE(back.points.size() == set.points.size());
        for (std::size_t i = 0; i < set.points.size(); ++i) {
            CHECK(back.points[i].label == set.points[i].label);
            CHECK(back.points[i].coords == set.points[i].coords);
            CHECK(back.points[i].residualNorm == set.points[i].residualNorm);
        }
        CHECK(io::solutions_json(back).dump() == j.dump());
    }

    TEST_CASE("complex numbers are two element arrays") {
        auto j = io::to_json(cplx(1.5, -2.0));
        CHECK(j.is_array());
        CHECK(j.size() == 2);
        CHECK(j[0].get<double>() == 1.5);
        CHECK(j[1].get<double>() == -2.0);
    }

    TEST_CASE("envelope keys") {
        auto j = io::envelope("ps:s=1", json::object(), json::array());
        std::vector<std::string> keys;
        for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
        CHECK(keys == std::vector<std::string>{"model", "params", "results", "diagnostics"});
    }

    TEST_CASE("quiver dot") {
        auto m = make_model(lgtest::kHirzebruch);
        auto ref = reference_collection(lgtest::kHirzebruch);
        auto q = build_quiver(m, ref.classes());
        auto dot = io::quiver_dot(m, ref, q);
        CHECK(dot.starts_with("digraph"));
        CHECK(count_of(dot, " -> ") == q.edges.size());
        CHECK(count_of(dot, "[label=\"V(v0)\"]") == 2);
        CHECK(dot == io::quiver_dot(m, ref, build_quiver(m, ref.classes())));

        std::vector<PicClass> one{{{0, 0}}};
        ReferenceCollection single{{ref.entries.front()}};
        auto dot1 = io::quiver_dot(m, single, build_quiver(m, one));
        CHECK(count_of(dot1, " -> ") == 0);
        CHECK(count_of(dot1, "\"E00\";") == 1);
    }

    TEST_CASE("trajectory csv shape") {
        auto family = lg_family(lgtest::kHirzebruch);
        const int steps = 10;
        auto trajs = sweep_parameter(family, -30.0, -20.0, steps);
        auto csv = io::trajectories_csv(trajs);
        CHECK(csv.starts_with("label,t,coord_index,re,im\n"));
        CHECK(count_lines(csv) == 1 + 4 * (steps + 1) * 2);

        std::vector<Trajectory> single{{"A", {0.0}, {Point{cplx(1, 0), cplx(0, 1), cplx(-1, 0)}}, {}, {}, {}, {}}};
        CHECK(count_lines(io::trajectories_csv(single)) == 1 + 3);
    }

    TEST_CASE("svg scatter of the blowup bundle") {
        auto set = solve_all(lg_family(lgtest::kBlowupBundle50), 40.0);
        auto svg = io::solutions_svg(set, 0);
        CHECK(count_of(svg, "<circle") == 14);
        CHECK_THROWS_AS(io::solutions_svg(set, 99), Error);
    }

    TEST_CASE("write failures are io errors") {
        try {
            io::write_output("/nonexistent-dir/x.json", "{}");
            FAIL("expected IoError");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::IoError);
            CHECK(kind_of(e.code()) == ErrorKind::Numerical);
        }
    }
}

TEST_SUITE("cli") {
    TEST_CASE("solve output") {
        cli::RunConfig cfg;
        cfg.model = "pb:s=1,a=1";
        cfg.t = -30.0;
        auto out = cli::run_solve(cfg);
        CHECK(out.exitCode == 0);
        auto j = json::parse(out.text);
        CHECK(j["results"]["count"] == 4);
        CHECK(j["results"]["complete"] == true);
        CHECK(j["model"] == "pb:s=1,a=1");
    }

    TEST_CASE("byte identical output across runs and thread counts") {
        for (std::string model : {"pb:s=1,a=1", "pb:s=3,a=1,2", "bp:n=4,r=2", "bb:n=5,b=0"}) {
            CAPTURE(model);
            cli::RunConfig cfg;
            cfg.model = model;
            auto a = cli::run_solve(cfg).text;
            auto b = cli::run_solve(cfg).text;
            cfg.threads = 4;
            auto c = cli::run_solve(cfg).text;
            CHECK(a == b);
            CHECK(a == c);
            cfg.threads = 1;
            CHECK(cli::run_model(cfg).text == cli::run_model(cfg).text);
            CHECK(cli::run_emap(cfg).text == cli::run_emap(cfg).text);
        }
    }

    TEST_CASE("verify reports a summary") {
        cli::RunConfig cfg;
        cfg.model = "pb:s=1,a=1";
        auto out = cli::run_verify(cfg);
        CHECK(out.exitCode == 0);
        CHECK(json::parse(out.text)["results"]["summary"] == "bijection: ok, strong: ok");
    }

    TEST_CASE("monodromy of a divisor") {
        cli::RunConfig cfg;
        cfg.model = "pb:s=1,a=1";
        cfg.divisor = "1,0,0,1";
        auto out = cli::run_monodromy(cfg);
        CHECK(out.exitCode == 0);
        auto j = json::parse(out.text);
        CHECK(j["results"]["agree"] == true);
        CHECK(j["results"]["composed"]["map"]["E00"] == "E01");
        cfg.divisor = "1,0";
        CHECK_THROWS_AS(cli::run_monodromy(cfg), Error);
        cfg.divisor = "1,x,0,0";
        CHECK_THROWS_AS(cli::run_monodromy(cfg), Error);
    }

    TEST_CASE("format must suit the command") {
        cli::RunConfig cfg;
        cfg.model = "pb:s=1,a=1";
        cfg.format = "dot";
        try {
            cli::run_solve(cfg);
            FAIL("expected a usage error");
        } catch (const Error& e) {
            CHECK(kind_of(e.code()) == ErrorKind::Usage);
        }
        CHECK(cli::run_quiver(cfg).text.starts_with("digraph"));
    }

    TEST_CASE("frobenius command") {
        cli::RunConfig cfg;
        cfg.model = "pb:s=1,a=1";
        cfg.level = 12;
        auto j = json::parse(cli::run_frobenius(cfg).text);
        CHECK(j["results"]["relation"] == "equal");
        CHECK(j["results"]["size"] == 4);
    }
}
