#include "commands.hpp"

#include <spdlog/spdlog.h>

#include <charconv>
#include <cmath>
#include <string_view>

#include "export.hpp"
#include "lgcrit/catalog.hpp"
#include "lgcrit/emap.hpp"
#include "lgcrit/errors.hpp"
#include "lgcrit/monodromy.hpp"
#include "lgcrit/solver.hpp"
#include "lgcrit/toric.hpp"
#include "serialize.hpp"

namespace lgcrit::cli {

using io::json;

namespace {

void require_format(const RunConfig& cfg, std::initializer_list<std::string_view> allowed) {
    for (auto f : allowed)
        if (cfg.format == f) return;
    throw Error(ErrorCode::BadModelSpec, "format '" + cfg.format + "' is not available for this command");
}

SolveOptions solve_options(const RunConfig& cfg) {
    SolveOptions o;
    o.newton.tol = cfg.newtonTol;
    o.dedupTol = cfg.dedupTol;
    o.seed = cfg.seed;
    o.threads = cfg.threads;
    return o;
}

EmapOptions emap_options(const RunConfig& cfg) {
    EmapOptions o;
    o.snapEps = cfg.snapEps;
    o.solve = solve_options(cfg);
    return o;
}

MonodromyOptions monodromy_options(const RunConfig& cfg, LoopRecipe recipe) {
    MonodromyOptions o;
    o.solve = solve_options(cfg);
    o.track.newton.tol = cfg.newtonTol;
    o.track.dedupTol = cfg.dedupTol;
    o.track.matchRatio = cfg.matchRatio;
    o.recipe = recipe;
    return o;
}

struct Loaded {
    ModelSpec spec;
    LGFamily family;
    double t;
};

Loaded load(const RunConfig& cfg) {
    auto spec = parse_model_spec(cfg.model);
    validate(spec);
    auto family = lg_family(spec);
    double t = cfg.t.value_or(family.default_t());
    spdlog::debug("model {} at t = {}", to_string(spec), t);
    return {spec, std::move(family), t};
}

json base_params(const RunConfig& cfg, const Loaded& in) {
    return {{"t", in.t},
            {"seed", cfg.seed},
            {"newtonTol", cfg.newtonTol},
            {"dedupTol", cfg.dedupTol},
            {"snapEps", cfg.snapEps},
            {"matchRatio", cfg.matchRatio},
            {"basisLabels", in.family.model.basis_labels()}};
}

std::string wrap(const Loaded& in, json params, json results, json diagnostics = json::object()) {
    return io::dump(io::envelope(to_string(in.spec), std::move(params), std::move(results), std::move(diagnostics)));
}

TDivisor parse_divisor(std::string_view text, int rays) {
    TDivisor d;
    while (!text.empty()) {
        auto comma = text.find(',');
        auto tok = text.substr(0, comma);
        while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
        while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size())
            throw Error(ErrorCode::BadModelSpec, "bad divisor coefficient '" + std::string(tok) + "'");
        d.coeffs.push_back(v);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    if (int(d.coeffs.size()) != rays)
        throw Error(ErrorCode::LengthMismatch,
                    "divisor has " + std::to_string(d.coeffs.size()) + " coefficients, model has " +
                        std::to_string(rays) + " rays");
    return d;
}

}  // namespace

CommandOutput run_model(const RunConfig& cfg) {
    require_format(cfg, {"json"});
    auto in = load(cfg);
    auto ref = reference_collection(in.spec);
    json coll = json::array();
    for (const auto& e : ref.entries) coll.push_back({{"label", e.label}, {"class", io::to_json(e.cls)}});
    json results = io::model_json(in.family.model);
    results["collection"] = coll;
    json coeffs = json::array();
    for (const auto& r : in.family.rules) coeffs.push_back({{"base", io::to_json(r.base)}, {"rate", r.rate}});
    results["family"] = {{"coefficients", coeffs}, {"tSign", static_cast<int>(in.family.tSign)}};
    return {wrap(in, base_params(cfg, in), results)};
}

CommandOutput run_solve(const RunConfig& cfg) {
    require_format(cfg, {"json", "csv", "svg"});
    auto in = load(cfg);
    auto set = solve_all(in.family, in.t, solve_options(cfg));
    int code = set.complete ? 0 : 3;
    if (!set.complete) spdlog::error("incomplete solve: {} of {}", set.points.size(), set.expected);
    if (cfg.format == "svg") return {io::solutions_svg(set, cfg.coord), code};
    if (cfg.format == "csv") {
        std::vector<Trajectory> single;
        for (const auto& p : set.points) single.push_back({p.label, {set.t}, {p.coords}, {}, {}, {}, {}});
        return {io::trajectories_csv(single), code};
    }
    return {wrap(in, base_params(cfg, in), io::solutions_json(set)), code};
}

CommandOutput run_emap(const RunConfig& cfg) {
    require_format(cfg, {"json"});
    auto in = load(cfg);
    auto map = exceptional_map(in.family, in.t, emap_options(cfg));
    return {wrap(in, base_params(cfg, in), io::emap_json(map))};
}

CommandOutput run_verify(const RunConfig& cfg) {
    require_format(cfg, {"json"});
    auto in = load(cfg);
    auto opts = emap_options(cfg);
    auto v = verify_exceptional_map(in.family, opts, in.t);
    std::string summary = std::string("bijection: ") + (v.bijectionOk ? "ok" : "fail") +
                          ", strong: " + (v.strongOk ? "ok" : "fail");
    json results = io::verification_json(v);
    results["summary"] = summary;
    spdlog::info("{}", summary);
    return {wrap(in, base_params(cfg, in), results), v.bijectionOk && v.strongOk ? 0 : 1};
}

CommandOutput run_monodromy(const RunConfig& cfg) {
    require_format(cfg, {"json"});
    auto in = load(cfg);
    auto d = parse_divisor(cfg.divisor, in.family.model.ray_count());
    MonodromyEngine engine(in.family, in.t, monodromy_options(cfg, LoopRecipe::Direct));
    auto composed = engine.of_divisor(d);
    auto single = engine.of_divisor_single_loop(d);
    json params = base_params(cfg, in);
    params["divisor"] = io::to_json(d);
    json results = {{"divisor", in.family.model.format_divisor(d)},
                    {"composed", io::permutation_json(composed)},
                    {"singleLoop", io::permutation_json(single)},
                    {"agree", composed == single}};
    return {wrap(in, params, results), composed == single ? 0 : 1};
}

CommandOutput run_aligned(const RunConfig& cfg) {
    require_format(cfg, {"json"});
    auto in = load(cfg);
    LoopRecipe recipe = LoopRecipe::Direct;
    if (cfg.recipe == "conjugated")
        recipe = LoopRecipe::Conjugated;
    else if (cfg.recipe == "auto")
        recipe = std::holds_alternative<BlowupProduct>(in.spec) ? LoopRecipe::Conjugated : LoopRecipe::Direct;
    else if (cfg.recipe != "direct")
        throw Error(ErrorCode::BadModelSpec, "unknown recipe '" + cfg.recipe + "'");

    MonodromyEngine engine(in.family, in.t, monodromy_options(cfg, recipe));
    auto report = check_m_aligned(engine, emap_options(cfg));
    json results = io::monodromy_json(in.family.model, report);
    json diagnostics = json::object();
    if (std::holds_alternative<BlowupProduct>(in.spec) || std::holds_alternative<BlowupBundle>(in.spec))
        diagnostics["relations"] = io::relations_json(check_generator_relations(engine));
    else if (std::holds_alternative<Bundle>(in.spec))
        diagnostics["relations"] = io::relations_json(check_bundle_generators(engine));
    json params = base_params(cfg, in);
    params["recipe"] = recipe == LoopRecipe::Direct ? "direct" : "conjugated";
    if (!report.aligned()) spdlog::warn("{} alignment violations", report.violations.size());
    return {wrap(in, params, results, diagnostics), report.aligned() ? 0 : 1};
}

CommandOutput run_frobenius(const RunConfig& cfg) {
    require_format(cfg, {"json"});
    auto in = load(cfg);
    FrobeniusMode mode = FrobeniusMode::Characters;
    if (cfg.frobeniusMode == "cube")
        mode = FrobeniusMode::FullCube;
    else if (cfg.frobeniusMode != "characters")
        throw Error(ErrorCode::BadModelSpec, "unknown frobenius mode '" + cfg.frobeniusMode + "'");
    auto img = cfg.level ? frobenius_image(in.family.model, *cfg.level, mode) : frobenius_stable(in.family.model, mode);
    auto ref = reference_collection(in.spec);
    auto refClasses = ref.classes();
    auto cmp = compare_collections(refClasses, img.classes);
    json params = base_params(cfg, in);
    params["mode"] = cfg.frobeniusMode;
    if (cfg.level) params["l"] = *cfg.level;
    return {wrap(in, params, io::frobenius_json(img, ref, cmp))};
}

CommandOutput run_quiver(const RunConfig& cfg) {
    require_format(cfg, {"json", "dot"});
    auto in = load(cfg);
    auto ref = reference_collection(in.spec);
    auto classes = ref.classes();
    auto report = is_strongly_exceptional(in.family.model, classes);
    if (!report.isStrong) throw Error(ErrorCode::NotStronglyExceptional, "reference collection of " + cfg.model);
    auto q = build_quiver(in.family.model, classes);
    if (cfg.format == "dot") return {io::quiver_dot(in.family.model, ref, q)};
    return {wrap(in, base_params(cfg, in), io::quiver_json(in.family.model, ref, q))};
}

CommandOutput run_sweep(const RunConfig& cfg) {
    require_format(cfg, {"json", "csv", "svg"});
    if (cfg.steps < 1) throw Error(ErrorCode::DegenerateInput, "steps must be positive");
    auto in = load(cfg);
    auto trajs = sweep_parameter(in.family, cfg.from, cfg.to, cfg.steps, solve_options(cfg));
    if (cfg.format == "csv") return {io::trajectories_csv(trajs)};
    if (cfg.format == "svg") return {io::trajectories_svg(trajs, cfg.coord)};
    json params = base_params(cfg, in);
    params["from"] = cfg.from;
    params["to"] = cfg.to;
    params["steps"] = cfg.steps;
    return {wrap(in, params, io::trajectories_json(trajs))};
}

}  // namespace lgcrit::cli
