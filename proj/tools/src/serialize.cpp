#include "serialize.hpp"

namespace lgcrit::io {

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const Point& p) {
    json a = json::array();
    for (auto z : p) a.push_back(to_json(z));
    return a;
}

json to_json(const PicClass& c) { return c.coords; }
json to_json(const TDivisor& d) { return d.coeffs; }

json model_json(const ToricModel& model) {
    json facets = json::array();
    for (const auto& f : model.facets()) facets.push_back({{"rays", f.rays}, {"normal", f.normal}});
    json cm = json::array();
    const auto& C = model.class_matrix();
    for (int i = 0; i < C.rows(); ++i) {
        auto row = C.row(i);
        cm.push_back(IntVec(row.begin(), row.end()));
    }
    return {{"dim", model.dim()},
            {"rays", model.rays()},
            {"rayNames", model.ray_names()},
            {"facets", facets},
            {"picRank", model.pic_rank()},
            {"basisLabels", model.basis_labels()},
            {"classMatrix", cm},
            {"euler", model.euler()}};
}

json solutions_json(const SolutionSet& set) {
    json pts = json::array();
    for (const auto& p : set.points)
        pts.push_back({{"label", p.label}, {"coords", to_json(p.coords)}, {"residual", p.residualNorm}});
    return {{"t", set.t},
            {"complete", set.complete},
            {"expected", set.expected},
            {"count", set.points.size()},
            {"multistartAttempts", set.multistartAttempts},
            {"points", pts}};
}

json emap_json(const ExceptionalMapResult& r) {
    json a = json::array();
    for (const auto& x : r.assignments)
        a.push_back({{"label", x.label},
                     {"profile", x.profile.coeffs},
                     {"coords", x.coords.coords},
                     {"class", to_json(x.cls)}});
    return {{"t", r.t}, {"bijective", r.bijective}, {"stabilized", r.stabilized}, {"assignments", a}};
}

json verification_json(const EmapVerification& v) {
    json fails = json::array();
    for (const auto& f : v.strong.failures)
        fails.push_back({{"from", f.from}, {"to", f.to}, {"degree", f.degree}, {"dimension", f.dimension}});
    json j = {{"map", emap_json(v.map)},
              {"bijection", v.bijectionOk},
              {"labelsMatch", v.labelsOk},
              {"strong", v.strongOk},
              {"mismatched", v.mismatched},
              {"extFailures", fails}};
    if (v.family2Form) j["family2Form"] = *v.family2Form;
    return j;
}

json frobenius_json(const FrobeniusImage& img, const ReferenceCollection& ref, const SetComparison& cmp) {
    json cls = json::array();
    for (std::size_t i = 0; i < img.classes.size(); ++i) {
        json e = {{"class", to_json(img.classes[i])}, {"multiplicity", img.multiplicities[i]}};
        if (const auto* r = ref.find(img.classes[i])) e["label"] = r->label;
        cls.push_back(e);
    }
    json onlyA = json::array(), onlyB = json::array();
    for (const auto& c : cmp.onlyInA) onlyA.push_back(to_json(c));
    for (const auto& c : cmp.onlyInB) onlyB.push_back(to_json(c));
    return {{"l", img.l},
            {"mode", img.mode == FrobeniusMode::Characters ? "characters" : "fullCube"},
            {"stabilized", img.stabilized},
            {"size", img.classes.size()},
            {"total", img.total()},
            {"classes", cls},
            {"relation", std::string(to_string(cmp.relation))},
            {"onlyInReference", onlyA},
            {"onlyInImage", onlyB}};
}

json permutation_json(const Permutation& p) {
    json m = json::object();
    for (std::size_t i = 0; i < p.size(); ++i) m[p.labels()[i]] = p.labels()[p.image()[i]];
    return {{"map", m}, {"cycles", p.cycles()}};
}

json monodromy_json(const ToricModel& model, const MonodromyReport& rep) {
    json gens = json::object();
    for (std::size_t F = 0; F < rep.generators.size(); ++F) gens[model.ray_names()[F]] = permutation_json(rep.generators[F]);
    json viol = json::array();
    for (const auto& v : rep.violations)
        viol.push_back({{"from", v.from}, {"to", v.to}, {"divisor", model.format_divisor(v.divisor)}, {"actual", v.actual}});
    json nc = json::array();
    for (auto [i, j] : rep.noncommuting) nc.push_back({model.ray_names()[i], model.ray_names()[j]});
    auto mism = [](const std::vector<DimensionMismatch>& v) {
        json a = json::array();
        for (const auto& m : v) a.push_back({{"from", m.from}, {"to", m.to}, {"hom", m.homDim}, {"mon", m.monDim}});
        return a;
    };
    return {{"generators", gens},
            {"instances", rep.instances},
            {"violations", viol},
            {"aligned", rep.aligned()},
            {"generatorsCommute", rep.generatorsCommute},
            {"noncommuting", nc},
            {"dimensionMismatches", mism(rep.dimensionMismatches)},
            {"dimensionMismatchesStrict", mism(rep.dimensionMismatchesStrict)},
            {"additivityChecks", rep.additivityChecks},
            {"additivityFailures", rep.additivityFailures}};
}

json relations_json(const std::vector<RelationCheck>& checks) {
    json a = json::array();
    for (const auto& c : checks)
        a.push_back({{"name", c.name}, {"checked", c.checked}, {"holds", c.holds()}, {"failures", c.failures}});
    return a;
}

json quiver_json(const ToricModel& model, const ReferenceCollection& ref, const Quiver& q) {
    json verts = json::array();
    for (const auto& v : q.vertices) {
        const auto* e = ref.find(v);
        verts.push_back({{"label", e ? e->label : std::string()}, {"class", to_json(v)}});
    }
    json edges = json::array();
    for (const auto& e : q.edges)
        edges.push_back({{"from", e.from}, {"to", e.to}, {"divisor", to_json(e.label)}, {"label", model.format_divisor(e.label)}});
    return {{"vertices", verts}, {"edges", edges}};
}

json trajectories_json(const std::vector<Trajectory>& trajs) {
    json a = json::array();
    for (const auto& tr : trajs) {
        json samples = json::array();
        for (std::size_t i = 0; i < tr.ts.size(); ++i) samples.push_back({{"t", tr.ts[i]}, {"coords", to_json(tr.samples[i])}});
        a.push_back({{"label", tr.label},
                     {"startArgs", tr.startArgs},
                     {"endArgs", tr.endArgs},
                     {"startProfile", tr.startProfile.coeffs},
                     {"endProfile", tr.endProfile.coeffs},
                     {"samples", samples}});
    }
    return a;
}

Point point_from_json(const json& j) {
    Point p;
    for (const auto& z : j) p.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
    return p;
}

SolutionSet solutions_from_json(const json& j) {
    SolutionSet s;
    s.t = j.at("t").get<double>();
    s.complete = j.at("complete").get<bool>();
    s.expected = j.at("expected").get<int>();
    s.multistartAttempts = j.at("multistartAttempts").get<int>();
    for (const auto& p : j.at("points"))
        s.points.push_back({point_from_json(p.at("coords")), p.at("label").get<std::string>(), p.at("residual").get<double>()});
    return s;
}

json envelope(const std::string& model, json params, json results, json diagnostics) {
    return {{"model", model}, {"params", std::move(params)}, {"results", std::move(results)}, {"diagnostics", std::move(diagnostics)}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace lgcrit::io
