#pragma once

#include <json.hpp>
#include <string>

#include "lgcrit/catalog.hpp"
#include "lgcrit/emap.hpp"
#include "lgcrit/monodromy.hpp"
#include "lgcrit/solver.hpp"
#include "lgcrit/toric.hpp"

namespace lgcrit::io {

using json = nlohmann::ordered_json;

json to_json(cplx z);
json to_json(const Point& p);
json to_json(const PicClass& c);
json to_json(const TDivisor& d);

json model_json(const ToricModel& model);
json solutions_json(const SolutionSet& set);
json emap_json(const ExceptionalMapResult& r);
json verification_json(const EmapVerification& v);
json frobenius_json(const FrobeniusImage& img, const ReferenceCollection& ref, const SetComparison& cmp);
json permutation_json(const Permutation& p);
json monodromy_json(const ToricModel& model, const MonodromyReport& rep);
json relations_json(const std::vector<RelationCheck>& checks);
json quiver_json(const ToricModel& model, const ReferenceCollection& ref, const Quiver& q);
json trajectories_json(const std::vector<Trajectory>& trajs);

Point point_from_json(const json& j);
SolutionSet solutions_from_json(const json& j);

/// {model, params, results, diagnostics}
json envelope(const std::string& model, json params, json results, json diagnostics = json::object());

std::string dump(const json& j);

}  // namespace lgcrit::io
