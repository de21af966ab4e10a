#pragma once

#include <string>
#include <vector>

#include "lgcrit/catalog.hpp"
#include "lgcrit/solver.hpp"
#include "lgcrit/toric.hpp"

namespace lgcrit::io {

/// Digraph with one node per collection entry and one edge per irreducible Hom summand.
std::string quiver_dot(const ToricModel& model, const ReferenceCollection& ref, const Quiver& q);

/// Rows `label,t,coord_index,re,im`.
std::string trajectories_csv(const std::vector<Trajectory>& trajs);

/// Scatter of one coordinate in (log|z|, arg/2pi): endpoints as labelled dots, samples as polylines.
std::string trajectories_svg(const std::vector<Trajectory>& trajs, int coord);
std::string solutions_svg(const SolutionSet& set, int coord);

/// Writes `text` to `path`, or stdout when path is empty or "-". Throws IoError.
void write_output(const std::string& path, const std::string& text);

}  // namespace lgcrit::io
