#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lgcrit/toric.hpp"

namespace lgcrit::detail {

/// Inverse of the square matrix formed by n rays: m = inverse * rhs / denominator.
struct VertexSolver {
    std::vector<int> rays;
    IntMatrix inverse;
    std::int64_t denominator = 1;
};

struct ModelData {
    int n = 0;
    std::vector<IntVec> rays;
    std::vector<std::string> names;
    std::vector<Facet> facets;
    std::vector<std::string> basisLabels;
    std::vector<TDivisor> basisReps;
    IntMatrix classMatrix;
    IntMatrix principal;
    std::vector<int> repSupport;
    IntMatrix repInverse;  // integral inverse of classMatrix restricted to repSupport

    // Reduced cohomology of the full subcomplex on each ray subset (bitmask).
    // Entry k holds dim H~^{k-1}; empty when all vanish.
    std::vector<std::vector<std::int64_t>> reducedCohomology;
    std::vector<std::uint32_t> nonzeroMasks;
    std::vector<bool> unboundedMask;
    std::vector<VertexSolver> solvers;
};

}  // namespace lgcrit::detail
