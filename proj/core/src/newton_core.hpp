#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <vector>

#include "lgcrit/solver.hpp"

namespace lgcrit::detail {

/// Rows u_k with u_k orthogonal to the k larger flag exponents and not to the k-th one.
struct NewtonWorkspaceImpl {
    std::vector<IntVec> exponents;
    std::map<std::vector<int>, Eigen::MatrixXd> weights;  // flag -> (n x R) pairings <u_k, n_F>
};

struct Evaluation {
    Eigen::VectorXcd g;
    Eigen::MatrixXcd J;
    Eigen::MatrixXcd terms;  // n x R scaled terms
    double residual = 0.0;
};

/// Log coordinates x with z = exp(x).
Evaluation evaluate_adapted(const LaurentSystem& sys, const Eigen::VectorXcd& x, NewtonWorkspaceImpl& ws);

Eigen::VectorXcd to_log(std::span<const cplx> z);
Point from_log(const Eigen::VectorXcd& x);

struct RefineResult {
    Eigen::VectorXcd x;
    NewtonStatus status = NewtonStatus::Diverged;
    int iterations = 0;
    double residual = 0.0;
};

RefineResult refine_log(const LaurentSystem& sys, Eigen::VectorXcd x, const NewtonOptions& opts, NewtonWorkspaceImpl& ws);

/// dx for a relative change dlogc of the coefficients (c_F -> c_F (1 + dlogc_F)).
Eigen::VectorXcd tangent(const Evaluation& ev, const Eigen::VectorXcd& dlogc);

double log_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

}  // namespace lgcrit::detail
