#pragma once

#include "varlat/core.hpp"

#include <functional>
#include <string>

namespace varlat {

struct QuasiNewtonOptions {
    double gtol = 1e-8;        // on the infinity norm of the gradient
    int max_iterations = 5000;
    int memory = 12;
    double armijo = 1e-4;
    int max_backtracks = 60;
};

struct QuasiNewtonResult {
    Vector x;
    double value = 0.0;
    Vector gradient;
    int iterations = 0;
    bool converged = false;
    std::string status;
};

/// f(x), writing the gradient into the second argument.
using Objective = std::function<double(const Vector&, Vector&)>;

/// Applies an approximate inverse Hessian (symmetric positive definite).
using Preconditioner = std::function<Vector(const Vector&)>;

/**
 * Limited-memory BFGS with backtracking line search. The initial inverse
 * Hessian of each two-loop recursion is `gamma * P`, with P the
 * preconditioner (identity when empty) and gamma the usual s'y / y'Py
 * scaling. Steps are accepted on the Armijo condition, or on an
 * approximate-Wolfe test once decreases fall below rounding level.
 */
QuasiNewtonResult minimize_lbfgs(const Objective& objective, Vector x0, const QuasiNewtonOptions& options = {},
                                 const Preconditioner& preconditioner = {});

/**
 * Inverse of the 1-D stiffness matrix (1/h) tridiag(-1, 2, -1) applied to
 * each of `components` interleaved fields (node-major layout).
 */
Preconditioner stiffness_preconditioner(int interior, int components, double h);

} // namespace varlat
