#pragma once

#include "varlat/arc.hpp"
#include "varlat/lagrangian.hpp"

namespace varlat {

// Discretization: forward-difference velocity p_k held on each cell
// [t_k, t_{k+1}], trapezoidal rule in (t, y) on the cell:
//   J = sum_k h/2 [ L(t_k, y_k, p_k) + L(t_{k+1}, y_{k+1}, p_k) ].
// The gradient of this sum with respect to node values is exactly the weak
// Euler-Lagrange pairing against hat functions.

/// J(y) in R^d.
Vector functional_J(const Lagrangian& L, const Arc& y);

/// J_zeta(y) = zeta . J(y). Rejects zeta = 0.
double functional_Jzeta(const Lagrangian& L, const Vector& zeta, const Arc& y);

/// Gradient of the discrete J_zeta with respect to the interior node values
/// (node-major, same layout as `Arc::interior_vector`).
Vector grad_Jzeta(const Lagrangian& L, const Vector& zeta, const Arc& y);

/// int [ D_y L_zeta . v + D_p L_zeta . v' ] dt with the same quadrature.
double weak_EL_residual(const Lagrangian& L, const Vector& zeta, const Arc& y, const Perturbation& v);

/// max over the hat basis of |weak_EL_residual|.
double max_hat_residual(const Lagrangian& L, const Vector& zeta, const Arc& y);

/// Trapezoidal integral of a node-wise vector function g(t, y) along the arc.
template <typename Fn>
Vector integrate_nodes(const Arc& y, int out_dim, Fn&& g)
{
    const Grid& grid = y.grid();
    const double h = grid.step();
    Vector acc = Vector::Zero(out_dim);
    for (int i = 0; i < grid.nodes(); ++i) {
        const double w = (i == 0 || i == grid.nodes() - 1) ? 0.5 * h : h;
        acc += w * g(grid.t(i), y.node(i));
    }
    return acc;
}

} // namespace varlat
