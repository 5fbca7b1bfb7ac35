#include "varlat/functional.hpp"

#include <cmath>
#include <sstream>

namespace varlat {

namespace {

void check_dims(const Lagrangian& L, const Arc& y)
{
    if (L.state_dim() != y.state_dim()) throw Error("Lagrangian state dimension does not match the arc");
}

void check_zeta(const Lagrangian& L, const Vector& zeta)
{
    if (zeta.size() != L.criteria()) throw Error("zeta has the wrong dimension");
    if (!zeta.allFinite()) throw Error("zeta is not finite");
    if (zeta.isZero(0.0)) throw Error("zeta must be nonzero");
}

[[noreturn]] void non_finite(double t)
{
    std::ostringstream os;
    os.precision(17);
    os << "non-finite Lagrangian value at t = " << t;
    throw Error(os.str());
}

// Pairing restricted to the cells in [first, last].
double pairing(const Lagrangian& L, const Vector& zeta, const Arc& y, const Matrix& v, int first, int last)
{
    const Grid& grid = y.grid();
    const double h = grid.step();
    Matrix dyl, dpl, dyr, dpr;
    double acc = 0.0;
    for (int k = first; k <= last; ++k) {
        const Vector vl = v.row(k).transpose();
        const Vector vr = v.row(k + 1).transpose();
        if (vl.isZero(0.0) && vr.isZero(0.0)) continue;
        const Vector p = y.velocity(k);
        const Vector vdot = (vr - vl) / h;
        L.partials(grid.t(k), y.node(k), p, dyl, dpl);
        L.partials(grid.t(k + 1), y.node(k + 1), p, dyr, dpr);
        const double cell = 0.5 * h * (zeta.dot(dyl * vl) + zeta.dot(dyr * vr)) +
                            0.5 * h * zeta.dot((dpl + dpr) * vdot);
        if (!std::isfinite(cell)) non_finite(grid.t(k));
        acc += cell;
    }
    return acc;
}

} // namespace

Vector functional_J(const Lagrangian& L, const Arc& y)
{
    check_dims(L, y);
    const Grid& grid = y.grid();
    const double h = grid.step();
    Vector acc = Vector::Zero(L.criteria());
    for (int k = 0; k <= grid.interior; ++k) {
        const Vector p = y.velocity(k);
        const Vector left = L(grid.t(k), y.node(k), p);
        if (!left.allFinite()) non_finite(grid.t(k));
        const Vector right = L(grid.t(k + 1), y.node(k + 1), p);
        if (!right.allFinite()) non_finite(grid.t(k + 1));
        acc += 0.5 * h * (left + right);
    }
    return acc;
}

double functional_Jzeta(const Lagrangian& L, const Vector& zeta, const Arc& y)
{
    check_zeta(L, zeta);
    return zeta.dot(functional_J(L, y));
}

Vector grad_Jzeta(const Lagrangian& L, const Vector& zeta, const Arc& y)
{
    check_dims(L, y);
    check_zeta(L, zeta);
    const Grid& grid = y.grid();
    const int n = y.state_dim();
    const double h = grid.step();
    Vector g = Vector::Zero(static_cast<Eigen::Index>(grid.interior) * n);
    Matrix dyl, dpl, dyr, dpr;
    for (int k = 0; k <= grid.interior; ++k) {
        const Vector p = y.velocity(k);
        L.partials(grid.t(k), y.node(k), p, dyl, dpl);
        L.partials(grid.t(k + 1), y.node(k + 1), p, dyr, dpr);
        const Vector flux = 0.5 * (dpl + dpr).transpose() * zeta;
        const Vector left = 0.5 * h * dyl.transpose() * zeta - flux;
        const Vector right = 0.5 * h * dyr.transpose() * zeta + flux;
        if (!left.allFinite() || !right.allFinite()) non_finite(grid.t(k));
        if (k >= 1) g.segment((k - 1) * n, n) += left;
        if (k + 1 <= grid.interior) g.segment(k * n, n) += right;
    }
    return g;
}

double weak_EL_residual(const Lagrangian& L, const Vector& zeta, const Arc& y, const Perturbation& v)
{
    check_dims(L, y);
    check_zeta(L, zeta);
    if (v.state_dim() != y.state_dim() || v.grid().interior != y.interior())
        throw Error("perturbation does not match the arc grid");
    return pairing(L, zeta, y, v.values(), 0, y.grid().interior);
}

double max_hat_residual(const Lagrangian& L, const Vector& zeta, const Arc& y)
{
    check_dims(L, y);
    check_zeta(L, zeta);
    const Grid& grid = y.grid();
    const int n = y.state_dim();
    Matrix v = Matrix::Zero(grid.nodes(), n);
    double worst = 0.0;
    for (int i = 1; i <= grid.interior; ++i) {
        for (int j = 0; j < n; ++j) {
            v(i, j) = 1.0;
            worst = std::max(worst, std::abs(pairing(L, zeta, y, v, i - 1, i)));
            v(i, j) = 0.0;
        }
    }
    return worst;
}

} // namespace varlat
