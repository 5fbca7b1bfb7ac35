#include "varlat/arc.hpp"

namespace varlat {

namespace {

void check_shape(const Grid& grid, const Matrix& values)
{
    if (grid.interior < 1) throw Error("grid needs at least one interior node");
    if (!(grid.b > grid.a)) throw Error("grid interval must satisfy a < b");
    if (values.rows() != grid.nodes()) throw Error("node value rows do not match the grid");
    if (values.cols() < 1) throw Error("state dimension must be positive");
}

bool same_grid(const Grid& l, const Grid& r)
{
    return l.a == r.a && l.b == r.b && l.interior == r.interior;
}

} // namespace

Arc::Arc(const Grid& grid, Matrix values) : grid_(grid), values_(std::move(values))
{
    check_shape(grid_, values_);
}

Arc Arc::straight(const Boundary& boundary, int interior)
{
    if (boundary.start.size() != boundary.end.size()) throw Error("boundary values have different dimensions");
    const double len = boundary.b - boundary.a;
    return sample(boundary, interior, [&](double t) -> Vector {
        const double s = (t - boundary.a) / len;
        return (1.0 - s) * boundary.start + s * boundary.end;
    });
}

Vector Arc::interior_vector() const
{
    const int n = state_dim();
    Vector x(static_cast<Eigen::Index>(grid_.interior) * n);
    for (int i = 1; i <= grid_.interior; ++i)
        for (int j = 0; j < n; ++j) x[(i - 1) * n + j] = values_(i, j);
    return x;
}

Arc Arc::with_interior(const Vector& x) const
{
    const int n = state_dim();
    if (x.size() != static_cast<Eigen::Index>(grid_.interior) * n) throw Error("interior vector has the wrong size");
    Matrix v = values_;
    for (int i = 1; i <= grid_.interior; ++i)
        for (int j = 0; j < n; ++j) v(i, j) = x[(i - 1) * n + j];
    return Arc(grid_, std::move(v));
}

Arc Arc::operator+(const Perturbation& v) const
{
    if (!same_grid(grid_, v.grid()) || v.state_dim() != state_dim())
        throw Error("perturbation grid does not match the arc");
    return Arc(grid_, values_ + v.values());
}

Perturbation::Perturbation(const Grid& grid, Matrix values) : grid_(grid), values_(std::move(values))
{
    check_shape(grid_, values_);
    if (!values_.row(0).isZero(0.0) || !values_.row(grid_.nodes() - 1).isZero(0.0))
        throw Error("perturbation must vanish at both endpoints");
}

Perturbation Perturbation::zero(const Grid& grid, int state_dim)
{
    return Perturbation(grid, Matrix::Zero(grid.nodes(), state_dim));
}

Perturbation Perturbation::hat(const Grid& grid, int state_dim, int node, int component)
{
    if (node < 1 || node > grid.interior) throw Error("hat function node must be interior");
    if (component < 0 || component >= state_dim) throw Error("hat function component out of range");
    Matrix v = Matrix::Zero(grid.nodes(), state_dim);
    v(node, component) = 1.0;
    return Perturbation(grid, std::move(v));
}

Perturbation Perturbation::from_interior(const Grid& grid, int state_dim, const Vector& x)
{
    if (x.size() != static_cast<Eigen::Index>(grid.interior) * state_dim)
        throw Error("interior vector has the wrong size");
    Matrix v = Matrix::Zero(grid.nodes(), state_dim);
    for (int i = 1; i <= grid.interior; ++i)
        for (int j = 0; j < state_dim; ++j) v(i, j) = x[(i - 1) * state_dim + j];
    return Perturbation(grid, std::move(v));
}

Vector Perturbation::interior_vector() const
{
    const int n = state_dim();
    Vector x(static_cast<Eigen::Index>(grid_.interior) * n);
    for (int i = 1; i <= grid_.interior; ++i)
        for (int j = 0; j < n; ++j) x[(i - 1) * n + j] = values_(i, j);
    return x;
}

Perturbation Perturbation::operator+(const Perturbation& o) const
{
    if (!same_grid(grid_, o.grid()) || o.state_dim() != state_dim()) throw Error("perturbation grids differ");
    return Perturbation(grid_, values_ + o.values());
}

} // namespace varlat
