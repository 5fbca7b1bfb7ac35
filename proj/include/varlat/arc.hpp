#pragma once

#include "varlat/core.hpp"

namespace varlat {

/// Uniform grid t_0 = a, ..., t_{N+1} = b with N interior nodes.
struct Grid {
    double a = 0.0;
    double b = 1.0;
    int interior = 0;

    int nodes() const { return interior + 2; }
    double step() const { return (b - a) / (interior + 1); }
    double t(int i) const { return i == interior + 1 ? b : a + step() * i; }
};

/// Fixed-endpoint problem data: interval and boundary values.
struct Boundary {
    double a = 0.0;
    double b = 1.0;
    Vector start; // y(a) = A
    Vector end;   // y(b) = B

    int state_dim() const { return static_cast<int>(start.size()); }
};

class Perturbation;

/**
 * Discretized admissible curve: (N+2) x n node values on a uniform grid.
 * The endpoint rows are set at construction and never modified afterwards.
 */
class Arc {
public:
    Arc(const Grid& grid, Matrix values);

    /// Straight line from `boundary.start` to `boundary.end`.
    static Arc straight(const Boundary& boundary, int interior);

    /// Sample y(t) at the nodes, then pin the endpoints to the boundary.
    template <typename Fn>
    static Arc sample(const Boundary& boundary, int interior, Fn&& fn);

    const Grid& grid() const { return grid_; }
    const Matrix& values() const { return values_; }
    int state_dim() const { return static_cast<int>(values_.cols()); }
    int interior() const { return grid_.interior; }
    Vector node(int i) const { return values_.row(i).transpose(); }
    /// Forward difference on cell k = [t_k, t_{k+1}].
    Vector velocity(int k) const { return (values_.row(k + 1) - values_.row(k)).transpose() / grid_.step(); }

    /// Interior node values flattened node-major: x[(i-1) n + j] = y_j(t_i).
    Vector interior_vector() const;
    Arc with_interior(const Vector& x) const;

    Arc operator+(const Perturbation& v) const;

private:
    Grid grid_;
    Matrix values_;
};

/// Zero-endpoint variation on the same grid as an arc.
class Perturbation {
public:
    Perturbation(const Grid& grid, Matrix values);

    static Perturbation zero(const Grid& grid, int state_dim);
    /// Hat function equal to one at interior node `node` in component `component`.
    static Perturbation hat(const Grid& grid, int state_dim, int node, int component);
    static Perturbation from_interior(const Grid& grid, int state_dim, const Vector& x);

    template <typename Fn>
    static Perturbation sample(const Grid& grid, int state_dim, Fn&& fn);

    const Grid& grid() const { return grid_; }
    const Matrix& values() const { return values_; }
    int state_dim() const { return static_cast<int>(values_.cols()); }
    Vector interior_vector() const;
    Vector velocity(int k) const { return (values_.row(k + 1) - values_.row(k)).transpose() / grid_.step(); }

    Perturbation operator*(double s) const { return Perturbation(grid_, values_ * s); }
    Perturbation operator+(const Perturbation& o) const;
    Perturbation operator-() const { return Perturbation(grid_, -values_); }

private:
    Grid grid_;
    Matrix values_;
};

inline Perturbation operator*(double s, const Perturbation& v) { return v * s; }

template <typename Fn>
Arc Arc::sample(const Boundary& boundary, int interior, Fn&& fn)
{
    Grid grid{boundary.a, boundary.b, interior};
    Matrix values(grid.nodes(), boundary.state_dim());
    for (int i = 0; i < grid.nodes(); ++i) {
        Vector y = fn(grid.t(i));
        values.row(i) = y.transpose();
    }
    values.row(0) = boundary.start.transpose();
    values.row(grid.nodes() - 1) = boundary.end.transpose();
    return Arc(grid, std::move(values));
}

template <typename Fn>
Perturbation Perturbation::sample(const Grid& grid, int state_dim, Fn&& fn)
{
    Matrix values(grid.nodes(), state_dim);
    for (int i = 0; i < grid.nodes(); ++i) {
        Vector v = fn(grid.t(i));
        values.row(i) = v.transpose();
    }
    values.row(0).setZero();
    values.row(grid.nodes() - 1).setZero();
    return Perturbation(grid, std::move(values));
}

} // namespace varlat
