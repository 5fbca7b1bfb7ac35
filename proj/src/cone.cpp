#include "varlat/cone.hpp"

#include "nnls.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace varlat {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngleTol = 1e-12;

Vector unit_direction(double theta)
{
    Vector v(2);
    v << std::cos(theta), std::sin(theta);
    return v;
}

void choose(int n, int k, int start, std::vector<int>& current, std::vector<std::vector<int>>& out)
{
    if (static_cast<int>(current.size()) == k) {
        out.push_back(current);
        return;
    }
    for (int i = start; i < n; ++i) {
        current.push_back(i);
        choose(n, k, i + 1, current, out);
        current.pop_back();
    }
}

bool parallel_same_direction(const Vector& a, const Vector& b, double tol)
{
    return (a.normalized() - b.normalized()).norm() <= tol;
}

Matrix stack(const std::vector<Vector>& cols, int dim)
{
    Matrix m(dim, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = cols[i];
    return m;
}

// Facet normals of a full-dimensional cone in d > 2.
std::vector<Vector> facet_normals(const Matrix& gens)
{
    const int d = static_cast<int>(gens.rows());
    const int k = static_cast<int>(gens.cols());
    std::vector<std::vector<int>> subsets;
    std::vector<int> current;
    choose(k, d - 1, 0, current, subsets);

    std::vector<Vector> normals;
    for (const auto& subset : subsets) {
        Matrix rows(d - 1, d);
        for (int r = 0; r < d - 1; ++r) rows.row(r) = gens.col(subset[r]).transpose();
        Eigen::FullPivLU<Matrix> lu(rows);
        lu.setThreshold(1e-10);
        if (lu.rank() != d - 1) continue;
        Vector n = lu.kernel().col(0).normalized();
        bool pos = false;
        bool neg = false;
        for (int j = 0; j < k; ++j) {
            double s = n.dot(gens.col(j));
            if (s > kConeTol) pos = true;
            if (s < -kConeTol) neg = true;
        }
        if (pos && neg) continue;
        if (neg) n = -n;
        if (!pos && !neg) continue; // all generators in the hyperplane
        bool dup = false;
        for (const auto& m : normals) {
            if (parallel_same_direction(m, n, 1e-9)) {
                dup = true;
                break;
            }
        }
        if (!dup) normals.push_back(n);
    }
    return normals;
}

} // namespace

Cone Cone::orthant(int dim)
{
    if (dim < 1) throw Error("orthant dimension must be positive");
    if (dim == 2) return planar_from_angles(0.0, kPi / 2);
    Cone c;
    c.generators_ = Matrix::Identity(dim, dim);
    c.pointed_ = true;
    return c;
}

Cone Cone::sector(double theta_min, double theta_max)
{
    if (!std::isfinite(theta_min) || !std::isfinite(theta_max))
        throw Error("sector angles must be finite");
    if (theta_max < theta_min - kAngleTol) throw Error("sector requires theta_min <= theta_max");
    if (theta_max - theta_min > kPi + kAngleTol)
        throw Error("sector wider than pi is not convex or is the whole plane");
    return planar_from_angles(theta_min, std::max(theta_min, theta_max));
}

Cone Cone::planar_from_angles(double lo, double hi)
{
    // Keep lo in (-pi, pi].
    double shift = std::round(lo / (2 * kPi)) * 2 * kPi;
    lo -= shift;
    hi -= shift;
    if (lo <= -kPi) {
        lo += 2 * kPi;
        hi += 2 * kPi;
    }

    Cone c;
    c.angles_ = std::make_pair(lo, hi);
    const double span = hi - lo;
    if (span < kAngleTol) {
        c.generators_ = unit_direction(lo);
        c.pointed_ = true;
    } else if (std::abs(span - kPi) <= kAngleTol) {
        Matrix g(2, 3);
        g.col(0) = unit_direction(lo);
        g.col(1) = unit_direction(lo + kPi / 2);
        g.col(2) = unit_direction(hi);
        c.generators_ = g;
        c.pointed_ = false;
    } else {
        Matrix g(2, 2);
        g.col(0) = unit_direction(lo);
        g.col(1) = unit_direction(hi);
        c.generators_ = g;
        c.pointed_ = true;
    }
    return c;
}

Cone Cone::from_generators(const Matrix& generators)
{
    if (generators.rows() < 1 || generators.cols() < 1) throw Error("cone needs at least one generator");
    const int d = static_cast<int>(generators.rows());
    std::vector<Vector> unit;
    for (Eigen::Index j = 0; j < generators.cols(); ++j) {
        Vector g = generators.col(j);
        if (!g.allFinite()) throw Error("cone generator is not finite");
        double n = g.norm();
        if (n <= 1e-14) throw Error("degenerate cone: zero generator at index " + std::to_string(j));
        g /= n;
        bool dup = false;
        for (const auto& u : unit) {
            if ((u - g).norm() <= 1e-12) {
                dup = true;
                break;
            }
        }
        if (!dup) unit.push_back(g);
    }

    if (d == 2) {
        std::vector<double> angles;
        for (const auto& g : unit) {
            double th = std::atan2(g[1], g[0]);
            if (th < 0) th += 2 * kPi;
            angles.push_back(th);
        }
        std::sort(angles.begin(), angles.end());
        if (angles.size() == 1) return planar_from_angles(angles[0], angles[0]);
        // The cone is the complement of the widest angular gap.
        double best_gap = -1;
        std::size_t best = 0;
        for (std::size_t i = 0; i < angles.size(); ++i) {
            double next = (i + 1 < angles.size()) ? angles[i + 1] : angles[0] + 2 * kPi;
            double gap = next - angles[i];
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (best_gap < kPi - kAngleTol) throw Error("generators span the whole plane; the cone must be a proper subset");
        double lo = (best + 1 < angles.size()) ? angles[best + 1] : angles[0];
        double hi = angles[best];
        if (hi < lo) hi += 2 * kPi;
        return planar_from_angles(lo, std::min(hi, lo + kPi));
    }

    // d != 2: drop generators lying in the cone of the remaining ones.
    std::vector<Vector> extreme;
    for (std::size_t i = 0; i < unit.size(); ++i) {
        std::vector<Vector> others(extreme);
        for (std::size_t j = i + 1; j < unit.size(); ++j) others.push_back(unit[j]);
        if (!others.empty() && detail::nnls_residual(stack(others, d), unit[i]) <= 1e-10) continue;
        extreme.push_back(unit[i]);
    }

    Cone c;
    c.generators_ = stack(extreme, d);
    // Pointed iff 0 is the only nonnegative combination summing to 0, tested
    // through -g not belonging to the cone for any generator.
    c.pointed_ = true;
    for (const auto& g : extreme) {
        if (detail::nnls_residual(c.generators_, -g) <= 1e-10) {
            c.pointed_ = false;
            break;
        }
    }
    if (d == 1) {
        if (extreme.size() > 1) throw Error("generators span the whole line; the cone must be a proper subset");
    } else if (!c.pointed_) {
        Eigen::FullPivLU<Matrix> lu(c.generators_);
        if (lu.rank() == d && facet_normals(c.generators_).empty())
            throw Error("generators span the whole space; the cone must be a proper subset");
    }
    return c;
}

std::string Cone::describe() const
{
    std::ostringstream os;
    os << "cone in R^" << dim() << " with " << generator_count() << " generators";
    if (angles_) os << ", sector [" << angles_->first << ", " << angles_->second << "]";
    if (!pointed_) os << " (not pointed: contains a line)";
    return os.str();
}

Cone dual(const Cone& cone)
{
    const int d = cone.dim();
    if (d == 2) {
        auto [lo, hi] = *cone.sector_angles();
        const double span = hi - lo;
        if (span < kAngleTol) return Cone::sector(lo - kPi / 2, lo + kPi / 2);
        if (std::abs(span - kPi) <= kAngleTol) {
            double mid = lo + kPi / 2;
            return Cone::sector(mid, mid);
        }
        return Cone::sector(hi - kPi / 2, lo + kPi / 2);
    }
    if (d == 1) {
        return Cone::from_generators(cone.generators());
    }
    Eigen::FullPivLU<Matrix> lu(cone.generators());
    if (lu.rank() < d)
        throw Error("dual in dimension > 2 requires a cone with nonempty interior");
    auto normals = facet_normals(cone.generators());
    if (normals.empty()) throw Error("cone has no facets; it is the whole space");
    return Cone::from_generators(stack(normals, d));
}

double distance(const Cone& cone, const Vector& z)
{
    if (z.size() != cone.dim()) throw Error("dimension mismatch in cone distance");
    return detail::nnls_residual(cone.generators(), z);
}

bool contains(const Cone& cone, const Vector& z, double tol)
{
    return distance(cone, z) <= tol;
}

bool in_dual(const Cone& cone, const Vector& zeta, double tol)
{
    if (zeta.size() != cone.dim()) return false;
    if (zeta.norm() <= 0.0) return false;
    const double scale = zeta.norm();
    for (Eigen::Index j = 0; j < cone.generator_count(); ++j)
        if (zeta.dot(cone.generators().col(j)) < -tol * scale) return false;
    return true;
}

bool same_cone(const Cone& lhs, const Cone& rhs, double tol)
{
    if (lhs.dim() != rhs.dim() || lhs.generator_count() != rhs.generator_count()) return false;
    for (Eigen::Index i = 0; i < lhs.generator_count(); ++i) {
        bool found = false;
        for (Eigen::Index j = 0; j < rhs.generator_count(); ++j) {
            if ((lhs.generators().col(i) - rhs.generators().col(j)).norm() <= tol) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

std::string to_string(BaseParameterization p)
{
    switch (p) {
    case BaseParameterization::unit_norm: return "unit-norm";
    case BaseParameterization::sum_one: return "sum-one";
    case BaseParameterization::automatic: return "auto";
    }
    return "auto";
}

BaseParameterization parse_base_parameterization(const std::string& name)
{
    if (name == "unit-norm") return BaseParameterization::unit_norm;
    if (name == "sum-one") return BaseParameterization::sum_one;
    if (name == "auto") return BaseParameterization::automatic;
    throw Error("unknown base parameterization '" + name + "' (expected unit-norm, sum-one or auto)");
}

bool sum_one_covers(const Cone& dual_cone)
{
    if (!dual_cone.is_pointed()) return false;
    for (Eigen::Index j = 0; j < dual_cone.generator_count(); ++j)
        if (dual_cone.generators().col(j).sum() <= 1e-12) return false;
    return true;
}

Vector normalize_to_base(const Vector& zeta, BaseParameterization p)
{
    if (p == BaseParameterization::sum_one) {
        double s = zeta.sum();
        if (s <= 0) throw Error("vector does not meet the sum-one base");
        return zeta / s;
    }
    double n = zeta.norm();
    if (n <= 0) throw Error("zero vector has no base representative");
    return zeta / n;
}

DualBase base_samples(const Cone& dual_cone, BaseParameterization p, int count)
{
    if (count < 1) throw Error("base sample count must be positive");
    const bool sum_one_ok = sum_one_covers(dual_cone);
    if (p == BaseParameterization::automatic)
        p = sum_one_ok ? BaseParameterization::sum_one : BaseParameterization::unit_norm;
    if (p == BaseParameterization::sum_one && !sum_one_ok)
        throw Error("the plane zeta_1 + ... + zeta_d = 1 misses part of the dual cone " + dual_cone.describe() +
                    "; use the unit-norm base");

    DualBase base{dual_cone, p, {}};
    const int d = dual_cone.dim();

    if (d == 2) {
        auto [lo, hi] = *dual_cone.sector_angles();
        if (hi - lo < kAngleTol || count == 1) {
            base.samples.push_back(normalize_to_base(unit_direction(lo), p));
            return base;
        }
        if (p == BaseParameterization::sum_one) {
            // zeta_1 = cos/(cos+sin) decreases with the angle.
            auto first = [](double th) { return std::cos(th) / (std::cos(th) + std::sin(th)); };
            const double z_lo = first(hi);
            const double z_hi = first(lo);
            for (int k = 0; k < count; ++k) {
                double z1 = (k == count - 1) ? z_hi : z_lo + (z_hi - z_lo) * k / (count - 1);
                base.samples.push_back(make_vector({z1, 1.0 - z1}));
            }
        } else {
            for (int k = 0; k < count; ++k) {
                double th = (k == count - 1) ? hi : lo + (hi - lo) * k / (count - 1);
                base.samples.push_back(unit_direction(th));
            }
        }
        return base;
    }

    // Vertices first, then a barycentric grid over them.
    std::vector<Vector> vertices;
    for (Eigen::Index j = 0; j < dual_cone.generator_count(); ++j)
        vertices.push_back(normalize_to_base(dual_cone.generators().col(j), p));
    std::vector<Vector> points(vertices);
    const int k = static_cast<int>(vertices.size());
    auto already = [&points](const Vector& v) {
        for (const auto& q : points)
            if (parallel_same_direction(q, v, 1e-9)) return true;
        return false;
    };
    for (int resolution = 2; static_cast<int>(points.size()) < count && resolution < 64; ++resolution) {
        std::vector<int> weights(k, 0);
        // Enumerate compositions of `resolution` into k parts.
        std::function<void(int, int)> rec = [&](int idx, int remaining) {
            if (static_cast<int>(points.size()) >= count) return;
            if (idx == k - 1) {
                weights[idx] = remaining;
                Vector v = Vector::Zero(d);
                for (int i = 0; i < k; ++i) v += (static_cast<double>(weights[i]) / resolution) * vertices[i];
                if (v.norm() > 1e-12) {
                    v = normalize_to_base(v, p);
                    if (!already(v)) points.push_back(v);
                }
                return;
            }
            for (int w = remaining; w >= 0; --w) {
                weights[idx] = w;
                rec(idx + 1, remaining - w);
            }
        };
        rec(0, resolution);
    }
    if (static_cast<int>(points.size()) > count) points.resize(static_cast<std::size_t>(count));
    base.samples = std::move(points);
    return base;
}

} // namespace varlat
