#pragma once

#include "varlat/core.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace varlat {

/**
 * Polyhedral closed convex cone in R^d, stored as the nonnegative hull of a
 * finite list of unit-length generators (columns of `generators()`).
 *
 * Planar cones are classified by their angular extent: a pointed sector
 * (span < pi), a half-plane (span == pi) or a single ray. Redundant
 * generators are dropped on construction, so `generators()` lists extreme
 * rays only (plus one interior direction for a half-plane).
 */
class Cone {
public:
    static Cone orthant(int dim);
    /// Planar sector {rho (cos th, sin th) : rho >= 0, theta_min <= th <= theta_max}.
    static Cone sector(double theta_min, double theta_max);
    /// Columns of `generators` span the cone.
    static Cone from_generators(const Matrix& generators);

    int dim() const { return static_cast<int>(generators_.rows()); }
    const Matrix& generators() const { return generators_; }
    Vector generator(Eigen::Index i) const { return generators_.col(i); }
    Eigen::Index generator_count() const { return generators_.cols(); }

    /// True when the cone contains no line. Non-pointed cones are accepted.
    bool is_pointed() const { return pointed_; }

    /// Angular interval [min, max] of a planar cone, max - min in [0, pi].
    const std::optional<std::pair<double, double>>& sector_angles() const { return angles_; }

    /// Human-readable one-liner, flags non-pointed cones.
    std::string describe() const;

private:
    Cone() = default;
    static Cone planar_from_angles(double lo, double hi);

    Matrix generators_;
    bool pointed_ = true;
    std::optional<std::pair<double, double>> angles_;
};

/// Dual cone C+ = {zeta : zeta . z >= 0 for all z in C}.
Cone dual(const Cone& cone);

/// Euclidean distance from z to the cone (nonnegative least squares).
double distance(const Cone& cone, const Vector& z);

/// True iff z lies within `tol` of the cone.
bool contains(const Cone& cone, const Vector& z, double tol = kDefaultTol);

/// zeta . g >= -tol for every generator g of C, and zeta != 0.
bool in_dual(const Cone& cone, const Vector& zeta, double tol = kConeTol);

/// Generator-set equality up to positive scaling and reordering.
bool same_cone(const Cone& lhs, const Cone& rhs, double tol = 1e-9);

enum class BaseParameterization { unit_norm, sum_one, automatic };

std::string to_string(BaseParameterization p);
BaseParameterization parse_base_parameterization(const std::string& name);

/// Finite sample of a base of the dual cone C+.
struct DualBase {
    Cone cone; // the dual cone C+
    BaseParameterization parameterization = BaseParameterization::sum_one;
    std::vector<Vector> samples;
};

/// Whether the plane zeta_1 + ... + zeta_d = 1 meets every ray of `dual_cone`.
bool sum_one_covers(const Cone& dual_cone);

/// Rescale a nonzero dual vector onto the chosen base.
Vector normalize_to_base(const Vector& zeta, BaseParameterization p);

/**
 * `count` samples evenly spread over a base of `dual_cone`, endpoints
 * included. Planar sum-one bases are spaced uniformly in zeta_1 (ascending),
 * planar unit-norm bases uniformly in angle. In d > 2 the samples are the
 * base vertices followed by a barycentric grid. `automatic` picks sum-one
 * where it covers the dual cone, else unit-norm.
 */
DualBase base_samples(const Cone& dual_cone, BaseParameterization p, int count);

} // namespace varlat
