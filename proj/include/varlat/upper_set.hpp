#pragma once

#include "varlat/cone.hpp"

#include <nlohmann/json.hpp>

#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace varlat {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/**
 * Element of F(R^d, C) or G(R^d, C): an upper set A = A + C described by
 * finitely many generator points, or one of the special values.
 *
 * - `generated`: cl(U_i (p_i + C)) when not convexified (F), cl co(P + C)
 *   when convexified (G).
 * - `half_space`: {z : zeta . z >= offset} with zeta in C+ (always in G).
 * - `intersection`: lazy meet of members, membership is the conjunction.
 * - `empty` / `whole`: greatest and least elements under inclusion order
 *   reversed (A <= B iff A contains B).
 *
 * Membership in a convexified generated set is decided by the support
 * profile on a finite set of dual directions: the attached ones when
 * present, otherwise every facet-normal candidate (exact) in d = 2 and a
 * dense dual-base sample in d > 2.
 */
class UpperSet {
public:
    enum class Kind { generated, half_space, intersection, empty, whole };

    static UpperSet generated(Cone cone, std::vector<Vector> points, bool convexified);
    static UpperSet point(Cone cone, const Vector& p, bool convexified = true);
    static UpperSet half_space(Cone cone, const Vector& zeta, double offset);
    static UpperSet empty(Cone cone, bool convexified = true);
    static UpperSet whole(Cone cone, bool convexified = true);
    static UpperSet intersection(std::vector<UpperSet> members);

    Kind kind() const { return kind_; }
    const Cone& cone() const { return cone_; }
    int dim() const { return cone_.dim(); }
    bool convexified() const { return convexified_; }
    const std::vector<Vector>& points() const { return points_; }
    const Vector& normal() const { return normal_; }
    double offset() const { return offset_; }
    const std::vector<UpperSet>& members() const { return members_; }

    bool is_empty() const { return kind_ == Kind::empty; }
    bool is_whole() const { return kind_ == Kind::whole; }

    /// Dual directions used for profile-based membership of G sets.
    const std::optional<std::vector<Vector>>& profile_directions() const { return directions_; }
    UpperSet with_profile_directions(std::vector<Vector> directions) const;

private:
    UpperSet(Kind kind, Cone cone) : kind_(kind), cone_(std::move(cone)) {}

    Kind kind_;
    Cone cone_;
    bool convexified_ = true;
    std::vector<Vector> points_;
    Vector normal_;
    double offset_ = 0.0;
    std::vector<UpperSet> members_;
    std::optional<std::vector<Vector>> directions_;
};

/// sigma_A(zeta) = inf_{a in A} zeta . a, with +inf for the empty set and
/// -inf when zeta is not in the dual of the set's recession cone.
double support(const UpperSet& set, const Vector& zeta);

/// Support function sampled on a dual base.
struct SupportProfile {
    DualBase base;
    Vector values;
};

SupportProfile support_profile(const UpperSet& set, const DualBase& base);

/// Dual directions certifying membership in a convexified set.
std::vector<Vector> certificate_directions(const UpperSet& set);

/// A (+) B = cl(A + B).
UpperSet oplus(const UpperSet& a, const UpperSet& b);

/// Lattice infimum: closed union (F) or closed convex hull of the union (G).
UpperSet lattice_inf(std::span<const UpperSet> collection);

/// Lattice supremum: intersection. Planar generated collections are
/// materialized into generators, everything else stays lazy.
UpperSet lattice_sup(std::span<const UpperSet> collection);

/// A -_zeta B = {z : zeta . z + sigma_B(zeta) >= sigma_A(zeta)}.
UpperSet zeta_difference(const UpperSet& a, const UpperSet& b, const Vector& zeta);

/// S_(xi, zeta) = {z : zeta . z >= xi}; xi = -inf gives the whole space.
UpperSet scalar_map_S(double xi, const Vector& zeta, const Cone& cone);

/// H+(zeta) = {z : zeta . z >= 0}.
inline UpperSet half_space_H(const Vector& zeta, const Cone& cone) { return scalar_map_S(0.0, zeta, cone); }

bool membership(const UpperSet& set, const Vector& z, double tol = kDefaultTol);

/// Most violated certificate direction for z, with its margin
/// zeta . z - sigma(zeta) (negative when z is separated). Unit-norm zeta.
struct Separation {
    Vector zeta;
    double margin = kInfinity;
};
Separation most_violated(const UpperSet& set, const Vector& z);

/// Lower boundary of a planar generated set as a polyline, with both ends
/// extended by `extension` along the cone's boundary rays.
std::vector<Vector> boundary_polyline(const UpperSet& set, double extension = 1.0);

nlohmann::json cone_to_json(const Cone& cone);
Cone cone_from_json(const nlohmann::json& j);

nlohmann::json to_json(const UpperSet& set);
UpperSet upper_set_from_json(const nlohmann::json& j);

} // namespace varlat
