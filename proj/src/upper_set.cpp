#include "varlat/upper_set.hpp"

#include <algorithm>
#include <cmath>

namespace varlat {

namespace {

constexpr double kPruneTol = 1e-12;

void require_same_cone(const UpperSet& a, const UpperSet& b)
{
    if (a.dim() != b.dim()) throw Error("upper sets have different dimensions");
    if (!same_cone(a.cone(), b.cone())) throw Error("upper sets are ordered by different cones");
}

bool same_direction(const Vector& a, const Vector& b)
{
    return (a.normalized() - b.normalized()).norm() <= 1e-9;
}

void push_unique(std::vector<Vector>& dirs, const Vector& v)
{
    Vector u = v.normalized();
    for (const auto& d : dirs)
        if ((d - u).norm() <= 1e-12) return;
    dirs.push_back(u);
}

// Planar cone with nonempty interior, expressed in the basis of its rays.
struct RayBasis {
    Matrix basis;   // columns u (theta_min), w (theta_max)
    Matrix inverse;
};

std::optional<RayBasis> ray_basis(const Cone& cone)
{
    if (cone.dim() != 2 || !cone.is_pointed() || cone.generator_count() != 2) return std::nullopt;
    RayBasis rb;
    rb.basis = cone.generators();
    rb.inverse = rb.basis.inverse();
    return rb;
}

std::vector<Vector> prune_dominated(const Cone& cone, const std::vector<Vector>& points)
{
    std::vector<Vector> kept;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < points.size() && !redundant; ++j) {
            if (i == j) continue;
            const bool equal = (points[i] - points[j]).norm() <= kPruneTol;
            // Among duplicates keep the first occurrence.
            if (equal) {
                if (j < i) redundant = true;
                continue;
            }
            const double scale = 1.0 + points[i].cwiseAbs().maxCoeff();
            if (contains(cone, points[i] - points[j], kPruneTol * scale)) redundant = true;
        }
        if (!redundant) kept.push_back(points[i]);
    }
    return kept;
}

std::vector<Vector> prune_convex_planar(const UpperSet& set)
{
    std::vector<Vector> kept = prune_dominated(set.cone(), set.points());
    for (std::size_t i = 0; i < kept.size() && kept.size() > 1;) {
        std::vector<Vector> others;
        for (std::size_t j = 0; j < kept.size(); ++j)
            if (j != i) others.push_back(kept[j]);
        UpperSet rest = UpperSet::generated(set.cone(), others, true);
        const double scale = 1.0 + kept[i].cwiseAbs().maxCoeff();
        if (membership(rest, kept[i], kPruneTol * scale))
            kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(i));
        else
            ++i;
    }
    return kept;
}

std::vector<Vector> merged_directions(std::span<const UpperSet> sets)
{
    bool any = false;
    std::vector<Vector> dirs;
    for (const auto& s : sets) {
        if (s.profile_directions()) {
            any = true;
            for (const auto& d : *s.profile_directions()) push_unique(dirs, d);
        }
    }
    if (!any) return {};
    return dirs;
}

UpperSet sup_planar_f(const Cone& cone, const RayBasis& rb, std::span<const UpperSet> sets)
{
    std::vector<Vector> current = sets[0].points();
    for (std::size_t k = 1; k < sets.size(); ++k) {
        std::vector<Vector> next;
        for (const auto& p : current) {
            Vector cp = rb.inverse * p;
            for (const auto& q : sets[k].points()) {
                Vector cq = rb.inverse * q;
                next.push_back(rb.basis * cp.cwiseMax(cq));
            }
        }
        current = prune_dominated(cone, next);
    }
    return UpperSet::generated(cone, current, false);
}

UpperSet sup_planar_g(const Cone& cone, std::span<const UpperSet> sets)
{
    struct Line {
        Vector normal;
        double value;
    };
    std::vector<Line> lines;
    for (const auto& s : sets)
        for (const auto& zeta : certificate_directions(s)) lines.push_back({zeta, support(s, zeta)});

    std::vector<Vector> vertices;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            Eigen::Matrix2d m;
            m.row(0) = lines[i].normal.transpose();
            m.row(1) = lines[j].normal.transpose();
            if (std::abs(m.determinant()) <= 1e-12) continue;
            Vector v = m.inverse() * Eigen::Vector2d(lines[i].value, lines[j].value);
            const double scale = 1.0 + v.cwiseAbs().maxCoeff();
            bool feasible = true;
            for (const auto& l : lines)
                if (l.normal.dot(v) < l.value - 1e-10 * scale) {
                    feasible = false;
                    break;
                }
            if (feasible) vertices.push_back(v);
        }
    }
    if (vertices.empty()) return UpperSet::empty(cone, true);
    UpperSet out = UpperSet::generated(cone, vertices, true);
    out = UpperSet::generated(cone, prune_convex_planar(out), true);
    auto dirs = merged_directions(sets);
    if (!dirs.empty()) out = out.with_profile_directions(dirs);
    return out;
}

} // namespace

UpperSet UpperSet::generated(Cone cone, std::vector<Vector> points, bool convexified)
{
    for (const auto& p : points) {
        if (p.size() != cone.dim()) throw Error("generator dimension does not match the cone");
        if (!p.allFinite()) throw Error("generator is not finite");
    }
    if (points.empty()) return empty(std::move(cone), convexified);
    UpperSet s(Kind::generated, std::move(cone));
    s.points_ = std::move(points);
    s.convexified_ = convexified;
    return s;
}

UpperSet UpperSet::point(Cone cone, const Vector& p, bool convexified)
{
    return generated(std::move(cone), {p}, convexified);
}

UpperSet UpperSet::half_space(Cone cone, const Vector& zeta, double offset)
{
    if (zeta.size() != cone.dim()) throw Error("half-space normal dimension does not match the cone");
    if (zeta.norm() <= 0) throw Error("half-space normal must be nonzero");
    if (!in_dual(cone, zeta)) throw Error("half-space normal is not in the dual cone");
    UpperSet s(Kind::half_space, std::move(cone));
    s.normal_ = zeta;
    s.offset_ = offset;
    s.convexified_ = true;
    return s;
}

UpperSet UpperSet::empty(Cone cone, bool convexified)
{
    UpperSet s(Kind::empty, std::move(cone));
    s.convexified_ = convexified;
    return s;
}

UpperSet UpperSet::whole(Cone cone, bool convexified)
{
    UpperSet s(Kind::whole, std::move(cone));
    s.convexified_ = convexified;
    return s;
}

UpperSet UpperSet::intersection(std::vector<UpperSet> members)
{
    if (members.empty()) throw Error("intersection of an empty family");
    UpperSet s(Kind::intersection, members.front().cone());
    s.convexified_ = members.front().convexified();
    s.members_ = std::move(members);
    return s;
}

UpperSet UpperSet::with_profile_directions(std::vector<Vector> directions) const
{
    UpperSet s = *this;
    std::vector<Vector> unit;
    for (const auto& d : directions) {
        if (d.size() != dim()) throw Error("profile direction dimension mismatch");
        push_unique(unit, d);
    }
    s.directions_ = std::move(unit);
    return s;
}

double support(const UpperSet& set, const Vector& zeta)
{
    if (zeta.size() != set.dim()) throw Error("support: dimension mismatch");
    switch (set.kind()) {
    case UpperSet::Kind::empty: return kInfinity;
    case UpperSet::Kind::whole: return -kInfinity;
    case UpperSet::Kind::half_space:
        if (!same_direction(zeta, set.normal())) return -kInfinity;
        return set.offset() * zeta.norm() / set.normal().norm();
    case UpperSet::Kind::generated: {
        if (!in_dual(set.cone(), zeta)) return -kInfinity;
        double best = kInfinity;
        for (const auto& p : set.points()) best = std::min(best, zeta.dot(p));
        return best;
    }
    case UpperSet::Kind::intersection:
        throw Error("support of a lazy intersection is not available");
    }
    return -kInfinity;
}

SupportProfile support_profile(const UpperSet& set, const DualBase& base)
{
    SupportProfile profile{base, Vector(static_cast<Eigen::Index>(base.samples.size()))};
    for (std::size_t k = 0; k < base.samples.size(); ++k)
        profile.values[static_cast<Eigen::Index>(k)] = support(set, base.samples[k]);
    return profile;
}

std::vector<Vector> certificate_directions(const UpperSet& set)
{
    std::vector<Vector> dirs;
    if (set.kind() == UpperSet::Kind::half_space) {
        dirs.push_back(set.normal().normalized());
        return dirs;
    }
    if (set.kind() != UpperSet::Kind::generated) return dirs;

    const Cone dual_cone = dual(set.cone());
    for (Eigen::Index j = 0; j < dual_cone.generator_count(); ++j) push_unique(dirs, dual_cone.generators().col(j));
    if (set.profile_directions()) {
        for (const auto& d : *set.profile_directions())
            if (in_dual(set.cone(), d)) push_unique(dirs, d);
        return dirs;
    }
    if (set.dim() == 2) {
        const auto& pts = set.points();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                Vector diff = pts[j] - pts[i];
                if (diff.norm() <= 1e-14) continue;
                Vector n(2);
                n << -diff[1], diff[0];
                if (in_dual(set.cone(), n)) push_unique(dirs, n);
                if (in_dual(set.cone(), -n)) push_unique(dirs, -n);
            }
        }
        return dirs;
    }
    for (const auto& d : base_samples(dual_cone, BaseParameterization::automatic, 64).samples) push_unique(dirs, d);
    return dirs;
}

UpperSet oplus(const UpperSet& a, const UpperSet& b)
{
    require_same_cone(a, b);
    using K = UpperSet::Kind;
    const bool conv = a.convexified() && b.convexified();
    if (a.is_empty() || b.is_empty()) return UpperSet::empty(a.cone(), conv);
    if (a.is_whole() || b.is_whole()) return UpperSet::whole(a.cone(), conv);
    if (a.kind() == K::intersection || b.kind() == K::intersection)
        throw Error("oplus of a lazy intersection is not supported");

    if (a.kind() == K::half_space && b.kind() == K::half_space) {
        if (!same_direction(a.normal(), b.normal())) return UpperSet::whole(a.cone(), true);
        const double offset = a.offset() + b.offset() * a.normal().norm() / b.normal().norm();
        return UpperSet::half_space(a.cone(), a.normal(), offset);
    }
    if (a.kind() == K::half_space || b.kind() == K::half_space) {
        const UpperSet& h = a.kind() == K::half_space ? a : b;
        const UpperSet& g = a.kind() == K::half_space ? b : a;
        return UpperSet::half_space(a.cone(), h.normal(), h.offset() + support(g, h.normal()));
    }

    // Both generated.
    bool flag = conv;
    if (a.convexified() != b.convexified()) {
        if (a.points().size() == 1)
            flag = b.convexified();
        else if (b.points().size() == 1)
            flag = a.convexified();
        else
            throw Error("oplus of a convexified and a non-convexified set with several generators each");
    }
    std::vector<Vector> sums;
    sums.reserve(a.points().size() * b.points().size());
    for (const auto& p : a.points())
        for (const auto& q : b.points()) sums.push_back(p + q);
    UpperSet out = UpperSet::generated(a.cone(), prune_dominated(a.cone(), sums), flag);
    std::vector<UpperSet> both{a, b};
    auto dirs = merged_directions(both);
    if (!dirs.empty()) out = out.with_profile_directions(dirs);
    return out;
}

UpperSet lattice_inf(std::span<const UpperSet> collection)
{
    if (collection.empty()) throw Error("lattice_inf of an empty collection");
    const UpperSet& first = collection.front();
    const bool conv = first.convexified();
    for (const auto& s : collection) {
        require_same_cone(first, s);
        if (s.convexified() != conv) throw Error("lattice_inf: mixed F and G members");
    }

    std::vector<UpperSet> live;
    for (const auto& s : collection) {
        if (s.is_whole()) return UpperSet::whole(first.cone(), conv);
        if (s.kind() == UpperSet::Kind::intersection) throw Error("lattice_inf of a lazy intersection is not supported");
        if (!s.is_empty()) live.push_back(s);
    }
    if (live.empty()) return UpperSet::empty(first.cone(), conv);
    if (live.size() == 1) return live.front();

    const UpperSet* half = nullptr;
    for (const auto& s : live) {
        if (s.kind() == UpperSet::Kind::half_space) {
            if (half && !same_direction(half->normal(), s.normal())) return UpperSet::whole(first.cone(), true);
            if (!half) half = &s;
        }
    }
    if (half) {
        // cl co of a half-space and anything above some level along its
        // normal is the half-space at the lowest level.
        double level = kInfinity;
        for (const auto& s : live) {
            const double sigma = support(s, half->normal());
            level = std::min(level, sigma);
        }
        if (level == -kInfinity) return UpperSet::whole(first.cone(), true);
        return UpperSet::half_space(first.cone(), half->normal(), level);
    }

    std::vector<Vector> pts;
    for (const auto& s : live) pts.insert(pts.end(), s.points().begin(), s.points().end());
    // Hull pruning leaves the support function unchanged, so it is valid
    // under sampled profiles as well.
    std::vector<Vector> kept = (conv && first.dim() == 2)
                                   ? prune_convex_planar(UpperSet::generated(first.cone(), pts, true))
                                   : prune_dominated(first.cone(), pts);
    UpperSet out = UpperSet::generated(first.cone(), kept, conv);
    auto dirs = merged_directions(live);
    if (!dirs.empty()) out = out.with_profile_directions(dirs);
    return out;
}

UpperSet lattice_sup(std::span<const UpperSet> collection)
{
    if (collection.empty()) throw Error("lattice_sup of an empty collection");
    const UpperSet& first = collection.front();
    const bool conv = first.convexified();
    for (const auto& s : collection) {
        require_same_cone(first, s);
        if (s.convexified() != conv) throw Error("lattice_sup: mixed F and G members");
    }
    std::vector<UpperSet> live;
    for (const auto& s : collection) {
        if (s.is_empty()) return UpperSet::empty(first.cone(), conv);
        if (!s.is_whole()) live.push_back(s);
    }
    if (live.empty()) return UpperSet::whole(first.cone(), conv);
    if (live.size() == 1) return live.front();

    const bool all_generated = std::all_of(live.begin(), live.end(),
        [](const UpperSet& s) { return s.kind() == UpperSet::Kind::generated; });
    if (all_generated && first.dim() == 2) {
        if (auto rb = ray_basis(first.cone())) {
            if (!conv) return sup_planar_f(first.cone(), *rb, live);
            return sup_planar_g(first.cone(), live);
        }
    }
    return UpperSet::intersection(std::move(live));
}

UpperSet zeta_difference(const UpperSet& a, const UpperSet& b, const Vector& zeta)
{
    require_same_cone(a, b);
    if (zeta.size() != a.dim()) throw Error("zeta_difference: dimension mismatch");
    if (!in_dual(a.cone(), zeta)) throw Error("zeta_difference: zeta must lie in the dual cone minus the origin");
    // z + B is contained in A (+) H+(zeta) for every z when B is empty.
    if (b.is_empty()) return UpperSet::whole(a.cone(), true);
    if (a.is_empty()) return UpperSet::empty(a.cone(), true);
    const double sa = support(a, zeta);
    const double sb = support(b, zeta);
    if (sa == -kInfinity) return UpperSet::whole(a.cone(), true);
    if (sb == -kInfinity) return UpperSet::empty(a.cone(), true);
    return UpperSet::half_space(a.cone(), zeta, sa - sb);
}

UpperSet scalar_map_S(double xi, const Vector& zeta, const Cone& cone)
{
    if (zeta.size() != cone.dim()) throw Error("scalar_map_S: dimension mismatch");
    if (zeta.norm() <= 0) throw Error("scalar_map_S: zeta must be nonzero");
    if (!in_dual(cone, zeta)) throw Error("scalar_map_S: zeta must lie in the dual cone");
    if (std::isnan(xi)) throw Error("scalar_map_S: offset is NaN");
    if (xi == -kInfinity) return UpperSet::whole(cone, true);
    if (xi == kInfinity) return UpperSet::empty(cone, true);
    return UpperSet::half_space(cone, zeta, xi);
}

bool membership(const UpperSet& set, const Vector& z, double tol)
{
    if (z.size() != set.dim()) throw Error("membership: dimension mismatch");
    switch (set.kind()) {
    case UpperSet::Kind::empty: return false;
    case UpperSet::Kind::whole: return true;
    case UpperSet::Kind::half_space:
        return set.normal().dot(z) >= set.offset() - tol * set.normal().norm();
    case UpperSet::Kind::intersection:
        return std::all_of(set.members().begin(), set.members().end(),
                           [&](const UpperSet& m) { return membership(m, z, tol); });
    case UpperSet::Kind::generated:
        if (!set.convexified()) {
            return std::any_of(set.points().begin(), set.points().end(),
                               [&](const Vector& p) { return contains(set.cone(), z - p, tol); });
        }
        return most_violated(set, z).margin >= -tol;
    }
    return false;
}

Separation most_violated(const UpperSet& set, const Vector& z)
{
    Separation sep;
    switch (set.kind()) {
    case UpperSet::Kind::empty:
        sep.margin = -kInfinity;
        return sep;
    case UpperSet::Kind::whole: return sep;
    case UpperSet::Kind::half_space:
        sep.zeta = set.normal().normalized();
        sep.margin = (set.normal().dot(z) - set.offset()) / set.normal().norm();
        return sep;
    case UpperSet::Kind::intersection:
        for (const auto& m : set.members()) {
            Separation s = most_violated(m, z);
            if (s.margin < sep.margin) sep = s;
        }
        return sep;
    case UpperSet::Kind::generated:
        for (const auto& zeta : certificate_directions(set)) {
            const double m = zeta.dot(z) - support(set, zeta);
            if (m < sep.margin) {
                sep.margin = m;
                sep.zeta = zeta;
            }
        }
        return sep;
    }
    return sep;
}

std::vector<Vector> boundary_polyline(const UpperSet& set, double extension)
{
    if (set.kind() != UpperSet::Kind::generated || set.dim() != 2)
        throw Error("boundary_polyline needs a planar generated set");
    auto rb = ray_basis(set.cone());
    if (!rb) throw Error("boundary_polyline needs a pointed planar cone with nonempty interior");

    std::vector<Vector> coords;
    for (const auto& p : prune_dominated(set.cone(), set.points())) coords.push_back(rb->inverse * p);
    std::sort(coords.begin(), coords.end(), [](const Vector& l, const Vector& r) {
        return l[0] < r[0] || (l[0] == r[0] && l[1] > r[1]);
    });

    std::vector<Vector> chain;
    if (set.convexified()) {
        auto cross = [](const Vector& o, const Vector& a, const Vector& b) {
            return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
        };
        for (const auto& c : coords) {
            while (chain.size() >= 2 && cross(chain[chain.size() - 2], chain.back(), c) <= 0) chain.pop_back();
            chain.push_back(c);
        }
    } else {
        for (std::size_t i = 0; i < coords.size(); ++i) {
            if (i > 0) chain.push_back(make_vector({coords[i][0], coords[i - 1][1]}));
            chain.push_back(coords[i]);
        }
    }

    std::vector<Vector> out;
    out.push_back(rb->basis * (chain.front() + make_vector({0.0, extension})));
    for (const auto& c : chain) out.push_back(rb->basis * c);
    out.push_back(rb->basis * (chain.back() + make_vector({extension, 0.0})));
    return out;
}

namespace {

nlohmann::json vec_json(const Vector& v)
{
    return std::vector<double>(v.data(), v.data() + v.size());
}

Vector json_vec(const nlohmann::json& j, const std::string& field)
{
    if (!j.is_array()) throw ConfigError(field, "expected an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ConfigError(field, "expected an array of numbers");
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

} // namespace

nlohmann::json cone_to_json(const Cone& cone)
{
    if (cone.sector_angles()) {
        return {{"kind", "sector"}, {"theta_min", cone.sector_angles()->first},
                {"theta_max", cone.sector_angles()->second}};
    }
    nlohmann::json vectors = nlohmann::json::array();
    for (Eigen::Index j = 0; j < cone.generator_count(); ++j) vectors.push_back(vec_json(cone.generators().col(j)));
    return {{"kind", "generators"}, {"vectors", vectors}};
}

Cone cone_from_json(const nlohmann::json& j)
{
    if (!j.is_object()) throw ConfigError("cone", "expected an object");
    if (!j.contains("kind") || !j["kind"].is_string()) throw ConfigError("cone.kind", "missing or not a string");
    const std::string kind = j["kind"].get<std::string>();
    try {
        if (kind == "orthant") {
            if (!j.contains("dim") || !j["dim"].is_number_integer()) throw ConfigError("cone.dim", "expected an integer");
            return Cone::orthant(j["dim"].get<int>());
        }
        if (kind == "sector") {
            for (const char* f : {"theta_min", "theta_max"})
                if (!j.contains(f) || !j[f].is_number()) throw ConfigError(std::string("cone.") + f, "expected a number");
            return Cone::sector(j["theta_min"].get<double>(), j["theta_max"].get<double>());
        }
        if (kind == "generators") {
            if (!j.contains("vectors") || !j["vectors"].is_array() || j["vectors"].empty())
                throw ConfigError("cone.vectors", "expected a nonempty array of vectors");
            const auto& vs = j["vectors"];
            Matrix g;
            for (std::size_t k = 0; k < vs.size(); ++k) {
                Vector v = json_vec(vs[k], "cone.vectors[" + std::to_string(k) + "]");
                if (k == 0) g.resize(v.size(), static_cast<Eigen::Index>(vs.size()));
                if (v.size() != g.rows())
                    throw ConfigError("cone.vectors[" + std::to_string(k) + "]", "inconsistent dimension");
                g.col(static_cast<Eigen::Index>(k)) = v;
            }
            return Cone::from_generators(g);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError("cone", e.what());
    }
    throw ConfigError("cone.kind", "unknown kind '" + kind + "' (expected orthant, sector or generators)");
}

nlohmann::json to_json(const UpperSet& set)
{
    nlohmann::json j;
    j["cone"] = cone_to_json(set.cone());
    j["convexified"] = set.convexified();
    switch (set.kind()) {
    case UpperSet::Kind::empty: j["kind"] = "empty"; break;
    case UpperSet::Kind::whole: j["kind"] = "whole"; break;
    case UpperSet::Kind::half_space:
        j["kind"] = "half_space";
        j["normal"] = vec_json(set.normal());
        j["offset"] = set.offset();
        break;
    case UpperSet::Kind::generated: {
        j["kind"] = "generated";
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& p : set.points()) pts.push_back(vec_json(p));
        j["points"] = pts;
        break;
    }
    case UpperSet::Kind::intersection: {
        j["kind"] = "intersection";
        nlohmann::json ms = nlohmann::json::array();
        for (const auto& m : set.members()) ms.push_back(to_json(m));
        j["members"] = ms;
        break;
    }
    }
    if (set.profile_directions()) {
        nlohmann::json ds = nlohmann::json::array();
        for (const auto& d : *set.profile_directions()) ds.push_back(vec_json(d));
        j["profile_directions"] = ds;
    }
    return j;
}

UpperSet upper_set_from_json(const nlohmann::json& j)
{
    if (!j.is_object()) throw ConfigError("upper_set", "expected an object");
    if (!j.contains("cone")) throw ConfigError("upper_set.cone", "missing");
    Cone cone = cone_from_json(j["cone"]);
    const bool conv = j.value("convexified", true);
    const std::string kind = j.value("kind", std::string("generated"));
    UpperSet out = UpperSet::empty(cone, conv);
    if (kind == "empty") {
        out = UpperSet::empty(cone, conv);
    } else if (kind == "whole") {
        out = UpperSet::whole(cone, conv);
    } else if (kind == "half_space") {
        out = UpperSet::half_space(cone, json_vec(j.at("normal"), "upper_set.normal"), j.at("offset").get<double>());
    } else if (kind == "generated") {
        std::vector<Vector> pts;
        const auto& arr = j.at("points");
        for (std::size_t k = 0; k < arr.size(); ++k)
            pts.push_back(json_vec(arr[k], "upper_set.points[" + std::to_string(k) + "]"));
        out = UpperSet::generated(cone, pts, conv);
    } else if (kind == "intersection") {
        std::vector<UpperSet> ms;
        for (const auto& m : j.at("members")) ms.push_back(upper_set_from_json(m));
        out = UpperSet::intersection(ms);
    } else {
        throw ConfigError("upper_set.kind", "unknown kind '" + kind + "'");
    }
    if (j.contains("profile_directions")) {
        std::vector<Vector> ds;
        for (const auto& d : j["profile_directions"]) ds.push_back(json_vec(d, "upper_set.profile_directions"));
        out = out.with_profile_directions(ds);
    }
    return out;
}

} // namespace varlat
