#include "oracles.hpp"

#include "varlat/upper_set.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace varlat;

namespace {

const Cone R2 = Cone::orthant(2);

UpperSet gen(std::vector<Vector> pts, bool conv = true) { return UpperSet::generated(R2, std::move(pts), conv); }

std::vector<Vector> grid_points(double lo, double hi, int n)
{
    std::vector<Vector> out;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.push_back(make_vector({lo + (hi - lo) * i / (n - 1.0), lo + (hi - lo) * j / (n - 1.0)}));
    return out;
}

std::vector<Eigen::Vector2d> as2d(const std::vector<Vector>& pts)
{
    std::vector<Eigen::Vector2d> out;
    for (const auto& p : pts) out.emplace_back(p[0], p[1]);
    return out;
}

} // namespace

TEST(Oplus, Examples)
{
    const UpperSet t = oplus(gen({make_vector({0, 0})}), gen({make_vector({1, 2})}));
    for (const auto& z : grid_points(-1, 4, 21))
        EXPECT_EQ(membership(t, z), z[0] >= 1 - 1e-12 && z[1] >= 2 - 1e-12);

    EXPECT_TRUE(oplus(gen({make_vector({0, 1})}), UpperSet::empty(R2)).is_empty());
    EXPECT_TRUE(oplus(UpperSet::empty(R2), gen({make_vector({0, 1})})).is_empty());

    const UpperSet s = gen({make_vector({0, 1}), make_vector({1, 0})}, false);
    const UpperSet id = oplus(s, gen({make_vector({0, 0})}, false));
    for (const auto& z : grid_points(-1, 2, 31)) EXPECT_EQ(membership(id, z), membership(s, z));
}

TEST(Oplus, AssociativeCommutative)
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> N;
    for (int trial = 0; trial < 20; ++trial) {
        auto rnd = [&] {
            std::vector<Vector> p;
            for (int k = 0; k < 3; ++k) p.push_back(make_vector({N(rng), N(rng)}));
            return gen(p);
        };
        const UpperSet a = rnd(), b = rnd(), c = rnd();
        const UpperSet l = oplus(oplus(a, b), c), r = oplus(a, oplus(b, c)), ba = oplus(b, a), ab = oplus(a, b);
        for (const auto& z : grid_points(-6, 6, 25)) {
            EXPECT_EQ(membership(l, z, 1e-9), membership(r, z, 1e-9));
            EXPECT_EQ(membership(ab, z, 1e-9), membership(ba, z, 1e-9));
        }
    }
}

TEST(LatticeInf, StaircaseAndHull)
{
    const std::vector<UpperSet> F{gen({make_vector({0, 1})}, false), gen({make_vector({1, 0})}, false)};
    const UpperSet f = lattice_inf(F);
    EXPECT_FALSE(f.convexified());
    EXPECT_TRUE(membership(f, make_vector({1, 1})));
    EXPECT_FALSE(membership(f, make_vector({0.4, 0.4})));
    EXPECT_FALSE(membership(f, make_vector({0.5, 0.5})));

    const std::vector<UpperSet> G{gen({make_vector({0, 1})}), gen({make_vector({1, 0})})};
    const UpperSet g = lattice_inf(G);
    EXPECT_TRUE(g.convexified());
    EXPECT_TRUE(membership(g, make_vector({0.5, 0.5})));
    EXPECT_FALSE(membership(g, make_vector({0.4, 0.4})));

    const std::vector<Eigen::Vector2d> pts{{0, 1}, {1, 0}};
    for (const auto& z : grid_points(-0.5, 1.5, 41)) {
        const Eigen::Vector2d z2(z[0], z[1]);
        if (std::abs(z[0] + z[1] - 1) > 1e-3 && std::abs(std::min(z[0], z[1])) > 1e-3) {
            EXPECT_EQ(membership(g, z), oracle::in_orthant_hull(pts, z2, 0)) << z.transpose();
            EXPECT_EQ(membership(f, z), oracle::in_orthant_staircase(pts, z2, 0)) << z.transpose();
        }
    }
}

TEST(LatticeInf, SingletonAndMixedFlags)
{
    const UpperSet a = gen({make_vector({0.3, -1})});
    const UpperSet inf = lattice_inf(std::vector<UpperSet>{a});
    for (const auto& z : grid_points(-2, 2, 21)) EXPECT_EQ(membership(inf, z), membership(a, z));
    const std::vector<UpperSet> mixed{gen({make_vector({0, 1})}, false), gen({make_vector({1, 0})}, true)};
    EXPECT_THROW(lattice_inf(mixed), Error);
    EXPECT_THROW(lattice_sup(mixed), Error);
}

TEST(LatticeSup, Examples)
{
    const std::vector<UpperSet> c{gen({make_vector({0, 1})}), gen({make_vector({1, 0})})};
    const UpperSet s = lattice_sup(c);
    for (const auto& z : grid_points(-1, 3, 41))
        EXPECT_EQ(membership(s, z), z[0] >= 1 - 1e-12 && z[1] >= 1 - 1e-12) << z.transpose();
    const UpperSet one = lattice_sup(std::vector<UpperSet>{c[0]});
    for (const auto& z : grid_points(-1, 3, 21)) EXPECT_EQ(membership(one, z), membership(c[0], z));
}

TEST(LatticeSup, HalfSpacesGiveTheCone)
{
    const Cone C = Cone::sector(-std::numbers::pi / 4, std::numbers::pi / 2);
    const DualBase b = base_samples(dual(C), BaseParameterization::automatic, 41);
    std::vector<UpperSet> hs;
    for (const auto& z : b.samples) hs.push_back(half_space_H(z, C));
    const UpperSet s = lattice_sup(hs);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(-3, 3);
    for (int i = 0; i < 400; ++i) {
        const Vector z = make_vector({U(rng), U(rng)});
        const double d = distance(C, z);
        if (d < 1e-9) {
            EXPECT_TRUE(membership(s, z));
        }
        if (d > 0.05) {
            EXPECT_FALSE(membership(s, z));
        }
    }
}

TEST(LatticeLaws, InfIsGreatestLowerBoundSupIsLeastUpperBound)
{
    // Order: A <= B iff A contains B. Checked on a 50 x 50 membership grid, with the
    // infimum compared against brute-force union and hull membership.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-2, 2);
    std::uniform_int_distribution<int> K(1, 4), M(1, 4);
    const auto grid = grid_points(-3, 3, 50);
    for (int trial = 0; trial < 200; ++trial) {
        const bool conv = trial % 2;
        std::vector<UpperSet> col;
        std::vector<std::vector<Vector>> raw;
        for (int m = M(rng); m > 0; --m) {
            std::vector<Vector> p;
            for (int k = K(rng); k > 0; --k) p.push_back(make_vector({U(rng), U(rng)}));
            raw.push_back(p);
            col.push_back(gen(p, conv));
        }
        const UpperSet inf = lattice_inf(col), sup = lattice_sup(col);
        std::vector<Vector> all;
        for (const auto& r : raw) all.insert(all.end(), r.begin(), r.end());
        for (const auto& z : grid) {
            bool any = false, every = true;
            for (const auto& s : col) {
                const bool in = membership(s, z);
                any |= in;
                every &= in;
            }
            // Lower bound: every member is contained in inf. Upper bound: sup is contained in every member.
            if (any) {
                EXPECT_TRUE(membership(inf, z, 1e-9));
            }
            if (membership(sup, z, 1e-12)) {
                EXPECT_TRUE(every);
            }
            // Greatest lower bound: inf equals the union (F) or its hull (G), checked by brute force.
            const Eigen::Vector2d z2(z[0], z[1]);
            const bool strict_in = conv ? oracle::in_orthant_hull(as2d(all), z2, -1e-7)
                                        : oracle::in_orthant_staircase(as2d(all), z2, -1e-7);
            const bool loose_in = conv ? oracle::in_orthant_hull(as2d(all), z2, 1e-7)
                                       : oracle::in_orthant_staircase(as2d(all), z2, 1e-7);
            if (strict_in) {
                EXPECT_TRUE(membership(inf, z));
            }
            if (!loose_in) {
                EXPECT_FALSE(membership(inf, z));
            }
            // Least upper bound: z in every member implies z in sup.
            if (every) {
                EXPECT_TRUE(membership(sup, z, 1e-9));
            }
        }
    }
}

TEST(SupportProfile, HomogeneousAndInfIsPointwiseMin)
{
    std::mt19937_64 rng(13);
    std::normal_distribution<double> N;
    const DualBase b = base_samples(dual(R2), BaseParameterization::sum_one, 21);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<UpperSet> col;
        for (int m = 0; m < 3; ++m) col.push_back(gen({make_vector({N(rng), N(rng)}), make_vector({N(rng), N(rng)})}));
        const UpperSet inf = lattice_inf(col);
        const SupportProfile p = support_profile(inf, b);
        for (Eigen::Index i = 0; i < p.values.size(); ++i) {
            double m = kInfinity;
            for (const auto& s : col) m = std::min(m, support(s, b.samples[i]));
            EXPECT_NEAR(p.values[i], m, 1e-12);
            EXPECT_NEAR(support(inf, 3.5 * b.samples[i]), 3.5 * p.values[i], 1e-12);
        }
    }
}

TEST(ZetaDifference, Examples)
{
    const Vector zeta = make_vector({0.5, 0.5});
    const UpperSet A = UpperSet::half_space(R2, zeta, 1.0), B = UpperSet::half_space(R2, zeta, 0.0);
    const UpperSet d = zeta_difference(A, B, zeta);
    ASSERT_EQ(d.kind(), UpperSet::Kind::half_space);
    EXPECT_NEAR(support(d, zeta), 1.0, 1e-12);

    const UpperSet P = gen({make_vector({0.2, 3}), make_vector({1, 1})});
    const UpperSet same = zeta_difference(P, P, zeta);
    EXPECT_NEAR(support(same, zeta), 0.0, 1e-12);

    // A generated set whose recession cone is wider than the dual allows: sigma = -inf.
    const UpperSet wide = UpperSet::half_space(R2, make_vector({1, 0}), 0.0);
    EXPECT_TRUE(zeta_difference(wide, P, zeta).is_whole());
    EXPECT_TRUE(zeta_difference(P, wide, zeta).is_empty());
    EXPECT_THROW(zeta_difference(P, P, make_vector({-1, 0})), Error);
}

TEST(ZetaDifference, BruteForceDefinition)
{
    // z in A -_zeta B  iff  z + B is contained in A (+) H+(zeta).
    std::mt19937_64 rng(17);
    std::normal_distribution<double> N;
    std::uniform_real_distribution<double> U(0, 1);
    for (int trial = 0; trial < 100; ++trial) {
        const double w = U(rng);
        const Vector zeta = make_vector({w, 1 - w});
        const UpperSet A = gen({make_vector({N(rng), N(rng)}), make_vector({N(rng), N(rng)})});
        const UpperSet B = gen({make_vector({N(rng), N(rng)}), make_vector({N(rng), N(rng)})});
        const UpperSet D = zeta_difference(A, B, zeta);
        const UpperSet AH = oplus(A, half_space_H(zeta, R2));
        for (int s = 0; s < 10; ++s) {
            const Vector z = make_vector({2 * N(rng), 2 * N(rng)});
            const double margin = zeta.dot(z) + support(B, zeta) - support(A, zeta);
            if (std::abs(margin) < 1e-6) continue;
            bool inside = true;
            for (const auto& b : B.points()) inside &= membership(AH, z + b, 1e-9);
            EXPECT_EQ(membership(D, z), inside);
        }
    }
}

TEST(ZetaDifference, InvariantUnderConvexification)
{
    std::mt19937_64 rng(19);
    std::normal_distribution<double> N;
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Vector> pa{make_vector({N(rng), N(rng)}), make_vector({N(rng), N(rng)})};
        std::vector<Vector> pb{make_vector({N(rng), N(rng)}), make_vector({N(rng), N(rng)})};
        const Vector zeta = make_vector({0.3, 0.7});
        const UpperSet f = zeta_difference(gen(pa, false), gen(pb, false), zeta);
        const UpperSet g = zeta_difference(gen(pa, true), gen(pb, true), zeta);
        EXPECT_NEAR(support(f, zeta), support(g, zeta), 1e-12);
    }
}

TEST(ScalarMap, Examples)
{
    const Vector zeta = make_vector({1, 2});
    const UpperSet h = scalar_map_S(0.0, zeta, R2);
    EXPECT_TRUE(membership(h, make_vector({2, -1})));
    EXPECT_FALSE(membership(h, make_vector({2, -1.1})));
    const UpperSet sum = oplus(scalar_map_S(0.7, zeta, R2), scalar_map_S(-2.5, zeta, R2));
    EXPECT_NEAR(support(sum, zeta), -1.8, 1e-12);
    EXPECT_TRUE(scalar_map_S(-kInfinity, zeta, R2).is_whole());
    EXPECT_THROW(scalar_map_S(0.0, make_vector({0, 0}), R2), Error);
}

TEST(Membership, GeneratorsConeAndSeparation)
{
    std::mt19937_64 rng(23);
    std::normal_distribution<double> N;
    std::exponential_distribution<double> E;
    const Cone C = Cone::sector(-0.3, 1.2);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Vector> pts;
        for (int k = 0; k < 4; ++k) pts.push_back(make_vector({N(rng), N(rng)}));
        for (bool conv : {false, true}) {
            const UpperSet A = UpperSet::generated(C, pts, conv);
            for (const auto& p : pts) {
                EXPECT_TRUE(membership(A, p));
                EXPECT_TRUE(membership(A, p + E(rng) * C.generator(0) + E(rng) * C.generator(1)));
            }
        }
        // Push the best point for zeta* below the profile.
        const UpperSet A = UpperSet::generated(C, pts, true);
        const DualBase b = base_samples(dual(C), BaseParameterization::unit_norm, 7);
        const Vector zs = b.samples[trial % 7];
        std::size_t best = 0;
        for (std::size_t k = 1; k < pts.size(); ++k)
            if (zs.dot(pts[k]) < zs.dot(pts[best])) best = k;
        const Vector z = pts[best] - 1e-3 * zs;
        EXPECT_FALSE(membership(A, z));
        const Separation sep = most_violated(A, z);
        EXPECT_LT(sep.margin, 0);
        EXPECT_TRUE(in_dual(C, sep.zeta));
    }
}

TEST(UpperSetSpecial, EmptyAndWholeAreExtremes)
{
    const UpperSet e = UpperSet::empty(R2), w = UpperSet::whole(R2), a = gen({make_vector({0, 0})});
    for (const auto& z : grid_points(-2, 2, 9)) {
        EXPECT_FALSE(membership(e, z));
        EXPECT_TRUE(membership(w, z));
    }
    const std::vector<UpperSet> with_whole{a, w}, with_empty{a, e};
    EXPECT_TRUE(lattice_inf(with_whole).is_whole());
    EXPECT_TRUE(lattice_sup(with_empty).is_empty());
    for (const auto& z : grid_points(-2, 2, 9)) {
        EXPECT_EQ(membership(lattice_inf(with_empty), z), membership(a, z));
        EXPECT_EQ(membership(lattice_sup(with_whole), z), membership(a, z));
    }
}

TEST(UpperSetJson, RoundTrip)
{
    const UpperSet a = gen({make_vector({0, 1}), make_vector({1, 0.25})}, false);
    const UpperSet b = upper_set_from_json(to_json(a));
    EXPECT_EQ(b.convexified(), false);
    for (const auto& z : grid_points(-1, 2, 31)) EXPECT_EQ(membership(a, z), membership(b, z));
}

TEST(BoundaryPolyline, MonotoneForOrthant)
{
    const UpperSet a = gen({make_vector({0, 2}), make_vector({1, 0.5}), make_vector({3, 0}), make_vector({2, 2})});
    const auto pl = boundary_polyline(a, 1.0);
    ASSERT_GE(pl.size(), 4u);
    for (std::size_t i = 1; i < pl.size(); ++i) {
        EXPECT_GE(pl[i][0], pl[i - 1][0] - 1e-12);
        EXPECT_LE(pl[i][1], pl[i - 1][1] + 1e-12);
    }
    for (std::size_t i = 1; i + 1 < pl.size(); ++i) EXPECT_TRUE(membership(a, pl[i], 1e-9));
}
