#include "varlat/cone.hpp"
#include "varlat/upper_set.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace varlat;
using std::numbers::pi;

namespace {

Vector polar(double th) { return make_vector({std::cos(th), std::sin(th)}); }

void expect_sector(const Cone& c, double lo, double hi)
{
    ASSERT_TRUE(c.sector_angles().has_value());
    EXPECT_NEAR(c.sector_angles()->first, lo, 1e-12);
    EXPECT_NEAR(c.sector_angles()->second, hi, 1e-12);
}

} // namespace

TEST(Cone, DualOfOrthantIsOrthant)
{
    EXPECT_TRUE(same_cone(dual(Cone::orthant(2)), Cone::orthant(2)));
    EXPECT_TRUE(same_cone(dual(Cone::orthant(3)), Cone::orthant(3)));
}

TEST(Cone, DualOfSectors)
{
    expect_sector(dual(Cone::sector(0, pi / 3)), -pi / 6, pi / 2);
    expect_sector(dual(Cone::sector(-pi / 4, pi / 2)), 0, pi / 4);
}

TEST(Cone, BipolarOnTestCones)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-pi, pi), W(0.05, pi - 0.05);
    std::vector<Cone> cones{Cone::orthant(2), Cone::orthant(3), Cone::sector(0, pi / 3), Cone::sector(-pi / 4, pi / 2)};
    for (int i = 0; i < 20; ++i) {
        const double lo = U(rng);
        cones.push_back(Cone::sector(lo, lo + W(rng)));
    }
    Matrix g(3, 4);
    g << 1, 0, 0, 1,
         0, 1, 0, 1,
         0, 0, 1, -0.2;
    cones.push_back(Cone::from_generators(g));
    for (const auto& c : cones) EXPECT_TRUE(same_cone(dual(dual(c)), c)) << c.describe();
}

TEST(Cone, DualAgainstDefinition)
{
    // zeta in C+ iff zeta . g >= 0 for all generators, tested on random directions.
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-pi, pi);
    const Cone c = Cone::sector(0.3, 1.9);
    const Cone d = dual(c);
    for (int i = 0; i < 500; ++i) {
        const Vector z = polar(U(rng));
        const double m = std::min(z.dot(polar(0.3)), z.dot(polar(1.9)));
        if (std::abs(m) < 1e-6) continue;
        EXPECT_EQ(contains(d, z, 1e-9), m > 0);
    }
}

TEST(Cone, Contains)
{
    EXPECT_TRUE(contains(Cone::orthant(2), make_vector({1, 1}), 0));
    EXPECT_FALSE(contains(Cone::orthant(2), make_vector({-1, 0}), 0));
    EXPECT_TRUE(contains(Cone::sector(0, pi / 3), polar(pi / 6), 1e-12));
    EXPECT_FALSE(contains(Cone::sector(0, pi / 3), polar(pi / 4 + pi / 6), 1e-12));
    EXPECT_NEAR(distance(Cone::orthant(2), make_vector({-3, 4})), 3.0, 1e-12);
}

TEST(Cone, ZeroGeneratorRejected)
{
    Matrix g(2, 2);
    g << 1, 0, 0, 0;
    EXPECT_THROW(Cone::from_generators(g), Error);
}

TEST(Cone, NonPointedAcceptedAndFlagged)
{
    const Cone half = Cone::sector(0, pi);
    EXPECT_FALSE(half.is_pointed());
    EXPECT_NE(half.describe().find("pointed"), std::string::npos);
}

TEST(DualBase, OrthantSumOneThreeSamples)
{
    const DualBase b = base_samples(dual(Cone::orthant(2)), BaseParameterization::sum_one, 3);
    ASSERT_EQ(b.samples.size(), 3u);
    const std::vector<Vector> expected{make_vector({0, 1}), make_vector({0.5, 0.5}), make_vector({1, 0})};
    for (int i = 0; i < 3; ++i) EXPECT_LT((b.samples[i] - expected[i]).norm(), 1e-14);
}

TEST(DualBase, SectorEndpoints)
{
    const DualBase c3 = base_samples(dual(Cone::sector(-pi / 4, pi / 2)), BaseParameterization::sum_one, 2);
    EXPECT_NEAR(c3.samples.front()[0], 0.5, 1e-12);
    EXPECT_NEAR(c3.samples.back()[0], 1.0, 1e-12);
    const DualBase c2 = base_samples(dual(Cone::sector(0, pi / 3)), BaseParameterization::sum_one, 2);
    EXPECT_NEAR(c2.samples.front()[0], 0.0, 1e-12);
    EXPECT_NEAR(c2.samples.back()[0], (3 + std::sqrt(3.0)) / 2, 1e-12);
}

TEST(DualBase, SumOneRejectedWhenPlaneMissesCone)
{
    // C+ contains (1, -1), whose coordinate sum is zero.
    const Cone d = dual(Cone::sector(pi / 4, pi / 4 + 0.1));
    EXPECT_FALSE(sum_one_covers(d));
    EXPECT_THROW(base_samples(d, BaseParameterization::sum_one, 5), Error);
    EXPECT_EQ(base_samples(d, BaseParameterization::automatic, 5).parameterization, BaseParameterization::unit_norm);
}

TEST(DualBase, SamplesInDualAndDistinct)
{
    const std::vector<Cone> cones{Cone::orthant(2), Cone::orthant(3), Cone::sector(0, pi / 3),
                                  Cone::sector(-pi / 4, pi / 2), Cone::sector(0.2, 2.0)};
    for (const auto& c : cones) {
        for (auto p : {BaseParameterization::unit_norm, BaseParameterization::automatic}) {
            const DualBase b = base_samples(dual(c), p, 9);
            for (std::size_t i = 0; i < b.samples.size(); ++i) {
                EXPECT_TRUE(in_dual(c, b.samples[i])) << c.describe();
                EXPECT_TRUE(normalize_to_base(7.5 * b.samples[i], b.parameterization).isApprox(b.samples[i], 1e-12));
                for (std::size_t j = 0; j < i; ++j) {
                    const double cosang = b.samples[i].dot(b.samples[j]) / (b.samples[i].norm() * b.samples[j].norm());
                    EXPECT_LT(cosang, 1 - 1e-12);
                }
            }
        }
    }
}

TEST(DualBase, HalfSpacesCutOutTheCone)
{
    // Intersection of H+(zeta) over a dense base keeps every generator of C and
    // excludes outside points once the sampling is fine enough.
    const Cone c = Cone::sector(0, pi / 3);
    const DualBase b = base_samples(dual(c), BaseParameterization::automatic, 41);
    for (Eigen::Index g = 0; g < c.generator_count(); ++g)
        for (const auto& z : b.samples) EXPECT_GE(z.dot(c.generator(g)), -1e-12);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(-pi, pi);
    int tested = 0;
    while (tested < 50) {
        const Vector z = polar(U(rng));
        if (distance(c, z) < 0.05) continue;
        ++tested;
        bool excluded = false;
        for (const auto& zeta : b.samples) excluded |= zeta.dot(z) < 0;
        EXPECT_TRUE(excluded);
    }
}

TEST(Cone, JsonRoundTrip)
{
    for (const auto& c : {Cone::orthant(3), Cone::sector(-0.5, 1.0)})
        EXPECT_TRUE(same_cone(cone_from_json(cone_to_json(c)), c));
    EXPECT_THROW(cone_from_json({{"kind", "sector"}, {"theta_min", 0.0}}), ConfigError);
    EXPECT_THROW(cone_from_json({{"kind", "orthant"}, {"dim", 0}}), ConfigError);
}
