#include <rcar/innovation.hpp>
#include <rcar/parallel.hpp>
#include <rcar/random.hpp>

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

using namespace rcar;

TEST(Stream, SameSeedSameDraws)
{
    Stream a(42);
    Stream b(42);
    for (int i = 0; i < 1000; ++i) {
        ASSERT_EQ(a.bits(), b.bits());
        ASSERT_EQ(a.uniform(), b.uniform());
        ASSERT_EQ(a.normal(), b.normal());
    }
}

TEST(Stream, DerivedSeedsSeparatePurposesAndIndices)
{
    std::set<std::uint64_t> seen;
    for (auto purpose : {StreamPurpose::process, StreamPurpose::lepage, StreamPurpose::cms, StreamPurpose::risk,
                         StreamPurpose::auxiliary})
        for (std::uint64_t i = 0; i < 1000; ++i)
            seen.insert(derive_seed(7, i, purpose));
    EXPECT_EQ(seen.size(), 5000u);
    EXPECT_NE(derive_seed(7, 0, StreamPurpose::process), derive_seed(8, 0, StreamPurpose::process));
}

TEST(Stream, UniformIsOpenInterval)
{
    Stream s(1);
    for (int i = 0; i < 100000; ++i) {
        const double u = s.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(Stream, ExponentialIsMinusLogOfNextUniform)
{
    Stream a(9);
    Stream b(9);
    for (int i = 0; i < 100; ++i)
        ASSERT_EQ(a.exponential(), -std::log(b.uniform()));
}

TEST(Stream, ExponentialMoments)
{
    Stream s(3);
    const int n = 1000000;
    double sum = 0.0;
    double sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double e = s.exponential();
        sum += e;
        sum2 += e * e;
    }
    const double mean = sum / n;
    EXPECT_NEAR(mean, 1.0, 3.0 / std::sqrt(n));
    EXPECT_NEAR(sum2 / n - mean * mean, 1.0, 0.01);
}

TEST(Stream, SignIsBalanced)
{
    Stream s(5);
    const int n = 1000000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = s.sign();
        ASSERT_TRUE(x == 1.0 || x == -1.0);
        sum += x;
    }
    EXPECT_LT(std::abs(sum / n), 4.0 / std::sqrt(n));
}

TEST(Innovation, SymmetryFlags)
{
    EXPECT_TRUE(InnovationSpec::rademacher().symmetric());
    EXPECT_TRUE(InnovationSpec::gaussian().symmetric());
    EXPECT_TRUE(InnovationSpec::uniform_symmetric(2.0).symmetric());
    EXPECT_FALSE(InnovationSpec::exponential(1.0).symmetric());
    EXPECT_FALSE(InnovationSpec::point_mass(0.5).symmetric());
    EXPECT_FALSE(InnovationSpec::point_mass(-0.5).symmetric());
    EXPECT_TRUE(InnovationSpec::point_mass(0.0).symmetric());
    EXPECT_TRUE(InnovationSpec::point_mass(0.0).degenerate_zero());
    EXPECT_TRUE(InnovationSpec::exponential(2.0).nonnegative());
}

TEST(Innovation, BadParametersRejected)
{
    EXPECT_THROW(InnovationSpec::uniform_symmetric(0.0), std::invalid_argument);
    EXPECT_THROW(InnovationSpec::uniform_symmetric(-1.0), std::invalid_argument);
    EXPECT_THROW(InnovationSpec::exponential(0.0), std::invalid_argument);
    EXPECT_THROW(InnovationSpec::point_mass(std::nan("")), std::invalid_argument);
}

TEST(Innovation, ParseRoundTrip)
{
    for (const auto& spec : {InnovationSpec::rademacher(), InnovationSpec::gaussian(),
                             InnovationSpec::uniform_symmetric(0.25), InnovationSpec::exponential(3.0),
                             InnovationSpec::point_mass(-1.5), InnovationSpec::point_mass(0.0)})
        EXPECT_EQ(InnovationSpec::parse(spec.to_string()), spec) << spec.to_string();
    EXPECT_EQ(InnovationSpec::parse("gaussian"), InnovationSpec::gaussian());
    EXPECT_EQ(InnovationSpec::parse("exponential:1"), InnovationSpec::exponential(1.0));
    EXPECT_THROW(InnovationSpec::parse("cauchy"), std::invalid_argument);
    EXPECT_EQ(InnovationSpec::parse("uniform_sym"), InnovationSpec::uniform_symmetric(1.0));
    EXPECT_THROW(InnovationSpec::parse("rademacher:2"), std::invalid_argument);
    EXPECT_THROW(InnovationSpec::parse("uniform_sym:abc"), std::invalid_argument);
}

TEST(Innovation, DrawsHaveTheRightSupport)
{
    Stream s(11);
    for (int i = 0; i < 10000; ++i) {
        const double r = InnovationSpec::rademacher().draw(s);
        ASSERT_EQ(std::abs(r), 1.0);
        const double u = InnovationSpec::uniform_symmetric(0.5).draw(s);
        ASSERT_LT(std::abs(u), 0.5);
        ASSERT_GT(InnovationSpec::exponential(2.0).draw(s), 0.0);
        ASSERT_EQ(InnovationSpec::point_mass(3.0).draw(s), 3.0);
    }
}

TEST(FractionalMoment, ClosedForms)
{
    for (double p : {0.1, 0.5, 1.0, 1.5, 1.9})
        EXPECT_EQ(fractional_abs_moment(InnovationSpec::rademacher(), p), 1.0);
    EXPECT_NEAR(fractional_abs_moment(InnovationSpec::uniform_symmetric(1.0), 0.5), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(fractional_abs_moment(InnovationSpec::uniform_symmetric(2.0), 1.0), 1.0, 1e-15);
    EXPECT_NEAR(fractional_abs_moment(InnovationSpec::gaussian(), 0.5), 0.822178958662458552, 1e-14);
    EXPECT_NEAR(fractional_abs_moment(InnovationSpec::gaussian(), 1.0), std::sqrt(2.0 / M_PI), 1e-15);
    EXPECT_NEAR(fractional_abs_moment(InnovationSpec::exponential(1.0), 0.5), std::sqrt(M_PI) / 2.0, 1e-15);
    EXPECT_NEAR(fractional_abs_moment(InnovationSpec::exponential(4.0), 1.0), 0.25, 1e-15);
    EXPECT_NEAR(fractional_abs_moment(InnovationSpec::point_mass(-4.0), 0.5), 2.0, 1e-15);
}

TEST(FractionalMoment, RejectsOrderOutsideOpenInterval)
{
    for (double p : {0.0, -0.5, 2.0, 3.0, std::nan("")})
        EXPECT_THROW(fractional_abs_moment(InnovationSpec::gaussian(), p), std::invalid_argument);
}

TEST(FractionalMoment, MonteCarloAgreesWithClosedForms)
{
    Stream s(2024);
    for (const auto& spec : {InnovationSpec::gaussian(), InnovationSpec::uniform_symmetric(1.0),
                             InnovationSpec::exponential(1.0)}) {
        for (double p : {0.5, 1.0}) {
            const auto mc = fractional_abs_moment_mc(spec, p, 2000000, s);
            EXPECT_NEAR(mc.value, fractional_abs_moment(spec, p), 4.0 * mc.std_error) << spec.to_string() << " " << p;
        }
    }
}

TEST(Parallel, EveryIndexRunsOnce)
{
    for (unsigned workers : {1u, 2u, 4u, 7u}) {
        std::vector<std::atomic<int>> hits(1000);
        parallel_for(hits.size(), workers, [&](std::size_t i) { hits[i].fetch_add(1); });
        for (const auto& h : hits)
            ASSERT_EQ(h.load(), 1);
    }
}

TEST(Parallel, ExceptionPropagates)
{
    EXPECT_THROW(parallel_for(500, 3,
                              [](std::size_t i) {
                                  if (i == 321)
                                      throw std::runtime_error("boom");
                              }),
                 std::runtime_error);
}
