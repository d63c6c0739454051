#include <gtest/gtest.h>

#include "scfv/probability.hpp"
#include "test_util.hpp"

using namespace scfv;

TEST(Partition, UniformMeasures1D) {
    ProbabilityBox space = make_probability_box(1);
    Partition p = build_partition(space, 4);
    EXPECT_EQ(p.nu(), 4);
    EXPECT_DOUBLE_EQ(p.diam(), 0.25);
    for (int m = 0; m < 4; ++m) EXPECT_DOUBLE_EQ(p.measure(m), 0.25);
}

TEST(Partition, UniformMeasures2D) {
    ProbabilityBox space = make_probability_box(2);
    Partition p = build_partition(space, 3);
    EXPECT_EQ(p.nu(), 9);
    for (int m = 0; m < 9; ++m) EXPECT_NEAR(p.measure(m), 1.0 / 9.0, 1e-15);
}

TEST(Partition, LinearDensityMeasures) {
    // density 2y on [0,1]: P[0,1/2) = 1/4, P[1/2,1] = 3/4
    ProbabilityBox space = make_probability_box(1, [](const OmegaPoint& y) { return 2.0 * y[0]; });
    Partition p = build_partition(space, 2);
    EXPECT_NEAR(p.measure(0), 0.25, 1e-12);
    EXPECT_NEAR(p.measure(1), 0.75, 1e-12);
}

TEST(Partition, NonUnitDensityRejected) {
    EXPECT_THROW(make_probability_box(1, [](const OmegaPoint& y) { return 4.0 * y[0]; }),
                 ConfigError);
}

TEST(Partition, DiamHalvesUnderDyadicRefinement) {
    ProbabilityBox space = make_probability_box(2);
    double prev = build_partition(space, 2).diam();
    for (int c : {4, 8, 16}) {
        const double d = build_partition(space, c).diam();
        EXPECT_DOUBLE_EQ(d, 0.5 * prev);
        prev = d;
    }
}

TEST(Partition, MeasuresSumToOne) {
    ProbabilityBox space = make_probability_box(3);
    Partition p = build_partition(space, 3);
    double total = 0.0;
    for (int m = 0; m < p.nu(); ++m) total += p.measure(m);
    EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(Partition, LocateHalfOpenAndBoundary) {
    ProbabilityBox space = make_probability_box(1);
    Partition p = build_partition(space, 4);
    EXPECT_EQ(p.locate({0.0}), 0);
    EXPECT_EQ(p.locate({0.25}), 1);  // shared facet belongs to the upper box
    EXPECT_EQ(p.locate({0.999}), 3);
    EXPECT_EQ(p.locate({1.0}), 3);   // closed top boundary -> last box
    EXPECT_THROW(p.locate({1.5}), ConfigError);
    EXPECT_THROW(p.locate({-0.1}), ConfigError);
    EXPECT_THROW(p.locate({0.5, 0.5}), ConfigError);
}

TEST(Partition, RejectsBadCellCount) {
    ProbabilityBox space = make_probability_box(1);
    EXPECT_THROW(build_partition(space, 0), ConfigError);
}

TEST(Nodes, MidpointAndCorner) {
    ProbabilityBox space = make_probability_box(1);
    Partition p = build_partition(space, 2);
    NodeSet mid = choose_nodes(p, NodeRule::midpoint);
    EXPECT_DOUBLE_EQ(mid.points[0][0], 0.25);
    EXPECT_DOUBLE_EQ(mid.points[1][0], 0.75);
    NodeSet corner = choose_nodes(p, NodeRule::corner);
    EXPECT_DOUBLE_EQ(corner.points[0][0], 0.0);
    EXPECT_DOUBLE_EQ(corner.points[1][0], 0.5);
}

TEST(Nodes, RandomRuleIsSeededAndMembershipHolds) {
    ProbabilityBox space = make_probability_box(3);
    Partition p = build_partition(space, 3);
    NodeSet a = choose_nodes(p, NodeRule::random, 777);
    NodeSet b = choose_nodes(p, NodeRule::random, 777);
    NodeSet c = choose_nodes(p, NodeRule::random, 778);
    EXPECT_EQ(a.points, b.points);
    EXPECT_NE(a.points, c.points);
    for (int m = 0; m < p.nu(); ++m) EXPECT_EQ(p.locate(a.points[static_cast<std::size_t>(m)]), m);
}

TEST(Nodes, MembershipForAllRules) {
    ProbabilityBox space = make_probability_box(2);
    for (int cells : {2, 3, 5}) {
        Partition p = build_partition(space, cells);
        for (NodeRule rule : {NodeRule::midpoint, NodeRule::corner, NodeRule::random}) {
            NodeSet ns = choose_nodes(p, rule, 5);
            for (int m = 0; m < p.nu(); ++m)
                EXPECT_EQ(p.locate(ns.points[static_cast<std::size_t>(m)]), m);
        }
    }
}

TEST(Interpolant, ConstantAndIdentity) {
    ProbabilityBox space = make_probability_box(1);
    Partition p = build_partition(space, 2);
    NodeSet nodes = choose_nodes(p, NodeRule::midpoint);
    auto c = interpolate_scalar([](const OmegaPoint&) { return 3.25; }, p, nodes);
    EXPECT_DOUBLE_EQ(c.eval({0.1}), 3.25);
    EXPECT_DOUBLE_EQ(c.eval({0.9}), 3.25);

    auto id = interpolate_scalar([](const OmegaPoint& w) { return w[0]; }, p, nodes);
    EXPECT_DOUBLE_EQ(id.eval({0.1}), 0.25);
    EXPECT_DOUBLE_EQ(id.eval({0.49}), 0.25);
    EXPECT_DOUBLE_EQ(id.eval({0.5}), 0.75);
    EXPECT_DOUBLE_EQ(id.eval({1.0}), 0.75);
}

TEST(Interpolant, IndicatorRangePreserved) {
    ProbabilityBox space = make_probability_box(1);
    Partition p = build_partition(space, 5);
    NodeSet nodes = choose_nodes(p, NodeRule::random, 11);
    auto s = interpolate_scalar([](const OmegaPoint& w) { return w[0] <= 0.3 ? 1.0 : 0.0; }, p,
                                nodes);
    for (double v : s.values) EXPECT_TRUE(v == 0.0 || v == 1.0);
}

TEST(Expectation, MidpointSymmetry) {
    ProbabilityBox space = make_probability_box(1);
    for (int cells : {2, 4, 8, 16}) {
        Partition p = build_partition(space, cells);
        NodeSet nodes = choose_nodes(p, NodeRule::midpoint);
        auto s = interpolate_scalar([](const OmegaPoint& w) { return w[0]; }, p, nodes);
        EXPECT_DOUBLE_EQ(expectation(s), 0.5);
    }
}

TEST(Expectation, LeftCornerClosedForm) {
    ProbabilityBox space = make_probability_box(1);
    for (int cells : {4, 8, 16}) {
        Partition p = build_partition(space, cells);
        NodeSet nodes = choose_nodes(p, NodeRule::corner);
        auto s = interpolate_scalar([](const OmegaPoint& w) { return w[0]; }, p, nodes);
        EXPECT_DOUBLE_EQ(expectation(s), (cells - 1) / (2.0 * cells));
    }
}

TEST(Expectation, ConstantAndBitExactRiemannSum) {
    ProbabilityBox space = make_probability_box(2);
    Partition p = build_partition(space, 3);
    NodeSet nodes = choose_nodes(p, NodeRule::random, 99);
    auto c = interpolate_scalar([](const OmegaPoint&) { return -1.75; }, p, nodes);
    EXPECT_NEAR(expectation(c), -1.75, 1e-15);

    OmegaFn f = [](const OmegaPoint& w) { return std::exp(w[0]) * w[1]; };
    auto s = interpolate_scalar(f, p, nodes);
    double riemann = 0.0;
    for (int m = 0; m < p.nu(); ++m)
        riemann += f(nodes.points[static_cast<std::size_t>(m)]) * p.measure(m);
    EXPECT_EQ(expectation(s), riemann);
}

TEST(Expectation, VectorValues) {
    ProbabilityBox space = make_probability_box(1);
    Partition p = build_partition(space, 2);
    NodeSet nodes = choose_nodes(p, NodeRule::midpoint);
    auto s = interpolate<std::vector<double>>(
        [](const OmegaPoint& w) { return std::vector<double>{w[0], 2.0 * w[0]}; }, p, nodes);
    auto e = expectation(s);
    EXPECT_DOUBLE_EQ(e[0], 0.5);
    EXPECT_DOUBLE_EQ(e[1], 1.0);
}

TEST(LqError, ZeroForMatchingStepFunction) {
    ProbabilityBox space = make_probability_box(1);
    Partition p = build_partition(space, 4);
    NodeSet nodes = choose_nodes(p, NodeRule::random, 3);
    OmegaFn f = [](const OmegaPoint& w) { return w[0] < 0.5 ? 2.0 : -1.0; }; // aligned with boxes
    auto s = interpolate_scalar(f, p, nodes);
    EXPECT_EQ(lq_error(s, f, 1.0).value, 0.0);
}

TEST(LqError, LipschitzBound) {
    ProbabilityBox space = make_probability_box(1);
    OmegaFn f = [](const OmegaPoint& w) { return std::abs(w[0] - 0.5); }; // L = 1
    for (int k = 2; k <= 6; ++k) {
        Partition p = build_partition(space, 1 << k);
        NodeSet nodes = choose_nodes(p, NodeRule::midpoint);
        auto s = interpolate_scalar(f, p, nodes);
        const double err = lq_error(s, f, 1.0, 16).value;
        EXPECT_LE(err, p.diam() / 2.0 + 1e-12);
    }
}

TEST(LqError, IndicatorWithIrrationalBreakpoint) {
    ProbabilityBox space = make_probability_box(1);
    OmegaFn f = [](const OmegaPoint& w) { return w[0] <= 1.0 / 3.0 ? 1.0 : 0.0; };
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 2; k <= 6; ++k) {
        Partition p = build_partition(space, 1 << k);
        NodeSet nodes = choose_nodes(p, NodeRule::midpoint);
        auto s = interpolate_scalar(f, p, nodes);
        const double err = lq_error(s, f, 1.0, 32).value;
        EXPECT_LE(err, p.diam() + 1e-12); // only the straddling box contributes
        EXPECT_LT(err, prev);
        prev = err;
    }
}

TEST(LqError, MonteCarloPathForHighDimension) {
    ProbabilityBox space = make_probability_box(4);
    Partition p = build_partition(space, 2);
    NodeSet nodes = choose_nodes(p, NodeRule::midpoint);
    OmegaFn c = [](const OmegaPoint&) { return 2.0; };
    auto s = interpolate_scalar(c, p, nodes);
    LqErrorResult res = lq_error(s, c, 2.0, 8, 5000, 1234);
    EXPECT_EQ(res.method, OmegaEstimator::monte_carlo);
    EXPECT_EQ(res.value, 0.0);
    EXPECT_EQ(res.std_error, 0.0);

    OmegaFn f = [](const OmegaPoint& w) { return w[0]; };
    auto sf = interpolate_scalar(f, p, nodes);
    LqErrorResult rf = lq_error(sf, f, 1.0, 8, 20000, 1234);
    // E|f^M - f| for midpoints on 2 cells: per box E|w - mid| = 1/16, total 1/8
    EXPECT_NEAR(rf.value, 0.125, 5.0 * std::max(rf.std_error, 1e-3));
    EXPECT_GT(rf.std_error, 0.0);
}

TEST(LqError, RejectsBadExponent) {
    ProbabilityBox space = make_probability_box(1);
    Partition p = build_partition(space, 2);
    NodeSet nodes = choose_nodes(p, NodeRule::midpoint);
    auto s = interpolate_scalar([](const OmegaPoint& w) { return w[0]; }, p, nodes);
    EXPECT_THROW(lq_error(s, [](const OmegaPoint& w) { return w[0]; }, 0.5), ConfigError);
}

TEST(Moments, SimpleCases) {
    ProbabilityBox space = make_probability_box(1);
    Partition p2 = build_partition(space, 2);
    NodeSet nodes = choose_nodes(p2, NodeRule::midpoint);
    // two equal-measure boxes with values 0 and 1
    StepInterpolant<double> s{&p2, {0.0, 1.0}};
    MomentReport rep = moments(s, {1, 2});
    EXPECT_DOUBLE_EQ(rep.mean, 0.5);
    EXPECT_DOUBLE_EQ(rep.variance, 0.25);

    auto c = interpolate_scalar([](const OmegaPoint&) { return 4.0; }, p2, nodes);
    EXPECT_DOUBLE_EQ(moments(c).variance, 0.0);
}

TEST(Moments, SecondRawMomentOfIdentity) {
    ProbabilityBox space = make_probability_box(1);
    Partition p = build_partition(space, 1 << 10);
    NodeSet nodes = choose_nodes(p, NodeRule::midpoint);
    auto s = interpolate_scalar([](const OmegaPoint& w) { return w[0]; }, p, nodes);
    MomentReport rep = moments(s, {2});
    EXPECT_NEAR(rep.raw[0].second, 1.0 / 3.0, 1e-5);
}
