#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "catcool/cnu.hpp"
#include "catcool/oracles.hpp"

using namespace catcool;

namespace {

const DiagonalState kQubit({0.6, 0.4});
const DiagonalState kCat({0.55, 0.45});

} // namespace

TEST(CheckCnu1, QubitExampleUsesHotOnlyChain) {
    auto cert = check_cnu1(kQubit, kQubit, kCat);
    ASSERT_TRUE(cert);
    EXPECT_EQ(cert->i, 0u);
    EXPECT_EQ(cert->l, 0u);
    EXPECT_EQ(cert->lp, 0u);
    EXPECT_EQ(cert->chain_kind, ChainKind::hot_only);
    EXPECT_NEAR(cert->loop_current, 0.024, 1e-15);
    ASSERT_EQ(cert->chain_edges.size(), 1u);
}

TEST(CheckCnu1, UniformCatalystHasNoCertificate) {
    EXPECT_FALSE(check_cnu1(kQubit, kQubit, DiagonalState::uniform(2)));
    EXPECT_FALSE(check_cnu1(kQubit, kQubit, DiagonalState::uniform(5)));
}

TEST(CheckCnu1, StronglyPolarizedColdQubitNeedsRatioAboveSix) {
    DiagonalState pc({0.9, 0.1});
    EXPECT_FALSE(check_cnu1(pc, kQubit, kCat));
    EXPECT_FALSE(oracle::cnu1_exists_by_enumeration(pc, kQubit, kCat));
    // A two-level catalyst cannot pass both the cooling bound 6 and the chain
    // bound 1.5; a ten-level geometric one can.
    EXPECT_FALSE(check_cnu1(pc, kQubit, DiagonalState::normalized({7.0, 1.0})));
    EXPECT_FALSE(oracle::cnu1_exists_by_enumeration(pc, kQubit, DiagonalState::normalized({7.0, 1.0})));
    EXPECT_TRUE(check_cnu1(pc, kQubit, geometric_catalyst(std::sqrt(0.4 / 0.6), 10)));
}

TEST(CheckCnu1General, Examples) {
    DiagonalState ps({0.5, 0.3, 0.2});
    EXPECT_FALSE(check_cnu1_general(ps, DiagonalState({0.6, 0.4})));
    EXPECT_FALSE(check_cnu1_general(ps, DiagonalState({0.52, 0.48})));
    EXPECT_FALSE(check_cnu1_general(ps, DiagonalState({0.7, 0.3})));
    EXPECT_FALSE(check_cnu1_general(DiagonalState({1.0, 0.0, 0.0}), DiagonalState({0.7, 0.3})));
}

TEST(BuildPlan, QubitExampleRotationsAndExecution) {
    auto cert = check_cnu1(kQubit, kQubit, kCat);
    ASSERT_TRUE(cert);
    auto plan = build_plan(kQubit, kQubit, kCat, *cert);
    ASSERT_EQ(plan.rotations.size(), 2u);
    EXPECT_NEAR(plan.rotations[0].intensity, 1.0, 1e-15);
    EXPECT_NEAR(plan.rotations[1].intensity, 0.48, 1e-12);
    EXPECT_NEAR(plan.expected_cooling_current, 0.024, 1e-15);
    EXPECT_EQ(plan.target_prefix, 1u);
    auto st = JointState::product({kQubit, kQubit, kCat});
    ExecuteOptions opt;
    opt.cold_energies = std::vector<double>{0.0, 1.0};
    auto res = execute_plan(st, plan, opt);
    EXPECT_LT(res.report.catalyst_deviation, 1e-12);
    EXPECT_NEAR(res.report.cold_delta[0], 0.024, 1e-15);
    EXPECT_EQ(res.report.majorization_excess.length, 1u);
    EXPECT_NEAR(res.report.majorization_excess.amount, 0.024, 1e-15);
    EXPECT_NEAR(*res.report.delta_energy, -0.024, 1e-15);
    EXPECT_NEAR(res.report.realized_cooling_current, 0.024, 1e-15);
}

TEST(BuildPlan, StaleCertificateIsRejected) {
    auto cert = check_cnu1(kQubit, kQubit, kCat);
    ASSERT_TRUE(cert);
    EXPECT_THROW(build_plan(kQubit, kQubit, DiagonalState::uniform(2), *cert),
                 inconsistent_certificate);
}

TEST(ExecutePlan, IdentityPlanChangesNothing) {
    auto st = JointState::product({kQubit, kQubit, kCat});
    TransformPlan empty;
    auto res = execute_plan(st, empty);
    EXPECT_EQ(res.report.catalyst_deviation, 0.0);
    for (double d : res.report.cold_delta) EXPECT_EQ(d, 0.0);
}

TEST(ExecutePlan, CatalystDriftIsAVerificationFailure) {
    auto st = JointState::product({kQubit, kQubit, kCat});
    TransformPlan plan;
    plan.dims = {2, 2, 2};
    plan.rotations = {{{{1, 0, 0}, {0, 1, 1}}, 1.0}};
    EXPECT_THROW(execute_plan(st, plan), verification_failure);
}

TEST(Synthesize, HotOnlyConditionGivesTenLevels) {
    DiagonalState pc({0.9, 0.1});
    auto r = synthesize_catalyst(pc, kQubit);
    EXPECT_EQ(r.condition, 1);
    EXPECT_EQ(r.catalyst.size(), 10u);
    EXPECT_NEAR(r.ratio, std::sqrt(0.4 / 0.6), 1e-15);
    EXPECT_NEAR(r.ratio, 0.8165, 1e-4);
    // (1/t)^(d-1) > 6 first holds at d = 10.
    EXPECT_LE(std::pow(1.0 / r.ratio, 8), 6.0);
    EXPECT_GT(std::pow(1.0 / r.ratio, 9), 6.0);
    EXPECT_TRUE(check_cnu1(pc, kQubit, r.catalyst));
    auto plan = build_plan(pc, kQubit, r.catalyst, r.certificate);
    auto res = execute_plan(JointState::product({pc, kQubit, r.catalyst}), plan);
    EXPECT_LE(res.report.catalyst_deviation, 1e-10);
    EXPECT_GE(res.report.majorization_excess.amount, 1e-12);
}

TEST(Synthesize, MixedHotUsesColdChain) {
    DiagonalState pc({0.5, 0.3, 0.2});
    auto ph = DiagonalState::uniform(2);
    auto r = synthesize_catalyst(pc, ph);
    EXPECT_EQ(r.condition, 2);
    EXPECT_NE(r.certificate.chain_kind, ChainKind::hot_only);
    for (const auto& ce : r.certificate.chain_edges) {
        EXPECT_TRUE(ce.edge.src[0].has_value());
    }
    auto plan = build_plan(pc, ph, r.catalyst, r.certificate);
    auto res = execute_plan(JointState::product({pc, ph, r.catalyst}), plan);
    EXPECT_LE(res.report.catalyst_deviation, 1e-10);
    EXPECT_GE(res.report.majorization_excess.amount, 1e-12);
}

TEST(Synthesize, BothMixedIsNotSynthesizable) {
    EXPECT_THROW(synthesize_catalyst(DiagonalState::uniform(3), DiagonalState::uniform(2)),
                 not_synthesizable);
    EXPECT_THROW(synthesize_catalyst(DiagonalState({0.7, 0.3}), DiagonalState::uniform(2)),
                 not_synthesizable);
}

TEST(Synthesize, FourLevelCatalystGivesFourRotations) {
    // Pick a cold qubit whose bound needs exactly a four-level catalyst.
    auto ph = DiagonalState({0.6, 0.4});
    DiagonalState pc({0.7, 0.3});  // bound (2/3)(7/3) lies between 1.5 and 1.5^1.5
    auto r = synthesize_catalyst(pc, ph);
    ASSERT_EQ(r.catalyst.size(), 4u);
    EXPECT_EQ(r.certificate.lp - r.certificate.l, 2u);
    auto plan = build_plan(pc, ph, r.catalyst, r.certificate);
    EXPECT_EQ(plan.rotations.size(), 4u);
}

TEST(GroundPlan, GroundPopulationRisesByTheCoolingCurrent) {
    DiagonalState pc({0.4, 0.35, 0.25});
    auto r = synthesize_ground_catalyst(pc, 1);
    auto plan = build_plan_general(pc, r.catalyst, r.certificate);
    ExecuteOptions opt;
    opt.ground_degeneracy = 1;
    auto res = execute_plan(JointState::product({pc, r.catalyst}), plan, opt);
    EXPECT_LE(res.report.catalyst_deviation, 1e-10);
    EXPECT_GT(res.report.realized_cooling_current, 1e-12);
    EXPECT_NEAR(*res.report.delta_ground_population, res.report.realized_cooling_current, 1e-15);
}

TEST(Diagram, QubitColumnsAndArrows) {
    auto d = diagram_export(kQubit, kQubit, kCat);
    ASSERT_EQ(d.columns.size(), 4u);
    EXPECT_EQ(d.columns[0].label, "1c1h");
    EXPECT_EQ(d.columns[1].label, "1c2h");
    EXPECT_EQ(d.columns[2].label, "2c1h");
    EXPECT_EQ(d.columns[3].label, "2c2h");
    EXPECT_NEAR(d.columns[0].log_value, std::log(0.36), 1e-15);
    EXPECT_NEAR(d.columns[1].log_value, std::log(0.24), 1e-15);
    EXPECT_NEAR(d.columns[3].log_value, std::log(0.16), 1e-15);
    EXPECT_EQ(d.rows[0].label, "1v");

    auto u = diagram_export(kQubit, kQubit, DiagonalState::uniform(3));
    for (const auto& r : u.rows) EXPECT_NEAR(r.log_value, std::log(1.0 / 3.0), 1e-15);

    auto plan = build_plan(kQubit, kQubit, kCat, *check_cnu1(kQubit, kQubit, kCat));
    auto dp = diagram_export(kQubit, kQubit, kCat, plan);
    ASSERT_EQ(dp.arrows.size(), 2u);
    EXPECT_EQ(dp.arrows[0].kind, "cooling");
    EXPECT_EQ(dp.arrows[0].src_label, "2c1h1v");
    EXPECT_EQ(dp.arrows[0].dst_label, "1c2h2v");
    EXPECT_EQ(dp.arrows[1].kind, "restoring");
    EXPECT_EQ(dp.arrows[1].src_label, "*c1h2v");
    auto csv = diagram_csv(dp);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "section,label,log_value,kind,src_label,dst_label");
}

TEST(Diagram, ZeroProbabilityIsMinusInfinity) {
    auto d = diagram_export(DiagonalState({1.0, 0.0}), kQubit, kCat);
    EXPECT_TRUE(std::isinf(d.columns.back().log_value));
}

// The most populated state of catalyst level K+1 against the least populated
// of level K carries the largest current across that step.
TEST(Monotonicity, ExtremeEdgeDominatesEveryCrossStepEdge) {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 200; ++t) {
        DiagonalState pc(oracle::random_sorted_state(rng, 2 + t % 3));
        DiagonalState ph(oracle::random_sorted_state(rng, 2 + t % 2));
        DiagonalState pv(oracle::random_sorted_state(rng, 3));
        auto st = JointState::product({pc, ph, pv});
        const auto& c = st.codec();
        for (std::size_t K = 0; K + 1 < pv.size(); ++K) {
            const double best = swap_current(st, c.encode({0, 0, K + 1}),
                                             c.encode({pc.size() - 1, ph.size() - 1, K}));
            for (std::size_t s = 0; s < c.size(); ++s) {
                if (c.decode(s)[2] != K + 1) continue;
                for (std::size_t d = 0; d < c.size(); ++d) {
                    if (c.decode(d)[2] != K) continue;
                    EXPECT_GE(best, swap_current(st, s, d));
                }
            }
        }
    }
}

TEST(Completeness, AgreesWithEnumerationOnSmallInstances) {
    std::mt19937_64 rng(1);
    int positives = 0;
    for (int t = 0; t < 120; ++t) {
        DiagonalState pc(oracle::random_sorted_state(rng, 2));
        DiagonalState ph(oracle::random_sorted_state(rng, 2));
        DiagonalState pv(oracle::random_sorted_state(rng, 2 + t % 2));
        const bool got = check_cnu1(pc, ph, pv).has_value();
        EXPECT_EQ(got, oracle::cnu1_exists_by_enumeration(pc, ph, pv))
            << pc[0] << ' ' << ph[0] << ' ' << pv[0];
        positives += got;
    }
    EXPECT_GT(positives, 10);
}

TEST(Soundness, EveryCertificateExecutes) {
    std::mt19937_64 rng(2);
    int built = 0;
    for (int t = 0; t < 300; ++t) {
        DiagonalState pc(oracle::random_sorted_state(rng, 2 + t % 3));
        DiagonalState ph(oracle::random_sorted_state(rng, 2 + t % 3));
        DiagonalState pv(oracle::random_sorted_state(rng, 2 + t % 4));
        auto cert = check_cnu1(pc, ph, pv);
        if (!cert) continue;
        auto plan = build_plan(pc, ph, pv, *cert);
        auto res = execute_plan(JointState::product({pc, ph, pv}), plan);
        EXPECT_LE(res.report.catalyst_deviation, 1e-10);
        EXPECT_GE(res.report.majorization_excess.amount, 1e-12);
        ++built;
    }
    EXPECT_GT(built, 50);
}
