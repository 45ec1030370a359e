#include <gtest/gtest.h>

#include "support.hpp"

using namespace fitcert;

TEST(BruteForceIndependent, Examples) {
    auto p = fixtures::independent3();
    EXPECT_TRUE(brute_force_independent(p, p.all_columns()));
    EXPECT_FALSE(brute_force_independent(fixtures::crowded(), {1, 2, 3}));
    EXPECT_TRUE(brute_force_independent(fixtures::crowded(), {2}));
    EXPECT_TRUE(brute_force_independent(p, {}));
}

TEST(BruteForceIndependent, CapIsTwentyColumns) {
    Rng rng(1);
    auto p = uniform_mask(rng, 30, 2, 21);
    ColumnSet twenty(20);
    for (std::size_t k = 0; k < 20; ++k) twenty[k] = k + 1;
    EXPECT_NO_THROW(brute_force_independent(p, twenty));
    EXPECT_THROW(brute_force_independent(p, p.all_columns()), CapacityError);
    EXPECT_THROW(brute_force_rank(p, p.all_columns()), CapacityError);
}

TEST(BruteForceRank, Examples) {
    EXPECT_EQ(brute_force_rank(fixtures::crowded(), fixtures::crowded().all_columns()), 3u);
    EXPECT_EQ(brute_force_rank(fixtures::independent3(), fixtures::independent3().all_columns()), 3u);
    EXPECT_EQ(brute_force_rank(fixtures::independent3(), {}), 0u);
}

TEST(BruteForceAllOfAKind, Examples) {
    EXPECT_EQ(brute_force_all_of_a_kind(fixtures::circuit5()), (ColumnSet{1, 2, 3, 4}));
    EXPECT_EQ(brute_force_all_of_a_kind(fixtures::triangle()), (ColumnSet{1, 2, 3}));
    EXPECT_FALSE(brute_force_all_of_a_kind(fixtures::two_lines()));
    EXPECT_FALSE(brute_force_all_of_a_kind(fixtures::crowded()));
}

TEST(CrosscheckEngines, Fixtures) {
    for (auto p : {fixtures::circuit5(), fixtures::two_lines(), fixtures::triangle(),
                   fixtures::crowded(), fixtures::six_bases(), fixtures::independent3(),
                   fixtures::cycle_with_chord()}) {
        auto c = crosscheck_engines(p);
        EXPECT_TRUE(c.agree());
        EXPECT_EQ(c.subsets, (std::size_t{1} << p.size()) - 1);
    }
}

TEST(AgreementTrial, AllSame) {
    GenSpec spec{8, 2, 1, 9, 1, MaskProperty::satisfies_t1, AssignmentMode::all_same};
    auto rep = agreement_trial(spec, 30);
    EXPECT_EQ(rep.rows.size(), 30u);
    EXPECT_EQ(rep.agreed(), 30u);
    EXPECT_TRUE(rep.full_agreement());
    for (const auto& r : rep.rows) {
        EXPECT_EQ(r.ell, 6u);
        EXPECT_EQ(r.kernel_dim, 2u);
    }
    EXPECT_EQ(rep.rows[5].seed, 6u);
}

TEST(AgreementTrial, MixedOnAllOfAKindMasks) {
    GenSpec spec{8, 2, 2, 9, 11, MaskProperty::satisfies_t1, AssignmentMode::mixed};
    auto rep = agreement_trial(spec, 30);
    EXPECT_EQ(rep.checked(), 30u);
    EXPECT_EQ(rep.agreed(), 30u);
    for (const auto& r : rep.rows) EXPECT_LT(r.kernel_dim, 2u);
}

TEST(AgreementTrial, MixedOnOtherMasksIsSkipped) {
    GenSpec spec{6, 2, 2, 4, 3, MaskProperty::satisfies_t2_only, AssignmentMode::mixed};
    auto rep = agreement_trial(spec, 5);
    EXPECT_EQ(rep.count("skipped"), 5u);
    EXPECT_EQ(rep.checked(), 0u);
    EXPECT_TRUE(rep.full_agreement());
}

TEST(AgreementTrial, ZeroTrials) {
    GenSpec spec{8, 2, 1, 9, 1, MaskProperty::satisfies_t1, AssignmentMode::all_same};
    auto rep = agreement_trial(spec, 0);
    EXPECT_TRUE(rep.rows.empty());
    EXPECT_EQ(rep.jsonl(), "");
}

TEST(AgreementTrial, FixedMask) {
    GenSpec spec{0, 0, 1, 0, 5, MaskProperty::explicit_mask, AssignmentMode::all_same};
    auto rep = agreement_trial(fixtures::crowded(), spec, 10);
    EXPECT_EQ(rep.agreed(), 10u);
    for (const auto& r : rep.rows) EXPECT_EQ(r.kernel_dim, 3u);
}

TEST(AgreementTrial, LimitsAndErrors) {
    GenSpec big{13, 2, 1, 12, 1, MaskProperty::satisfies_t1, AssignmentMode::all_same};
    EXPECT_THROW(agreement_trial(big, 1), std::invalid_argument);
    // An impossible mask request surfaces as an error row, not an exception.
    GenSpec impossible{3, 1, 1, 2, 0, MaskProperty::fails_both, AssignmentMode::all_same};
    auto rep = agreement_trial(impossible, 1);
    ASSERT_EQ(rep.rows.size(), 1u);
    EXPECT_EQ(rep.rows[0].outcome, "error");
    EXPECT_FALSE(rep.full_agreement());
}

TEST(AgreementTrial, JsonLinesAndThreads) {
    GenSpec spec{7, 2, 2, 8, 21, MaskProperty::satisfies_t1, AssignmentMode::mixed};
    auto one = agreement_trial(spec, 12, 1);
    auto three = agreement_trial(spec, 12, 3);
    EXPECT_EQ(one.jsonl(), three.jsonl());
    std::istringstream in(one.jsonl());
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        auto j = nlohmann::json::parse(line);
        EXPECT_EQ(j["trial"], n);
        EXPECT_EQ(j["mode"], "mixed");
        ++n;
    }
    EXPECT_EQ(n, 12u);
}
