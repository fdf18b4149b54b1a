#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "hexca/rules.hpp"

using namespace hexca;

TEST(Rules, IndexFormulaMatchesPrefixSum) {
    std::size_t expected = 0;
    for (int i = 0; i <= 7; ++i)
        for (int j = 0; i + j <= 7; ++j) {
            EXPECT_EQ(rule_index(i, j), expected);
            EXPECT_EQ(rule_pair(expected), (std::pair{i, j}));
            ++expected;
        }
    EXPECT_EQ(expected, 36u);
    EXPECT_EQ(rule_index(1, 0), 8u);
}

TEST(Rules, DefaultRuleIsQuiescent) {
    const RuleMatrix m;
    for (std::size_t k = 0; k < kRuleEntries; ++k) EXPECT_EQ(m[k], CellState::S);
    EXPECT_EQ(m.encode().str(), std::string(36, 'S'));
}

TEST(Rules, LookupRejectsOutOfRange) {
    const RuleMatrix m;
    EXPECT_THROW((void)m.lookup(-1, 0), std::out_of_range);
    EXPECT_THROW((void)m.lookup(4, 4), std::out_of_range);
    EXPECT_THROW((void)m.lookup(0, 8), std::out_of_range);
}

TEST(Rules, CenterEntryIsPinned) {
    RuleMatrix m;
    EXPECT_THROW(m.set(0, 0, CellState::A), std::invalid_argument);
    EXPECT_THROW(RuleMatrix::decode(Genome::parse("A" + std::string(35, 'S'))), std::invalid_argument);
}

TEST(Rules, GenomeParseRejectsBadInput) {
    EXPECT_THROW(Genome::parse(std::string(35, 'S')), std::invalid_argument);
    EXPECT_THROW(Genome::parse(std::string(37, 'S')), std::invalid_argument);
    EXPECT_THROW(Genome::parse(std::string(35, 'S') + "X"), std::invalid_argument);
}

TEST(Rules, EncodeDecodeRoundTrip) {
    std::mt19937_64 rng(17);
    for (int n = 0; n < 200; ++n) {
        const RuleMatrix m = random_rule(rng);
        const RuleMatrix back = decode(encode(m));
        for (int i = 0; i <= 7; ++i)
            for (int j = 0; i + j <= 7; ++j) EXPECT_EQ(back.lookup(i, j), m.lookup(i, j));
        EXPECT_EQ(RuleMatrix::parse(m.str()), m);
    }
}

TEST(Rules, RandomRuleIsDeterministic) {
    std::mt19937_64 a(99), b(99);
    EXPECT_EQ(random_rule(a), random_rule(b));
}

TEST(Rules, ConstraintsHonoredAndContradictionsRejected) {
    std::mt19937_64 rng(1);
    const std::vector<RuleConstraint> c{{1, 1, CellState::A}, {0, 3, CellState::B}};
    for (int n = 0; n < 50; ++n) {
        const RuleMatrix m = random_rule(rng, c);
        EXPECT_EQ(m.lookup(1, 1), CellState::A);
        EXPECT_EQ(m.lookup(0, 3), CellState::B);
        EXPECT_EQ(m.lookup(0, 0), CellState::S);
    }
    const std::vector<RuleConstraint> bad{{1, 1, CellState::A}, {1, 1, CellState::B}};
    EXPECT_THROW(random_rule(rng, bad), std::invalid_argument);
    const std::vector<RuleConstraint> center{{0, 0, CellState::B}};
    EXPECT_THROW(random_rule(rng, center), std::invalid_argument);
}

TEST(Rules, FreeEntriesAreUniform) {
    std::mt19937_64 rng(2024);
    constexpr int kDraws = 10000;
    std::array<std::array<int, 3>, kRuleEntries> counts{};
    for (int n = 0; n < kDraws; ++n) {
        const RuleMatrix m = random_rule(rng);
        for (std::size_t k = 0; k < kRuleEntries; ++k) ++counts[k][static_cast<std::size_t>(m[k])];
    }
    EXPECT_EQ(counts[0][0], kDraws);
    // chi-square with 2 dof; 13.8 is the 0.999 quantile
    const double e = kDraws / 3.0;
    for (std::size_t k = 1; k < kRuleEntries; ++k) {
        double chi2 = 0;
        for (int c : counts[k]) chi2 += (c - e) * (c - e) / e;
        EXPECT_LT(chi2, 13.8) << "entry " << k;
    }
}

TEST(Rules, RuleFileRoundTrip) {
    std::mt19937_64 rng(4);
    std::vector<RuleMatrix> rules;
    std::ostringstream os;
    os << "# corpus\n\n";
    for (int n = 0; n < 5; ++n) {
        rules.push_back(random_rule(rng));
        write_rule(os, rules.back());
    }
    std::istringstream is(os.str());
    EXPECT_EQ(read_rules(is), rules);
    std::istringstream bad("SSSA\n");
    EXPECT_THROW(read_rules(bad), std::runtime_error);
}
