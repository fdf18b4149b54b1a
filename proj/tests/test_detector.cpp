#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "hexca/detector.hpp"
#include "synthetic.hpp"

using namespace hexca;

namespace {

using namespace hexca::synthetic;

std::vector<Localization> track_all(const Trajectory& tr, int p_max = 12) {
    return track(tr, static_cast<int>(tr.frames.size()), p_max);
}

std::size_t count_class(const std::vector<Localization>& locs, LocalizationClass c) {
    return static_cast<std::size_t>(std::count_if(locs.begin(), locs.end(), [&](const auto& l) { return l.cls == c; }));
}

}  // namespace

TEST(Components, EmptyAndAdjacentPair) {
    Grid g(8, 8);
    EXPECT_TRUE(extract_components(g).empty());
    g.set(HexCoord{3, 3}, CellState::A);
    g.set(HexCoord{3, 4}, CellState::A);
    const auto comps = extract_components(g);
    ASSERT_EQ(comps.size(), 1u);
    EXPECT_EQ(comps[0].cells.size(), 2u);
}

TEST(Components, PartitionOfLiveCells) {
    std::mt19937_64 rng(12);
    std::bernoulli_distribution live(0.25);
    for (int n = 0; n < 10; ++n) {
        Grid g(13, 11);
        for (std::size_t k = 0; k < g.size(); ++k)
            if (live(rng)) g.set(k, n % 2 ? CellState::A : CellState::B);
        const auto comps = extract_components(g);
        std::set<HexCoord> seen;
        for (const Component& comp : comps) {
            ASSERT_FALSE(comp.cells.empty());
            std::set<HexCoord> mine;
            for (const auto& [c, s] : comp.cells) {
                EXPECT_NE(s, CellState::S);
                EXPECT_EQ(g.at(c), s);
                EXPECT_TRUE(seen.insert(c).second) << "cell in two components";
                mine.insert(c);
            }
            // flood fill within the component reaches every member
            std::set<HexCoord> reached{*mine.begin()};
            std::vector<HexCoord> stack{*mine.begin()};
            while (!stack.empty()) {
                const HexCoord c = stack.back();
                stack.pop_back();
                const auto nb = neighborhood(g, c);
                for (std::size_t k = 1; k < nb.size(); ++k) {
                    EXPECT_TRUE(g.at(nb[k]) == CellState::S || mine.contains(nb[k])) << "component not maximal";
                    if (mine.contains(nb[k]) && reached.insert(nb[k]).second) stack.push_back(nb[k]);
                }
            }
            EXPECT_EQ(reached, mine);
        }
        EXPECT_EQ(seen.size(), g.size() - g.count(CellState::S));
    }
}

TEST(CanonicalShape, InvariantUnderTranslation) {
    std::mt19937_64 rng(3);
    for (auto [w, h] : {std::pair{12, 12}, {11, 9}}) {
        Grid g(w, h);
        g.set(HexCoord{4, 4}, CellState::A);
        g.set(HexCoord{4, 5}, CellState::B);
        g.set(HexCoord{5, 4}, CellState::A);
        g.set(HexCoord{6, 4}, CellState::B);
        const auto base = canonical_shape(g, extract_components(g).at(0));
        std::uniform_int_distribution<int> d(-20, 20);
        for (int n = 0; n < 40; ++n) {
            const Grid t = translate(g, d(rng), d(rng));
            const auto comps = extract_components(t);
            ASSERT_EQ(comps.size(), 1u);
            EXPECT_EQ(canonical_shape(t, comps[0]), base);
        }
    }
}

TEST(Classify, TableOfCases) {
    Localization l;
    l.shapes.resize(4);
    l.period = 1;
    EXPECT_EQ(classify(l), LocalizationClass::StillLife);
    l.period = 2;
    EXPECT_EQ(classify(l), LocalizationClass::Oscillator);
    l.displacement = {0, 2};
    EXPECT_EQ(classify(l), LocalizationClass::Glider);
    l.trail_grows = true;
    EXPECT_EQ(classify(l), LocalizationClass::PufferTrain);
    l.period = 3;  // fewer than two periods observed
    EXPECT_EQ(classify(l), LocalizationClass::Unresolved);
    l.period = 0;
    EXPECT_EQ(classify(l), LocalizationClass::Unresolved);
}

TEST(Track, StaticTripleIsStillLife) {
    const auto tr = still_triple();
    const auto locs = track_all(tr);
    ASSERT_EQ(locs.size(), 1u);
    EXPECT_EQ(locs[0].cls, LocalizationClass::StillLife);
    EXPECT_EQ(locs[0].period, 1);
    EXPECT_TRUE(locs[0].displacement.is_zero());
    EXPECT_EQ(locs[0].size(), 3u);
}

TEST(Track, BlinkerIsOscillator) {
    const auto tr = blinker();
    const auto locs = track_all(tr);
    ASSERT_EQ(locs.size(), 1u);
    EXPECT_EQ(locs[0].cls, LocalizationClass::Oscillator);
    EXPECT_EQ(locs[0].period, 2);
    EXPECT_TRUE(locs[0].displacement.is_zero());
}

TEST(Track, TranslatedPatternIsGlider) {
    const auto tr = translated_glider();
    const auto locs = track_all(tr);
    ASSERT_EQ(locs.size(), 1u);
    EXPECT_EQ(locs[0].cls, LocalizationClass::Glider);
    EXPECT_EQ(locs[0].period, 2);
    EXPECT_EQ(locs[0].displacement, (Displacement{0, 2}));
}

TEST(Track, GliderAcrossTheSeam) {
    // starts near the right edge and wraps to column 0 mid-run
    const auto tr = build(20, 16, 24, [](int t) { return glider_at(t, 6, 12); });
    const auto locs = track_all(tr);
    ASSERT_EQ(locs.size(), 1u);
    EXPECT_EQ(locs[0].cls, LocalizationClass::Glider);
    EXPECT_EQ(locs[0].displacement, (Displacement{0, 2}));
}

TEST(Track, ClassificationIsTranslationInvariant) {
    const auto tr = build(24, 14, 16, [](int t) { return glider_at(t, 3, 2); });
    const auto base = track_all(tr);
    ASSERT_EQ(base.size(), 1u);
    for (auto [dr, dc] : {std::pair{1, 0}, {3, 5}, {-5, 11}, {7, -1}}) {
        Trajectory moved;
        for (const Grid& g : tr.frames) moved.frames.push_back(translate(g, dr, dc));
        const auto locs = track_all(moved);
        ASSERT_EQ(locs.size(), 1u);
        EXPECT_EQ(locs[0].cls, base[0].cls);
        EXPECT_EQ(locs[0].period, base[0].period);
        EXPECT_EQ(locs[0].displacement, base[0].displacement);
    }
}

TEST(Track, HeadWithGrowingTrailIsPufferTrain) {
    const auto tr = puffer();
    const auto locs = track_all(tr);
    EXPECT_EQ(count_class(locs, LocalizationClass::PufferTrain), 1u);
    EXPECT_EQ(count_class(locs, LocalizationClass::Glider), 0u);
    const auto head = std::find_if(locs.begin(), locs.end(),
                                   [](const auto& l) { return l.cls == LocalizationClass::PufferTrain; });
    ASSERT_NE(head, locs.end());
    EXPECT_GT(head->spawned, 0);
    EXPECT_EQ(head->displacement.dr, 0);
    EXPECT_GT(head->displacement.dc, 0);
    // the dropped cells persist as still lifes
    EXPECT_GE(count_class(locs, LocalizationClass::StillLife), 3u);
}

TEST(Track, CollisionLeavesBothUnresolved) {
    const auto tr = collision();
    const auto locs = track_all(tr);
    EXPECT_EQ(count_class(locs, LocalizationClass::Glider), 0u);
    EXPECT_GE(count_class(locs, LocalizationClass::Unresolved), 2u);
}

TEST(Track, RejectsBadArguments) {
    const auto tr = build(8, 8, 3, [](int) { return Cells{}; });
    EXPECT_THROW(track(tr, 4, 2), std::invalid_argument);
    EXPECT_THROW(track(tr, 3, 0), std::invalid_argument);
    EXPECT_TRUE(track(tr, 3, 2).empty());
}

TEST(Fitness, QuiescentRuleScoresZero) {
    FitnessConfig cfg;
    cfg.trials = 2;
    cfg.steps = 40;
    cfg.window = 20;
    EXPECT_EQ(fitness(RuleMatrix{}, cfg, 1), 0.0);
}

TEST(Fitness, DeterministicAndThreadIndependent) {
    std::mt19937_64 rng(77);
    FitnessConfig cfg;
    cfg.width = cfg.height = 32;
    cfg.patch = 12;
    cfg.trials = 4;
    cfg.steps = 60;
    cfg.window = 24;
    for (int n = 0; n < 4; ++n) {
        const RuleMatrix m = random_rule(rng);
        const auto a = detect_trials(m, cfg, 5);
        cfg.threads = 3;
        const auto b = detect_trials(m, cfg, 5);
        cfg.threads = 1;
        std::ostringstream sa, sb;
        write_detection_csv(sa, a);
        write_detection_csv(sb, b);
        EXPECT_EQ(sa.str(), sb.str());
        EXPECT_EQ(fitness(m, cfg, 5), fitness(m, cfg, 5));
    }
}

TEST(Fitness, ConfigValidation) {
    FitnessConfig cfg;
    cfg.window = cfg.steps + 2;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.patch = 65;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.trials = 0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Fitness, DetectionCsvHeader) {
    std::ostringstream os;
    write_detection_csv(os, std::vector<std::vector<Localization>>{});
    EXPECT_EQ(os.str(), "trial,class,period,dr,dc,size,first_frame\n");
}
