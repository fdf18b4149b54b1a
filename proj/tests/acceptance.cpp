// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "hexca/analysis.hpp"
#include "hexca/detector.hpp"
#include "hexca/engine.hpp"
#include "hexca/evolve.hpp"
#include "hexca/reactor.hpp"
#include "synthetic.hpp"

using namespace hexca;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fixture(const std::string& name) { return std::string(HEXCA_FIXTURES_DIR) + "/" + name; }

Grid random_grid(int w, int h, std::mt19937_64& rng) {
    Grid g(w, h);
    std::uniform_int_distribution<int> s(0, 2);
    for (std::size_t k = 0; k < g.size(); ++k) g.set(k, static_cast<CellState>(s(rng)));
    return g;
}

Grid step_shuffled(const Grid& g, const RuleMatrix& m, std::mt19937_64& rng) {
    Grid out(g.width(), g.height());
    for (std::size_t k = 0; k < g.size(); ++k) {
        auto nb = neighborhood(g, g.topology().coord(k));
        std::shuffle(nb.begin() + 1, nb.end(), rng);
        int a = 0, b = 0;
        for (const HexCoord& c : nb) {
            a += g.at(c) == CellState::A;
            b += g.at(c) == CellState::B;
        }
        out.set(k, m.lookup(a, b));
    }
    return out;
}

std::string fmt(double x, int prec = 4) {
    std::ostringstream os;
    os.precision(prec);
    os << x;
    return os.str();
}

Outcome engine_oracle() {
    std::mt19937_64 rng(101);
    for (int c = 0; c < 500; ++c) {
        const RuleMatrix m = random_rule(rng);
        Grid g = random_grid(16, 16, rng);
        for (int t = 0; t < 50; ++t) {
            const Grid ref = step_reference(g, m);
            if (step(g, m) != ref) return {false, "mismatch in case " + std::to_string(c) + " step " + std::to_string(t)};
            g = ref;
        }
    }
    return {true, "500 cases x 50 steps bit-identical"};
}

Outcome invariance() {
    std::mt19937_64 rng(202);
    std::uniform_int_distribution<int> shift(-40, 40);
    for (int c = 0; c < 100; ++c) {
        const RuleMatrix m = random_rule(rng);
        const int w = 3 + c % 17, h = 3 + (c * 7) % 15;
        const Grid g = random_grid(w, h, rng);
        const Grid out = step(g, m);
        if (step_shuffled(g, m, rng) != out) return {false, "shuffle changed case " + std::to_string(c)};
        const int dr = shift(rng), dc = shift(rng);
        if (step(translate(g, dr, dc), m) != translate(out, dr, dc))
            return {false, "translation changed case " + std::to_string(c)};
    }
    return {true, "100 cases, shuffled visits and torus translations exact"};
}

Outcome quiescence() {
    std::mt19937_64 rng(303);
    for (int c = 0; c < 1000; ++c) {
        const Grid g(5 + c % 11, 3 + c % 13);
        if (step(g, random_rule(rng)) != g) return {false, "rule " + std::to_string(c) + " disturbed the substrate"};
    }
    return {true, "1000 rules keep the all-S grid fixed"};
}

Outcome detector_oracles() {
    auto classes = [](const Trajectory& tr) { return track(tr, static_cast<int>(tr.frames.size()), 12); };
    auto count = [](const std::vector<Localization>& locs, LocalizationClass c) {
        return std::count_if(locs.begin(), locs.end(), [&](const auto& l) { return l.cls == c; });
    };
    std::string bad;
    const auto still = classes(synthetic::still_triple());
    if (still.size() != 1 || still[0].cls != LocalizationClass::StillLife) bad += " still";
    const auto osc = classes(synthetic::blinker());
    if (osc.size() != 1 || osc[0].cls != LocalizationClass::Oscillator || osc[0].period != 2) bad += " blinker";
    const auto gl = classes(synthetic::translated_glider());
    if (gl.size() != 1 || gl[0].cls != LocalizationClass::Glider || gl[0].period != 2 ||
        gl[0].displacement != Displacement{0, 2})
        bad += " glider";
    const auto pf = classes(synthetic::puffer());
    if (count(pf, LocalizationClass::PufferTrain) != 1 || count(pf, LocalizationClass::Glider) != 0) bad += " puffer";
    if (!bad.empty()) return {false, "misclassified:" + bad};
    return {true, "StillLife / Oscillator(p=2) / Glider(p=2, (0,2)) / PufferTrain"};
}

Outcome likelihood_bookkeeping() {
    auto set_of = [](std::initializer_list<std::pair<int, int>> pairs) {
        TransitionSet s;
        for (auto [i, j] : pairs) s.set(rule_index(i, j));
        return s;
    };
    auto rule_with = [](std::initializer_list<std::tuple<int, int, CellState>> entries) {
        RuleMatrix m;
        for (auto [i, j, s] : entries) m.set(i, j, s);
        return m;
    };
    const std::vector<CorpusEntry> corpus{
        {rule_with({{1, 1, CellState::A}, {1, 0, CellState::A}}), set_of({{0, 0}, {1, 0}, {1, 1}})},
        {rule_with({{1, 1, CellState::B}, {1, 0, CellState::S}}), set_of({{0, 0}, {1, 1}, {0, 1}})},
        {rule_with({{1, 1, CellState::A}, {1, 0, CellState::B}}), set_of({{0, 0}, {1, 0}})},
        {rule_with({{1, 1, CellState::S}, {1, 0, CellState::A}, {2, 0, CellState::B}}), set_of({{0, 0}, {1, 1}, {2, 0}})},
    };
    const auto lm = compute_likelihoods(corpus);
    // hand counts: (1,1) -> 1/4 each; (1,0) -> A 1/4, B 1/4, # 1/2; (0,1) -> S 1/4; (2,0) -> B 1/4
    struct Expect {
        int i, j;
        double fs, fa, fb, fh;
    };
    const std::vector<Expect> hand{{0, 0, 1, 0, 0, 0},       {1, 1, .25, .25, .25, .25}, {1, 0, 0, .25, .25, .5},
                                   {0, 1, .25, 0, 0, .75},   {2, 0, 0, 0, .25, .75},     {3, 3, 0, 0, 0, 1}};
    for (const Expect& e : hand) {
        const std::size_t k = rule_index(e.i, e.j);
        if (lm.fs[k] != e.fs || lm.fa[k] != e.fa || lm.fb[k] != e.fb || lm.fhash[k] != e.fh)
            return {false, "hand count mismatch at (" + std::to_string(e.i) + "," + std::to_string(e.j) + ")"};
    }
    for (std::size_t k = 0; k < kRuleEntries; ++k)
        if (lm.fs[k] + lm.fa[k] + lm.fb[k] + lm.fhash[k] != 1.0) return {false, "corpus partition broken"};

    std::ifstream is(fixture("glider_likelihoods.csv"));
    if (!is) return {false, "missing likelihood fixture"};
    const auto pub = read_likelihoods_csv(is);
    double worst = 0;
    for (std::size_t k = 0; k < kRuleEntries; ++k)
        worst = std::max(worst, std::abs(pub.fs[k] + pub.fa[k] + pub.fb[k] + pub.fhash[k] - 1.0));
    const std::size_t k11 = rule_index(1, 1);
    const double s11 = pub.fs[k11] + pub.fa[k11] + pub.fb[k11] + pub.fhash[k11];
    if (worst > 0.02 + 1e-12) return {false, "published sums off by " + fmt(worst)};
    if (std::abs(s11 - 1.0) > 1e-12) return {false, "(1,1) sums to " + fmt(s11)};
    return {true, "hand corpus exact; published sums within " + fmt(worst, 3) + " of 1; (1,1) = " + fmt(s11, 3)};
}

Outcome reduction() {
    const ReducedRuleSet reference = reference_reduced_set();
    std::uint64_t n = 0;
    RuleEnumerator(reference).for_each([&](const RuleMatrix&) { ++n; });
    std::ifstream is(fixture("glider_likelihoods.csv"));
    if (!is) return {false, "missing likelihood fixture"};
    const auto d = diff(reference, reduce(read_likelihoods_csv(is)));
    const std::size_t matching = kRuleEntries - d.size();
    std::string detail = std::to_string(n) + " rules enumerated; " + std::to_string(matching) + "/36 entries match";
    for (const auto& e : d)
        detail += "; diff (" + std::to_string(e.i) + "," + std::to_string(e.j) + ") expected " + e.expected + " got " +
                  e.actual;
    return {n == 648 && matching >= 30, detail};
}

Outcome stationarity() {
    const SweepConfig cfg;  // 20 rules, 5 trials, 30x30, 300 steps, last 60 frames
    const SweepReport rep = stationarity_sweep(reference_reduced_set(), cfg, 404);
    auto get = [&](LocalizationClass c) { return rep.histogram.contains(c) ? rep.histogram.at(c) : 0; };
    bool stationary = false;
    for (const auto& r : rep.rules) {
        auto has = [&](LocalizationClass c) { return r.histogram.contains(c) && r.histogram.at(c) > 0; };
        stationary = stationary || has(LocalizationClass::StillLife) || has(LocalizationClass::Oscillator);
    }
    std::string detail = std::to_string(rep.rules.size()) + " rules;";
    for (LocalizationClass c : kAllClasses) detail += std::string(" ") + to_string(c) + "=" + std::to_string(get(c));
    return {rep.mobile() == 0 && stationary, detail};
}

Outcome reactor_conservation() {
    const ReactionSystem sys = glider_reaction_system();
    const ReactorState init{{33333, 33333, 33333}, 0};
    SsaOptions opt;
    opt.t_max = 1e9;
    opt.sample_dt = 1e8;
    opt.omega = static_cast<double>(init.total());
    opt.max_events = 1'000'000;
    bool conserved = true;
    opt.on_event = [&](const ReactorState& st) {
        conserved = conserved && st.total() == init.total() && st.counts[0] >= 0 && st.counts[1] >= 0 &&
                    st.counts[2] >= 0;
    };
    std::mt19937_64 rng(505);
    const SsaResult res = ssa_run(sys, init, opt, rng);
    if (res.events != 1'000'000) return {false, "stopped after " + std::to_string(res.events) + " events"};
    if (!conserved) return {false, "particle count changed"};

    const ReactionSystem decay{{{{1, 0, 0}, {0, 0, 1}, 0.054}}};
    SsaOptions d;
    d.t_max = 10;
    d.sample_dt = 10;
    double sum = 0;
    for (int r = 0; r < 100; ++r) {
        std::mt19937_64 rr(derive_seed(505, static_cast<std::uint64_t>(r)));
        sum += static_cast<double>(ssa_run(decay, ReactorState{{10000, 0, 0}, 0}, d, rr).samples.back().counts[0]);
    }
    const double p = std::exp(-0.54);
    const double expect = 10000 * p;
    const double sigma = std::sqrt(10000 * p * (1 - p) / 100);
    const double z = (sum / 100 - expect) / sigma;
    return {std::abs(z) <= 3,
            "1e6 events conserved; decay mean " + fmt(sum / 100, 6) + " vs " + fmt(expect, 6) + " (z=" + fmt(z, 3) + ")"};
}

Outcome reactor_dynamics() {
    const ReactionSystem sys = glider_reaction_system();
    const ReactorState init{{33333, 33333, 33333}, 0};
    SsaOptions opt;
    opt.t_max = 1500;
    opt.sample_dt = 1;
    opt.omega = static_cast<double>(init.total());
    std::mt19937_64 rng(606);
    const SsaResult res = ssa_run(sys, init, opt, rng);
    const double transient = 100;

    std::vector<double> a, b, s;
    for (const Sample& x : res.samples)
        if (x.t >= transient) {
            a.push_back(static_cast<double>(x.counts[0]));
            b.push_back(static_cast<double>(x.counts[1]));
            s.push_back(static_cast<double>(x.counts[2]));
        }
    const double n = static_cast<double>(a.size());
    auto mean = [&](const std::vector<double>& v) {
        double t = 0;
        for (double x : v) t += x;
        return t / n;
    };
    const double ma = mean(a), mb = mean(b), ms = mean(s);
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        sab += (a[k] - ma) * (b[k] - mb);
        saa += (a[k] - ma) * (a[k] - ma);
        sbb += (b[k] - mb) * (b[k] - mb);
    }
    const double corr = (saa > 0 && sbb > 0) ? sab / std::sqrt(saa * sbb) : 0.0;
    // oscillation features: band crossings of A around its mean (half a standard deviation of hysteresis)
    const double band = 0.5 * std::sqrt(saa / n);
    int features = 0, side = 0;
    for (double x : a) {
        const int now = x > ma + band ? 1 : (x < ma - band ? -1 : side);
        if (side != 0 && now != side) ++features;
        side = now;
    }
    const bool covered = features >= 10;
    const bool substrate = ms > ma && ms > mb;
    const bool similar = corr > 0.5;
    std::string detail = "termination=" + std::string(to_string(res.termination)) + " features=" +
                         std::to_string(features) + " mean A=" + fmt(ma, 6) + " B=" + fmt(mb, 6) + " S=" + fmt(ms, 6) +
                         " corr(A,B)=" + fmt(corr, 3);
    return {covered && substrate && similar && res.termination == Termination::TimeLimit, detail};
}

Outcome ea_smoke() {
    EAConfig cfg;
    cfg.population_size = 20;
    cfg.seed = 707;
    const EARun r = ea_run(cfg, [](const RuleMatrix& m, std::uint64_t) {
        double n = 0;
        for (CellState s : m.entries()) n += s == CellState::A;
        return n;
    });
    bool monotone = true;
    for (std::size_t g = 1; g < r.history.size(); ++g) monotone = monotone && r.history[g].best >= r.history[g - 1].best;
    const bool halted = r.generations() == r.generation_of_best + cfg.stall_generations + 1;

    std::ifstream is(fixture("glider_rule.txt"));
    if (!is) return {false, "missing glider rule fixture"};
    const RuleMatrix glider = read_rule(is);
    const double f = fitness(glider, FitnessConfig{}, 1);
    std::string detail = "surrogate best " + fmt(r.best_fitness) + " after " + std::to_string(r.generations()) +
                         " generations" + (monotone ? "" : " (not monotone)") + (halted ? "" : " (stall rule not met)") +
                         "; fixture fitness " + fmt(f, 4);
    return {monotone && halted && f > 0, detail};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "engine oracle equivalence", 30, engine_oracle},
        {2, "totalistic and translation invariance", 0, invariance},
        {3, "quiescence", 0, quiescence},
        {4, "detector oracles", 0, detector_oracles},
        {5, "likelihood bookkeeping", 0, likelihood_bookkeeping},
        {6, "reduction", 5, reduction},
        {7, "stationary rule class sweep", 120, stationarity},
        {8, "reactor conservation and decay", 60, reactor_conservation},
        {9, "reactor qualitative dynamics", 120, reactor_dynamics},
        {10, "evolutionary search smoke", 180, ea_smoke},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0 && secs > c.budget_s) {
            o.pass = false;
            o.detail += "; over time budget of " + fmt(c.budget_s) + " s";
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " [" << fmt(secs, 3)
                  << " s] " << o.detail << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
              << std::endl;
    return failed == 0 ? 0 : 1;
}
