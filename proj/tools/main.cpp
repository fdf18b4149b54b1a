// hexca: command-line front end for the hexagonal CA workbench.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hexca/analysis.hpp"
#include "hexca/detector.hpp"
#include "hexca/engine.hpp"
#include "hexca/evolve.hpp"
#include "hexca/reactor.hpp"

using namespace hexca;
using json = nlohmann::ordered_json;

namespace {

struct Common {
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "Master RNG seed")->capture_default_str();
    cmd->add_option("--threads", c.threads, "Worker threads (1 = sequential)")
        ->check(CLI::Range(1u, 1024u))
        ->capture_default_str();
}

void add_fitness(CLI::App* cmd, FitnessConfig& f) {
    cmd->add_option("--width", f.width, "Grid width")->capture_default_str();
    cmd->add_option("--height", f.height, "Grid height")->capture_default_str();
    cmd->add_option("--patch", f.patch, "Side of the random initial patch")->capture_default_str();
    cmd->add_option("--p-s", f.p_s, "Patch probability of S")->capture_default_str();
    cmd->add_option("--p-a", f.p_a, "Patch probability of A")->capture_default_str();
    cmd->add_option("--p-b", f.p_b, "Patch probability of B")->capture_default_str();
    cmd->add_option("--trials", f.trials, "Random initial configurations")->capture_default_str();
    cmd->add_option("--steps", f.steps, "Steps per trial")->capture_default_str();
    cmd->add_option("--window", f.window, "Trailing frames used for detection")->capture_default_str();
    cmd->add_option("--p-max", f.p_max, "Longest period searched")->capture_default_str();
    cmd->add_flag("!--no-puffers", f.count_puffers, "Do not count puffer trains as gliders");
}

json to_json(const FitnessConfig& f) {
    return {{"width", f.width},     {"height", f.height}, {"patch", f.patch}, {"p_s", f.p_s},
            {"p_a", f.p_a},         {"p_b", f.p_b},       {"trials", f.trials}, {"steps", f.steps},
            {"window", f.window},   {"p_max", f.p_max},   {"count_puffers", f.count_puffers}};
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path);
    return is;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream os(path, mode);
    if (!os) throw std::runtime_error("cannot write " + path);
    return os;
}

// Metadata lives next to the primary output as <output>.meta.json.
void write_meta(const std::string& output, const std::string& command, const Common& c, json config) {
    json meta;
    meta["tool"] = "hexca";
    meta["version"] = HEXCA_VERSION;
    meta["command"] = command;
    meta["seed"] = c.seed;
    meta["threads"] = c.threads;
    meta["config"] = std::move(config);
    auto os = open_out(output + ".meta.json");
    os << meta.dump(2) << '\n';
}

RuleConstraint parse_constraint(const std::string& text) {
    // i,j,X
    std::istringstream is(text);
    RuleConstraint c;
    char comma1 = 0, comma2 = 0, state = 0;
    is >> c.i >> comma1 >> c.j >> comma2 >> state;
    if (is.fail() || comma1 != ',' || comma2 != ',' || (is >> std::ws).peek() != std::char_traits<char>::eof())
        throw std::invalid_argument("constraint must look like i,j,X: " + text);
    c.output = state_from_char(state);
    return c;
}

// ---- evolve ----------------------------------------------------------------

struct EvolveArgs {
    Common common;
    EAConfig ea;
    std::string out = "best_rule.txt";
    std::string corpus;
    std::string history = "history.csv";
    std::vector<std::string> constraints;
};

int cmd_evolve(EvolveArgs& a) {
    a.ea.seed = a.common.seed;
    a.ea.threads = a.common.threads;
    for (const auto& c : a.constraints) a.ea.constraints.push_back(parse_constraint(c));
    a.ea.fitness.validate();
    const EARun r = ea_run(a.ea);

    {
        auto os = open_out(a.out);
        write_rule(os, r.best_rule);
    }
    if (!a.corpus.empty()) {
        auto os = open_out(a.corpus, std::ios::app);
        write_rule(os, r.best_rule);
    }
    {
        auto os = open_out(a.history);
        os << "generation,best,mean\n";
        os.precision(10);
        for (const auto& g : r.history) os << g.generation << ',' << g.best << ',' << g.mean << '\n';
    }
    json cfg{{"population_size", a.ea.population_size},
             {"stall_generations", a.ea.stall_generations},
             {"crossover_rate", a.ea.crossover_rate},
             {"tournament_size", a.ea.tournament_size},
             {"max_generations", a.ea.max_generations},
             {"constraints", a.constraints},
             {"fitness", to_json(a.ea.fitness)},
             {"corpus", a.corpus},
             {"history", a.history}};
    write_meta(a.out, "evolve", a.common,
               {{"config", cfg},
                {"result",
                 {{"best_rule", r.best_rule.str()},
                  {"best_fitness", r.best_fitness},
                  {"generation_of_best", r.generation_of_best},
                  {"generations", r.generations()}}}});
    std::cout << r.best_rule.str() << " fitness=" << r.best_fitness << " generation=" << r.generation_of_best
              << " generations=" << r.generations() << '\n';
    return 0;
}

// ---- simulate --------------------------------------------------------------

struct SimulateArgs {
    Common common;
    std::string rule;
    std::string grid;
    int width = 64;
    int height = 64;
    double density = 0.2;
    int steps = 100;
    int keep = -1;
    std::string dump = "frames.txt";
    std::string pgm;
};

int cmd_simulate(SimulateArgs& a) {
    auto rs = open_in(a.rule);
    const RuleMatrix m = read_rule(rs);
    Grid init = [&] {
        if (!a.grid.empty()) {
            auto gs = open_in(a.grid);
            return read_grid(gs);
        }
        std::mt19937_64 rng(a.common.seed);
        Grid g(a.width, a.height);
        std::bernoulli_distribution live(a.density);
        std::uniform_int_distribution<int> ab(1, 2);
        for (std::size_t k = 0; k < g.size(); ++k)
            if (live(rng)) g.set(k, static_cast<CellState>(ab(rng)));
        return g;
    }();
    if (a.steps < 0) throw std::invalid_argument("--steps must be >= 0");
    const int keep = a.keep < 0 ? a.steps + 1 : a.keep;
    const Trajectory tr = run(init, m, a.steps, keep, a.common.threads);
    {
        auto os = open_out(a.dump);
        write_frames(os, tr.frames);
    }
    if (!a.pgm.empty()) {
        for (std::size_t k = 0; k < tr.frames.size(); ++k) {
            std::ostringstream name;
            name << a.pgm << '_' << (tr.t0 + static_cast<int>(k)) << ".pgm";
            auto os = open_out(name.str(), std::ios::binary);
            write_pgm(os, tr.frames[k]);
        }
    }
    write_meta(a.dump, "simulate", a.common,
               {{"rule", m.str()},
                {"grid", a.grid},
                {"width", init.width()},
                {"height", init.height()},
                {"density", a.grid.empty() ? json(a.density) : json(nullptr)},
                {"steps", a.steps},
                {"keep", keep},
                {"t0", tr.t0},
                {"frames", tr.frames.size()},
                {"pgm", a.pgm}});
    return 0;
}

// ---- detect ----------------------------------------------------------------

struct DetectArgs {
    Common common;
    FitnessConfig fit;
    std::string rule;
    std::string frames;
    std::string out = "detections.csv";
};

int cmd_detect(DetectArgs& a) {
    std::vector<std::vector<Localization>> per_trial;
    json cfg;
    if (!a.frames.empty()) {
        auto fs = open_in(a.frames);
        Trajectory tr;
        tr.frames = read_frames(fs);
        if (tr.frames.empty()) throw std::runtime_error("no frames in " + a.frames);
        const int window = std::min<int>(a.fit.window, static_cast<int>(tr.frames.size()));
        per_trial.push_back(track(tr, window, a.fit.p_max));
        cfg = {{"frames", a.frames}, {"window", window}, {"p_max", a.fit.p_max}};
    } else {
        if (a.rule.empty()) throw std::invalid_argument("detect needs --rule or --frames");
        auto rs = open_in(a.rule);
        const RuleMatrix m = read_rule(rs);
        a.fit.threads = a.common.threads;
        per_trial = detect_trials(m, a.fit, a.common.seed);
        std::size_t mobile = 0;
        for (const auto& locs : per_trial) mobile += count_mobile(locs, a.fit.count_puffers);
        const double f = static_cast<double>(mobile) /
                         (static_cast<double>(a.fit.width) * a.fit.height * static_cast<double>(a.fit.trials));
        cfg = {{"rule", m.str()}, {"fitness", to_json(a.fit)}, {"result", {{"gliders", mobile}, {"fitness", f}}}};
        std::cout << "gliders=" << mobile << " fitness=" << f << '\n';
    }
    {
        auto os = open_out(a.out);
        write_detection_csv(os, per_trial);
    }
    std::map<LocalizationClass, std::size_t> hist;
    for (const auto& locs : per_trial)
        for (const auto& l : locs) ++hist[l.cls];
    json h = json::object();
    for (LocalizationClass c : kAllClasses) h[to_string(c)] = hist.contains(c) ? hist[c] : 0;
    cfg["histogram"] = h;
    write_meta(a.out, "detect", a.common, cfg);
    return 0;
}

// ---- likelihood ------------------------------------------------------------

struct LikelihoodArgs {
    Common common;
    FitnessConfig fit;
    std::string corpus;
    std::string out = "likelihoods.csv";
    std::string heatmap;
    int attempts = 5;
};

int cmd_likelihood(LikelihoodArgs& a) {
    auto cs = open_in(a.corpus);
    const auto rules = read_rules(cs);
    if (rules.empty()) throw std::runtime_error("corpus " + a.corpus + " holds no rules");
    a.fit.validate();

    std::vector<std::optional<GliderTrace>> traces(rules.size());
    const std::size_t workers = std::clamp<std::size_t>(a.common.threads, 1, rules.size());
    auto work = [&](std::size_t w) {
        for (std::size_t k = w; k < rules.size(); k += workers)
            traces[k] = isolate_glider(rules[k], a.fit, derive_seed(a.common.seed, k), a.attempts);
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }

    std::vector<CorpusEntry> entries;
    json used = json::array(), skipped = json::array();
    for (std::size_t k = 0; k < rules.size(); ++k) {
        if (traces[k]) {
            entries.push_back({rules[k], traces[k]->necessary});
            used.push_back({{"rule", rules[k].str()},
                            {"period", traces[k]->glider.period},
                            {"dr", traces[k]->glider.displacement.dr},
                            {"dc", traces[k]->glider.displacement.dc}});
        } else {
            skipped.push_back(rules[k].str());
            std::cerr << "warning: no isolated glider for rule " << k << ", skipped\n";
        }
    }
    if (entries.empty()) throw std::runtime_error("no rule in the corpus yielded an isolated glider");
    const LikelihoodMatrices lm = compute_likelihoods(entries);
    {
        auto os = open_out(a.out);
        write_likelihoods_csv(os, lm);
    }
    if (!a.heatmap.empty()) {
        for (auto [name, table] : {std::pair{"FS", &lm.fs}, {"FA", &lm.fa}, {"FB", &lm.fb}, {"Fhash", &lm.fhash}}) {
            auto os = open_out(a.heatmap + "_" + name + ".pgm", std::ios::binary);
            write_heatmap_pgm(os, *table);
        }
    }
    write_meta(a.out, "likelihood", a.common,
               {{"corpus", a.corpus},
                {"attempts", a.attempts},
                {"fitness", to_json(a.fit)},
                {"entries", used},
                {"skipped", skipped}});
    std::cout << "entries=" << entries.size() << " skipped=" << skipped.size() << '\n';
    return 0;
}

// ---- reduce ----------------------------------------------------------------

struct ReduceArgs {
    Common common;
    ReduceParams params;
    std::string mode = "mean";
    std::string in;
    std::string out = "reduced.csv";
    std::string expected;
    std::string diff_out;
    std::string enumerate;
};

int cmd_reduce(ReduceArgs& a) {
    a.params.mode = a.mode == "floor" ? SymmetrizeMode::Floor : SymmetrizeMode::Mean;
    auto is = open_in(a.in);
    const LikelihoodMatrices lm = read_likelihoods_csv(is);
    const ReducedRuleSet r = reduce(lm, a.params);
    {
        auto os = open_out(a.out);
        write_reduced_csv(os, r);
    }
    json cfg{{"in", a.in},
             {"theta", a.params.theta},
             {"eps", a.params.eps},
             {"negligible", a.params.negligible},
             {"dominance", a.params.dominance},
             {"mode", a.mode},
             {"rules_in_class", r.count()}};
    if (!a.expected.empty()) {
        auto es = open_in(a.expected);
        const auto d = diff(read_reduced_csv(es), r);
        json rows = json::array();
        for (const auto& e : d) rows.push_back({{"i", e.i}, {"j", e.j}, {"expected", e.expected}, {"actual", e.actual}});
        cfg["expected"] = a.expected;
        cfg["matching_entries"] = kRuleEntries - d.size();
        cfg["diff"] = rows;
        if (!a.diff_out.empty()) {
            auto os = open_out(a.diff_out);
            os << "i,j,expected,actual\n";
            for (const auto& e : d) os << e.i << ',' << e.j << ',' << e.expected << ',' << e.actual << '\n';
        }
        std::cout << "matching=" << kRuleEntries - d.size() << "/36\n";
    }
    if (!a.enumerate.empty()) {
        auto os = open_out(a.enumerate);
        RuleEnumerator(r).for_each([&](const RuleMatrix& m) { write_rule(os, m); });
        cfg["enumerated"] = a.enumerate;
    }
    write_meta(a.out, "reduce", a.common, cfg);
    std::cout << "rules_in_class=" << r.count() << '\n';
    return 0;
}

// ---- sweep -----------------------------------------------------------------

struct SweepArgs {
    Common common;
    SweepConfig cfg;
    std::string reduced;
    std::string out = "sweep.csv";
};

int cmd_sweep(SweepArgs& a) {
    ReducedRuleSet r = reference_reduced_set();
    if (!a.reduced.empty()) {
        auto is = open_in(a.reduced);
        r = read_reduced_csv(is);
    }
    a.cfg.run.threads = a.common.threads;
    const SweepReport rep = stationarity_sweep(r, a.cfg, a.common.seed);
    {
        auto os = open_out(a.out);
        os << "index,rule";
        for (LocalizationClass c : kAllClasses) os << ',' << to_string(c);
        os << '\n';
        for (const auto& rr : rep.rules) {
            os << rr.index << ',' << rr.rule.str();
            for (LocalizationClass c : kAllClasses) os << ',' << (rr.histogram.contains(c) ? rr.histogram.at(c) : 0);
            os << '\n';
        }
    }
    json h = json::object();
    for (LocalizationClass c : kAllClasses) h[to_string(c)] = rep.histogram.contains(c) ? rep.histogram.at(c) : 0;
    write_meta(a.out, "sweep", a.common,
               {{"reduced", a.reduced.empty() ? json("builtin") : json(a.reduced)},
                {"rules", a.cfg.rules},
                {"run", to_json(a.cfg.run)},
                {"histogram", h},
                {"mobile", rep.mobile()}});
    std::cout << "tracks=" << rep.tracks << " mobile=" << rep.mobile() << '\n';
    return 0;
}

// ---- react -----------------------------------------------------------------

struct ReactArgs {
    Common common;
    double t_max = 100;
    double dt = 1;
    double omega = 0;
    std::int64_t na = 33333;
    std::int64_t nb = 33333;
    std::int64_t ns = 33333;
    int ensemble = 1;
    std::string out = "reactor.csv";
};

int cmd_react(ReactArgs& a) {
    if (a.ensemble < 1) throw std::invalid_argument("--ensemble must be >= 1");
    const ReactorState init{{a.na, a.nb, a.ns}, 0};
    SsaOptions opt;
    opt.t_max = a.t_max;
    opt.sample_dt = a.dt;
    opt.omega = a.omega > 0 ? a.omega : static_cast<double>(init.total());
    const ReactionSystem sys = glider_reaction_system();

    std::vector<SsaResult> runs(static_cast<std::size_t>(a.ensemble));
    const std::size_t workers = std::clamp<std::size_t>(a.common.threads, 1, runs.size());
    auto work = [&](std::size_t w) {
        for (std::size_t k = w; k < runs.size(); k += workers) {
            std::mt19937_64 rng(a.ensemble == 1 ? a.common.seed : derive_seed(a.common.seed, k));
            runs[k] = ssa_run(sys, init, opt, rng);
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }

    json terms = json::array();
    for (const auto& r : runs) terms.push_back(to_string(r.termination));
    {
        auto os = open_out(a.out);
        if (a.ensemble == 1) {
            write_timeseries_csv(os, runs[0].samples);
        } else {
            // ensemble mean per sample time
            os << "t,nA,nB,nS\n";
            os.precision(12);
            const std::size_t n = runs[0].samples.size();
            for (std::size_t s = 0; s < n; ++s) {
                std::array<double, kSpecies> sum{};
                for (const auto& r : runs)
                    for (std::size_t sp = 0; sp < kSpecies; ++sp) sum[sp] += static_cast<double>(r.samples[s].counts[sp]);
                os << runs[0].samples[s].t;
                for (double v : sum) os << ',' << v / a.ensemble;
                os << '\n';
            }
        }
    }
    json rxns = json::array();
    for (const auto& r : sys.reactions) rxns.push_back(describe(r));
    write_meta(a.out, "react", a.common,
               {{"t_max", a.t_max},
                {"sample_dt", a.dt},
                {"omega", opt.omega},
                {"initial", {{"A", a.na}, {"B", a.nb}, {"S", a.ns}}},
                {"ensemble", a.ensemble},
                {"output", a.ensemble == 1 ? "single run" : "ensemble mean"},
                {"reactions", rxns},
                {"termination", terms}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hexagonal three-state cellular automata workbench"};
    app.set_version_flag("--version", std::string("hexca ") + HEXCA_VERSION);
    app.require_subcommand(1);

    EvolveArgs ev;
    auto* evolve = app.add_subcommand("evolve", "Evolve a glider-supporting rule");
    add_common(evolve, ev.common);
    add_fitness(evolve, ev.ea.fitness);
    evolve->add_option("--population", ev.ea.population_size, "Population size")->capture_default_str();
    evolve->add_option("--stall", ev.ea.stall_generations, "Stop after this many generations without improvement")
        ->capture_default_str();
    evolve->add_option("--crossover-rate", ev.ea.crossover_rate, "Probability of crossover per pair")
        ->capture_default_str();
    evolve->add_option("--tournament", ev.ea.tournament_size, "Tournament size")->capture_default_str();
    evolve->add_option("--max-generations", ev.ea.max_generations, "Hard cap on generations (0 = none)")
        ->capture_default_str();
    evolve->add_option("--constraint", ev.constraints, "Pinned entry i,j,X (repeatable)");
    evolve->add_option("--out", ev.out, "Best rule file")->capture_default_str();
    evolve->add_option("--corpus", ev.corpus, "Corpus file the best rule is appended to");
    evolve->add_option("--history", ev.history, "Per-generation history CSV")->capture_default_str();

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run a rule and dump frames");
    add_common(simulate, sim.common);
    simulate->add_option("--rule", sim.rule, "Rule file")->required();
    simulate->add_option("--grid", sim.grid, "Initial grid file (random when omitted)");
    simulate->add_option("--width", sim.width, "Random grid width")->capture_default_str();
    simulate->add_option("--height", sim.height, "Random grid height")->capture_default_str();
    simulate->add_option("--density", sim.density, "Random grid non-S density")->capture_default_str();
    simulate->add_option("--steps", sim.steps, "Number of updates")->capture_default_str();
    simulate->add_option("--keep", sim.keep, "Keep only the last N frames (default all)");
    simulate->add_option("--dump", sim.dump, "Frame dump file")->capture_default_str();
    simulate->add_option("--pgm", sim.pgm, "Also write PGM frames with this prefix");

    DetectArgs det;
    auto* detect = app.add_subcommand("detect", "Detect localizations in random trials or a frame dump");
    add_common(detect, det.common);
    add_fitness(detect, det.fit);
    detect->add_option("--rule", det.rule, "Rule file");
    detect->add_option("--frames", det.frames, "Frame dump to analyse instead of random trials");
    detect->add_option("--out", det.out, "Detection CSV")->capture_default_str();

    LikelihoodArgs lik;
    auto* likelihood = app.add_subcommand("likelihood", "Glider-likelihood matrices of a rule corpus");
    add_common(likelihood, lik.common);
    add_fitness(likelihood, lik.fit);
    likelihood->add_option("--corpus", lik.corpus, "Corpus file, one rule per line")->required();
    likelihood->add_option("--out", lik.out, "Likelihood CSV")->capture_default_str();
    likelihood->add_option("--heatmap", lik.heatmap, "Write PGM heatmaps with this prefix");
    likelihood->add_option("--attempts", lik.attempts, "Random trials searched per rule")->capture_default_str();

    ReduceArgs red;
    auto* reduce_cmd = app.add_subcommand("reduce", "Reduce likelihood matrices to a set-valued rule table");
    add_common(reduce_cmd, red.common);
    reduce_cmd->add_option("--in", red.in, "Likelihood CSV")->required();
    reduce_cmd->add_option("--out", red.out, "Reduced set CSV")->capture_default_str();
    reduce_cmd->add_option("--theta", red.params.theta, "Closeness to the leading likelihood")->capture_default_str();
    reduce_cmd->add_option("--eps", red.params.eps, "A/B symmetrization tolerance")->capture_default_str();
    reduce_cmd->add_option("--negligible", red.params.negligible, "Likelihoods below this count as zero")
        ->capture_default_str();
    reduce_cmd->add_option("--dominance", red.params.dominance, "Margin for a single dominant state")
        ->capture_default_str();
    reduce_cmd->add_option("--mode", red.mode, "Symmetrization: mean or floor")
        ->check(CLI::IsMember({"mean", "floor"}))
        ->capture_default_str();
    reduce_cmd->add_option("--expected", red.expected, "Reduced set CSV to compare against");
    reduce_cmd->add_option("--diff", red.diff_out, "Write the comparison as CSV");
    reduce_cmd->add_option("--enumerate", red.enumerate, "Write every rule of the class to this file");

    SweepArgs sw;
    auto* sweep = app.add_subcommand("sweep", "Sample a rule class and histogram its localizations");
    add_common(sweep, sw.common);
    sweep->add_option("--reduced", sw.reduced, "Reduced set CSV (default: the built-in class)");
    sweep->add_option("--rules", sw.cfg.rules, "Rules sampled")->capture_default_str();
    add_fitness(sweep, sw.cfg.run);
    sweep->add_option("--out", sw.out, "Per-rule histogram CSV")->capture_default_str();

    ReactArgs re;
    auto* react = app.add_subcommand("react", "Stochastic well-stirred reactor");
    add_common(react, re.common);
    react->add_option("--tmax", re.t_max, "Simulated time")->capture_default_str();
    react->add_option("--dt", re.dt, "Sampling interval")->capture_default_str();
    react->add_option("--omega", re.omega, "Volume scale (default: initial total count)");
    react->add_option("--na", re.na, "Initial A")->capture_default_str();
    react->add_option("--nb", re.nb, "Initial B")->capture_default_str();
    react->add_option("--ns", re.ns, "Initial S")->capture_default_str();
    react->add_option("--ensemble", re.ensemble, "Independent runs; >1 writes the ensemble mean")
        ->capture_default_str();
    react->add_option("--out", re.out, "Time-series CSV")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*evolve) return cmd_evolve(ev);
        if (*simulate) return cmd_simulate(sim);
        if (*detect) return cmd_detect(det);
        if (*likelihood) return cmd_likelihood(lik);
        if (*reduce_cmd) return cmd_reduce(red);
        if (*sweep) return cmd_sweep(sw);
        if (*react) return cmd_react(re);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
