#pragma once

// Generational EA over rule genomes: one-symbol mutation, single-point
// crossover, size-2 tournaments, elitism of one, stop after a fixed number of
// generations without strict improvement.

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <vector>

#include "hexca/detector.hpp"
#include "hexca/rules.hpp"

namespace hexca {

/// Changes exactly one of positions 1..35 to a different state.
template <class Rng>
Genome mutate(Genome g, Rng& rng) {
    std::uniform_int_distribution<std::size_t> pos(1, kRuleEntries - 1);
    std::uniform_int_distribution<int> offset(1, 2);
    const std::size_t k = pos(rng);
    g.symbols[k] = static_cast<CellState>((static_cast<int>(g.symbols[k]) + offset(rng)) % 3);
    return g;
}

/// Cut point k in [1, 35]; children swap tails from k on.
template <class Rng>
std::pair<Genome, Genome> crossover(const Genome& a, const Genome& b, Rng& rng) {
    std::uniform_int_distribution<std::size_t> cut(1, kRuleEntries - 1);
    const std::size_t k = cut(rng);
    Genome x = a, y = b;
    for (std::size_t i = k; i < kRuleEntries; ++i) std::swap(x.symbols[i], y.symbols[i]);
    return {x, y};
}

struct EAConfig {
    int population_size = 40;
    int stall_generations = 10;
    double crossover_rate = 0.6;
    int tournament_size = 2;
    /// Hard cap on generations; 0 means no cap.
    int max_generations = 0;
    FitnessConfig fitness;
    std::uint64_t seed = 1;
    /// Entries pinned in every initial genome.
    std::vector<RuleConstraint> constraints;
    /// Parallel fitness evaluations per generation.
    unsigned threads = 1;

    void validate() const {
        if (population_size < 2) throw std::invalid_argument("population_size must be >= 2");
        if (stall_generations < 1) throw std::invalid_argument("stall_generations must be >= 1");
        if (crossover_rate < 0 || crossover_rate > 1) throw std::invalid_argument("crossover_rate must be in [0, 1]");
        if (tournament_size < 1) throw std::invalid_argument("tournament_size must be >= 1");
        if (max_generations < 0) throw std::invalid_argument("max_generations must be >= 0");
    }
};

struct GenerationStats {
    int generation = 0;
    double best = 0;  // best fitness found so far
    double mean = 0;  // mean fitness of this generation
};

struct EARun {
    RuleMatrix best_rule;
    double best_fitness = 0;
    int generation_of_best = 0;
    std::vector<GenerationStats> history;
    int generations() const { return static_cast<int>(history.size()); }
};

/// Fitness callback: (rule, evaluation seed) -> fitness.
using FitnessFn = std::function<double(const RuleMatrix&, std::uint64_t)>;

inline FitnessFn glider_fitness(const FitnessConfig& cfg) {
    return [cfg](const RuleMatrix& m, std::uint64_t seed) { return fitness(m, cfg, seed); };
}

inline EARun ea_run(const EAConfig& cfg, const FitnessFn& fit) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    const auto n = static_cast<std::size_t>(cfg.population_size);

    std::vector<Genome> pop;
    pop.reserve(n);
    for (std::size_t k = 0; k < n; ++k) pop.push_back(random_rule(rng, cfg.constraints).encode());
    std::vector<double> score(n, 0.0);

    int generation = 0;
    // Evaluates pop[from..n) with seeds fixed by (generation, slot).
    auto evaluate = [&](std::size_t from) {
        const std::size_t count = n - from;
        const std::size_t workers = std::clamp<std::size_t>(cfg.threads, 1, std::max<std::size_t>(count, 1));
        auto work = [&](std::size_t w) {
            for (std::size_t k = from + w; k < n; k += workers)
                score[k] = fit(RuleMatrix::decode(pop[k]),
                               derive_seed(cfg.seed, (static_cast<std::uint64_t>(generation) << 20) + k));
        };
        if (workers == 1) {
            work(0);
        } else {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
        }
    };
    auto argmax = [&] { return static_cast<std::size_t>(std::max_element(score.begin(), score.end()) - score.begin()); };
    auto mean = [&] { return std::accumulate(score.begin(), score.end(), 0.0) / static_cast<double>(n); };

    evaluate(0);
    EARun out;
    std::size_t elite = argmax();
    out.best_rule = RuleMatrix::decode(pop[elite]);
    out.best_fitness = score[elite];
    out.generation_of_best = 0;
    out.history.push_back({0, out.best_fitness, mean()});

    auto tournament = [&]() -> const Genome& {
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::size_t winner = pick(rng);
        for (int t = 1; t < cfg.tournament_size; ++t) {
            const std::size_t other = pick(rng);
            if (score[other] > score[winner]) winner = other;
        }
        return pop[winner];
    };
    std::bernoulli_distribution do_cross(cfg.crossover_rate);

    int stall = 0;
    while (stall < cfg.stall_generations && (cfg.max_generations == 0 || generation + 1 < cfg.max_generations)) {
        ++generation;
        std::vector<Genome> next;
        next.reserve(n);
        next.push_back(pop[elite]);
        const double elite_score = score[elite];
        while (next.size() < n) {
            Genome a = tournament();
            Genome b = tournament();
            if (do_cross(rng)) std::tie(a, b) = crossover(a, b, rng);
            next.push_back(mutate(a, rng));
            if (next.size() < n) next.push_back(mutate(b, rng));
        }
        pop = std::move(next);
        score[0] = elite_score;  // the elite keeps its recorded fitness
        evaluate(1);
        elite = argmax();
        if (score[elite] > out.best_fitness) {
            out.best_fitness = score[elite];
            out.best_rule = RuleMatrix::decode(pop[elite]);
            out.generation_of_best = generation;
            stall = 0;
        } else {
            ++stall;
        }
        out.history.push_back({generation, out.best_fitness, mean()});
    }
    return out;
}

inline EARun ea_run(const EAConfig& cfg) { return ea_run(cfg, glider_fitness(cfg.fitness)); }

}  // namespace hexca
