#pragma once

// Well-stirred reactor for the quasi-chemical scheme read off the likelihood
// matrices, simulated exactly with Gillespie's direct method.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hexca {

/// Species order used by every stoichiometry vector.
enum class Species : std::size_t { A = 0, B = 1, S = 2 };
inline constexpr std::size_t kSpecies = 3;

using Counts = std::array<std::int64_t, kSpecies>;
using Stoichiometry = std::array<int, kSpecies>;

struct Reaction {
    Stoichiometry reactants{};
    Stoichiometry products{};
    double rate = 0;

    int order() const { return reactants[0] + reactants[1] + reactants[2]; }
};

struct ReactionSystem {
    std::vector<Reaction> reactions;

    void validate() const {
        for (const Reaction& r : reactions) {
            for (std::size_t s = 0; s < kSpecies; ++s)
                if (r.reactants[s] < 0 || r.products[s] < 0) throw std::invalid_argument("negative stoichiometry");
            if (!(r.rate >= 0)) throw std::invalid_argument("negative rate constant");
        }
    }
};

inline std::string describe(const Reaction& r) {
    static constexpr std::array<char, kSpecies> name{'A', 'B', 'S'};
    auto side = [&](const Stoichiometry& v) {
        std::string out;
        for (std::size_t s = 0; s < kSpecies; ++s) {
            if (v[s] == 0) continue;
            if (!out.empty()) out += " + ";
            if (v[s] > 1) out += std::to_string(v[s]);
            out += name[s];
        }
        return out.empty() ? std::string("0") : out;
    };
    std::ostringstream os;
    os << side(r.reactants) << " -> " << side(r.products) << " (k=" << r.rate << ")";
    return os.str();
}

/// The eleven reactions with their rate constants.
inline ReactionSystem glider_reaction_system() {
    //                 A  B  S     A  B  S
    return ReactionSystem{{
        {{1, 1, 0}, {2, 0, 0}, 1.0},     // A + B -> 2A
        {{2, 1, 0}, {3, 0, 0}, 0.1},     // 2A + B -> 3A
        {{3, 1, 0}, {4, 0, 0}, 0.01},    // 3A + B -> 4A
        {{1, 2, 0}, {0, 3, 0}, 0.1},     // A + 2B -> 3B
        {{0, 1, 1}, {0, 2, 0}, 0.01},    // B + S -> 2B
        {{0, 1, 0}, {0, 0, 1}, 0.0015},  // B -> S
        {{1, 2, 0}, {2, 1, 0}, 0.4},     // A + 2B -> 2A + B
        {{2, 2, 0}, {3, 1, 0}, 0.01},    // 2A + 2B -> 3A + B
        {{1, 1, 0}, {0, 2, 0}, 1.0},     // A + B -> 2B
        {{2, 1, 0}, {1, 2, 0}, 0.05},    // 2A + B -> A + 2B
        {{1, 0, 0}, {0, 0, 1}, 0.054},   // A -> S
    }};
}

struct ReactorState {
    Counts counts{};
    double time = 0;

    std::int64_t total() const { return counts[0] + counts[1] + counts[2]; }
};

inline double binomial(std::int64_t n, int k) {
    if (k < 0 || n < k) return 0;
    double out = 1;
    for (int i = 0; i < k; ++i) out *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    return out;
}

/// a = k * prod_s C(n_s, nu_s) / omega^(order - 1).
inline double propensity(const Reaction& r, const Counts& n, double omega) {
    double a = r.rate;
    for (std::size_t s = 0; s < kSpecies; ++s) {
        if (r.reactants[s] == 0) continue;
        a *= binomial(n[s], r.reactants[s]);
        if (a == 0) return 0;
    }
    const int order = r.order();
    if (order > 1) a /= std::pow(omega, order - 1);
    return a;
}

inline double propensity(const ReactionSystem& sys, const ReactorState& st, std::size_t r, double omega) {
    if (!(omega > 0)) throw std::invalid_argument("propensity: omega must be positive");
    return propensity(sys.reactions.at(r), st.counts, omega);
}

enum class Termination { TimeLimit, Absorbing, EventLimit };

inline constexpr const char* to_string(Termination t) {
    switch (t) {
        case Termination::TimeLimit: return "time_limit";
        case Termination::Absorbing: return "absorbing";
        default: return "event_limit";
    }
}

struct Sample {
    double t = 0;
    Counts counts{};
};

struct SsaOptions {
    double t_max = 100;
    double sample_dt = 1;
    double omega = 1;
    /// Stop after this many events; 0 means unlimited.
    std::uint64_t max_events = 0;
    /// Called with the new state after every event.
    std::function<void(const ReactorState&)> on_event;
};

struct SsaResult {
    std::vector<Sample> samples;
    ReactorState final_state;
    Termination termination = Termination::TimeLimit;
    std::uint64_t events = 0;
};

/// Gillespie direct method. Samples are taken at k * sample_dt for every
/// k with k * sample_dt <= t_max; after an absorbing state the remaining
/// samples repeat that state.
template <class Rng>
SsaResult ssa_run(const ReactionSystem& sys, const ReactorState& init, const SsaOptions& opt, Rng& rng) {
    sys.validate();
    if (!(opt.t_max > 0)) throw std::invalid_argument("ssa_run: t_max must be positive");
    if (!(opt.sample_dt > 0)) throw std::invalid_argument("ssa_run: sample_dt must be positive");
    if (!(opt.omega > 0)) throw std::invalid_argument("ssa_run: omega must be positive");
    for (auto c : init.counts)
        if (c < 0) throw std::invalid_argument("ssa_run: negative initial count");

    const std::size_t nr = sys.reactions.size();
    std::vector<Stoichiometry> delta(nr);
    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t s = 0; s < kSpecies; ++s)
            delta[r][s] = sys.reactions[r].products[s] - sys.reactions[r].reactants[s];

    SsaResult out;
    ReactorState st = init;
    const auto n_samples = static_cast<std::uint64_t>(std::floor(opt.t_max / opt.sample_dt + 1e-9)) + 1;
    out.samples.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(n_samples, 1u << 20)));
    std::uint64_t next_sample = 0;
    auto record_until = [&](double t_limit) {
        while (next_sample < n_samples && static_cast<double>(next_sample) * opt.sample_dt <= t_limit) {
            out.samples.push_back({static_cast<double>(next_sample) * opt.sample_dt, st.counts});
            ++next_sample;
        }
    };

    std::vector<double> a(nr);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    while (true) {
        double a0 = 0;
        for (std::size_t r = 0; r < nr; ++r) {
            a[r] = propensity(sys.reactions[r], st.counts, opt.omega);
            a0 += a[r];
        }
        if (a0 <= 0) {
            out.termination = Termination::Absorbing;
            record_until(opt.t_max);
            break;
        }
        if (opt.max_events != 0 && out.events >= opt.max_events) {
            out.termination = Termination::EventLimit;
            break;
        }
        // 1 - U lies in (0, 1], so the log is finite.
        const double tau = -std::log(1.0 - unit(rng)) / a0;
        const double t_next = st.time + tau;
        if (t_next > opt.t_max) {
            record_until(opt.t_max);
            st.time = opt.t_max;
            out.termination = Termination::TimeLimit;
            break;
        }
        // States hold on [time, t_next): samples strictly before the jump see the old state.
        record_until(std::nextafter(t_next, 0.0));
        const double target = unit(rng) * a0;
        std::size_t chosen = nr - 1;
        double acc = 0;
        for (std::size_t r = 0; r < nr; ++r) {
            acc += a[r];
            if (target < acc && a[r] > 0) {
                chosen = r;
                break;
            }
        }
        while (a[chosen] <= 0) --chosen;  // rounding at the top end
        for (std::size_t s = 0; s < kSpecies; ++s) st.counts[s] += delta[chosen][s];
        st.time = t_next;
        ++out.events;
        if (opt.on_event) opt.on_event(st);
    }
    out.final_state = st;
    return out;
}

/// CSV: t,nA,nB,nS
inline void write_timeseries_csv(std::ostream& os, const std::vector<Sample>& samples) {
    os << "t,nA,nB,nS\n";
    std::ostringstream line;
    line.precision(12);
    for (const Sample& s : samples) {
        line.str("");
        line << s.t << ',' << s.counts[0] << ',' << s.counts[1] << ',' << s.counts[2] << '\n';
        os << line.str();
    }
}

}  // namespace hexca
