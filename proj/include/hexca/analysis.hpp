#pragma once

// Glider-likelihood matrices over a corpus of glider-supporting rules, their
// reduction to a set-valued rule table, and exploration of the rule class
// that table describes.

#include <algorithm>
#include <array>
#include <bit>
#include <bitset>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hexca/detector.hpp"
#include "hexca/engine.hpp"
#include "hexca/rules.hpp"

namespace hexca {

using Table = std::array<double, kRuleEntries>;
using TransitionSet = std::bitset<kRuleEntries>;

struct LikelihoodMatrices {
    Table fs{};
    Table fa{};
    Table fb{};
    Table fhash{};

    const Table& of(CellState s) const {
        switch (s) {
            case CellState::A: return fa;
            case CellState::B: return fb;
            default: return fs;
        }
    }
    Table& of(CellState s) { return const_cast<Table&>(std::as_const(*this).of(s)); }
};

// ---- necessary transitions -------------------------------------------------

/// Neighborhood signatures met at any cell over one period of a trajectory
/// that holds a single localization in a quiescent field.
inline TransitionSet necessary_transitions(const Trajectory& tr, int period) {
    if (period < 1) throw std::invalid_argument("necessary_transitions: period must be >= 1");
    if (tr.frames.empty()) throw std::invalid_argument("necessary_transitions: empty trajectory");
    const auto span = std::min<std::size_t>(static_cast<std::size_t>(period), tr.frames.size());
    TransitionSet out;
    for (std::size_t f = 0; f < span; ++f) {
        const Grid& g = tr.frames[f];
        const int w = g.width(), h = g.height();
        bool quiet_cell = false;
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c) {
                const HexCoord hc{r, c};
                if (g.at(hc) != CellState::S && (r == 0 || c == 0 || r == h - 1 || c == w - 1))
                    throw std::invalid_argument("necessary_transitions: localization touches the torus seam");
                const StateCounts n = count_states(g, hc);
                if (n.a == 0 && n.b == 0) quiet_cell = true;
                out.set(rule_index(n.a, n.b));
            }
        if (!quiet_cell) throw std::invalid_argument("necessary_transitions: no quiescent far field");
    }
    return out;
}

inline TransitionSet necessary_transitions(const Localization& loc, const Trajectory& tr) {
    return necessary_transitions(tr, std::max(loc.period, 1));
}

struct CorpusEntry {
    RuleMatrix rule;
    TransitionSet necessary;
};

/// Integer tallies behind the likelihood fractions.
struct LikelihoodCounts {
    std::size_t entries = 0;
    std::array<std::array<std::size_t, kRuleEntries>, 3> by_state{};  // indexed by CellState
    std::array<std::size_t, kRuleEntries> redundant{};
};

inline LikelihoodCounts count_likelihoods(std::span<const CorpusEntry> corpus) {
    LikelihoodCounts out;
    out.entries = corpus.size();
    for (const CorpusEntry& e : corpus)
        for (std::size_t k = 0; k < kRuleEntries; ++k) {
            if (e.necessary.test(k))
                ++out.by_state[static_cast<std::size_t>(e.rule[k])][k];
            else
                ++out.redundant[k];
        }
    return out;
}

inline LikelihoodMatrices compute_likelihoods(std::span<const CorpusEntry> corpus) {
    if (corpus.empty()) throw std::invalid_argument("compute_likelihoods: empty corpus");
    const LikelihoodCounts c = count_likelihoods(corpus);
    const double n = static_cast<double>(c.entries);
    LikelihoodMatrices out;
    for (std::size_t k = 0; k < kRuleEntries; ++k) {
        out.fs[k] = static_cast<double>(c.by_state[0][k]) / n;
        out.fa[k] = static_cast<double>(c.by_state[1][k]) / n;
        out.fb[k] = static_cast<double>(c.by_state[2][k]) / n;
        out.fhash[k] = static_cast<double>(c.redundant[k]) / n;
    }
    return out;
}

// ---- symmetrization and reduction -------------------------------------------

enum class SymmetrizeMode { Mean, Floor };

/// Where |f1(i,j) - f2(j,i)| < eps both entries become their mean (or, in
/// Floor mode, the floor of the mean).
inline std::pair<Table, Table> symmetrize(Table f1, Table f2, double eps, SymmetrizeMode mode = SymmetrizeMode::Mean) {
    if (!(eps > 0)) throw std::invalid_argument("symmetrize: eps must be positive");
    for (int i = 0; i <= kNeighborhoodSize; ++i)
        for (int j = 0; i + j <= kNeighborhoodSize; ++j) {
            double& x = f1[rule_index(i, j)];
            double& y = f2[rule_index(j, i)];
            if (std::abs(x - y) < eps) {
                double m = 0.5 * (x + y);
                if (mode == SymmetrizeMode::Floor) m = std::floor(m);
                x = y = m;
            }
        }
    return {f1, f2};
}

/// Set-valued rule table: each entry allows a nonempty subset of {S, A, B}.
class ReducedRuleSet {
public:
    static constexpr std::uint8_t kOnlyS = 1;

    ReducedRuleSet() { masks_.fill(kOnlyS); }

    static constexpr std::uint8_t bit(CellState s) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(s)); }

    std::uint8_t mask(int i, int j) const { return masks_[checked(i, j)]; }
    std::uint8_t mask(std::size_t k) const { return masks_[k]; }
    bool allows(int i, int j, CellState s) const { return mask(i, j) & bit(s); }
    bool allows(std::size_t k, CellState s) const { return masks_[k] & bit(s); }

    std::vector<CellState> allowed(std::size_t k) const {
        std::vector<CellState> out;
        for (CellState s : kAllStates)
            if (masks_[k] & bit(s)) out.push_back(s);
        return out;
    }

    void set(int i, int j, std::uint8_t mask) {
        const std::size_t k = checked(i, j);
        if (mask == 0 || mask > 7) throw std::invalid_argument("reduced set entries must be nonempty subsets of {S,A,B}");
        if (k == 0 && mask != kOnlyS) throw std::invalid_argument("reduced set entry (0,0) must be {S}");
        masks_[k] = mask;
    }

    /// Number of concrete rules in the class.
    std::uint64_t count() const {
        std::uint64_t n = 1;
        for (std::uint8_t m : masks_) n *= static_cast<std::uint64_t>(std::popcount(m));
        return n;
    }

    /// Concatenated letters of entry k in S, A, B order, e.g. "SAB".
    std::string letters(std::size_t k) const {
        std::string out;
        for (CellState s : kAllStates)
            if (masks_[k] & bit(s)) out += to_char(s);
        return out;
    }

    friend bool operator==(const ReducedRuleSet&, const ReducedRuleSet&) = default;

private:
    static std::size_t checked(int i, int j) {
        if (!valid_pair(i, j)) throw std::out_of_range("reduced set index out of range");
        return rule_index(i, j);
    }
    std::array<std::uint8_t, kRuleEntries> masks_{};
};

inline std::uint8_t mask_from_letters(std::string_view letters) {
    std::uint8_t m = 0;
    for (char ch : letters) {
        if (ch != 'S' && ch != 'A' && ch != 'B') throw std::invalid_argument(std::string("invalid state letter '") + ch + "'");
        m |= ReducedRuleSet::bit(state_from_char(ch));
    }
    return m;
}

struct ReduceParams {
    /// States within theta of the entry's leading likelihood survive.
    double theta = 0.2;
    /// Tolerance for the A/B symmetrization.
    double eps = 0.1;
    /// Likelihoods below this are treated as zero.
    double negligible = 0.1;
    /// A leader ahead of every other state by more than this stands alone.
    double dominance = 0.2;
    SymmetrizeMode mode = SymmetrizeMode::Mean;
    /// Entries whose B output is always dropped.
    std::vector<std::pair<int, int>> drop_b{{0, 5}, {1, 4}};
};

inline ReducedRuleSet reduce(const LikelihoodMatrices& lm, const ReduceParams& p = {}) {
    if (!(p.theta > 0 && p.theta < 1)) throw std::invalid_argument("reduce: theta must be in (0, 1)");
    // Sub-tolerance slack so that printed two-decimal values compare as decimals.
    constexpr double kSlack = 1e-9;
    const auto [fa, fb] = symmetrize(lm.fa, lm.fb, p.eps, p.mode);
    const std::array<const Table*, 3> f{&lm.fs, &fa, &fb};

    ReducedRuleSet out;
    for (std::size_t k = 1; k < kRuleEntries; ++k) {
        const auto [i, j] = rule_pair(k);
        std::array<double, 3> v{(*f[0])[k], (*f[1])[k], (*f[2])[k]};
        for (const auto& [di, dj] : p.drop_b)
            if (di == i && dj == j) v[2] = 0;
        std::uint8_t mask = 0;
        double lead = -1;
        for (std::size_t s = 0; s < 3; ++s)
            if (v[s] >= p.negligible - kSlack) lead = std::max(lead, v[s]);
        if (lead < 0) continue;  // nothing significant: stays {S}
        for (std::size_t s = 0; s < 3; ++s)
            if (v[s] >= p.negligible - kSlack && lead - v[s] < p.theta - kSlack) mask |= static_cast<std::uint8_t>(1u << s);
        for (std::size_t s = 0; s < 3; ++s) {
            if (v[s] != lead) continue;
            bool dominant = true;
            for (std::size_t o = 0; o < 3; ++o)
                if (o != s && !(lead - v[o] > p.dominance + kSlack)) dominant = false;
            if (dominant) mask = static_cast<std::uint8_t>(1u << s);
        }
        out.set(i, j, mask);
    }
    return out;
}

/// The published reduced table, with output labels 0/1/2 read as S/A/B.
inline ReducedRuleSet reference_reduced_set() {
    constexpr std::uint8_t S = 1, A = 2, SA = 3, SAB = 7;
    ReducedRuleSet r;
    r.set(0, 3, SAB);
    r.set(1, 1, A);
    r.set(1, 2, SAB);
    r.set(2, 1, SAB);
    r.set(2, 2, SA);
    r.set(3, 0, SAB);
    r.set(3, 1, SA);
    r.set(4, 0, SA);
    (void)S;
    return r;
}

struct ReducedDiff {
    int i = 0;
    int j = 0;
    std::string expected;
    std::string actual;
};

inline std::vector<ReducedDiff> diff(const ReducedRuleSet& expected, const ReducedRuleSet& actual) {
    std::vector<ReducedDiff> out;
    for (std::size_t k = 0; k < kRuleEntries; ++k)
        if (expected.mask(k) != actual.mask(k)) {
            const auto [i, j] = rule_pair(k);
            out.push_back({i, j, expected.letters(k), actual.letters(k)});
        }
    return out;
}

// ---- rule-class enumeration ------------------------------------------------

/// Mixed-radix view of the Cartesian product of a reduced set's entries.
class RuleEnumerator {
public:
    explicit RuleEnumerator(const ReducedRuleSet& r) {
        for (std::size_t k = 0; k < kRuleEntries; ++k) choices_[k] = r.allowed(k);
        count_ = r.count();
    }

    std::uint64_t count() const { return count_; }

    /// The index-th rule; entry 35 is the fastest-varying digit.
    RuleMatrix at(std::uint64_t index) const {
        if (index >= count_) throw std::out_of_range("rule enumerator index out of range");
        Genome g;
        for (std::size_t k = kRuleEntries; k-- > 0;) {
            const auto radix = static_cast<std::uint64_t>(choices_[k].size());
            g.symbols[k] = choices_[k][static_cast<std::size_t>(index % radix)];
            index /= radix;
        }
        return RuleMatrix::decode(g);
    }

    template <class Fn>
    void for_each(Fn&& fn) const {
        for (std::uint64_t k = 0; k < count_; ++k) fn(at(k));
    }

private:
    std::array<std::vector<CellState>, kRuleEntries> choices_;
    std::uint64_t count_ = 0;
};

inline std::vector<RuleMatrix> enumerate_rules(const ReducedRuleSet& r) {
    RuleEnumerator e(r);
    std::vector<RuleMatrix> out;
    out.reserve(static_cast<std::size_t>(e.count()));
    e.for_each([&](const RuleMatrix& m) { out.push_back(m); });
    return out;
}

struct SweepConfig {
    int rules = 20;
    FitnessConfig run{.width = 30, .height = 30, .patch = 30, .trials = 5, .steps = 300, .window = 60};
};

struct SweepRuleReport {
    RuleMatrix rule;
    std::uint64_t index = 0;
    std::map<LocalizationClass, std::size_t> histogram;
};

struct SweepReport {
    std::vector<SweepRuleReport> rules;
    std::map<LocalizationClass, std::size_t> histogram;
    std::size_t tracks = 0;

    std::size_t resolved() const {
        std::size_t n = 0;
        for (const auto& [cls, k] : histogram)
            if (cls != LocalizationClass::Unresolved) n += k;
        return n;
    }
    std::size_t mobile() const {
        auto get = [&](LocalizationClass c) { return histogram.contains(c) ? histogram.at(c) : 0; };
        return get(LocalizationClass::Glider) + get(LocalizationClass::PufferTrain);
    }
};

/// Samples rules from the class (without replacement when the class is small
/// enough) and tallies the localization classes they produce.
inline SweepReport stationarity_sweep(const ReducedRuleSet& r, const SweepConfig& cfg, std::uint64_t seed) {
    cfg.run.validate();
    if (cfg.rules < 1) throw std::invalid_argument("stationarity_sweep: rules must be >= 1");
    const RuleEnumerator e(r);
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> picks;
    if (e.count() <= static_cast<std::uint64_t>(cfg.rules)) {
        for (std::uint64_t k = 0; k < e.count(); ++k) picks.push_back(k);
    } else {
        std::uniform_int_distribution<std::uint64_t> pick(0, e.count() - 1);
        while (picks.size() < static_cast<std::size_t>(cfg.rules)) {
            const std::uint64_t k = pick(rng);
            if (std::find(picks.begin(), picks.end(), k) == picks.end()) picks.push_back(k);
        }
    }
    SweepReport out;
    for (std::size_t n = 0; n < picks.size(); ++n) {
        SweepRuleReport rep;
        rep.index = picks[n];
        rep.rule = e.at(picks[n]);
        for (const auto& locs : detect_trials(rep.rule, cfg.run, derive_seed(seed, n + 1)))
            for (const Localization& l : locs) {
                ++rep.histogram[l.cls];
                ++out.histogram[l.cls];
                ++out.tracks;
            }
        out.rules.push_back(std::move(rep));
    }
    return out;
}

// ---- isolating gliders -----------------------------------------------------

struct GliderTrace {
    RuleMatrix rule;
    Localization glider;
    /// One full period of the glider alone in a quiescent field.
    Trajectory trace;
    TransitionSet necessary;
};

/// Places `shape` in an otherwise empty grid with its origin at (row, col).
inline Grid stamp(const CanonicalShape& shape, int width, int height, int row, int col) {
    Grid g(width, height);
    const auto& topo = g.topology();
    const AxialVec origin = Topology::axial({row, col});
    for (const ShapeCell& c : shape.cells) g.set(topo.wrap_axial(origin + from_doubled({c.dr, c.dc})), c.state);
    return g;
}

/// Searches random trials for a glider that keeps moving when isolated.
inline std::optional<GliderTrace> isolate_glider(const RuleMatrix& m, const FitnessConfig& cfg, std::uint64_t seed,
                                                 int attempts = 5) {
    cfg.validate();
    for (int a = 0; a < attempts; ++a) {
        const auto locs = detect_trial(m, cfg, derive_seed(seed, static_cast<std::uint64_t>(a)));
        for (const Localization& l : locs) {
            if (l.cls != LocalizationClass::Glider) continue;
            const CanonicalShape& shape = l.shapes.front();
            int rows = 0, min_dc = 0, max_dc = 0;
            for (const ShapeCell& c : shape.cells) {
                rows = std::max(rows, c.dr);
                min_dc = std::min(min_dc, c.dc);
                max_dc = std::max(max_dc, c.dc);
            }
            // Room for four periods of travel in any direction plus a margin.
            const int travel = 4 * (std::abs(l.displacement.dr) + std::abs(l.displacement.dc)) + 4;
            int side = std::max(rows, (max_dc - min_dc) / 2) + 2 * travel + 8;
            side += side % 2;
            const Grid seed_grid = stamp(shape, side, side, side / 2 - rows / 2, side / 2 - (min_dc + max_dc) / 4);
            const int horizon = 4 * l.period;
            Trajectory tr = run(seed_grid, m, horizon, horizon + 1);
            const auto alone = track(tr, horizon + 1, std::max(cfg.p_max, l.period));
            if (alone.size() != 1 || alone.front().cls != LocalizationClass::Glider) continue;
            tr.frames.erase(tr.frames.begin() + alone.front().period, tr.frames.end());
            try {
                const TransitionSet nec = necessary_transitions(tr, alone.front().period);
                return GliderTrace{m, alone.front(), std::move(tr), nec};
            } catch (const std::invalid_argument&) {
                continue;
            }
        }
    }
    return std::nullopt;
}

// ---- file formats ----------------------------------------------------------

/// CSV: i,j,FS,FA,FB,Fhash (36 rows in canonical order).
inline void write_likelihoods_csv(std::ostream& os, const LikelihoodMatrices& lm) {
    os << "i,j,FS,FA,FB,Fhash\n";
    std::ostringstream line;
    line.precision(17);
    for (std::size_t k = 0; k < kRuleEntries; ++k) {
        const auto [i, j] = rule_pair(k);
        line.str("");
        line << i << ',' << j << ',' << lm.fs[k] << ',' << lm.fa[k] << ',' << lm.fb[k] << ',' << lm.fhash[k] << '\n';
        os << line.str();
    }
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

inline int parse_index(const std::string& s) {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad integer '" + s + "'");
    return v;
}

inline double parse_real(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
    return v;
}

/// Reads data rows (skipping the header and '#' comments) of a CSV keyed by (i, j).
template <class Row>
void read_keyed_csv(std::istream& is, std::size_t columns, Row&& row) {
    std::string line;
    bool header = true;
    std::bitset<kRuleEntries> seen;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#' || line == "\r") continue;
        if (header) {
            header = false;
            continue;
        }
        const auto cells = split_csv(line);
        if (cells.size() != columns)
            throw std::runtime_error("line " + std::to_string(lineno) + ": expected " + std::to_string(columns) + " columns");
        try {
            const int i = parse_index(cells[0]);
            const int j = parse_index(cells[1]);
            if (!valid_pair(i, j)) throw std::invalid_argument("index out of range");
            const std::size_t k = rule_index(i, j);
            if (seen.test(k)) throw std::invalid_argument("duplicate entry");
            seen.set(k);
            row(k, cells);
        } catch (const std::exception& e) {
            throw std::runtime_error("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!seen.all()) throw std::runtime_error("expected all 36 (i,j) entries, found " + std::to_string(seen.count()));
}

}  // namespace detail

inline LikelihoodMatrices read_likelihoods_csv(std::istream& is) {
    LikelihoodMatrices lm;
    detail::read_keyed_csv(is, 6, [&](std::size_t k, const std::vector<std::string>& c) {
        lm.fs[k] = detail::parse_real(c[2]);
        lm.fa[k] = detail::parse_real(c[3]);
        lm.fb[k] = detail::parse_real(c[4]);
        lm.fhash[k] = detail::parse_real(c[5]);
        for (double v : {lm.fs[k], lm.fa[k], lm.fb[k], lm.fhash[k]})
            if (v < 0 || v > 1) throw std::invalid_argument("likelihood outside [0, 1]");
    });
    return lm;
}

/// CSV: i,j,allowed (letters in S, A, B order).
inline void write_reduced_csv(std::ostream& os, const ReducedRuleSet& r) {
    os << "i,j,allowed\n";
    for (std::size_t k = 0; k < kRuleEntries; ++k) {
        const auto [i, j] = rule_pair(k);
        os << i << ',' << j << ',' << r.letters(k) << '\n';
    }
}

inline ReducedRuleSet read_reduced_csv(std::istream& is) {
    ReducedRuleSet r;
    detail::read_keyed_csv(is, 3, [&](std::size_t k, const std::vector<std::string>& c) {
        const auto [i, j] = rule_pair(k);
        r.set(i, j, mask_from_letters(c[2]));
    });
    return r;
}

/// 8x8 binary PGM, row i = A count, column j = B count; unused cells are 0.
inline void write_heatmap_pgm(std::ostream& os, const Table& t) {
    os << "P5\n8 8\n255\n";
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            const double v = valid_pair(i, j) ? std::clamp(t[rule_index(i, j)], 0.0, 1.0) : 0.0;
            os.put(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
        }
}

}  // namespace hexca
