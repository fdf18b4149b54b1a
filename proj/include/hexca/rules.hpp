#pragma once

// The totalistic transition table M: 36 outputs indexed by (i, j), the number
// of A and B cells in the 7-cell neighborhood, with i + j <= 7.

#include <array>
#include <cstddef>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hexca/hexgrid.hpp"

namespace hexca {

inline constexpr int kNeighborhoodSize = 7;
inline constexpr std::size_t kRuleEntries = 36;

/// Canonical position of (i, j): i ascending, then j ascending.
inline constexpr std::size_t rule_index(int i, int j) {
    return static_cast<std::size_t>(j + i * 8 - (i * (i - 1)) / 2);
}

inline constexpr bool valid_pair(int i, int j) { return i >= 0 && j >= 0 && i + j <= kNeighborhoodSize; }

/// Inverse of rule_index.
inline constexpr std::pair<int, int> rule_pair(std::size_t index) {
    int i = 0;
    std::size_t start = 0;
    while (index >= start + static_cast<std::size_t>(8 - i)) {
        start += static_cast<std::size_t>(8 - i);
        ++i;
    }
    return {i, static_cast<int>(index - start)};
}

static_assert(rule_index(7, 0) == 35);
static_assert(rule_index(1, 0) == 8);
static_assert(rule_pair(35) == std::pair{7, 0});

/// 36 symbols in canonical order. May hold anything; RuleMatrix validates.
struct Genome {
    std::array<CellState, kRuleEntries> symbols{};

    std::string str() const {
        std::string out(kRuleEntries, 'S');
        for (std::size_t k = 0; k < kRuleEntries; ++k) out[k] = to_char(symbols[k]);
        return out;
    }

    /// Parses 36 characters over {S, A, B}.
    static Genome parse(std::string_view text) {
        if (text.size() != kRuleEntries)
            throw std::invalid_argument("genome must have 36 symbols, got " + std::to_string(text.size()));
        Genome g;
        for (std::size_t k = 0; k < kRuleEntries; ++k) {
            const char ch = text[k];
            if (ch != 'S' && ch != 'A' && ch != 'B')
                throw std::invalid_argument(std::string("genome: invalid symbol '") + ch + "'");
            g.symbols[k] = state_from_char(ch);
        }
        return g;
    }

    friend bool operator==(const Genome&, const Genome&) = default;
};

class RuleMatrix {
public:
    /// The all-S rule.
    RuleMatrix() { entries_.fill(CellState::S); }

    CellState lookup(int i, int j) const {
        if (!valid_pair(i, j))
            throw std::out_of_range("rule index (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
        return entries_[rule_index(i, j)];
    }

    CellState operator[](std::size_t index) const { return entries_[index]; }

    /// Rejects writes that would break M_00 = S.
    void set(int i, int j, CellState s) {
        if (!valid_pair(i, j))
            throw std::out_of_range("rule index (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
        if (i == 0 && j == 0 && s != CellState::S) throw std::invalid_argument("M_00 must stay S");
        entries_[rule_index(i, j)] = s;
    }

    const std::array<CellState, kRuleEntries>& entries() const { return entries_; }

    std::string str() const { return encode().str(); }

    Genome encode() const { return Genome{entries_}; }

    static RuleMatrix decode(const Genome& g) {
        if (g.symbols[0] != CellState::S) throw std::invalid_argument("genome position (0,0) must be S");
        RuleMatrix m;
        m.entries_ = g.symbols;
        return m;
    }

    static RuleMatrix parse(std::string_view text) { return decode(Genome::parse(text)); }

    friend bool operator==(const RuleMatrix&, const RuleMatrix&) = default;

private:
    std::array<CellState, kRuleEntries> entries_{};
};

inline Genome encode(const RuleMatrix& m) { return m.encode(); }
inline RuleMatrix decode(const Genome& g) { return RuleMatrix::decode(g); }

struct RuleConstraint {
    int i = 0;
    int j = 0;
    CellState output = CellState::S;
};

/// Uniform random rule with M_00 = S and the given entries pinned.
template <class Rng>
RuleMatrix random_rule(Rng& rng, std::span<const RuleConstraint> constraints = {}) {
    std::array<int, kRuleEntries> pinned;
    pinned.fill(-1);
    for (const auto& c : constraints) {
        if (!valid_pair(c.i, c.j)) throw std::invalid_argument("constraint index out of range");
        if (c.i == 0 && c.j == 0 && c.output != CellState::S) throw std::invalid_argument("constraint contradicts M_00 = S");
        int& slot = pinned[rule_index(c.i, c.j)];
        const int value = static_cast<int>(c.output);
        if (slot >= 0 && slot != value)
            throw std::invalid_argument("contradictory constraints at (" + std::to_string(c.i) + "," + std::to_string(c.j) + ")");
        slot = value;
    }
    std::uniform_int_distribution<int> pick(0, 2);
    Genome g;
    g.symbols[0] = CellState::S;
    for (std::size_t k = 1; k < kRuleEntries; ++k) {
        // Draw even for pinned entries so the free entries do not depend on the constraint set.
        const int drawn = pick(rng);
        g.symbols[k] = static_cast<CellState>(pinned[k] >= 0 ? pinned[k] : drawn);
    }
    return RuleMatrix::decode(g);
}

// ---- rule files ------------------------------------------------------------

inline void write_rule(std::ostream& os, const RuleMatrix& m) { os << m.str() << '\n'; }

/// One rule per line; blank lines and lines starting with '#' are skipped.
inline std::vector<RuleMatrix> read_rules(std::istream& is) {
    std::vector<RuleMatrix> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        try {
            out.push_back(RuleMatrix::parse(line));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error("rule file line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

inline RuleMatrix read_rule(std::istream& is) {
    auto rules = read_rules(is);
    if (rules.size() != 1) throw std::runtime_error("expected exactly one rule, found " + std::to_string(rules.size()));
    return rules.front();
}

}  // namespace hexca
