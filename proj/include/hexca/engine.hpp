#pragma once

// Synchronous update. `step` is the production kernel; `step_reference` is
// the per-cell transcription of the definition and serves as its oracle.

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <ostream>
#include <thread>
#include <vector>

#include "hexca/hexgrid.hpp"
#include "hexca/rules.hpp"

namespace hexca {

inline Grid step_reference(const Grid& g, const RuleMatrix& m) {
    Grid out(g.width(), g.height());
    const auto& topo = g.topology();
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        const StateCounts n = count_states(g, topo.coord(idx));
        out.set(idx, m.lookup(n.a, n.b));
    }
    return out;
}

namespace detail {

// A counts in the low three bits, B counts in the next three.
inline constexpr std::array<std::uint8_t, 3> kStateWeight{0, 1, 8};

inline std::array<CellState, 64> packed_table(const RuleMatrix& m) {
    std::array<CellState, 64> table{};
    for (int i = 0; i <= kNeighborhoodSize; ++i)
        for (int j = 0; i + j <= kNeighborhoodSize; ++j) table[static_cast<std::size_t>(i + 8 * j)] = m.lookup(i, j);
    return table;
}

inline void step_rows(const Topology& topo, std::span<const std::uint8_t> weight, const std::array<CellState, 64>& table,
                      std::span<CellState> out, std::size_t first, std::size_t last) {
    for (std::size_t idx = first; idx < last; ++idx) {
        const auto nb = topo.neighbors(idx);
        const unsigned code = weight[idx] + weight[nb[0]] + weight[nb[1]] + weight[nb[2]] + weight[nb[3]] +
                              weight[nb[4]] + weight[nb[5]];
        out[idx] = table[code];
    }
}

}  // namespace detail

/// One synchronous update. With threads > 1 the output is split into
/// disjoint row bands; the result does not depend on the split.
inline Grid step(const Grid& g, const RuleMatrix& m, unsigned threads = 1) {
    const auto& topo = g.topology();
    const auto table = detail::packed_table(m);
    std::vector<std::uint8_t> weight(g.size());
    const auto cells = g.cells();
    for (std::size_t idx = 0; idx < cells.size(); ++idx)
        weight[idx] = detail::kStateWeight[static_cast<std::size_t>(cells[idx])];

    Grid out(g.width(), g.height());
    const auto dst = out.cells();
    const std::size_t rows = static_cast<std::size_t>(g.height());
    const std::size_t width = static_cast<std::size_t>(g.width());
    const std::size_t bands = std::clamp<std::size_t>(threads, 1, rows);
    if (bands == 1) {
        detail::step_rows(topo, weight, table, dst, 0, g.size());
        return out;
    }
    {
        std::vector<std::jthread> workers;
        workers.reserve(bands);
        for (std::size_t b = 0; b < bands; ++b) {
            const std::size_t r0 = rows * b / bands;
            const std::size_t r1 = rows * (b + 1) / bands;
            workers.emplace_back([&, r0, r1] { detail::step_rows(topo, weight, table, dst, r0 * width, r1 * width); });
        }
    }
    return out;
}

struct Trajectory {
    std::vector<Grid> frames;
    RuleMatrix rule;
    /// Time index of frames.front().
    int t0 = 0;

    int end_time() const { return t0 + static_cast<int>(frames.size()) - 1; }
};

/// Applies `steps` updates and keeps the trailing `keep_last` frames.
inline Trajectory run(const Grid& g, const RuleMatrix& m, int steps, int keep_last, unsigned threads = 1) {
    if (steps < 0) throw std::invalid_argument("run: steps must be non-negative");
    if (keep_last < 0 || keep_last > steps + 1) throw std::invalid_argument("run: keep_last must be in [0, steps + 1]");
    std::deque<Grid> window;
    const auto keep = static_cast<std::size_t>(keep_last);
    Grid current = g;
    for (int t = 0; t <= steps; ++t) {
        if (t > 0) current = step(current, m, threads);
        if (keep == 0) continue;
        if (window.size() == keep) window.pop_front();
        window.push_back(current);
    }
    Trajectory tr;
    tr.rule = m;
    tr.t0 = steps + 1 - keep_last;
    tr.frames.assign(std::make_move_iterator(window.begin()), std::make_move_iterator(window.end()));
    return tr;
}

// ---- frame dumps -----------------------------------------------------------

/// Grid-text frames separated by a blank line.
inline void write_frames(std::ostream& os, std::span<const Grid> frames) {
    for (std::size_t k = 0; k < frames.size(); ++k) {
        if (k > 0) os << '\n';
        write_grid(os, frames[k]);
    }
}

inline std::vector<Grid> read_frames(std::istream& is) {
    std::vector<Grid> out;
    while (true) {
        is >> std::ws;
        if (is.peek() == std::char_traits<char>::eof()) break;
        out.push_back(read_grid(is));
    }
    return out;
}

/// Binary PGM, one byte per cell: S = 0, A = 128, B = 255.
inline void write_pgm(std::ostream& os, const Grid& g) {
    static constexpr std::array<unsigned char, 3> shade{0, 128, 255};
    os << "P5\n" << g.width() << ' ' << g.height() << "\n255\n";
    for (CellState s : g.cells()) os.put(static_cast<char>(shade[static_cast<std::size_t>(s)]));
}

}  // namespace hexca
