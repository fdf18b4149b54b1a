#pragma once

// Hexagonal torus lattice: storage, coordinate algebra, neighborhoods.
//
// Cells are stored row-major in "odd-r" offset layout: odd rows are shifted
// half a cell to the East. Internally every geometric operation goes through
// axial coordinates (row, q) with q = col - floor(row / 2), which turns hex
// lattice translations into plain vector addition.
//
// The torus is the quotient of the infinite lattice by the axial vectors
// (0, W) and (H, -floor(H / 2)). For even H this is the ordinary wrap of the
// offset array; for odd H the vertical seam carries a one-column twist, which
// is what keeps adjacency symmetric.

#include <algorithm>
#include <array>
#include <cassert>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hexca {

enum class CellState : std::uint8_t { S = 0, A = 1, B = 2 };

inline constexpr std::array<CellState, 3> kAllStates{CellState::S, CellState::A, CellState::B};

inline constexpr char to_char(CellState s) {
    switch (s) {
        case CellState::A: return 'A';
        case CellState::B: return 'B';
        default: return 'S';
    }
}

/// Grid-text glyph: the substrate prints as '.'.
inline constexpr char to_grid_char(CellState s) { return s == CellState::S ? '.' : to_char(s); }

inline CellState state_from_char(char ch) {
    switch (ch) {
        case 'S':
        case '.': return CellState::S;
        case 'A': return CellState::A;
        case 'B': return CellState::B;
        default: throw std::invalid_argument(std::string("invalid cell state character '") + ch + "'");
    }
}

struct HexCoord {
    int row = 0;
    int col = 0;
    friend constexpr auto operator<=>(const HexCoord&, const HexCoord&) = default;
};

/// Displacement on the lattice in axial components.
struct AxialVec {
    int dr = 0;
    int dq = 0;
    friend constexpr auto operator<=>(const AxialVec&, const AxialVec&) = default;
    constexpr AxialVec operator+(AxialVec o) const { return {dr + o.dr, dq + o.dq}; }
    constexpr AxialVec operator-(AxialVec o) const { return {dr - o.dr, dq - o.dq}; }
};

/// Displacement in "doubled" column units: an East step is (0, 2), a
/// South-East step is (1, 1). Every lattice vector has integer components.
struct Displacement {
    int dr = 0;
    int dc = 0;
    friend constexpr auto operator<=>(const Displacement&, const Displacement&) = default;
    constexpr bool is_zero() const { return dr == 0 && dc == 0; }
};

inline constexpr int floor_div(int a, int b) {
    int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline constexpr int floor_mod(int a, int b) { return a - floor_div(a, b) * b; }

inline constexpr int hex_length(AxialVec v) {
    const int s = v.dr + v.dq;
    return ((v.dr < 0 ? -v.dr : v.dr) + (v.dq < 0 ? -v.dq : v.dq) + (s < 0 ? -s : s)) / 2;
}

inline constexpr Displacement to_doubled(AxialVec v) { return {v.dr, 2 * v.dq + v.dr}; }

inline constexpr AxialVec from_doubled(Displacement d) {
    assert(((d.dc - d.dr) % 2) == 0);
    return {d.dr, (d.dc - d.dr) / 2};
}

/// Unit steps, clockwise from East (row index grows downwards).
inline constexpr std::array<AxialVec, 6> kHexDirections{
    AxialVec{0, 1},   // E
    AxialVec{1, 0},   // SE
    AxialVec{1, -1},  // SW
    AxialVec{0, -1},  // W
    AxialVec{-1, 0},  // NW
    AxialVec{-1, 1},  // NE
};

/// The 18 offsets at hex distance 1 or 2.
inline const std::vector<AxialVec>& ring2_offsets() {
    static const std::vector<AxialVec> offsets = [] {
        std::vector<AxialVec> out;
        for (int dr = -2; dr <= 2; ++dr)
            for (int dq = -2; dq <= 2; ++dq) {
                const AxialVec v{dr, dq};
                const int d = hex_length(v);
                if (d >= 1 && d <= 2) out.push_back(v);
            }
        return out;
    }();
    return offsets;
}

inline constexpr int kMinGridDim = 3;

/// Precomputed adjacency for one torus size. Shared between all grids of the
/// same dimensions.
class Topology {
public:
    Topology(int width, int height) : width_(width), height_(height) {
        if (width < kMinGridDim || height < kMinGridDim)
            throw std::invalid_argument("grid dimensions must be at least 3x3");
        const std::size_t n = size();
        const auto& far = ring2_offsets();
        neighbors_.resize(n * 6);
        ring2_.resize(n * far.size());
        for (int r = 0; r < height_; ++r)
            for (int c = 0; c < width_; ++c) {
                const std::size_t idx = index({r, c});
                for (std::size_t k = 0; k < 6; ++k)
                    neighbors_[idx * 6 + k] = static_cast<std::uint32_t>(index(shift({r, c}, kHexDirections[k])));
                for (std::size_t k = 0; k < far.size(); ++k)
                    ring2_[idx * far.size() + k] = static_cast<std::uint32_t>(index(shift({r, c}, far[k])));
            }
    }

    /// Cached instance for the given dimensions.
    static std::shared_ptr<const Topology> get(int width, int height) {
        static std::mutex mutex;
        static std::map<std::pair<int, int>, std::shared_ptr<const Topology>> cache;
        std::lock_guard lock(mutex);
        auto& slot = cache[{width, height}];
        if (!slot) slot = std::make_shared<const Topology>(width, height);
        return slot;
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_); }

    std::size_t index(HexCoord c) const {
        assert(c.row >= 0 && c.row < height_ && c.col >= 0 && c.col < width_);
        return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(c.col);
    }

    HexCoord coord(std::size_t idx) const {
        return {static_cast<int>(idx / static_cast<std::size_t>(width_)),
                static_cast<int>(idx % static_cast<std::size_t>(width_))};
    }

    /// Axial coordinates of a stored cell.
    static AxialVec axial(HexCoord c) { return {c.row, c.col - floor_div(c.row, 2)}; }

    /// Map arbitrary axial coordinates onto the torus.
    HexCoord wrap_axial(AxialVec a) const {
        const int n = floor_div(a.dr, height_);
        const int r = a.dr - n * height_;
        const int q = a.dq + n * (height_ / 2);
        return {r, floor_mod(q + floor_div(r, 2), width_)};
    }

    /// Map an unnormalized offset coordinate onto the torus.
    HexCoord normalize(HexCoord c) const { return wrap_axial(axial(c)); }

    HexCoord shift(HexCoord c, AxialVec v) const { return wrap_axial(axial(c) + v); }

    std::size_t shift_index(std::size_t idx, AxialVec v) const { return index(shift(coord(idx), v)); }

    /// The six neighbor indices of `idx`, clockwise from East.
    std::span<const std::uint32_t, 6> neighbors(std::size_t idx) const {
        return std::span<const std::uint32_t, 6>(neighbors_.data() + idx * 6, 6);
    }

    /// Indices of the cells at distance 1 or 2, in ring2_offsets() order.
    std::span<const std::uint32_t> ring2(std::size_t idx) const {
        const std::size_t k = ring2_offsets().size();
        return {ring2_.data() + idx * k, k};
    }

    /// Shortest lattice vector equivalent to `v` on this torus.
    AxialVec minimal_image(AxialVec v) const {
        AxialVec best = v;
        int best_len = hex_length(v);
        const AxialVec row_period{height_, -(height_ / 2)};
        const AxialVec col_period{0, width_};
        // Reduce coarsely first, then search the neighborhood of the reduced vector.
        const int n0 = floor_div(v.dr + height_ / 2, height_);
        AxialVec base{v.dr - n0 * row_period.dr, v.dq - n0 * row_period.dq};
        const int m0 = floor_div(base.dq + base.dr / 2 + width_ / 2, width_);
        base.dq -= m0 * width_;
        for (int n = -2; n <= 2; ++n)
            for (int m = -2; m <= 2; ++m) {
                const AxialVec cand{base.dr + n * row_period.dr + m * col_period.dr,
                                    base.dq + n * row_period.dq + m * col_period.dq};
                const int len = hex_length(cand);
                if (len < best_len || (len == best_len && cand < best)) {
                    best = cand;
                    best_len = len;
                }
            }
        return best;
    }

private:
    int width_;
    int height_;
    std::vector<std::uint32_t> neighbors_;
    std::vector<std::uint32_t> ring2_;
};

class Grid {
public:
    Grid(int width, int height, CellState fill = CellState::S)
        : topo_(Topology::get(width, height)), cells_(topo_->size(), fill) {}

    int width() const { return topo_->width(); }
    int height() const { return topo_->height(); }
    std::size_t size() const { return cells_.size(); }
    const Topology& topology() const { return *topo_; }

    CellState at(HexCoord c) const { return cells_[topo_->index(c)]; }
    CellState at(std::size_t idx) const { return cells_[idx]; }
    void set(HexCoord c, CellState s) { cells_[topo_->index(c)] = s; }
    void set(std::size_t idx, CellState s) { cells_[idx] = s; }

    std::span<const CellState> cells() const { return cells_; }
    std::span<CellState> cells() { return cells_; }

    std::size_t count(CellState s) const { return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), s)); }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.width() == b.width() && a.height() == b.height() && a.cells_ == b.cells_;
    }

private:
    std::shared_ptr<const Topology> topo_;
    std::vector<CellState> cells_;
};

/// Center first, then the six neighbors clockwise from East.
inline std::array<HexCoord, 7> neighborhood(const Grid& g, HexCoord c) {
    const auto& topo = g.topology();
    std::array<HexCoord, 7> out{};
    out[0] = c;
    for (std::size_t k = 0; k < 6; ++k) out[k + 1] = topo.shift(c, kHexDirections[k]);
    return out;
}

struct StateCounts {
    int a = 0;  // cells in state A
    int b = 0;  // cells in state B
    friend constexpr auto operator<=>(const StateCounts&, const StateCounts&) = default;
};

/// Counts of A and B over the 7-cell neighborhood, center included.
inline StateCounts count_states(const Grid& g, HexCoord c) {
    StateCounts out;
    for (const HexCoord& n : neighborhood(g, c)) {
        const CellState s = g.at(n);
        out.a += s == CellState::A;
        out.b += s == CellState::B;
    }
    return out;
}

/// Lattice translation taking cell (0, 0) to cell (drow, dcol).
inline Grid translate(const Grid& g, int drow, int dcol) {
    const auto& topo = g.topology();
    const AxialVec v = Topology::axial({drow, dcol});
    Grid out(g.width(), g.height());
    for (std::size_t idx = 0; idx < g.size(); ++idx) out.set(topo.shift(topo.coord(idx), v), g.at(idx));
    return out;
}

inline HexCoord translate(const Topology& topo, HexCoord c, int drow, int dcol) {
    return topo.shift(c, Topology::axial({drow, dcol}));
}

// ---- text format -----------------------------------------------------------

inline void write_grid(std::ostream& os, const Grid& g) {
    os << g.width() << ' ' << g.height() << '\n';
    for (int r = 0; r < g.height(); ++r) {
        for (int c = 0; c < g.width(); ++c) os << to_grid_char(g.at(HexCoord{r, c}));
        os << '\n';
    }
}

inline std::string to_string(const Grid& g) {
    std::string out = std::to_string(g.width()) + ' ' + std::to_string(g.height()) + '\n';
    for (int r = 0; r < g.height(); ++r) {
        for (int c = 0; c < g.width(); ++c) out += to_grid_char(g.at(HexCoord{r, c}));
        out += '\n';
    }
    return out;
}

/// Reads one grid. Throws std::runtime_error on malformed input.
inline Grid read_grid(std::istream& is) {
    std::string header;
    while (std::getline(is, header) && header.find_first_not_of(" \t\r") == std::string::npos) {
    }
    if (!is) throw std::runtime_error("grid: missing 'W H' header");
    int w = 0, h = 0;
    char extra = 0;
    if (std::sscanf(header.c_str(), "%d %d %c", &w, &h, &extra) != 2)
        throw std::runtime_error("grid: malformed header '" + header + "'");
    if (w < kMinGridDim || h < kMinGridDim) throw std::runtime_error("grid: dimensions must be at least 3x3");
    Grid g(w, h);
    std::string line;
    for (int r = 0; r < h; ++r) {
        if (!std::getline(is, line)) throw std::runtime_error("grid: expected " + std::to_string(h) + " rows");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (static_cast<int>(line.size()) != w)
            throw std::runtime_error("grid: row " + std::to_string(r) + " has length " + std::to_string(line.size()));
        for (int c = 0; c < w; ++c) {
            const char ch = line[static_cast<std::size_t>(c)];
            if (ch != '.' && ch != 'A' && ch != 'B')
                throw std::runtime_error(std::string("grid: invalid character '") + ch + "'");
            g.set(HexCoord{r, c}, state_from_char(ch));
        }
    }
    return g;
}

}  // namespace hexca
