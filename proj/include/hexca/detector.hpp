#pragma once

// Localization detection: connected components, canonical shapes, tracking
// across frames, period/displacement analysis, and the EA fitness.
//
// Tracking works on clusters: components whose cells come within hex distance
// 2 of each other are grouped, since with a radius-1 rule such components
// already influence a common cell on the next step. Clusters are linked
// between consecutive frames by cell overlap under shifts of at most one
// ring. A cluster with several predecessors terminates them (merge); a
// cluster splitting into several successors continues along the best overlap
// and the rest start new tracks flagged as spawned (this is how puffer trails
// detach from their head).

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "hexca/engine.hpp"
#include "hexca/hexgrid.hpp"
#include "hexca/rules.hpp"

namespace hexca {

struct Component {
    std::vector<std::pair<HexCoord, CellState>> cells;  // row-major order
    int frame = 0;
};

/// Maximal 6-connected groups of non-S cells on the torus.
inline std::vector<Component> extract_components(const Grid& g, int frame = 0) {
    const auto& topo = g.topology();
    std::vector<int> label(g.size(), -1);
    std::vector<Component> out;
    std::vector<std::size_t> stack;
    std::vector<std::size_t> members;
    for (std::size_t seed = 0; seed < g.size(); ++seed) {
        if (g.at(seed) == CellState::S || label[seed] >= 0) continue;
        const int id = static_cast<int>(out.size());
        members.clear();
        stack.assign(1, seed);
        label[seed] = id;
        while (!stack.empty()) {
            const std::size_t cur = stack.back();
            stack.pop_back();
            members.push_back(cur);
            for (std::uint32_t nb : topo.neighbors(cur)) {
                if (g.at(nb) == CellState::S || label[nb] >= 0) continue;
                label[nb] = id;
                stack.push_back(nb);
            }
        }
        std::sort(members.begin(), members.end());
        Component comp;
        comp.frame = frame;
        comp.cells.reserve(members.size());
        for (std::size_t idx : members) comp.cells.emplace_back(topo.coord(idx), g.at(idx));
        out.push_back(std::move(comp));
    }
    return out;
}

// ---- canonical shapes ------------------------------------------------------

struct ShapeCell {
    int dr = 0;
    int dc = 0;  // doubled columns
    CellState state = CellState::S;
    friend constexpr auto operator<=>(const ShapeCell&, const ShapeCell&) = default;
};

/// Cell set translated so that its lexicographically smallest (row, doubled
/// column) cell sits at the origin. Equal for all lattice translates.
struct CanonicalShape {
    std::vector<ShapeCell> cells;
    std::size_t size() const { return cells.size(); }
    friend bool operator==(const CanonicalShape&, const CanonicalShape&) = default;
};

/// A set of torus cells laid out in the plane.
struct Placement {
    CanonicalShape shape;
    std::size_t anchor = 0;  // torus index of the shape origin
    bool wraps = false;      // the set closes around the torus; shape is not meaningful
};

namespace detail {

/// Unwraps `cells` by walking `steps` from the first cell. `step_of(idx, k)`
/// is the torus index reached from idx by steps[k]; `member(idx)` must be true
/// exactly for cells of the set.
template <class StepOf, class Member>
Placement place(const Grid& g, std::span<const std::uint32_t> cells, std::span<const AxialVec> steps, StepOf&& step_of,
                Member&& member) {
    Placement out;
    if (cells.empty()) return out;
    const auto& topo = g.topology();
    std::unordered_map<std::uint32_t, AxialVec> pos;
    pos.reserve(cells.size() * 2);
    std::vector<std::uint32_t> stack{cells.front()};
    pos.emplace(cells.front(), Topology::axial(topo.coord(cells.front())));
    while (!stack.empty()) {
        const std::uint32_t cur = stack.back();
        stack.pop_back();
        const AxialVec here = pos.at(cur);
        for (std::size_t k = 0; k < steps.size(); ++k) {
            const auto nb = static_cast<std::uint32_t>(step_of(cur, k));
            if (!member(nb)) continue;
            const AxialVec there = here + steps[k];
            auto [it, inserted] = pos.emplace(nb, there);
            if (inserted)
                stack.push_back(nb);
            else if (it->second != there)
                out.wraps = true;
        }
    }
    struct Entry {
        int r;
        int x;
        CellState s;
        std::uint32_t idx;
    };
    std::vector<Entry> entries;
    entries.reserve(pos.size());
    for (const auto& [idx, a] : pos) {
        const Displacement d = to_doubled(a);
        entries.push_back({d.dr, d.dc, g.at(idx), idx});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.r != b.r ? a.r < b.r : a.x < b.x;
    });
    const Entry origin = entries.front();
    out.anchor = origin.idx;
    out.shape.cells.reserve(entries.size());
    for (const Entry& e : entries) out.shape.cells.push_back({e.r - origin.r, e.x - origin.x, e.s});
    return out;
}

inline std::span<const AxialVec> unit_steps() { return {kHexDirections.data(), kHexDirections.size()}; }

}  // namespace detail

inline CanonicalShape canonical_shape(const Grid& g, const Component& comp) {
    const auto& topo = g.topology();
    std::vector<std::uint32_t> idx;
    idx.reserve(comp.cells.size());
    for (const auto& [c, s] : comp.cells) idx.push_back(static_cast<std::uint32_t>(topo.index(c)));
    std::sort(idx.begin(), idx.end());
    auto member = [&](std::uint32_t i) { return std::binary_search(idx.begin(), idx.end(), i); };
    auto step_of = [&](std::uint32_t i, std::size_t k) { return topo.neighbors(i)[k]; };
    return detail::place(g, idx, detail::unit_steps(), step_of, member).shape;
}

// ---- localizations ---------------------------------------------------------

enum class LocalizationClass { StillLife, Oscillator, Glider, PufferTrain, Unresolved };

inline constexpr std::array<LocalizationClass, 5> kAllClasses{LocalizationClass::StillLife, LocalizationClass::Oscillator,
                                                              LocalizationClass::Glider, LocalizationClass::PufferTrain,
                                                              LocalizationClass::Unresolved};

inline constexpr const char* to_string(LocalizationClass c) {
    switch (c) {
        case LocalizationClass::StillLife: return "StillLife";
        case LocalizationClass::Oscillator: return "Oscillator";
        case LocalizationClass::Glider: return "Glider";
        case LocalizationClass::PufferTrain: return "PufferTrain";
        default: return "Unresolved";
    }
}

inline constexpr bool is_mobile(LocalizationClass c) {
    return c == LocalizationClass::Glider || c == LocalizationClass::PufferTrain;
}

struct Localization {
    /// Shape of the tracked cluster at each tracked frame.
    std::vector<CanonicalShape> shapes;
    /// Minimal recurrence period; 0 when none was found.
    int period = 0;
    /// Net displacement per period, doubled-column units.
    Displacement displacement;
    LocalizationClass cls = LocalizationClass::Unresolved;
    /// Absolute time of the first tracked frame.
    int first_frame = 0;
    /// Ended by merging into another track.
    bool merged = false;
    /// Cluster closed around the torus at some frame.
    bool wraps = false;
    /// Number of fragments that detached from this track.
    int spawned = 0;
    /// Non-S cells left behind in the swept region grew over the track.
    bool trail_grows = false;

    std::size_t size() const { return shapes.empty() ? 0 : shapes.back().size(); }
    int frames() const { return static_cast<int>(shapes.size()); }
};

/// Class implied by period, displacement and trail evidence.
inline LocalizationClass classify(const Localization& loc) {
    if (loc.merged || loc.wraps || loc.period < 1) return LocalizationClass::Unresolved;
    if (loc.frames() < 2 * loc.period) return LocalizationClass::Unresolved;
    if (loc.displacement.is_zero()) return loc.period == 1 ? LocalizationClass::StillLife : LocalizationClass::Oscillator;
    return loc.trail_grows ? LocalizationClass::PufferTrain : LocalizationClass::Glider;
}

namespace detail {

struct FrameClusters {
    std::vector<int> label;  // cluster id per cell, -1 for S
    std::vector<std::vector<std::uint32_t>> cells;
    std::vector<Placement> placement;
};

inline int uf_find(std::vector<int>& parent, int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
    }
    return x;
}

inline FrameClusters cluster_frame(const Grid& g) {
    const auto& topo = g.topology();
    const auto& ring2 = ring2_offsets();
    const std::size_t n = g.size();

    // Union-find over non-S cells, joining pairs within distance 2.
    std::vector<int> parent(n, -1);
    for (std::size_t idx = 0; idx < n; ++idx)
        if (g.at(idx) != CellState::S) parent[idx] = static_cast<int>(idx);
    for (std::size_t idx = 0; idx < n; ++idx) {
        if (parent[idx] < 0) continue;
        for (std::uint32_t nb : topo.ring2(idx)) {
            if (parent[nb] < 0) continue;
            const int a = uf_find(parent, static_cast<int>(idx));
            const int b = uf_find(parent, static_cast<int>(nb));
            if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
        }
    }

    FrameClusters fc;
    fc.label.assign(n, -1);
    std::vector<int> root_to_id(n, -1);
    for (std::size_t idx = 0; idx < n; ++idx) {
        if (parent[idx] < 0) continue;
        const auto root = static_cast<std::size_t>(uf_find(parent, static_cast<int>(idx)));
        if (root_to_id[root] < 0) {
            root_to_id[root] = static_cast<int>(fc.cells.size());
            fc.cells.emplace_back();
        }
        fc.label[idx] = root_to_id[root];
        fc.cells[static_cast<std::size_t>(root_to_id[root])].push_back(static_cast<std::uint32_t>(idx));
    }
    fc.placement.reserve(fc.cells.size());
    for (std::size_t id = 0; id < fc.cells.size(); ++id) {
        auto member = [&](std::uint32_t i) { return fc.label[i] == static_cast<int>(id); };
        auto step_of = [&](std::uint32_t i, std::size_t k) { return topo.ring2(i)[k]; };
        fc.placement.push_back(place(g, fc.cells[id], ring2, step_of, member));
    }
    return fc;
}

struct TrackPoint {
    int frame = 0;  // index into the analysed window
    std::size_t cluster = 0;
    AxialVec position;  // unwrapped anchor position
};

struct Track {
    std::vector<TrackPoint> points;
    int parent = -1;
    bool merged = false;
    bool wraps = false;
    int spawned = 0;
};

inline std::optional<std::pair<int, AxialVec>> find_period(const std::vector<TrackPoint>& pts,
                                                           const std::vector<FrameClusters>& frames, int p_max) {
    const int len = static_cast<int>(pts.size());
    auto shape_at = [&](int k) -> const CanonicalShape& {
        const auto& pt = pts[static_cast<std::size_t>(k)];
        return frames[static_cast<std::size_t>(pt.frame)].placement[pt.cluster].shape;
    };
    for (int p = 1; p <= p_max && 2 * p <= len; ++p) {
        const AxialVec disp = pts[static_cast<std::size_t>(p)].position - pts[0].position;
        bool ok = true;
        for (int t = 0; ok && t + p < len; ++t) {
            ok = shape_at(t) == shape_at(t + p) &&
                 pts[static_cast<std::size_t>(t + p)].position - pts[static_cast<std::size_t>(t)].position == disp;
        }
        if (ok) return std::pair{p, disp};
    }
    return std::nullopt;
}

/// Non-S cells of `g` inside `region` that are not part of the head cluster.
inline std::size_t trail_cells(const Grid& g, const std::vector<char>& region, const FrameClusters& fc,
                               std::size_t head) {
    std::size_t count = 0;
    for (std::size_t idx = 0; idx < g.size(); ++idx)
        if (region[idx] && g.at(idx) != CellState::S && fc.label[idx] != static_cast<int>(head)) ++count;
    return count;
}

}  // namespace detail

/// Tracks localizations over the last `window` frames of `tr`.
inline std::vector<Localization> track(const Trajectory& tr, int window, int p_max) {
    using namespace detail;
    if (window < 0 || window > static_cast<int>(tr.frames.size()))
        throw std::invalid_argument("track: window exceeds retained frames");
    if (p_max < 1) throw std::invalid_argument("track: p_max must be >= 1");
    if (window == 0) return {};

    const std::size_t first = tr.frames.size() - static_cast<std::size_t>(window);
    std::span<const Grid> grids(tr.frames.data() + first, static_cast<std::size_t>(window));
    const auto& topo = grids.front().topology();

    std::vector<FrameClusters> frames;
    frames.reserve(grids.size());
    for (const Grid& g : grids) frames.push_back(cluster_frame(g));

    std::vector<Track> tracks;
    std::vector<int> owner;  // track id per cluster in the previous frame

    auto start_track = [&](int frame, std::size_t cluster, int parent) {
        Track t;
        t.parent = parent;
        const auto& pl = frames[static_cast<std::size_t>(frame)].placement[cluster];
        t.wraps = pl.wraps;
        t.points.push_back({frame, cluster, Topology::axial(topo.coord(pl.anchor))});
        tracks.push_back(std::move(t));
        return static_cast<int>(tracks.size() - 1);
    };
    auto extend = [&](int id, int frame, std::size_t cluster) {
        Track& t = tracks[static_cast<std::size_t>(id)];
        const auto& pl = frames[static_cast<std::size_t>(frame)].placement[cluster];
        const AxialVec here = Topology::axial(topo.coord(pl.anchor));
        const TrackPoint& prev = t.points.back();
        const auto& prev_pl = frames[static_cast<std::size_t>(prev.frame)].placement[prev.cluster];
        const AxialVec step = topo.minimal_image(here - Topology::axial(topo.coord(prev_pl.anchor)));
        t.points.push_back({frame, cluster, prev.position + step});
        t.wraps = t.wraps || pl.wraps;
    };

    owner.resize(frames[0].cells.size());
    for (std::size_t c = 0; c < frames[0].cells.size(); ++c) owner[c] = start_track(0, c, -1);

    for (int f = 1; f < window; ++f) {
        const FrameClusters& prev = frames[static_cast<std::size_t>(f - 1)];
        const FrameClusters& cur = frames[static_cast<std::size_t>(f)];
        const std::size_t np = prev.cells.size();
        const std::size_t nc = cur.cells.size();

        // best[p] maps current cluster -> best shifted overlap
        std::vector<std::map<std::size_t, int>> best(np);
        std::vector<std::vector<std::size_t>> preds(nc);
        for (std::size_t p = 0; p < np; ++p) {
            std::map<std::size_t, std::array<int, 7>> counts;
            for (std::uint32_t idx : prev.cells[p]) {
                const auto nb = topo.neighbors(idx);
                for (std::size_t s = 0; s < 7; ++s) {
                    const std::size_t target = s == 0 ? idx : nb[s - 1];
                    const int lab = cur.label[target];
                    if (lab >= 0) ++counts[static_cast<std::size_t>(lab)][s];
                }
            }
            for (const auto& [c, arr] : counts) {
                best[p][c] = *std::max_element(arr.begin(), arr.end());
                preds[c].push_back(p);
            }
        }

        std::vector<int> next_owner(nc, -1);
        std::vector<char> ended(np, 0);
        for (std::size_t c = 0; c < nc; ++c) {
            if (preds[c].size() < 2) continue;
            for (std::size_t p : preds[c]) {
                tracks[static_cast<std::size_t>(owner[p])].merged = true;
                ended[p] = 1;
            }
        }
        for (std::size_t p = 0; p < np; ++p) {
            if (ended[p]) continue;
            std::vector<std::size_t> succ;
            for (const auto& [c, ov] : best[p])
                if (preds[c].size() == 1) succ.push_back(c);
            if (succ.empty()) continue;
            const std::size_t cont = *std::max_element(succ.begin(), succ.end(), [&](std::size_t a, std::size_t b) {
                const int oa = best[p].at(a), ob = best[p].at(b);
                if (oa != ob) return oa < ob;
                return cur.cells[a].size() < cur.cells[b].size();
            });
            extend(owner[p], f, cont);
            next_owner[cont] = owner[p];
            for (std::size_t c : succ) {
                if (c == cont) continue;
                next_owner[c] = start_track(f, c, owner[p]);
                ++tracks[static_cast<std::size_t>(owner[p])].spawned;
            }
        }
        for (std::size_t c = 0; c < nc; ++c)
            if (next_owner[c] < 0) next_owner[c] = start_track(f, c, -1);
        owner = std::move(next_owner);
    }

    std::vector<Localization> out;
    out.reserve(tracks.size());
    for (const Track& t : tracks) {
        Localization loc;
        loc.first_frame = tr.t0 + static_cast<int>(first) + t.points.front().frame;
        loc.merged = t.merged;
        loc.wraps = t.wraps;
        loc.spawned = t.spawned;
        loc.shapes.reserve(t.points.size());
        for (const auto& pt : t.points)
            loc.shapes.push_back(frames[static_cast<std::size_t>(pt.frame)].placement[pt.cluster].shape);
        if (!t.merged && !t.wraps) {
            if (auto found = find_period(t.points, frames, p_max)) {
                loc.period = found->first;
                loc.displacement = to_doubled(found->second);
            }
        }
        if (loc.period > 0 && !loc.displacement.is_zero() && t.spawned > 0) {
            // Region swept by the head, padded by two rings.
            std::vector<char> region(topo.size(), 0);
            for (const auto& pt : t.points)
                for (std::uint32_t idx : frames[static_cast<std::size_t>(pt.frame)].cells[pt.cluster]) {
                    region[idx] = 1;
                    for (std::uint32_t nb : topo.ring2(idx)) region[nb] = 1;
                }
            const auto& a = t.points.front();
            const auto& b = t.points.back();
            const std::size_t before = trail_cells(grids[static_cast<std::size_t>(a.frame)], region,
                                                   frames[static_cast<std::size_t>(a.frame)], a.cluster);
            const std::size_t after = trail_cells(grids[static_cast<std::size_t>(b.frame)], region,
                                                  frames[static_cast<std::size_t>(b.frame)], b.cluster);
            loc.trail_grows = after > before;
        }
        loc.cls = classify(loc);
        out.push_back(std::move(loc));
    }
    return out;
}

// ---- fitness ---------------------------------------------------------------

struct FitnessConfig {
    int width = 64;
    int height = 64;
    /// Side of the centred random patch; cells outside start in S.
    int patch = 16;
    double p_s = 0.8;
    double p_a = 0.1;
    double p_b = 0.1;
    int trials = 5;
    int steps = 200;
    int window = 48;
    int p_max = 12;
    bool count_puffers = true;
    unsigned threads = 1;

    void validate() const {
        if (width < kMinGridDim || height < kMinGridDim) throw std::invalid_argument("fitness: grid too small");
        if (patch < 0 || patch > width || patch > height) throw std::invalid_argument("fitness: patch must fit the grid");
        if (p_s < 0 || p_a < 0 || p_b < 0 || p_s + p_a + p_b <= 0)
            throw std::invalid_argument("fitness: state probabilities must be non-negative");
        if (trials < 1) throw std::invalid_argument("fitness: trials must be >= 1");
        if (steps < 0) throw std::invalid_argument("fitness: steps must be >= 0");
        if (window < 1 || window > steps + 1) throw std::invalid_argument("fitness: window must be in [1, steps + 1]");
        if (p_max < 1) throw std::invalid_argument("fitness: p_max must be >= 1");
    }
};

/// splitmix64 finalizer; derives independent stream seeds from a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

template <class Rng>
Grid random_patch_grid(const FitnessConfig& cfg, Rng& rng) {
    Grid g(cfg.width, cfg.height);
    std::discrete_distribution<int> pick({cfg.p_s, cfg.p_a, cfg.p_b});
    const int r0 = (cfg.height - cfg.patch) / 2;
    const int c0 = (cfg.width - cfg.patch) / 2;
    for (int r = r0; r < r0 + cfg.patch; ++r)
        for (int c = c0; c < c0 + cfg.patch; ++c) g.set(HexCoord{r, c}, static_cast<CellState>(pick(rng)));
    return g;
}

/// Runs one random trial and tracks its final window.
inline std::vector<Localization> detect_trial(const RuleMatrix& m, const FitnessConfig& cfg, std::uint64_t trial_seed) {
    std::mt19937_64 rng(trial_seed);
    const Grid init = random_patch_grid(cfg, rng);
    const Trajectory tr = run(init, m, cfg.steps, cfg.window);
    return track(tr, cfg.window, cfg.p_max);
}

inline std::size_t count_mobile(std::span<const Localization> locs, bool count_puffers) {
    return static_cast<std::size_t>(std::count_if(locs.begin(), locs.end(), [&](const Localization& l) {
        return l.cls == LocalizationClass::Glider || (count_puffers && l.cls == LocalizationClass::PufferTrain);
    }));
}

/// Per-trial localizations; trial k uses derive_seed(seed, k).
inline std::vector<std::vector<Localization>> detect_trials(const RuleMatrix& m, const FitnessConfig& cfg,
                                                            std::uint64_t seed) {
    cfg.validate();
    const auto trials = static_cast<std::size_t>(cfg.trials);
    std::vector<std::vector<Localization>> out(trials);
    const std::size_t workers = std::clamp<std::size_t>(cfg.threads, 1, trials);
    auto work = [&](std::size_t w) {
        for (std::size_t k = w; k < trials; k += workers) out[k] = detect_trial(m, cfg, derive_seed(seed, k));
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    return out;
}

/// Mobile localizations per cell, averaged over trials.
inline double fitness(const RuleMatrix& m, const FitnessConfig& cfg, std::uint64_t seed) {
    const auto per_trial = detect_trials(m, cfg, seed);
    std::size_t gliders = 0;
    for (const auto& locs : per_trial) gliders += count_mobile(locs, cfg.count_puffers);
    return static_cast<double>(gliders) /
           (static_cast<double>(cfg.width) * static_cast<double>(cfg.height) * static_cast<double>(cfg.trials));
}

/// CSV: trial,class,period,dr,dc,size,first_frame
inline void write_detection_csv(std::ostream& os, std::span<const std::vector<Localization>> per_trial) {
    os << "trial,class,period,dr,dc,size,first_frame\n";
    for (std::size_t k = 0; k < per_trial.size(); ++k)
        for (const Localization& l : per_trial[k])
            os << k << ',' << to_string(l.cls) << ',' << l.period << ',' << l.displacement.dr << ','
               << l.displacement.dc << ',' << l.size() << ',' << l.first_frame << '\n';
}

}  // namespace hexca
