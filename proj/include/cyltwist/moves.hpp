#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "cyltwist/counting.hpp"
#include "cyltwist/disk.hpp"
#include "cyltwist/floors.hpp"
#include "cyltwist/phi.hpp"
#include "cyltwist/tiling.hpp"
#include "cyltwist/twist.hpp"

namespace cyltwist {

// ---------------------------------------------------------------------
// Local moves on the cell grid. Both kinds are involutions at a fixed
// location, so traces replay backwards with the same move list.

struct Move {
    enum Kind : std::uint8_t { Flip = 0, Trit = 1 };
    // For flips, param is the slab plane: 0 = xy (2x2x1), 1 = xz (2x1x2),
    // 2 = yz (1x2x2). For trits, param in 0..3 picks the removed diagonal
    // of the 2x2x2 box at the anchor.
    std::uint8_t kind = Flip;
    std::uint8_t param = 0;
    std::int16_t x = 0, y = 0, z = 0;

    friend bool operator==(const Move& a, const Move& b) {
        return a.kind == b.kind && a.param == b.param && a.x == b.x && a.y == b.y && a.z == b.z;
    }
};

namespace detail {

// the four cells of a flip slab, as (square,z) pairs; false if any cell
// is missing from the region
inline bool slab_cells(const CellGrid& g, const Move& m, int out_sq[4], int out_z[4]) {
    const QuadDisk& d = *g.disk;
    int x = m.x, y = m.y, z = m.z;
    auto put = [&](int k, int sq, int zz) {
        out_sq[k] = sq;
        out_z[k] = zz;
    };
    switch (m.param) {
        case 0: {  // 2x2 in xy at level z
            if (z < 0 || z >= g.levels) return false;
            int s00 = d.cell(x, y), s10 = d.cell(x + 1, y), s01 = d.cell(x, y + 1),
                s11 = d.cell(x + 1, y + 1);
            if (s00 < 0 || s10 < 0 || s01 < 0 || s11 < 0) return false;
            put(0, s00, z), put(1, s10, z), put(2, s01, z), put(3, s11, z);
            return true;
        }
        case 1: {  // 2x1 in x, two levels
            if (z < 0 || z + 1 >= g.levels) return false;
            int s0 = d.cell(x, y), s1 = d.cell(x + 1, y);
            if (s0 < 0 || s1 < 0) return false;
            put(0, s0, z), put(1, s1, z), put(2, s0, z + 1), put(3, s1, z + 1);
            return true;
        }
        default: {  // 1x2 in y, two levels
            if (z < 0 || z + 1 >= g.levels) return false;
            int s0 = d.cell(x, y), s1 = d.cell(x, y + 1);
            if (s0 < 0 || s1 < 0) return false;
            put(0, s0, z), put(1, s1, z), put(2, s0, z + 1), put(3, s1, z + 1);
            return true;
        }
    }
}

// flip patterns per plane: two parallel dominoes either way
inline bool flip_patterns(const CellGrid& g, const Move& m, bool* first_config) {
    int sq[4] = {0, 0, 0, 0}, zz[4] = {0, 0, 0, 0};
    if (!slab_cells(g, m, sq, zz)) return false;
    char c0 = g.at(sq[0], zz[0]), c1 = g.at(sq[1], zz[1]), c2 = g.at(sq[2], zz[2]),
         c3 = g.at(sq[3], zz[3]);
    switch (m.param) {
        case 0:
            if (c0 == 'E' && c1 == 'W' && c2 == 'E' && c3 == 'W') return *first_config = true, true;
            if (c0 == 'N' && c2 == 'S' && c1 == 'N' && c3 == 'S') return *first_config = false, true;
            return false;
        case 1:
            if (c0 == 'E' && c1 == 'W' && c2 == 'E' && c3 == 'W') return *first_config = true, true;
            if (c0 == 'U' && c1 == 'U' && c2 == 'D' && c3 == 'D') return *first_config = false, true;
            return false;
        default:
            if (c0 == 'N' && c1 == 'S' && c2 == 'N' && c3 == 'S') return *first_config = true, true;
            if (c0 == 'U' && c1 == 'U' && c2 == 'D' && c3 == 'D') return *first_config = false, true;
            return false;
    }
}

inline void apply_flip(CellGrid& g, const Move& m) {
    bool first = false;
    if (!flip_patterns(g, m, &first)) throw std::invalid_argument("move: flip not applicable");
    int sq[4] = {0, 0, 0, 0}, zz[4] = {0, 0, 0, 0};
    slab_cells(g, m, sq, zz);
    auto set4 = [&](char a, char b, char c, char d2) {
        g.at(sq[0], zz[0]) = a;
        g.at(sq[1], zz[1]) = b;
        g.at(sq[2], zz[2]) = c;
        g.at(sq[3], zz[3]) = d2;
    };
    switch (m.param) {
        case 0: set4(first ? 'N' : 'E', first ? 'N' : 'W', first ? 'S' : 'E', first ? 'S' : 'W'); break;
        case 1: set4(first ? 'U' : 'E', first ? 'U' : 'W', first ? 'D' : 'E', first ? 'D' : 'W'); break;
        default: set4(first ? 'U' : 'N', first ? 'U' : 'S', first ? 'D' : 'N', first ? 'D' : 'S'); break;
    }
}

// partner cell of (sq, z) per its code; false if it points outside
inline bool partner_cell(const CellGrid& g, int sq, int z, int* psq, int* pz) {
    const QuadDisk& d = *g.disk;
    char c = g.at(sq, z);
    switch (c) {
        case 'E': *psq = d.nbr[static_cast<std::size_t>(sq)][DIR_E]; *pz = z; return *psq >= 0;
        case 'W': *psq = d.nbr[static_cast<std::size_t>(sq)][DIR_W]; *pz = z; return *psq >= 0;
        case 'N': *psq = d.nbr[static_cast<std::size_t>(sq)][DIR_N]; *pz = z; return *psq >= 0;
        case 'S': *psq = d.nbr[static_cast<std::size_t>(sq)][DIR_S]; *pz = z; return *psq >= 0;
        case 'U': *psq = sq; *pz = z + 1; return *pz < g.levels;
        case 'D': *psq = sq; *pz = z - 1; return *pz >= 0;
        default: return false;
    }
}

// the six cells of a trit box (anchor + diagonal choice); diagonal pairs
// listed by the removed cube offsets
inline constexpr int trit_removed[4][2][3] = {
    {{0, 0, 0}, {1, 1, 1}}, {{1, 0, 0}, {0, 1, 1}}, {{0, 1, 0}, {1, 0, 1}}, {{0, 0, 1}, {1, 1, 0}}};

inline bool trit_cells(const CellGrid& g, const Move& m, int out_sq[6], int out_z[6]) {
    const QuadDisk& d = *g.disk;
    int k = 0;
    for (int dz = 0; dz < 2; ++dz)
        for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx) {
                const auto& r0 = trit_removed[m.param][0];
                const auto& r1 = trit_removed[m.param][1];
                if ((dx == r0[0] && dy == r0[1] && dz == r0[2]) ||
                    (dx == r1[0] && dy == r1[1] && dz == r1[2]))
                    continue;
                int sq = d.cell(m.x + dx, m.y + dy);
                int z = m.z + dz;
                if (sq < 0 || z < 0 || z >= g.levels) return false;
                out_sq[k] = sq;
                out_z[k] = z;
                ++k;
            }
    return k == 6;
}

// perfect matchings of the six-cube region (always a 6-cycle: exactly 2)
inline void trit_matchings(const CellGrid& g, const int sq[6], const int z[6],
                           std::vector<std::array<std::pair<int, int>, 3>>& out) {
    const QuadDisk& d = *g.disk;
    auto adjacent = [&](int i, int j) {
        if (z[i] == z[j]) {
            for (int k = 0; k < 4; ++k)
                if (d.nbr[static_cast<std::size_t>(sq[i])][static_cast<std::size_t>(k)] == sq[j]) return true;
            return false;
        }
        return sq[i] == sq[j] && std::abs(z[i] - z[j]) == 1;
    };
    // brute force the 6-vertex matchings
    for (int p0 = 1; p0 < 6; ++p0) {
        if (!adjacent(0, p0)) continue;
        int rest[4], k = 0;
        for (int i = 1; i < 6; ++i)
            if (i != p0) rest[k++] = i;
        for (int q = 1; q < 4; ++q) {
            if (!adjacent(rest[0], rest[q])) continue;
            int r[2], kk = 0;
            for (int i = 1; i < 4; ++i)
                if (i != q) r[kk++] = rest[i];
            if (!adjacent(r[0], r[1])) continue;
            out.push_back({std::make_pair(0, p0), std::make_pair(rest[0], rest[q]),
                           std::make_pair(r[0], r[1])});
        }
    }
}

inline bool trit_applicable(const CellGrid& g, const Move& m, int* which) {
    int sq[6] = {0}, z[6] = {0};
    if (!trit_cells(g, m, sq, z)) return false;
    // all six cells must pair up inside the box
    int seen_pairs[6];
    for (int i = 0; i < 6; ++i) {
        int psq = -1, pz = -1;
        if (!partner_cell(g, sq[i], z[i], &psq, &pz)) return false;
        int j = -1;
        for (int k = 0; k < 6; ++k)
            if (sq[k] == psq && z[k] == pz) j = k;
        if (j < 0) return false;
        seen_pairs[i] = j;
    }
    std::vector<std::array<std::pair<int, int>, 3>> ms;
    trit_matchings(g, sq, z, ms);
    if (ms.size() != 2) return false;
    for (int w = 0; w < 2; ++w) {
        bool match = true;
        for (auto [i, j] : ms[static_cast<std::size_t>(w)]) match &= seen_pairs[i] == j;
        if (match) {
            *which = w;
            return true;
        }
    }
    return false;
}

inline void write_domino(CellGrid& g, int sq0, int z0, int sq1, int z1) {
    const QuadDisk& d = *g.disk;
    if (z0 == z1) {
        auto [x0, y0] = d.coords[static_cast<std::size_t>(sq0)];
        auto [x1, y1] = d.coords[static_cast<std::size_t>(sq1)];
        if (y0 == y1) {
            g.at(x0 < x1 ? sq0 : sq1, z0) = 'E';
            g.at(x0 < x1 ? sq1 : sq0, z0) = 'W';
        } else {
            g.at(y0 < y1 ? sq0 : sq1, z0) = 'N';
            g.at(y0 < y1 ? sq1 : sq0, z0) = 'S';
        }
    } else {
        g.at(sq0, std::min(z0, z1)) = 'U';
        g.at(sq0, std::max(z0, z1)) = 'D';
    }
}

inline void apply_trit(CellGrid& g, const Move& m) {
    int which = -1;
    if (!trit_applicable(g, m, &which)) throw std::invalid_argument("move: trit not applicable");
    int sq[6] = {0}, z[6] = {0};
    trit_cells(g, m, sq, z);
    std::vector<std::array<std::pair<int, int>, 3>> ms;
    trit_matchings(g, sq, z, ms);
    const auto& target = ms[static_cast<std::size_t>(1 - which)];
    for (auto [i, j] : target) write_domino(g, sq[i], z[i], sq[j], z[j]);
}

}  // namespace detail

inline void apply_move(CellGrid& g, const Move& m) {
    if (m.kind == Move::Flip)
        detail::apply_flip(g, m);
    else
        detail::apply_trit(g, m);
}

inline CylinderTiling apply_move(const CylinderTiling& t, const Move& m) {
    CellGrid g = cells_from_tiling(t);
    apply_move(g, m);
    return tiling_from_cells(g, t.z0);
}

inline std::vector<Move> enumerate_flips(const CellGrid& g) {
    const QuadDisk& d = *g.disk;
    std::vector<Move> out;
    for (int z = 0; z < g.levels; ++z)
        for (int y = 0; y < d.height; ++y)
            for (int x = 0; x < d.width; ++x)
                for (std::uint8_t plane = 0; plane < 3; ++plane) {
                    Move m{Move::Flip, plane, static_cast<std::int16_t>(x),
                           static_cast<std::int16_t>(y), static_cast<std::int16_t>(z)};
                    bool first;
                    if (detail::flip_patterns(g, m, &first)) out.push_back(m);
                }
    return out;
}

inline std::vector<Move> enumerate_flips(const CylinderTiling& t) {
    return enumerate_flips(cells_from_tiling(t));
}

inline std::vector<Move> enumerate_trits(const CellGrid& g) {
    const QuadDisk& d = *g.disk;
    std::vector<Move> out;
    for (int z = 0; z + 1 < g.levels; ++z) {
        for (int y = 0; y + 1 < d.height; ++y)
            for (int x = 0; x + 1 < d.width; ++x)
                for (std::uint8_t diag = 0; diag < 4; ++diag) {
                    Move m{Move::Trit, diag, static_cast<std::int16_t>(x),
                           static_cast<std::int16_t>(y), static_cast<std::int16_t>(z)};
                    int which;
                    if (detail::trit_applicable(g, m, &which)) out.push_back(m);
                }
    }
    return out;
}

inline std::vector<Move> enumerate_trits(const CylinderTiling& t) {
    return enumerate_trits(cells_from_tiling(t));
}

// ---------------------------------------------------------------------
// Full enumeration of T(D x [0,N]) by depth-first search over the plug
// graph, pruned by exact reachability back to the empty plug.

inline void enumerate_tilings(const TransferGraph& g, int n, std::size_t state_budget,
                              const std::function<void(const CylinderTiling&)>& cb) {
    BigUint total = count_tilings(g, n);
    if (BigUint(state_budget) < total)
        throw BudgetExceeded("enumerate_tilings: " + total.to_decimal() + " tilings exceed budget " +
                             std::to_string(state_budget));
    const QuadDisk& d = *g.disk;
    // reach[k] = set of plugs from which the empty plug is reachable in exactly k steps
    std::vector<std::vector<char>> reach(static_cast<std::size_t>(n) + 1,
                                         std::vector<char>(g.plug_count(), 0));
    reach[0][static_cast<std::size_t>(g.empty_plug())] = 1;
    for (int k = 1; k <= n; ++k)
        for (std::size_t p = 0; p < g.plug_count(); ++p)
            for (const TransferEdge& e : g.out[p])
                if (reach[static_cast<std::size_t>(k) - 1][static_cast<std::size_t>(e.to)])
                    reach[static_cast<std::size_t>(k)][p] = 1;

    CylinderTiling t;
    t.disk = g.disk;
    t.plugs.assign(1, 0);
    std::function<void(int, PlugMask)> rec = [&](int depth, PlugMask cur) {
        if (depth == n) {
            if (cur == 0) cb(t);
            return;
        }
        enumerate_floors(d, cur, [&](const FloorMatching& f, PlugMask p1) {
            std::int32_t idx = g.index_of(p1);
            if (!reach[static_cast<std::size_t>(n - depth - 1)][static_cast<std::size_t>(idx)]) return;
            t.plugs.push_back(p1);
            t.floors.push_back(f);
            rec(depth + 1, p1);
            t.plugs.pop_back();
            t.floors.pop_back();
        });
    };
    rec(0, 0);
}

// ---------------------------------------------------------------------
// Connected components of the flip graph, grouped by twist.

struct FlipComponents {
    // twist -> component sizes, descending
    std::map<int, std::vector<std::uint64_t>> sizes;
    std::uint64_t tiling_count = 0;
    std::size_t component_count = 0;
};

inline FlipComponents flip_components(const TransferGraph& g, int n, std::size_t state_budget) {
    std::vector<std::string> keys;
    std::vector<int> tw;
    std::unordered_map<std::string, std::uint32_t> id_of;
    enumerate_tilings(g, n, state_budget, [&](const CylinderTiling& t) {
        CellGrid cg = cells_from_tiling(t);
        std::string k = cg.key();
        id_of.emplace(std::move(k), static_cast<std::uint32_t>(keys.size()));
        keys.push_back(cg.key());
        tw.push_back(twist(t));
    });
    std::vector<std::uint32_t> parent(keys.size());
    for (std::uint32_t i = 0; i < parent.size(); ++i) parent[i] = i;
    std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    CellGrid scratch;
    scratch.disk = g.disk;
    scratch.levels = n;
    for (std::uint32_t i = 0; i < keys.size(); ++i) {
        scratch.code.assign(keys[i].begin(), keys[i].end());
        for (const Move& m : enumerate_flips(scratch)) {
            CellGrid nb = scratch;
            detail::apply_flip(nb, m);
            auto it = id_of.find(nb.key());
            if (it == id_of.end()) throw std::logic_error("flip left the tiling set");
            std::uint32_t a = find(i), b = find(it->second);
            if (a != b) parent[a] = b;
        }
    }
    std::unordered_map<std::uint32_t, std::uint64_t> comp_size;
    for (std::uint32_t i = 0; i < keys.size(); ++i) ++comp_size[find(i)];
    FlipComponents out;
    out.tiling_count = keys.size();
    out.component_count = comp_size.size();
    std::map<int, std::vector<std::uint64_t>> by_twist;
    for (auto& [root, size] : comp_size) by_twist[tw[root]].push_back(size);
    for (auto& [t, v] : by_twist) {
        std::sort(v.begin(), v.end(), std::greater<>());
        out.sizes[t] = v;
    }
    return out;
}

// ---------------------------------------------------------------------
// Replayable certificates.

struct FlipTrace {
    std::string start_text;  // full serialized start tiling
    std::vector<Move> moves;
    std::uint64_t end_hash = 0;
    int pad = 0;  // vertical padding in force when the trace was found

    std::string to_text() const {
        std::ostringstream os;
        os << "fliptrace pad " << pad << " moves " << moves.size() << " end " << end_hash << "\n";
        os << "start\n" << start_text << "endstart\n";
        for (const Move& m : moves) {
            os << (m.kind == Move::Flip ? "flip " : "trit ") << int(m.param) << " " << m.x << " "
               << m.y << " " << m.z << "\n";
        }
        return os.str();
    }

    static FlipTrace from_text(const std::string& text) {
        std::istringstream in(text);
        FlipTrace tr;
        std::string w;
        std::size_t nmoves = 0;
        in >> w;
        if (w != "fliptrace") throw std::invalid_argument("trace: bad header");
        in >> w >> tr.pad >> w >> nmoves >> w >> tr.end_hash;
        std::string line;
        std::getline(in, line);
        std::getline(in, line);
        if (line != "start") throw std::invalid_argument("trace: missing start block");
        while (std::getline(in, line) && line != "endstart") tr.start_text += line + "\n";
        for (std::size_t i = 0; i < nmoves; ++i) {
            std::string kind;
            int param, x, y, z;
            if (!(in >> kind >> param >> x >> y >> z)) throw std::invalid_argument("trace: short move list");
            Move m;
            m.kind = kind == "flip" ? Move::Flip : Move::Trit;
            m.param = static_cast<std::uint8_t>(param);
            m.x = static_cast<std::int16_t>(x);
            m.y = static_cast<std::int16_t>(y);
            m.z = static_cast<std::int16_t>(z);
            tr.moves.push_back(m);
        }
        return tr;
    }
};

inline std::uint64_t state_hash(const std::string& key) {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : key) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

// Replay a trace move by move, revalidating every intermediate state.
// Independent of the search code path.
inline bool verify_certificate(const FlipTrace& tr, std::string* why = nullptr) {
    try {
        CylinderTiling t = parse_tiling(tr.start_text);
        CellGrid g = cells_from_tiling(t);
        for (std::size_t i = 0; i < tr.moves.size(); ++i) {
            apply_move(g, tr.moves[i]);
            tiling_from_cells(g);  // full revalidation
        }
        if (state_hash(g.key()) != tr.end_hash) {
            if (why) *why = "end state hash mismatch";
            return false;
        }
        return true;
    } catch (const std::exception& e) {
        if (why) *why = e.what();
        return false;
    }
}

// ---------------------------------------------------------------------
// Search: flip connectivity within a fixed region.

struct SearchLimits {
    std::size_t max_states = 2000000;
    double max_seconds = 600.0;
};

namespace detail {

struct SideState {
    // keys live in the index map; key_of holds stable pointers into it
    std::vector<const std::string*> key_of;
    std::vector<std::int32_t> parent;
    std::vector<Move> via;
    std::unordered_map<std::string, std::int32_t> index;

    std::int32_t add(std::string key, std::int32_t par, Move mv) {
        auto [it, fresh] = index.emplace(std::move(key), static_cast<std::int32_t>(key_of.size()));
        if (!fresh) return -1;
        key_of.push_back(&it->first);
        parent.push_back(par);
        via.push_back(mv);
        return static_cast<std::int32_t>(key_of.size()) - 1;
    }

    const std::string& key(std::int32_t id) const { return *key_of[static_cast<std::size_t>(id)]; }

    std::vector<Move> path_to_root(std::int32_t id) const {
        std::vector<Move> out;
        while (parent[static_cast<std::size_t>(id)] >= 0) {
            out.push_back(via[static_cast<std::size_t>(id)]);
            id = parent[static_cast<std::size_t>(id)];
        }
        return out;  // moves from id back to root
    }
};

inline int key_mismatch(const std::string& a, const std::string& b) {
    int n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) n += a[i] != b[i];
    return n;
}

inline int key_vertical(const std::string& a) {
    int n = 0;
    for (char c : a) n += c == 'U';
    return n;
}

// Cumulative floor-twist profile in quarter units: entry j is the twist
// accumulated through floor j. The L1 distance between profiles measures
// how far twist still has to travel vertically, which is the long-range
// cost in these searches.
inline std::vector<int> twist_profile(const CellGrid& g) {
    const QuadDisk& d = *g.disk;
    std::vector<int> prof(static_cast<std::size_t>(g.levels));
    int acc = 0;
    PlugMask lower = 0;
    for (int i = 0; i < d.size(); ++i)
        if (g.at(i, 0) == 'D') lower |= 1ull << i;
    for (int z = 0; z < g.levels; ++z) {
        FloorMatching f;
        PlugMask upper = 0;
        for (int i = 0; i < d.size(); ++i) {
            char c = g.at(i, z);
            if (c == 'U') upper |= 1ull << i;
            if (c == 'E') f.add(i, d.nbr[static_cast<std::size_t>(i)][DIR_E]);
            if (c == 'N') f.add(i, d.nbr[static_cast<std::size_t>(i)][DIR_N]);
        }
        acc += static_cast<int>(floor_twist(d, f, lower, upper).num);
        prof[static_cast<std::size_t>(z)] = acc;
        lower = upper;
    }
    return prof;
}

inline int profile_distance(const std::vector<int>& a, const std::vector<int>& b) {
    int n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) n += std::abs(a[i] - b[i]);
    return n;
}

}  // namespace detail

namespace detail {

// One strictly vertical-increasing flip if any: a slab of two stacked
// parallel horizontal dominoes (xz or yz plane, pattern in the
// horizontal configuration).
inline std::optional<Move> improving_flip(const CellGrid& g) {
    const QuadDisk& d = *g.disk;
    for (int z = 0; z + 1 < g.levels; ++z)
        for (int y = 0; y < d.height; ++y)
            for (int x = 0; x < d.width; ++x)
                for (std::uint8_t plane : {std::uint8_t(1), std::uint8_t(2)}) {
                    Move m{Move::Flip, plane, static_cast<std::int16_t>(x),
                           static_cast<std::int16_t>(y), static_cast<std::int16_t>(z)};
                    bool first = false;
                    if (flip_patterns(g, m, &first) && first) return m;
                }
    return std::nullopt;
}

inline bool floor_vertical(const CellGrid& g, int z) {
    for (int i = 0; i < g.disk->size(); ++i) {
        char c = g.at(i, z);
        if (c != 'U' && c != 'D') return false;
    }
    return true;
}

// Bubble the vertical floor pair at levels (z, z+1) to the top by moving
// every horizontal domino above it down two levels (two flips each).
inline void bubble_pair_up(CellGrid& g, int z0, std::vector<Move>& out) {
    const QuadDisk& d = *g.disk;
    for (int z = z0 + 2; z < g.levels; ++z) {
        std::vector<std::pair<int, int>> hs;
        for (int i = 0; i < d.size(); ++i) {
            char c = g.at(i, z);
            if (c == 'E' || c == 'N') {
                int psq = -1, pz = -1;
                partner_cell(g, i, z, &psq, &pz);
                hs.push_back({i, psq});
            }
        }
        for (auto [a, b] : hs) {
            auto [ax, ay] = d.coords[static_cast<std::size_t>(a)];
            auto [bx, by] = d.coords[static_cast<std::size_t>(b)];
            std::uint8_t plane = (ay == by) ? 1 : 2;
            int x = std::min(ax, bx), y = std::min(ay, by);
            for (int zz : {z - 2, z - 1}) {
                Move m{Move::Flip, plane, static_cast<std::int16_t>(x),
                       static_cast<std::int16_t>(y), static_cast<std::int16_t>(zz)};
                apply_flip(g, m);
                out.push_back(m);
            }
        }
    }
}

// Flip-only normalization toward vertical-rich form: greedy vertical
// flips, then repeatedly float fully-vertical floor pairs to the top.
// Returns the recorded moves; afterwards the grid ends in a maximal
// all-vertical tail.
inline std::vector<Move> verticalize(CellGrid& g) {
    std::vector<Move> moves;
    bool progress = true;
    while (progress) {
        progress = false;
        while (auto m = improving_flip(g)) {
            apply_flip(g, *m);
            moves.push_back(*m);
            progress = true;
        }
        // lowest interior vertical pair below a non-vertical floor
        int tail = g.levels;
        while (tail > 0 && floor_vertical(g, tail - 1)) --tail;
        for (int z = 0; z + 1 < tail; ++z) {
            if (floor_vertical(g, z) && floor_vertical(g, z + 1)) {
                bubble_pair_up(g, z, moves);
                progress = true;
                break;
            }
        }
    }
    return moves;
}

// length of the maximal all-vertical tail, rounded down to an even count
// whose cut plug is empty (so the core stays a cylinder tiling)
inline int strippable_tail(const CellGrid& g) {
    int tail = 0;
    while (tail < g.levels && floor_vertical(g, g.levels - 1 - tail)) ++tail;
    if (tail == g.levels) return g.levels;
    // cut level must have empty plug: no 'U' at the cut floor below
    while (tail > 0) {
        int cut = g.levels - tail;  // core keeps levels [0, cut)
        bool empty_plug = true;
        for (int i = 0; i < g.disk->size(); ++i) empty_plug &= g.at(i, cut) != 'D';
        if (empty_plug && tail % 2 == 0) return tail;
        --tail;
    }
    return 0;
}

inline CellGrid take_levels(const CellGrid& g, int levels) {
    CellGrid out;
    out.disk = g.disk;
    out.levels = levels;
    out.code.assign(g.code.begin(), g.code.begin() + static_cast<std::ptrdiff_t>(levels) * g.disk->size());
    return out;
}

}  // namespace detail

// Bidirectional best-first search over flips between two tilings of the
// same region. Returns the move list from a to b, or nothing on budget
// exhaustion (never a negative claim). Priority prefers states close to
// the opposite endpoint, then vertical-rich states.
inline std::optional<std::vector<Move>> find_flip_path(const CellGrid& a, const CellGrid& b,
                                                       const SearchLimits& lim = {}) {
    if (a.levels != b.levels || !a.disk->same_shape(*b.disk)) return std::nullopt;
    std::string ka = a.key(), kb = b.key();
    if (ka == kb) return std::vector<Move>{};

    auto t_start = std::chrono::steady_clock::now();
    auto out_of_time = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count() >
               lim.max_seconds;
    };

    detail::SideState side[2];
    side[0].add(ka, -1, Move{});
    side[1].add(kb, -1, Move{});
    const std::string* goal[2] = {&kb, &ka};
    const std::vector<int> goal_profile[2] = {detail::twist_profile(b), detail::twist_profile(a)};

    CellGrid scratch = a, hscratch = a;
    using QItem = std::pair<std::int64_t, std::pair<int, std::int32_t>>;  // (priority, (side,id))
    std::priority_queue<QItem, std::vector<QItem>, std::greater<>> open;
    auto prio = [&](int s, const std::string& key) {
        hscratch.code.assign(key.begin(), key.end());
        std::int64_t transport =
            detail::profile_distance(detail::twist_profile(hscratch), goal_profile[s]);
        return (transport * 64 + detail::key_mismatch(key, *goal[s])) * 4096 -
               detail::key_vertical(key);
    };
    open.push({prio(0, ka), {0, 0}});
    open.push({prio(1, kb), {1, 0}});
    std::optional<std::pair<std::int32_t, std::int32_t>> meet;  // ids on side 0 / side 1

    auto check_meet = [&](int s, std::int32_t id) {
        const std::string& k = side[s].key(id);
        auto it = side[1 - s].index.find(k);
        if (it == side[1 - s].index.end()) return false;
        meet = s == 0 ? std::make_pair(id, it->second) : std::make_pair(it->second, id);
        return true;
    };

    while (!open.empty() && !meet) {
        if (side[0].key_of.size() + side[1].key_of.size() > lim.max_states || out_of_time())
            return std::nullopt;
        auto [pr, who] = open.top();
        open.pop();
        auto [s, id] = who;
        (void)pr;
        scratch.code.assign(side[s].key(id).begin(), side[s].key(id).end());
        for (const Move& m : enumerate_flips(scratch)) {
            CellGrid nb = scratch;
            detail::apply_flip(nb, m);
            std::int32_t nid = side[s].add(nb.key(), id, m);
            if (nid < 0) continue;
            if (check_meet(s, nid)) break;
            open.push({prio(s, side[s].key(nid)), {s, nid}});
        }
    }
    if (!meet) return std::nullopt;

    auto [ia, ib] = *meet;
    std::vector<Move> fw = side[0].path_to_root(ia);  // meet -> a, reversed below
    std::reverse(fw.begin(), fw.end());
    std::vector<Move> bw = side[1].path_to_root(ib);  // meet -> b, already in replay order
    fw.insert(fw.end(), bw.begin(), bw.end());
    return fw;
}

// Flip connectivity with certificate. Same region and height required.
inline std::optional<FlipTrace> flip_connect(const CylinderTiling& t0, const CylinderTiling& t1,
                                             const SearchLimits& lim = {}) {
    if (!t0.disk->same_shape(*t1.disk) || t0.height() != t1.height())
        throw std::invalid_argument("flip_connect: same region required");
    CellGrid a = cells_from_tiling(t0), b = cells_from_tiling(t1);
    auto path = find_flip_path(a, b, lim);
    if (!path) return std::nullopt;
    FlipTrace tr;
    tr.start_text = serialize_tiling(t0);
    tr.moves = *path;
    tr.end_hash = state_hash(b.key());
    std::string why;
    if (!verify_certificate(tr, &why)) throw std::logic_error("flip_connect produced a bad trace: " + why);
    return tr;
}

// ---------------------------------------------------------------------
// The coarser relation: connect after appending even vertical padding.

enum class SimStatus { Proven, NotSimParity, NotSimTwist, NotSimPhi, Unknown };

struct SimResult {
    SimStatus status = SimStatus::Unknown;
    int pad = 0;  // padding applied to the first tiling
    std::optional<FlipTrace> trace;
};

// Decide t0 ~ t1 by trying padding M = 0, 2, 4, ... Negative answers
// come only from invariants: twist always, phi on 2 x M rectangles.
// Search exhaustion yields Unknown.
inline SimResult sim_connect(const CylinderTiling& t0, const CylinderTiling& t1, int max_pad,
                             const SearchLimits& lim = {}) {
    SimResult res;
    if (!t0.disk->same_shape(*t1.disk)) throw std::invalid_argument("sim: disk mismatch");
    if (!t0.is_cylinder() || !t1.is_cylinder()) throw std::invalid_argument("sim: cylinder tilings required");
    if ((t0.height() - t1.height()) % 2 != 0) {
        res.status = SimStatus::NotSimParity;  // even padding cannot reconcile the heights
        return res;
    }
    if (twist(t0) != twist(t1)) {
        res.status = SimStatus::NotSimTwist;
        return res;
    }
    if (detail::is_two_by_m(*t0.disk) && phi(t0) != phi(t1)) {
        res.status = SimStatus::NotSimPhi;
        return res;
    }
    int h = std::max(t0.height(), t1.height());
    // each pad attempt gets a third of the budget: most certificates are
    // found at small padding, and a bounded overshoot beats starving
    // every attempt when the escalation is long
    SearchLimits per{std::max<std::size_t>(lim.max_states / 3, 1), lim.max_seconds / 3};
    for (int pad = 0; pad <= max_pad; pad += 2) {
        int target_h = h + pad;
        CylinderTiling a = t0.height() == target_h
                               ? t0
                               : concatenate(t0, vertical_tiling(t0.disk, 0, target_h - t0.height()));
        CylinderTiling b = t1.height() == target_h
                               ? t1
                               : concatenate(t1, vertical_tiling(t1.disk, 0, target_h - t1.height()));
        auto tr = flip_connect(a, b, per);
        if (tr) {
            tr->pad = target_h - std::min(t0.height(), t1.height());
            res.status = SimStatus::Proven;
            res.pad = target_h - t0.height();
            res.trace = std::move(tr);
            return res;
        }
    }
    return res;
}

// ---------------------------------------------------------------------
// Constructive migration of a vertical floor pair across the tiling:
// every horizontal domino travels two floors by a pair of flips,
// processed bottom-up (pair starts at the bottom) or top-down.

inline FlipTrace migrate_vertical(const CylinderTiling& t, bool pair_at_bottom = true) {
    if (t.height() < 2) throw std::invalid_argument("migrate: height < 2");
    auto vertical_floor = [&](int j) { return t.floors[static_cast<std::size_t>(j)].empty(); };
    if (pair_at_bottom && (!vertical_floor(0) || !vertical_floor(1)))
        throw std::invalid_argument("migrate: bottom floors are not vertical");
    if (!pair_at_bottom && (!vertical_floor(t.height() - 1) || !vertical_floor(t.height() - 2)))
        throw std::invalid_argument("migrate: top floors are not vertical");

    CellGrid g = cells_from_tiling(t);
    const QuadDisk& d = *t.disk;
    FlipTrace tr;
    tr.start_text = serialize_tiling(t);

    auto do_flip = [&](std::uint8_t plane, int x, int y, int z) {
        Move m{Move::Flip, plane, static_cast<std::int16_t>(x), static_cast<std::int16_t>(y),
               static_cast<std::int16_t>(z)};
        detail::apply_flip(g, m);
        tr.moves.push_back(m);
    };

    auto horiz_at = [&](int z) {
        std::vector<std::pair<int, int>> hs;  // (square a, square b) with a the E/N half
        for (int i = 0; i < d.size(); ++i) {
            char c = g.at(i, z);
            if (c == 'E' || c == 'N') {
                int psq = -1, pz = -1;
                detail::partner_cell(g, i, z, &psq, &pz);
                hs.push_back({i, psq});
            }
        }
        return hs;
    };

    if (pair_at_bottom) {
        for (int z = 2; z < g.levels; ++z)
            for (auto [a2, b2] : horiz_at(z)) {
                auto [ax, ay] = d.coords[static_cast<std::size_t>(a2)];
                auto [bx, by] = d.coords[static_cast<std::size_t>(b2)];
                std::uint8_t plane = (ay == by) ? 1 : 2;
                int x = std::min(ax, bx), y = std::min(ay, by);
                do_flip(plane, x, y, z - 2);  // verticals below become two horizontals
                do_flip(plane, x, y, z - 1);  // stacked horizontals become verticals
            }
    } else {
        for (int z = g.levels - 3; z >= 0; --z)
            for (auto [a2, b2] : horiz_at(z)) {
                auto [ax, ay] = d.coords[static_cast<std::size_t>(a2)];
                auto [bx, by] = d.coords[static_cast<std::size_t>(b2)];
                std::uint8_t plane = (ay == by) ? 1 : 2;
                int x = std::min(ax, bx), y = std::min(ay, by);
                do_flip(plane, x, y, z + 1);
                do_flip(plane, x, y, z);
            }
    }
    tr.end_hash = state_hash(g.key());
    std::string why;
    if (!verify_certificate(tr, &why)) throw std::logic_error("migrate produced a bad trace: " + why);
    return tr;
}

}  // namespace cyltwist
