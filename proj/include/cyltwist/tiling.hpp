#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyltwist/disk.hpp"

namespace cyltwist {

using PlugMask = std::uint64_t;

// Planar matching: unordered adjacent square-index pairs, kept sorted
// with a < b and ascending a. This is the reduced floor f*.
struct FloorMatching {
    std::vector<std::pair<std::int16_t, std::int16_t>> pairs;

    void add(int a, int b) {
        if (a > b) std::swap(a, b);
        pairs.push_back({static_cast<std::int16_t>(a), static_cast<std::int16_t>(b)});
    }
    void normalize() { std::sort(pairs.begin(), pairs.end()); }
    PlugMask mask() const {
        PlugMask m = 0;
        for (auto [a, b] : pairs) m |= (1ull << a) | (1ull << b);
        return m;
    }
    bool empty() const { return pairs.empty(); }
    friend bool operator==(const FloorMatching& x, const FloorMatching& y) {
        return x.pairs == y.pairs;
    }
    friend bool operator<(const FloorMatching& x, const FloorMatching& y) {
        return x.pairs < y.pairs;
    }
};

// A tiling of a cork D x [z0, z0+H] with plug-shaped notches at the two
// ends, stored as the alternating plug/floor sequence. Cylinder tilings
// are the special case with empty end plugs. The plug sequence is
// redundant given the matchings but gives O(1) plug access; validate()
// checks the redundancy.
struct CylinderTiling {
    DiskPtr disk;
    int z0 = 0;
    std::vector<PlugMask> plugs;        // H+1 entries, plugs[j] at level z0+j
    std::vector<FloorMatching> floors;  // H entries, floors[j] between levels z0+j, z0+j+1

    int height() const { return static_cast<int>(floors.size()); }
    bool is_cylinder() const { return plugs.front() == 0 && plugs.back() == 0; }

    bool floor_is_vertical(int j) const {
        return floors[static_cast<std::size_t>(j)].empty();
    }

    void validate() const {
        if (!disk) throw std::logic_error("tiling: no disk");
        if (plugs.size() != floors.size() + 1) throw std::logic_error("tiling: plug/floor count mismatch");
        const PlugMask all = disk->full_mask();
        for (std::size_t j = 0; j < floors.size(); ++j) {
            PlugMask p0 = plugs[j], p1 = plugs[j + 1];
            if ((p0 | p1) & ~all) throw std::logic_error("tiling: plug outside disk");
            if (p0 & p1) throw std::logic_error("tiling: consecutive plugs intersect");
            PlugMask covered = p0 | p1;
            for (auto [a, b] : floors[j].pairs) {
                bool adjacent = false;
                for (int k = 0; k < 4; ++k) adjacent |= disk->nbr[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)] == b;
                if (!adjacent) throw std::logic_error("tiling: matching pair not adjacent");
                PlugMask dm = (1ull << a) | (1ull << b);
                if (covered & dm) throw std::logic_error("tiling: matching overlaps");
                covered |= dm;
            }
            if (covered != all) throw std::logic_error("tiling: floor does not cover disk");
        }
    }

    friend bool operator==(const CylinderTiling& a, const CylinderTiling& b) {
        return a.plugs == b.plugs && a.floors == b.floors && a.disk->same_shape(*b.disk);
    }
};

inline PlugMask plug_complement(const QuadDisk& d, PlugMask p) { return d.full_mask() & ~p; }

// All dominoes vertical; plugs alternate p, complement(p), p, ... Height
// N must be even. With p empty this is the vertical cylinder tiling
// (the identity of the tiling group).
inline CylinderTiling vertical_tiling(DiskPtr disk, PlugMask p, int n_floors) {
    if (n_floors < 0 || n_floors % 2 != 0)
        throw std::invalid_argument("vertical tiling needs even nonnegative height");
    CylinderTiling t;
    t.disk = std::move(disk);
    t.floors.resize(static_cast<std::size_t>(n_floors));
    t.plugs.resize(static_cast<std::size_t>(n_floors) + 1);
    for (int j = 0; j <= n_floors; ++j)
        t.plugs[static_cast<std::size_t>(j)] = (j % 2 == 0) ? p : plug_complement(*t.disk, p);
    return t;
}

// Concatenation: valid when the top plug of t0 equals the bottom plug of
// t1 on the same disk. Crossing vertical dominoes at the junction are
// implied by the shared plug.
inline CylinderTiling concatenate(const CylinderTiling& t0, const CylinderTiling& t1) {
    if (!t0.disk->same_shape(*t1.disk)) throw std::invalid_argument("concatenate: disk mismatch");
    if (t0.plugs.back() != t1.plugs.front())
        throw std::invalid_argument("concatenate: junction plugs do not match");
    CylinderTiling r;
    r.disk = t0.disk;
    r.z0 = t0.z0;
    r.plugs = t0.plugs;
    r.plugs.insert(r.plugs.end(), t1.plugs.begin() + 1, t1.plugs.end());
    r.floors = t0.floors;
    r.floors.insert(r.floors.end(), t1.floors.begin(), t1.floors.end());
    return r;
}

// Reflection in z: floor order reversed, each floor's end plugs swap.
inline CylinderTiling invert(const CylinderTiling& t) {
    CylinderTiling r;
    r.disk = t.disk;
    r.z0 = -(t.z0 + t.height());
    r.plugs.assign(t.plugs.rbegin(), t.plugs.rend());
    r.floors.assign(t.floors.rbegin(), t.floors.rend());
    return r;
}

// Mirror image in x. For disks symmetric under x-reflection the result
// lives on an identically shaped disk; twist changes sign.
inline CylinderTiling mirror_x(const CylinderTiling& t) {
    const QuadDisk& d = *t.disk;
    std::string text;
    for (int y = d.height - 1; y >= 0; --y) {
        for (int x = d.width - 1; x >= 0; --x) text += (d.cell(x, y) >= 0 ? '#' : '.');
        text += '\n';
    }
    DiskPtr md = parse_disk(text);
    auto remap = [&](int idx) {
        auto [x, y] = d.coords[static_cast<std::size_t>(idx)];
        int m = md->cell(d.width - 1 - x, y);
        if (m < 0) throw std::logic_error("mirror: shape mismatch");
        return m;
    };
    CylinderTiling r;
    r.disk = md;
    r.z0 = t.z0;
    r.plugs.resize(t.plugs.size());
    for (std::size_t j = 0; j < t.plugs.size(); ++j) {
        PlugMask p = 0;
        for (int i = 0; i < d.size(); ++i)
            if (t.plugs[j] >> i & 1) p |= 1ull << remap(i);
        r.plugs[j] = p;
    }
    r.floors.resize(t.floors.size());
    for (std::size_t j = 0; j < t.floors.size(); ++j) {
        for (auto [a, b] : t.floors[j].pairs) r.floors[j].add(remap(a), remap(b));
        r.floors[j].normalize();
    }
    return r;
}

// ---------------------------------------------------------------------
// Cell-level view and the text format.
//
// Cell codes: 'E'/'W' = horizontal domino half whose partner lies
// East/West; 'N'/'S' = partner North/South; 'U' = lower half of a
// vertical domino (partner in the floor above); 'D' = upper half
// (partner in the floor below); '.' = not in the disk. In floor 1 a 'D'
// marks a bottom notch square and in the top floor a 'U' marks a top
// notch square (cork ends); cylinders have neither.

struct CellGrid {
    DiskPtr disk;
    int levels = 0;                 // number of floors
    std::vector<char> code;        // levels * |D| entries, code[z*|D| + sq]

    char& at(int sq, int z) { return code[static_cast<std::size_t>(z) * disk->size() + sq]; }
    char at(int sq, int z) const { return code[static_cast<std::size_t>(z) * disk->size() + sq]; }

    std::string key() const { return std::string(code.begin(), code.end()); }
};

inline CellGrid cells_from_tiling(const CylinderTiling& t) {
    CellGrid g;
    g.disk = t.disk;
    g.levels = t.height();
    g.code.assign(static_cast<std::size_t>(g.levels) * t.disk->size(), 0);
    const QuadDisk& d = *t.disk;
    for (int j = 0; j < g.levels; ++j) {
        for (auto [a, b] : t.floors[static_cast<std::size_t>(j)].pairs) {
            auto [ax, ay] = d.coords[static_cast<std::size_t>(a)];
            auto [bx, by] = d.coords[static_cast<std::size_t>(b)];
            if (ay == by) {  // horizontal pair; a has smaller index = larger y or smaller x
                int left = ax < bx ? a : b, right = ax < bx ? b : a;
                g.at(left, j) = 'E';
                g.at(right, j) = 'W';
            } else {
                int bot = ay < by ? a : b, top = ay < by ? b : a;
                g.at(bot, j) = 'N';
                g.at(top, j) = 'S';
            }
        }
    }
    for (std::size_t lvl = 0; lvl < t.plugs.size(); ++lvl) {
        PlugMask p = t.plugs[lvl];
        for (int i = 0; i < d.size(); ++i) {
            if (!(p >> i & 1)) continue;
            if (lvl > 0) g.at(i, static_cast<int>(lvl) - 1) = (g.at(i, static_cast<int>(lvl) - 1) == 0) ? 'U' : '?';
            if (lvl < t.plugs.size() - 1) {
                char& c = g.at(i, static_cast<int>(lvl));
                c = (c == 0) ? 'D' : '?';
            }
        }
    }
    for (char c : g.code)
        if (c == 0 || c == '?') throw std::logic_error("cells: inconsistent tiling");
    return g;
}

inline CylinderTiling tiling_from_cells(const CellGrid& g, int z0 = 0) {
    const QuadDisk& d = *g.disk;
    CylinderTiling t;
    t.disk = g.disk;
    t.z0 = z0;
    t.floors.resize(static_cast<std::size_t>(g.levels));
    t.plugs.assign(static_cast<std::size_t>(g.levels) + 1, 0);
    for (int z = 0; z < g.levels; ++z) {
        for (int i = 0; i < d.size(); ++i) {
            char c = g.at(i, z);
            switch (c) {
                case 'E': {
                    int j = d.nbr[static_cast<std::size_t>(i)][DIR_E];
                    if (j < 0 || g.at(j, z) != 'W') throw std::invalid_argument("cells: dangling 'E'");
                    t.floors[static_cast<std::size_t>(z)].add(i, j);
                    break;
                }
                case 'N': {
                    int j = d.nbr[static_cast<std::size_t>(i)][DIR_N];
                    if (j < 0 || g.at(j, z) != 'S') throw std::invalid_argument("cells: dangling 'N'");
                    t.floors[static_cast<std::size_t>(z)].add(i, j);
                    break;
                }
                case 'W':
                case 'S':
                    break;  // handled by partner
                case 'U': {
                    if (z + 1 < g.levels && g.at(i, z + 1) != 'D')
                        throw std::invalid_argument("cells: 'U' without 'D' above");
                    t.plugs[static_cast<std::size_t>(z) + 1] |= 1ull << i;
                    break;
                }
                case 'D': {
                    if (z > 0 && g.at(i, z - 1) != 'U')
                        throw std::invalid_argument("cells: 'D' without 'U' below");
                    if (z == 0) t.plugs[0] |= 1ull << i;
                    break;
                }
                default:
                    throw std::invalid_argument("cells: bad code");
            }
        }
        t.floors[static_cast<std::size_t>(z)].normalize();
    }
    t.validate();
    return t;
}

// Structured text: header "disk <rows> <cols>", then one block per floor
// bottom-to-top, rows top-to-bottom (decreasing y), blank line between
// floors. Bit-exact round trip with parse_tiling.
inline std::string serialize_tiling(const CylinderTiling& t) {
    CellGrid g = cells_from_tiling(t);
    const QuadDisk& d = *t.disk;
    std::string out = "disk " + std::to_string(d.height) + " " + std::to_string(d.width) + "\n";
    for (int z = 0; z < g.levels; ++z) {
        for (int y = d.height - 1; y >= 0; --y) {
            for (int x = 0; x < d.width; ++x) {
                int i = d.cell(x, y);
                out += (i < 0) ? '.' : g.at(i, z);
            }
            out += '\n';
        }
        if (z + 1 < g.levels) out += '\n';
    }
    return out;
}

inline CylinderTiling parse_tiling(const std::string& text) {
    std::istringstream in(text);
    std::string word;
    int rows = 0, cols = 0;
    if (!(in >> word) || word != "disk" || !(in >> rows >> cols) || rows <= 0 || cols <= 0)
        throw std::invalid_argument("tiling: bad header");
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<std::string>> blocks;
    std::vector<std::string> cur;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) {
            if (!cur.empty()) blocks.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(line);
        }
    }
    if (!cur.empty()) blocks.push_back(cur);
    if (blocks.empty()) throw std::invalid_argument("tiling: no floors");

    // disk shape from the non-'.' pattern, identical across floors
    std::string shape;
    for (auto& block : blocks) {
        if (static_cast<int>(block.size()) != rows) throw std::invalid_argument("tiling: floor row count mismatch");
        std::string s;
        for (auto& ln : block) {
            if (static_cast<int>(ln.size()) > cols) throw std::invalid_argument("tiling: row too long");
            std::string padded = ln + std::string(static_cast<std::size_t>(cols) - ln.size(), '.');
            for (char c : padded) s += (c == '.') ? '.' : '#';
        }
        if (shape.empty())
            shape = s;
        else if (shape != s)
            throw std::invalid_argument("tiling: floors disagree on disk shape");
    }
    std::string disk_text;
    for (int r = 0; r < rows; ++r) disk_text += shape.substr(static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)) + "\n";
    DiskPtr d = parse_disk(disk_text);
    if (d->height != rows || d->width != cols) throw std::invalid_argument("tiling: header/grid size mismatch");

    CellGrid g;
    g.disk = d;
    g.levels = static_cast<int>(blocks.size());
    g.code.assign(static_cast<std::size_t>(g.levels) * d->size(), 0);
    for (int z = 0; z < g.levels; ++z) {
        auto& block = blocks[static_cast<std::size_t>(z)];
        for (int r = 0; r < rows; ++r) {
            int y = rows - 1 - r;
            const std::string& ln = block[static_cast<std::size_t>(r)];
            for (int x = 0; x < cols; ++x) {
                char c = x < static_cast<int>(ln.size()) ? ln[static_cast<std::size_t>(x)] : '.';
                int i = d->cell(x, y);
                if (i < 0) {
                    if (c != '.') throw std::invalid_argument("tiling: code on absent square");
                    continue;
                }
                if (std::string("EWNSUD").find(c) == std::string::npos)
                    throw std::invalid_argument(std::string("tiling: bad cell code '") + c + "'");
                g.at(i, z) = c;
            }
        }
    }
    return tiling_from_cells(g);
}

// Human-oriented rendering: same grids with floor labels.
inline std::string render_tiling(const CylinderTiling& t) {
    CellGrid g = cells_from_tiling(t);
    const QuadDisk& d = *t.disk;
    std::string out;
    for (int z = 0; z < g.levels; ++z) {
        out += "floor " + std::to_string(t.z0 + z + 1) + "\n";
        for (int y = d.height - 1; y >= 0; --y) {
            for (int x = 0; x < d.width; ++x) {
                int i = d.cell(x, y);
                out += (i < 0) ? '.' : g.at(i, z);
            }
            out += '\n';
        }
        if (z + 1 < g.levels) out += '\n';
    }
    return out;
}

}  // namespace cyltwist
