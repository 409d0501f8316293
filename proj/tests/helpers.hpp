#pragma once

// Shared test utilities: constructions that reproduce documented
// examples without enumerating intractable spaces.

#include <functional>
#include <optional>

#include "cyltwist/moves.hpp"
#include "cyltwist/tiling.hpp"
#include "cyltwist/twist.hpp"

namespace cyltwist::testing {

// Depth-first search for height-2 tilings admitting no flips at all,
// streamed in canonical cell order. Placement prunes on any completed
// flippable slab, which thins the space enough to make 8x8 practical.
inline void no_flip_blocks(DiskPtr disk, const std::function<bool(const CylinderTiling&)>& take) {
    const QuadDisk& d = *disk;
    CellGrid g;
    g.disk = disk;
    g.levels = 2;
    g.code.assign(static_cast<std::size_t>(2) * d.size(), 0);

    auto covered = [&](int sq, int z) { return g.at(sq, z) != 0; };
    // any fully covered flip slab touching (sq,z)?
    auto flippable_near = [&](int sq, int z) {
        auto [x, y] = d.coords[static_cast<std::size_t>(sq)];
        for (int x0 = x - 1; x0 <= x; ++x0)
            for (int y0 = y - 1; y0 <= y; ++y0)
                for (std::uint8_t plane = 0; plane < 3; ++plane)
                    for (int z0 = z - 1; z0 <= z; ++z0) {
                        Move m{Move::Flip, plane, static_cast<std::int16_t>(x0),
                               static_cast<std::int16_t>(y0), static_cast<std::int16_t>(z0)};
                        bool first;
                        if (detail::flip_patterns(g, m, &first)) return true;
                    }
        return false;
    };

    bool stop = false;
    std::function<void(int)> rec = [&](int cell) {
        if (stop) return;
        while (cell < 2 * d.size() && covered(cell / 2, cell % 2)) ++cell;
        if (cell == 2 * d.size()) {
            CylinderTiling t = tiling_from_cells(g);
            if (enumerate_flips(t).empty()) stop = take(t);
            return;
        }
        int sq = cell / 2, z = cell % 2;
        auto try_place = [&](int s2, int z2) {
            if (stop) return;
            detail::write_domino(g, sq, z, s2, z2);
            if (!flippable_near(sq, z) && !flippable_near(s2, z2)) rec(cell + 1);
            g.at(sq, z) = 0;
            g.at(s2, z2) = 0;
        };
        for (int dir : {DIR_E, DIR_S}) {
            int j = d.nbr[static_cast<std::size_t>(sq)][static_cast<std::size_t>(dir)];
            if (j >= 0 && !covered(j, z)) try_place(j, z);
        }
        if (z == 0 && !covered(sq, 1)) try_place(sq, 1);
        // also the lower-index planar neighbors on this level may be open
        // when the level-0 cell was taken vertically
        for (int dir : {DIR_W, DIR_N}) {
            int j = d.nbr[static_cast<std::size_t>(sq)][static_cast<std::size_t>(dir)];
            if (j >= 0 && !covered(j, z) && (j * 2 + z) > cell) try_place(j, z);
        }
    };
    rec(0);
}

// Rotate a height-H tiling of a square w x w disk by 90 degrees.
inline CylinderTiling rotate_tiling(const CylinderTiling& t) {
    const QuadDisk& d = *t.disk;
    int w = d.width;
    auto remap = [&](int idx) {
        auto [x, y] = d.coords[static_cast<std::size_t>(idx)];
        return d.cell(y, w - 1 - x);
    };
    CylinderTiling r;
    r.disk = t.disk;
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
    r.validate();
    return r;
}

// A tiling of the w x w x 4 box with twist 0 admitting no flips: two
// stacked no-flip height-2 blocks of opposite twist, stacked so the
// junction creates no new flip.
inline CylinderTiling no_flip_tower(DiskPtr d) {
    std::optional<CylinderTiling> result;
    std::vector<CylinderTiling> pool;
    no_flip_blocks(d, [&](const CylinderTiling& block) {
        pool.push_back(block);
        int tw = twist(block);
        for (const CylinderTiling* lower : {&block}) {
            for (const CylinderTiling& upper0 :
                 {rotate_tiling(*lower), mirror_x(*lower), invert(*lower), *lower}) {
                CylinderTiling upper = upper0;
                if (!upper.disk->same_shape(*d)) continue;
                upper.disk = d;
                if (twist(upper) != -tw) continue;
                CylinderTiling tower = concatenate(*lower, upper);
                if (twist(tower) == 0 && enumerate_flips(tower).empty()) {
                    result = tower;
                    return true;
                }
            }
        }
        return pool.size() > 400;  // give up eventually
    });
    if (!result) throw std::logic_error("no_flip_tower: construction failed");
    return *result;
}

}  // namespace cyltwist::testing
