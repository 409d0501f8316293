#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "cyltwist/disk.hpp"
#include "cyltwist/tiling.hpp"
#include "cyltwist/twist.hpp"

namespace cyltwist {

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Budget {
    std::size_t max_plugs = 1u << 20;
    std::size_t max_floors = 1u << 27;
};

namespace detail {

inline int mask_imbalance(const QuadDisk& d, PlugMask m) {
    int im = 0;
    for (int i = 0; i < d.size(); ++i)
        if (m >> i & 1) im += d.color(i);
    return im;
}

}  // namespace detail

// All balanced plugs of a balanced disk, ascending mask order. There are
// exactly C(|D|, |D|/2) of them.
inline std::vector<PlugMask> enumerate_plugs(const QuadDisk& d, const Budget& budget = {}) {
    if (!d.balanced) throw std::invalid_argument("enumerate_plugs: disk is not balanced");
    if (d.size() > 26) throw BudgetExceeded("enumerate_plugs: disk too large (" + std::to_string(d.size()) + " squares)");
    PlugMask black = 0;
    for (int i = 0; i < d.size(); ++i)
        if (d.color(i) > 0) black |= 1ull << i;
    std::vector<PlugMask> out;
    const PlugMask full = d.full_mask();
    for (PlugMask m = 0;; ++m) {
        if (__builtin_popcountll(m & black) == __builtin_popcountll(m & ~black & full)) {
            out.push_back(m);
            if (out.size() > budget.max_plugs) throw BudgetExceeded("enumerate_plugs: over plug budget");
        }
        if (m == full) break;
    }
    return out;
}

// Plug family underlying the transfer construction. For balanced disks
// this is the balanced plugs; for odd disks the crossing sets alternate
// between color imbalance 0 and the disk's own imbalance, so both
// families are included.
inline std::vector<PlugMask> transfer_plug_family(const QuadDisk& d, const Budget& budget = {}) {
    if (d.size() > 26) throw BudgetExceeded("transfer_plug_family: disk too large");
    const int delta = d.imbalance();
    PlugMask black = 0;
    for (int i = 0; i < d.size(); ++i)
        if (d.color(i) > 0) black |= 1ull << i;
    std::vector<PlugMask> out;
    const PlugMask full = d.full_mask();
    for (PlugMask m = 0;; ++m) {
        int im = __builtin_popcountll(m & black) - __builtin_popcountll(m & ~black & full);
        if (im == 0 || im == delta) {
            out.push_back(m);
            if (out.size() > budget.max_plugs) throw BudgetExceeded("transfer_plug_family: over plug budget");
        }
        if (m == full) break;
    }
    return out;
}

// Enumerate every floor out of plug p0: ways to cover D minus p0 by
// horizontal dominoes plus monomers, the monomers forming p1. Emission
// order is canonical: at the lowest uncovered square, leave it to p1,
// then pair it east, then pair it south. p1 is balanced whenever p0 has
// the right imbalance; that is automatic, not checked here.
inline void enumerate_floors(const QuadDisk& d, PlugMask p0,
                             const std::function<void(const FloorMatching&, PlugMask)>& cb) {
    FloorMatching matching;
    PlugMask p1 = 0;
    const PlugMask full = d.full_mask();
    std::function<void(PlugMask)> rec = [&](PlugMask covered) {
        if (covered == full) {
            FloorMatching out = matching;
            out.normalize();
            cb(out, p1);
            return;
        }
        int i = __builtin_ctzll(~covered & full);
        // monomer: square joins p1
        p1 |= 1ull << i;
        rec(covered | (1ull << i));
        p1 &= ~(1ull << i);
        // pair east / south (the higher-indexed neighbors)
        for (int dir : {DIR_E, DIR_S}) {
            int j = d.nbr[static_cast<std::size_t>(i)][static_cast<std::size_t>(dir)];
            if (j < 0 || (covered >> j & 1)) continue;
            matching.add(i, j);
            rec(covered | (1ull << i) | (1ull << j));
            matching.pairs.pop_back();
        }
    };
    rec(p0);
}

// Perfect matchings of the residual region D minus forbidden. The empty
// region has exactly one (empty) matching; untileable regions yield none.
inline void tilings_of_planar_region(const QuadDisk& d, PlugMask forbidden,
                                     const std::function<void(const FloorMatching&)>& cb) {
    FloorMatching matching;
    const PlugMask full = d.full_mask();
    std::function<void(PlugMask)> rec = [&](PlugMask covered) {
        if (covered == full) {
            FloorMatching out = matching;
            out.normalize();
            cb(out);
            return;
        }
        int i = __builtin_ctzll(~covered & full);
        for (int dir : {DIR_E, DIR_S}) {
            int j = d.nbr[static_cast<std::size_t>(i)][static_cast<std::size_t>(dir)];
            if (j < 0 || (covered >> j & 1)) continue;
            matching.add(i, j);
            rec(covered | (1ull << i) | (1ull << j));
            matching.pairs.pop_back();
        }
    };
    rec(forbidden);
}

inline std::uint64_t count_planar_tilings(const QuadDisk& d, PlugMask forbidden) {
    std::uint64_t n = 0;
    tilings_of_planar_region(d, forbidden, [&](const FloorMatching&) { ++n; });
    return n;
}

// The plug graph underlying the transfer construction, with edges
// aggregated by (target plug, floor twist weight). Weights are the
// e2-axis floor cocycle in quarter units.
struct TransferEdge {
    std::int32_t to;
    std::int32_t w4;
    std::uint64_t mult;
};

struct TransferGraph {
    DiskPtr disk;
    std::vector<PlugMask> plugs;  // ascending masks
    std::unordered_map<PlugMask, std::int32_t> plug_index;
    std::vector<std::vector<TransferEdge>> out;
    std::size_t floor_count = 0;

    std::int32_t index_of(PlugMask m) const {
        auto it = plug_index.find(m);
        if (it == plug_index.end()) throw std::invalid_argument("transfer graph: unknown plug");
        return it->second;
    }
    std::int32_t empty_plug() const { return index_of(0); }
    std::size_t plug_count() const { return plugs.size(); }
};

inline TransferGraph build_transfer_graph(DiskPtr disk, const Budget& budget = {}) {
    TransferGraph g;
    g.disk = disk;
    g.plugs = transfer_plug_family(*disk, budget);
    g.plug_index.reserve(g.plugs.size() * 2);
    for (std::size_t i = 0; i < g.plugs.size(); ++i)
        g.plug_index.emplace(g.plugs[i], static_cast<std::int32_t>(i));
    g.out.resize(g.plugs.size());
    const QuadDisk& d = *disk;
    for (std::size_t src = 0; src < g.plugs.size(); ++src) {
        std::vector<std::pair<std::int64_t, std::int64_t>> acc;  // (to, w4) -> count via sort
        enumerate_floors(d, g.plugs[src], [&](const FloorMatching& f, PlugMask p1) {
            auto it = g.plug_index.find(p1);
            if (it == g.plug_index.end()) throw std::logic_error("transfer graph: plug family incomplete");
            int w4 = static_cast<int>(floor_twist(d, f, g.plugs[src], p1).num);
            acc.push_back({it->second, w4});
        });
        g.floor_count += acc.size();
        if (g.floor_count > budget.max_floors) throw BudgetExceeded("transfer graph: over floor budget");
        std::sort(acc.begin(), acc.end());
        auto& edges = g.out[src];
        for (std::size_t i = 0; i < acc.size();) {
            std::size_t j = i;
            while (j < acc.size() && acc[j] == acc[i]) ++j;
            edges.push_back({static_cast<std::int32_t>(acc[i].first),
                             static_cast<std::int32_t>(acc[i].second), j - i});
            i = j;
        }
    }
    return g;
}

// Diffable text dump: one line per floor, "p0-bits p1-bits pairs".
inline void dump_transfer_graph(const QuadDisk& d, const std::vector<PlugMask>& plugs,
                                std::string& out) {
    auto bits = [&](PlugMask m) {
        std::string s;
        for (int i = 0; i < d.size(); ++i) s += (m >> i & 1) ? '1' : '0';
        return s;
    };
    for (PlugMask p0 : plugs) {
        enumerate_floors(d, p0, [&](const FloorMatching& f, PlugMask p1) {
            out += bits(p0) + " " + bits(p1) + " ";
            for (std::size_t k = 0; k < f.pairs.size(); ++k) {
                if (k) out += ',';
                out += std::to_string(f.pairs[k].first) + "-" + std::to_string(f.pairs[k].second);
            }
            if (f.pairs.empty()) out += "-";
            out += "\n";
        });
    }
}

}  // namespace cyltwist
