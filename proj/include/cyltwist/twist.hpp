#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cyltwist/disk.hpp"
#include "cyltwist/quarter.hpp"
#include "cyltwist/tiling.hpp"

namespace cyltwist {

// Horizontal axis for shade interactions. Only +-e1 and +-e2 are
// meaningful here; e3 shades are out of scope.
struct UAxis {
    int dx = 0, dy = 1;  // default e2
};
inline constexpr UAxis axis_e1() { return {1, 0}; }
inline constexpr UAxis axis_e2() { return {0, 1}; }

// ---------------------------------------------------------------------
// Pairwise interaction on 3D dominoes (the definition, kept as an
// independent cross-check of the per-floor route).

// A 3D domino as its two unit cubes. v() points from the white cube
// center to the black cube center; cube color is (-1)^(x+y+z).
struct Domino3 {
    std::array<int, 3> c0{}, c1{};  // lattice corners of the two cubes

    static int cube_color(const std::array<int, 3>& c) {
        return ((c[0] + c[1] + c[2]) % 2 + 2) % 2 == 0 ? +1 : -1;
    }
    std::array<int, 3> v() const {
        const auto& black = cube_color(c0) > 0 ? c0 : c1;
        const auto& white = cube_color(c0) > 0 ? c1 : c0;
        return {black[0] - white[0], black[1] - white[1], black[2] - white[2]};
    }
    std::array<int, 3> lo() const {
        return {std::min(c0[0], c1[0]), std::min(c0[1], c1[1]), std::min(c0[2], c1[2])};
    }
    std::array<int, 3> hi() const {
        return {std::max(c0[0], c1[0]) + 1, std::max(c0[1], c1[1]) + 1, std::max(c0[2], c1[2]) + 1};
    }
};

// d1 meets the open u-shade of d0? Exact integer comparisons; the shade
// is the interior of (d0 + [0,inf)u) minus d0.
inline bool in_shade(const Domino3& d0, const Domino3& d1, UAxis u) {
    auto a_lo = d0.lo(), a_hi = d0.hi(), b_lo = d1.lo(), b_hi = d1.hi();
    // open overlap in z always required
    if (!(std::max(a_lo[2], b_lo[2]) < std::min(a_hi[2], b_hi[2]))) return false;
    if (u.dx != 0) {
        if (!(std::max(a_lo[1], b_lo[1]) < std::min(a_hi[1], b_hi[1]))) return false;
        return u.dx > 0 ? b_hi[0] > a_hi[0] : b_lo[0] < a_lo[0];
    }
    if (!(std::max(a_lo[0], b_lo[0]) < std::min(a_hi[0], b_hi[0]))) return false;
    return u.dy > 0 ? b_hi[1] > a_hi[1] : b_lo[1] < a_lo[1];
}

// tau^u(d0, d1) in quarter units: det(v(d1), v(d0), u)/4 when d1 meets
// the u-shade of d0, else 0.
inline int tau_pair_q(const Domino3& d0, const Domino3& d1, UAxis u) {
    if (!in_shade(d0, d1, u)) return 0;
    auto v1 = d1.v(), v0 = d0.v();
    std::array<int, 3> w{u.dx, u.dy, 0};
    return v1[0] * (v0[1] * w[2] - v0[2] * w[1]) - v1[1] * (v0[0] * w[2] - v0[2] * w[0]) +
           v1[2] * (v0[0] * w[1] - v0[1] * w[0]);
}

inline std::vector<Domino3> dominoes_of(const CylinderTiling& t) {
    const QuadDisk& d = *t.disk;
    std::vector<Domino3> out;
    for (int j = 0; j < t.height(); ++j) {
        for (auto [a, b] : t.floors[static_cast<std::size_t>(j)].pairs) {
            auto [ax, ay] = d.coords[static_cast<std::size_t>(a)];
            auto [bx, by] = d.coords[static_cast<std::size_t>(b)];
            int z = t.z0 + j;
            out.push_back({{ax, ay, z}, {bx, by, z}});
        }
    }
    for (std::size_t lvl = 1; lvl + 1 < t.plugs.size(); ++lvl) {
        for (int i = 0; i < d.size(); ++i) {
            if (!(t.plugs[lvl] >> i & 1)) continue;
            auto [x, y] = d.coords[static_cast<std::size_t>(i)];
            int z = t.z0 + static_cast<int>(lvl);
            out.push_back({{x, y, z - 1}, {x, y, z}});
        }
    }
    return out;
}

// The definition of twist as a double sum over ordered domino pairs.
// Quadratic; retained as the oracle for the per-floor route below.
inline QuarterInt twist_pairwise_q(const CylinderTiling& t, UAxis u = axis_e2()) {
    if (!t.is_cylinder()) throw std::invalid_argument("twist: not a cylinder tiling");
    auto ds = dominoes_of(t);
    std::int64_t total = 0;
    for (std::size_t i = 0; i < ds.size(); ++i)
        for (std::size_t j = 0; j < ds.size(); ++j)
            if (i != j) total += tau_pair_q(ds[i], ds[j], u);
    return QuarterInt(total);
}

// ---------------------------------------------------------------------
// Per-floor route: tau^u(d, s) for a planar domino d and a plug square s,
// the normalized two-term sum over the vertical column s x [0,2] against
// d x [0,1]. Reduces to a sign rule on colors and relative position.

// Quarter-unit value of tau^{e2}(d, s): nonzero only for x-oriented
// dominoes and s in one of their two columns.
inline int tau_planar_e2_q(const QuadDisk& d, int a, int b, int s) {
    auto [ax, ay] = d.coords[static_cast<std::size_t>(a)];
    auto [bx, by] = d.coords[static_cast<std::size_t>(b)];
    if (ay != by) return 0;  // y-oriented dominoes never meet e2 shades sideways
    auto [sx, sy] = d.coords[static_cast<std::size_t>(s)];
    if (sx != ax && sx != bx) return 0;
    int left = ax < bx ? a : b;
    int base = d.color(s) * d.color(left);
    return sy > ay ? base : -base;
}

inline int tau_planar_e1_q(const QuadDisk& d, int a, int b, int s) {
    auto [ax, ay] = d.coords[static_cast<std::size_t>(a)];
    auto [bx, by] = d.coords[static_cast<std::size_t>(b)];
    if (ax != bx) return 0;
    auto [sx, sy] = d.coords[static_cast<std::size_t>(s)];
    if (sy != ay && sy != by) return 0;
    int bottom = ay < by ? a : b;
    int base = d.color(s) * d.color(bottom);
    return sx < ax ? base : -base;
}

inline int tau_planar_q(const QuadDisk& d, int a, int b, int s, UAxis u) {
    if (u.dx == 0 && u.dy == 1) return tau_planar_e2_q(d, a, b, s);
    if (u.dx == 1 && u.dy == 0) return tau_planar_e1_q(d, a, b, s);
    throw std::invalid_argument("tau_planar: axis must be e1 or e2");
}

// tau^u(f, p): sum over dominoes of the matching and squares of the plug.
inline int tau_floor_plug_q(const QuadDisk& d, const FloorMatching& f, PlugMask p, UAxis u) {
    int total = 0;
    for (auto [a, b] : f.pairs)
        for (int s = 0; s < d.size(); ++s)
            if (p >> s & 1) total += tau_planar_q(d, a, b, s, u);
    return total;
}

// tau^u(f; p_lower, p_upper) = tau^u(f, p_upper) - tau^u(f, p_lower).
// Antisymmetric under swapping the end plugs.
inline QuarterInt floor_twist(const QuadDisk& d, const FloorMatching& f, PlugMask p_lower,
                              PlugMask p_upper, UAxis u = axis_e2()) {
    return QuarterInt(tau_floor_plug_q(d, f, p_upper, u) - tau_floor_plug_q(d, f, p_lower, u));
}

// Sum of floor contributions along the plug/floor sequence. Defined for
// corks; integer for closed paths (equal end plugs), quarter-valued in
// general.
inline QuarterInt path_twist(const CylinderTiling& t, UAxis u = axis_e2()) {
    QuarterInt total;
    for (int j = 0; j < t.height(); ++j)
        total += floor_twist(*t.disk, t.floors[static_cast<std::size_t>(j)],
                             t.plugs[static_cast<std::size_t>(j)],
                             t.plugs[static_cast<std::size_t>(j) + 1], u);
    return total;
}

// Twist of a cylinder tiling: always an integer, independent of u.
inline int twist(const CylinderTiling& t, UAxis u = axis_e2()) {
    if (!t.is_cylinder()) throw std::invalid_argument("twist: not a cylinder tiling");
    QuarterInt q = path_twist(t, u);
    if (!q.is_integer())
        throw std::logic_error("twist: non-integral total " + q.str() + " (invariant violation)");
    return static_cast<int>(q.to_integer());
}

}  // namespace cyltwist
