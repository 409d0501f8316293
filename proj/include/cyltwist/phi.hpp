#pragma once

#include <cstdint>
#include <stdexcept>

#include "cyltwist/disk.hpp"
#include "cyltwist/g2.hpp"
#include "cyltwist/tiling.hpp"

namespace cyltwist {

// Homomorphism from the tiling group of a 2 x M rectangle (M >= 3) onto
// F2 semidirect Z/2. Almost every floor maps to the identity; the
// exceptions are floors whose matching crosses the middle of the
// rectangle while one end plug fills half of one side monochromatically.
// A floor's letter also depends on the parity of its position.

namespace detail {

inline bool is_two_by_m(const QuadDisk& d) {
    if (d.width != 2 || d.height < 3) return false;
    return d.size() == 2 * d.height;  // full rectangle
}

inline bool matching_has(const FloorMatching& f, int a, int b) {
    if (a > b) std::swap(a, b);
    for (auto [x, y] : f.pairs)
        if (x == a && y == b) return true;
    return false;
}

// count of plug squares among rows [y_lo, y_hi); -2 if not monochromatic,
// else the common color (+1/-1) via *color_out
inline int plug_rows_profile(const QuadDisk& d, PlugMask p, int y_lo, int y_hi, int* color_out) {
    int count = 0, color = 0;
    for (int y = y_lo; y < y_hi; ++y) {
        for (int x = 0; x < 2; ++x) {
            int i = d.cell(x, y);
            if (i < 0 || !(p >> i & 1)) continue;
            ++count;
            int c = d.color(i);
            if (color == 0)
                color = c;
            else if (color != c)
                color = -2;
        }
    }
    *color_out = color;
    return count;
}

}  // namespace detail

// Letter of one oriented floor (p0, f, p1) at position parity k, as a G2
// generator code: 0 = identity, +-1 = a^+-1, +-2 = b^+-1.
inline std::int8_t phi_floor_letter(const QuadDisk& d, const FloorMatching& f, PlugMask p0,
                                    PlugMask /*p1*/, int parity) {
    const int m = d.height;
    if (m % 2 == 1) {
        const int yc = (m - 1) / 2;
        if (!detail::matching_has(f, d.cell(0, yc), d.cell(1, yc))) return 0;
        int color = 0;
        int cnt = detail::plug_rows_profile(d, p0, 0, yc, &color);
        if (cnt != (m - 1) / 2 || color == -2 || color == 0) return 0;
        // orientation fixed so that twist +1 tilings of the 2x3x4 box meet
        // the letters a and b^-1
        bool class_a = color < 0;
        // (A,0) -> a, (B,0) -> b, (A,1) -> b^-1, (B,1) -> a^-1
        if (parity == 0) return class_a ? +1 : +2;
        return class_a ? -2 : -1;
    }
    const int yl = m / 2 - 1, yu = m / 2;
    bool dom_low = detail::matching_has(f, d.cell(0, yl), d.cell(1, yl));
    bool dom_high = detail::matching_has(f, d.cell(0, yu), d.cell(1, yu));
    int color_low = 0, color_high = 0;
    int cnt_low = detail::plug_rows_profile(d, p0, 0, yl, &color_low);
    int cnt_high = detail::plug_rows_profile(d, p0, yu + 1, m, &color_high);
    bool cond1 = dom_low && cnt_low == m / 2 - 1 && color_low != -2 && color_low != 0;
    bool cond2 = dom_high && cnt_high == m / 2 - 1 && color_high != -2 && color_high != 0;
    if (cond1 == cond2) return 0;  // neither, or the exceptional both-sided floors
    // classes 0..3, oriented like the odd case: white-marked lower-side
    // floors carry a, black-marked upper-side floors carry a^-1
    int cls = cond1 ? (color_low < 0 ? 0 : 1) : (color_high > 0 ? 2 : 3);
    static constexpr std::int8_t table[2][4] = {
        {+1, +2, -1, -2},  // parity 0: a, b, a^-1, b^-1
        {-2, -1, +2, +1},  // parity 1: b^-1, a^-1, b, a
    };
    return table[parity][cls];
}

// phi of a cork tiling on a 2 x M rectangle: the product of floor
// letters (position parities folded in), with the height parity as the
// Z/2 part.
inline G2Element phi(const CylinderTiling& t) {
    const QuadDisk& d = *t.disk;
    if (!detail::is_two_by_m(d))
        throw std::invalid_argument("phi: disk must be a 2 x M rectangle with M >= 3");
    G2Element g;
    for (int j = 0; j < t.height(); ++j) {
        std::int8_t l = phi_floor_letter(d, t.floors[static_cast<std::size_t>(j)],
                                         t.plugs[static_cast<std::size_t>(j)],
                                         t.plugs[static_cast<std::size_t>(j) + 1], j % 2);
        if (l) g.push_reduce(l);
    }
    g.parity = t.height() % 2;
    return g;
}

}  // namespace cyltwist
