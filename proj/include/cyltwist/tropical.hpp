#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cyltwist/floors.hpp"
#include "cyltwist/quarter.hpp"
#include "cyltwist/tiling.hpp"
#include "cyltwist/twist.hpp"

namespace cyltwist {

inline constexpr std::int64_t TROP_NEG_INF = std::numeric_limits<std::int64_t>::min() / 4;

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    void reduce() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }
    std::string str() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
};

// Max-plus weighted plug graph: entry (p0,p1) is the maximum floor twist
// (e2 axis, quarter units) over floors from p0 to p1, -inf if none.
struct TropicalGraph {
    DiskPtr disk;
    std::vector<PlugMask> plugs;
    std::vector<std::vector<std::pair<std::int32_t, std::int32_t>>> out;  // (to, w4), sorted by to
    std::size_t edge_count = 0;

    std::size_t size() const { return plugs.size(); }
};

inline TropicalGraph build_tropical_graph(const TransferGraph& g) {
    TropicalGraph t;
    t.disk = g.disk;
    t.plugs = g.plugs;
    t.out.resize(g.out.size());
    for (std::size_t p = 0; p < g.out.size(); ++p) {
        const auto& edges = g.out[p];  // sorted by (to, w4)
        for (std::size_t i = 0; i < edges.size();) {
            std::size_t j = i;
            while (j < edges.size() && edges[j].to == edges[i].to) ++j;
            t.out[p].push_back({edges[i].to, edges[j - 1].w4});  // max weight for this target
            i = j;
        }
        t.edge_count += t.out[p].size();
    }
    return t;
}

// Dense tropical matrix over the plug family, for small disks.
struct TropicalMatrix {
    std::size_t n = 0;
    std::vector<std::int64_t> a;  // n*n, quarter units, TROP_NEG_INF absent

    std::int64_t& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    std::int64_t at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

inline TropicalMatrix tropical_matrix_dense(const TropicalGraph& g, std::size_t max_n = 4096) {
    if (g.size() > max_n) throw BudgetExceeded("tropical matrix: plug family too large for dense form");
    TropicalMatrix m;
    m.n = g.size();
    m.a.assign(m.n * m.n, TROP_NEG_INF);
    for (std::size_t p = 0; p < g.size(); ++p)
        for (auto [to, w] : g.out[p]) m.at(p, static_cast<std::size_t>(to)) = w;
    return m;
}

inline TropicalMatrix tropical_multiply(const TropicalMatrix& x, const TropicalMatrix& y) {
    TropicalMatrix r;
    r.n = x.n;
    r.a.assign(r.n * r.n, TROP_NEG_INF);
    for (std::size_t i = 0; i < r.n; ++i)
        for (std::size_t k = 0; k < r.n; ++k) {
            std::int64_t v = x.at(i, k);
            if (v == TROP_NEG_INF) continue;
            for (std::size_t j = 0; j < r.n; ++j) {
                std::int64_t w = y.at(k, j);
                if (w == TROP_NEG_INF) continue;
                r.at(i, j) = std::max(r.at(i, j), v + w);
            }
        }
    return r;
}

// M^N in the max-plus sense: entry (p0,p1) is the maximum twist over
// length-N tiling paths from p0 to p1 (quarter units).
inline TropicalMatrix tropical_power(const TropicalMatrix& m, int n) {
    if (n < 1) throw std::invalid_argument("tropical_power: N >= 1 required");
    TropicalMatrix r = m;
    for (int k = 1; k < n; ++k) r = tropical_multiply(r, m);
    return r;
}

// Single-row power: max twist over length-N paths from a fixed source.
inline std::vector<std::int64_t> tropical_row_power(const TropicalGraph& g, std::int32_t source,
                                                    int n) {
    std::vector<std::int64_t> v(g.size(), TROP_NEG_INF);
    v[static_cast<std::size_t>(source)] = 0;
    for (int step = 0; step < n; ++step) {
        std::vector<std::int64_t> nv(g.size(), TROP_NEG_INF);
        for (std::size_t p = 0; p < g.size(); ++p) {
            if (v[p] == TROP_NEG_INF) continue;
            for (auto [to, w] : g.out[p])
                nv[static_cast<std::size_t>(to)] = std::max(nv[static_cast<std::size_t>(to)], v[p] + w);
        }
        v = std::move(nv);
    }
    return v;
}

// Maximum cycle mean: value (quarters per step) and one optimal simple
// cycle. Exact: a candidate cycle is improved by positive-cycle
// detection on reduced weights until none exists; the final Bellman
// fixpoint certifies optimality.
struct MeanCycle {
    std::int64_t num4 = 0;  // total cycle weight, quarter units
    int len = 0;
    std::vector<std::int32_t> nodes;           // plug indices, cycle order
    std::vector<std::int64_t> potentials_num;  // Bellman potentials, scaled by len
    std::int64_t potential_scale = 1;

    Rational mean_twist() const {  // in twist units
        Rational r{num4, 4ll * len};
        r.reduce();
        return r;
    }
};

inline MeanCycle max_cycle_mean(const TropicalGraph& g) {
    const std::size_t n = g.size();
    if (n == 0) throw std::invalid_argument("max_cycle_mean: empty graph");

    // initial candidate: best loop if any, else best 2-cycle
    std::vector<std::int32_t> cyc;
    std::int64_t cw = TROP_NEG_INF;
    for (std::size_t p = 0; p < n && cyc.empty(); ++p)
        for (auto [to, w] : g.out[p])
            if (static_cast<std::size_t>(to) == p) {
                cyc = {static_cast<std::int32_t>(p)};
                cw = w;
            }
    if (cyc.empty()) {
        for (std::size_t p = 0; p < n && cyc.empty(); ++p)
            for (auto [to, w] : g.out[p]) {
                if (static_cast<std::size_t>(to) == p) continue;
                for (auto [back, w2] : g.out[static_cast<std::size_t>(to)])
                    if (static_cast<std::size_t>(back) == p) {
                        cyc = {static_cast<std::int32_t>(p), to};
                        cw = w + w2;
                        break;
                    }
                if (!cyc.empty()) break;
            }
    }
    if (cyc.empty()) throw std::logic_error("max_cycle_mean: no cycle in plug graph");

    std::vector<std::int64_t> h(n, 0), nh(n, 0);
    std::vector<std::int32_t> parent(n, -1), nparent(n, -1);
    for (std::size_t improvements = 0;; ++improvements) {
        if (improvements > 100000) throw std::logic_error("max_cycle_mean: too many improvements");
        const std::int64_t q = static_cast<std::int64_t>(cyc.size());
        const std::int64_t p4 = cw;  // candidate mean = p4 / q
        // Longest reduced path values d(v) = max over paths ending at v of
        // sum (q*w - p4). Converges iff the candidate mean is optimal.
        std::fill(h.begin(), h.end(), 0);
        std::fill(parent.begin(), parent.end(), -1);
        bool changed = true;
        std::size_t rounds = 0;
        std::int32_t witness = -1;
        while (changed && rounds <= n + 1) {
            changed = false;
            ++rounds;
            nh = h;
            nparent = parent;
            for (std::size_t u = 0; u < n; ++u) {
                if (h[u] == TROP_NEG_INF) continue;
                for (auto [to, w] : g.out[u]) {
                    std::int64_t cand = h[u] + q * w - p4;
                    if (cand > nh[static_cast<std::size_t>(to)]) {
                        nh[static_cast<std::size_t>(to)] = cand;
                        nparent[static_cast<std::size_t>(to)] = static_cast<std::int32_t>(u);
                        changed = true;
                        witness = to;
                    }
                }
            }
            h.swap(nh);
            parent.swap(nparent);
        }
        if (!changed) {
            MeanCycle out;
            out.num4 = p4;
            out.len = static_cast<int>(q);
            out.nodes = cyc;
            // negated longest-path values act as the diagonal potentials:
            // w + D(to) - D(from) <= mean on every edge, tight on the cycle
            out.potentials_num.resize(n);
            for (std::size_t i = 0; i < n; ++i) out.potentials_num[i] = -h[i];
            out.potential_scale = q;
            return out;
        }
        // still improving after n+1 rounds: a positive reduced cycle lies on
        // the parent chain of the last improved node
        std::int32_t cur = witness;
        for (std::size_t k = 0; k < n; ++k) {
            cur = parent[static_cast<std::size_t>(cur)];
            if (cur < 0) throw std::logic_error("max_cycle_mean: broken parent chain");
        }
        std::vector<std::int32_t> chain;
        std::vector<std::int32_t> pos(n, -1);
        while (pos[static_cast<std::size_t>(cur)] < 0) {
            pos[static_cast<std::size_t>(cur)] = static_cast<std::int32_t>(chain.size());
            chain.push_back(cur);
            cur = parent[static_cast<std::size_t>(cur)];
            if (cur < 0) throw std::logic_error("max_cycle_mean: broken parent chain");
        }
        // chain holds a backward walk: reverse the cycle portion
        std::vector<std::int32_t> ncyc(chain.begin() + pos[static_cast<std::size_t>(cur)], chain.end());
        std::reverse(ncyc.begin(), ncyc.end());
        std::int64_t nw = 0;
        for (std::size_t i = 0; i < ncyc.size(); ++i) {
            std::int32_t u = ncyc[i], v = ncyc[(i + 1) % ncyc.size()];
            std::int64_t w = TROP_NEG_INF;
            for (auto [to, ew] : g.out[static_cast<std::size_t>(u)])
                if (to == v) w = std::max(w, static_cast<std::int64_t>(ew));
            if (w == TROP_NEG_INF) throw std::logic_error("max_cycle_mean: broken cycle edge");
            nw += w;
        }
        // strict improvement in mean: nw/|ncyc| > cw/|cyc|
        if (nw * static_cast<std::int64_t>(cyc.size()) <= cw * static_cast<std::int64_t>(ncyc.size()))
            throw std::logic_error("max_cycle_mean: no progress");
        cyc = std::move(ncyc);
        cw = nw;
    }
}

// Upper bound of Lemma form: for diagonal potentials D (numerators over
// a common scale) and any N, c <= m/N where m = max over plug pairs of
// (M^N)_{p0,p1} + D_{p1} - D_{p0}. Computed by a single vector sweep.
// Returns m in twist units.
inline Rational upper_bound_certificate(const TropicalGraph& g, int n,
                                        const std::vector<std::int64_t>& d_num,
                                        std::int64_t d_scale) {
    if (n < 1) throw std::invalid_argument("upper bound: N >= 1 required");
    if (d_num.size() != g.size()) throw std::invalid_argument("upper bound: potential size mismatch");
    // v[p] = max over p0 of (scale * path weight) - D(p0), over length-k paths p0 -> p
    std::vector<std::int64_t> v(g.size()), nv(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) v[p] = -d_num[p];
    for (int step = 0; step < n; ++step) {
        std::fill(nv.begin(), nv.end(), TROP_NEG_INF);
        for (std::size_t p = 0; p < g.size(); ++p) {
            if (v[p] == TROP_NEG_INF) continue;
            for (auto [to, w] : g.out[p])
                nv[static_cast<std::size_t>(to)] =
                    std::max(nv[static_cast<std::size_t>(to)], v[p] + d_scale * w);
        }
        v.swap(nv);
    }
    std::int64_t m = TROP_NEG_INF;
    for (std::size_t p = 0; p < g.size(); ++p)
        if (v[p] != TROP_NEG_INF) m = std::max(m, v[p] + d_num[p]);
    if (m == TROP_NEG_INF) throw std::logic_error("upper bound: no paths of that length");
    Rational r{m, 4 * d_scale};
    r.reduce();
    return r;
}

// Materialize a witness cork tiling along the cycle: for each edge pick
// the first floor attaining the maximal weight.
inline CylinderTiling witness_tiling(const TropicalGraph& g, const MeanCycle& c) {
    const QuadDisk& d = *g.disk;
    CylinderTiling t;
    t.disk = g.disk;
    t.plugs.push_back(g.plugs[static_cast<std::size_t>(c.nodes[0])]);
    for (std::size_t i = 0; i < c.nodes.size(); ++i) {
        std::int32_t u = c.nodes[i], v = c.nodes[(i + 1) % c.nodes.size()];
        std::int64_t target = TROP_NEG_INF;
        for (auto [to, w] : g.out[static_cast<std::size_t>(u)])
            if (to == v) target = w;
        PlugMask pu = g.plugs[static_cast<std::size_t>(u)], pv = g.plugs[static_cast<std::size_t>(v)];
        bool found = false;
        FloorMatching chosen;
        enumerate_floors(d, pu, [&](const FloorMatching& f, PlugMask p1) {
            if (found || p1 != pv) return;
            if (floor_twist(d, f, pu, pv).num == target) {
                chosen = f;
                found = true;
            }
        });
        if (!found) throw std::logic_error("witness: no floor attains the edge weight");
        t.floors.push_back(chosen);
        t.plugs.push_back(pv);
    }
    t.validate();
    return t;
}

}  // namespace cyltwist
