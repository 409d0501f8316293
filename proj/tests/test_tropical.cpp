#include "doctest.h"

#include <functional>
#include <map>
#include <random>
#include <set>

#include "cyltwist/counting.hpp"
#include "cyltwist/moves.hpp"
#include "cyltwist/tropical.hpp"

using namespace cyltwist;

namespace {

TropicalGraph graph_of(int w, int h) {
    return build_tropical_graph(build_transfer_graph(make_rectangle(w, h)));
}

}  // namespace

TEST_CASE("tropical entries match brute-force floor maxima on 2x3") {
    DiskPtr d = make_rectangle(2, 3);
    TransferGraph tg = build_transfer_graph(d);
    TropicalGraph g = build_tropical_graph(tg);
    for (std::size_t p0 = 0; p0 < g.size(); ++p0) {
        std::map<std::int32_t, std::int64_t> expect;
        enumerate_floors(*d, g.plugs[p0], [&](const FloorMatching& f, PlugMask p1) {
            std::int64_t w = floor_twist(*d, f, g.plugs[p0], p1).num;
            std::int32_t to = -1;
            for (std::size_t i = 0; i < g.size(); ++i)
                if (g.plugs[i] == p1) to = static_cast<std::int32_t>(i);
            auto it = expect.find(to);
            if (it == expect.end() || w > it->second) expect[to] = w;
        });
        std::map<std::int32_t, std::int64_t> got;
        for (auto [to, w] : g.out[p0]) got[to] = w;
        CHECK(got == expect);
    }
}

TEST_CASE("vertical edges weigh zero; intersecting plugs have no entry") {
    DiskPtr d = make_rectangle(2, 3);
    TropicalGraph g = graph_of(2, 3);
    TropicalMatrix m = tropical_matrix_dense(g);
    std::size_t e = 0, full = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.plugs[i] == 0) e = i;
        if (g.plugs[i] == d->full_mask()) full = i;
    }
    CHECK(m.at(e, full) == 0);
    // any two intersecting plugs: pick a plug p != empty and itself
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.plugs[i] != 0) CHECK(m.at(i, i) == TROP_NEG_INF);
}

TEST_CASE("tropical powers equal brute-force path maxima on 2x3") {
    DiskPtr d = make_rectangle(2, 3);
    TransferGraph tg = build_transfer_graph(d);
    TropicalGraph g = build_tropical_graph(tg);
    TropicalMatrix m1 = tropical_matrix_dense(g);
    for (int n = 2; n <= 4; ++n) {
        TropicalMatrix mn = tropical_power(m1, n);
        // brute force: DFS over floor sequences
        std::vector<std::vector<std::int64_t>> best(
            g.size(), std::vector<std::int64_t>(g.size(), TROP_NEG_INF));
        std::function<void(std::size_t, std::size_t, int, std::int64_t)> rec =
            [&](std::size_t start, std::size_t cur, int left, std::int64_t acc) {
                if (left == 0) {
                    best[start][cur] = std::max(best[start][cur], acc);
                    return;
                }
                enumerate_floors(*d, g.plugs[cur], [&](const FloorMatching& f, PlugMask p1) {
                    std::int64_t w = floor_twist(*d, f, g.plugs[cur], p1).num;
                    for (std::size_t i = 0; i < g.size(); ++i)
                        if (g.plugs[i] == p1) rec(start, i, left - 1, acc + w);
                });
            };
        for (std::size_t s = 0; s < g.size(); ++s) rec(s, s, n, 0);
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = 0; j < g.size(); ++j) CHECK(mn.at(i, j) == best[i][j]);
    }
}

TEST_CASE("tropical power is associative on 2x3") {
    TropicalGraph g = graph_of(2, 3);
    TropicalMatrix m = tropical_matrix_dense(g);
    TropicalMatrix m5a = tropical_multiply(tropical_power(m, 2), tropical_power(m, 3));
    TropicalMatrix m5b = tropical_multiply(tropical_power(m, 4), m);
    CHECK(m5a.a == m5b.a);
}

TEST_CASE("2x3 maximum cycle mean and closed-path bound") {
    TropicalGraph g = graph_of(2, 3);
    MeanCycle c = max_cycle_mean(g);
    Rational mean = c.mean_twist();
    // closed tiling paths obey |Tw| <= c * N: sample every cycle of length <= 4
    TropicalMatrix m = tropical_matrix_dense(g);
    for (int n = 1; n <= 4; ++n) {
        TropicalMatrix mn = tropical_power(m, n);
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (mn.at(i, i) == TROP_NEG_INF) continue;
            CHECK(mn.at(i, i) * mean.den <= mean.num * 4 * n);
        }
    }
    // witness integrity
    CylinderTiling w = witness_tiling(g, c);
    QuarterInt tw = path_twist(w);
    CHECK(tw.num == c.num4);
    CHECK(tw.is_integer());
    // simple cycle: distinct plugs
    std::set<std::int32_t> uniq(c.nodes.begin(), c.nodes.end());
    CHECK(uniq.size() == c.nodes.size());
}

TEST_CASE("trivial 2x2 disk has zero growth") {
    TropicalGraph g = graph_of(2, 2);
    MeanCycle c = max_cycle_mean(g);
    CHECK(c.mean_twist() == Rational{0, 1});
}

TEST_CASE("upper bound certificates are sound for any potentials") {
    TropicalGraph g = graph_of(2, 3);
    MeanCycle c = max_cycle_mean(g);
    Rational mean = c.mean_twist();
    // zero potentials, N = 1: bound = max entry
    std::vector<std::int64_t> zero(g.size(), 0);
    Rational m1 = upper_bound_certificate(g, 1, zero, 1);
    CHECK(mean.num * m1.den <= m1.num * mean.den);
    // random potentials stay sound
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::int64_t> pot(g.size());
        for (auto& v : pot) v = static_cast<std::int64_t>(rng() % 17) - 8;
        for (int n : {1, 2, 3}) {
            Rational m = upper_bound_certificate(g, n, pot, 1);
            // c <= m/n
            CHECK(mean.num * m.den * n <= m.num * mean.den);
        }
    }
    // the fixpoint potentials witness the exact bound at the cycle length
    Rational tight = upper_bound_certificate(g, c.len, c.potentials_num, c.potential_scale);
    CHECK(tight.num * mean.den == mean.num * tight.den * c.len);
}

TEST_CASE("bounded oscillation of path maxima at cork scale on 2x3") {
    DiskPtr d = make_rectangle(2, 3);
    TropicalGraph g = graph_of(2, 3);
    MeanCycle c = max_cycle_mean(g);
    Rational mean = c.mean_twist();  // quarters per step: 4*mean
    TropicalMatrix m = tropical_matrix_dense(g);
    TropicalMatrix mn = tropical_power(m, 4 * d->size());
    std::int64_t lo = 1ll << 60, hi = -(1ll << 60);
    for (int n = 4 * d->size(); n <= 4 * d->size() + 8; ++n) {
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = 0; j < g.size(); ++j) {
                REQUIRE(mn.at(i, j) != TROP_NEG_INF);
                // deviation of m_N from c*N in quarter units, scaled by den
                std::int64_t dev = mn.at(i, j) * mean.den - 4 * mean.num * n;
                lo = std::min(lo, dev);
                hi = std::max(hi, dev);
            }
        mn = tropical_multiply(mn, m);
    }
    // constants d-, d+ exist: the deviation window is finite and modest
    CHECK(hi - lo <= 4 * 8 * mean.den * d->size());
}
