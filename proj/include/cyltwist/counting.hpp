#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cyltwist/bigint.hpp"
#include "cyltwist/floors.hpp"
#include "cyltwist/quarter.hpp"

namespace cyltwist {

// Twist-weighted census: coefficient at exponent t = number of tilings
// with twist t. Cylinder censuses live on integer exponents; open cork
// sums legitimately live on the quarter grid, so the key is quarters.
struct TwistPolynomial {
    std::map<std::int64_t, BigUint> coeff_q;  // key in quarter units

    BigUint total() const {
        BigUint s;
        for (auto& [e, c] : coeff_q) s += c;
        return s;
    }
    // integer-exponent view; throws if any support is fractional
    std::map<std::int64_t, BigUint> integer_coefficients() const {
        std::map<std::int64_t, BigUint> out;
        for (auto& [e, c] : coeff_q) {
            if (e % 4 != 0) throw std::logic_error("twist census: fractional exponent " + QuarterInt(e).str());
            out[e / 4] = c;
        }
        return out;
    }
};

namespace detail {

// dense polynomial vector on the quarter grid
struct DensePoly {
    std::int64_t min_e = 0;
    std::vector<BigUint> c;

    bool empty() const { return c.empty(); }
    void add_shifted(const DensePoly& other, std::int64_t shift, std::uint64_t mult) {
        if (other.empty()) return;
        std::int64_t lo = other.min_e + shift;
        std::int64_t hi = lo + static_cast<std::int64_t>(other.c.size());
        if (c.empty()) {
            min_e = lo;
            c.resize(static_cast<std::size_t>(hi - lo));
        } else {
            std::int64_t nlo = std::min(min_e, lo);
            std::int64_t nhi = std::max(min_e + static_cast<std::int64_t>(c.size()), hi);
            if (nlo != min_e || nhi != min_e + static_cast<std::int64_t>(c.size())) {
                std::vector<BigUint> nc(static_cast<std::size_t>(nhi - nlo));
                for (std::size_t i = 0; i < c.size(); ++i) nc[static_cast<std::size_t>(min_e - nlo) + i] = std::move(c[i]);
                c = std::move(nc);
                min_e = nlo;
            }
        }
        for (std::size_t i = 0; i < other.c.size(); ++i) {
            if (other.c[i].is_zero()) continue;
            BigUint term = other.c[i];
            if (mult != 1) term.mul_small(mult);
            c[static_cast<std::size_t>(lo - min_e) + i] += term;
        }
    }
};

}  // namespace detail

// (A^N) entry by repeated vector products over the aggregated edges.
// N = 0 gives the identity matrix entry.
inline BigUint count_cork(const TransferGraph& g, int n, std::int32_t from, std::int32_t to) {
    if (n < 0) throw std::invalid_argument("count_cork: negative height");
    std::vector<BigUint> v(g.plug_count());
    v[static_cast<std::size_t>(from)] = BigUint(1);
    for (int step = 0; step < n; ++step) {
        std::vector<BigUint> nv(g.plug_count());
        for (std::size_t p = 0; p < g.plug_count(); ++p) {
            if (v[p].is_zero()) continue;
            for (const TransferEdge& e : g.out[p]) {
                BigUint term = v[p];
                term.mul_small(e.mult);
                nv[static_cast<std::size_t>(e.to)] += term;
            }
        }
        v = std::move(nv);
    }
    return v[static_cast<std::size_t>(to)];
}

inline BigUint count_tilings(const TransferGraph& g, int n) {
    if (n < 1) throw std::invalid_argument("count_tilings: height must be positive");
    std::int32_t e = g.empty_plug();
    return count_cork(g, n, e, e);
}

// Twist census of D x [0,N]: transfer with per-edge monomial weights.
inline TwistPolynomial twist_census(const TransferGraph& g, int n) {
    if (n < 1) throw std::invalid_argument("twist_census: height must be positive");
    std::vector<detail::DensePoly> v(g.plug_count());
    std::int32_t start = g.empty_plug();
    v[static_cast<std::size_t>(start)].min_e = 0;
    v[static_cast<std::size_t>(start)].c.push_back(BigUint(1));
    for (int step = 0; step < n; ++step) {
        std::vector<detail::DensePoly> nv(g.plug_count());
        for (std::size_t p = 0; p < g.plug_count(); ++p) {
            if (v[p].empty()) continue;
            for (const TransferEdge& e : g.out[p])
                nv[static_cast<std::size_t>(e.to)].add_shifted(v[p], e.w4, e.mult);
        }
        v = std::move(nv);
    }
    TwistPolynomial out;
    const detail::DensePoly& r = v[static_cast<std::size_t>(g.empty_plug())];
    for (std::size_t i = 0; i < r.c.size(); ++i)
        if (!r.c[i].is_zero()) out.coeff_q[r.min_e + static_cast<std::int64_t>(i)] = r.c[i];
    return out;
}

// Least N <= cap with (A^N) entrywise positive, via boolean matrix
// powers. Only for modest plug families.
inline std::optional<int> min_positive_power(const TransferGraph& g, int cap) {
    const std::size_t n = g.plug_count();
    if (n > 4096) throw BudgetExceeded("min_positive_power: plug family too large");
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) reach[i][i] = 1;
    for (int step = 1; step <= cap; ++step) {
        std::vector<std::vector<char>> next(n, std::vector<char>(n, 0));
        for (std::size_t p = 0; p < n; ++p)
            for (const TransferEdge& e : g.out[p])
                for (std::size_t s = 0; s < n; ++s)
                    if (reach[s][p]) next[s][static_cast<std::size_t>(e.to)] = 1;
        reach = std::move(next);
        bool all = true;
        for (auto& row : reach)
            for (char c : row) all &= c != 0;
        if (all) return step;
    }
    return std::nullopt;
}

}  // namespace cyltwist
