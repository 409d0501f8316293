#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

namespace cyltwist {

// The group F2 semidirect Z/2: generators a, b and an involution c with
// c a c = b^{-1}, c b c = a^{-1}. Elements are (reduced word, parity);
// the normal form is unique, so equality is structural.
//
// Letters: +1 = a, -1 = a^{-1}, +2 = b, -2 = b^{-1}.
struct G2Element {
    std::vector<std::int8_t> word;
    int parity = 0;

    static G2Element identity() { return {}; }
    static G2Element gen(std::int8_t letter) {
        G2Element g;
        g.word.push_back(letter);
        return g;
    }
    static G2Element gen_c() {
        G2Element g;
        g.parity = 1;
        return g;
    }

    bool is_identity() const { return word.empty() && parity == 0; }

    // conjugation by c on a letter: a <-> b^{-1}, b <-> a^{-1}
    static std::int8_t twist_letter(std::int8_t l) {
        std::int8_t s = l > 0 ? 1 : -1;
        std::int8_t abs = l > 0 ? l : static_cast<std::int8_t>(-l);
        return static_cast<std::int8_t>(-s * (3 - abs));
    }

    void push_reduce(std::int8_t l) {
        if (!word.empty() && word.back() == -l)
            word.pop_back();
        else
            word.push_back(l);
    }

    friend G2Element operator*(const G2Element& x, const G2Element& y) {
        G2Element r = x;
        for (std::int8_t l : y.word) r.push_reduce(x.parity ? twist_letter(l) : l);
        r.parity = x.parity ^ y.parity;
        return r;
    }

    G2Element inverse() const {
        G2Element r;
        for (auto it = word.rbegin(); it != word.rend(); ++it)
            r.word.push_back(parity ? twist_letter(static_cast<std::int8_t>(-*it))
                                    : static_cast<std::int8_t>(-*it));
        r.parity = parity;
        return r;
    }

    friend bool operator==(const G2Element& x, const G2Element& y) {
        return x.parity == y.parity && x.word == y.word;
    }
    friend bool operator!=(const G2Element& x, const G2Element& y) { return !(x == y); }

    std::string str() const {
        if (word.empty() && parity == 0) return "e";
        std::string s;
        for (std::int8_t l : word) {
            if (!s.empty()) s += ' ';
            s += (std::abs(l) == 1) ? 'a' : 'b';
            if (l < 0) s += "^-1";
        }
        if (parity) {
            if (!s.empty()) s += ' ';
            s += 'c';
        }
        return s;
    }
};

}  // namespace cyltwist
