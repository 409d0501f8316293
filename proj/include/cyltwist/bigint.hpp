#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cyltwist {

// Arbitrary-precision unsigned integer, little-endian base-2^64 limbs.
// Only the operations the transfer counts need: add, multiply by a
// machine word, compare, decimal I/O.
class BigUint {
public:
    BigUint() = default;
    BigUint(std::uint64_t v) {
        if (v) limbs_.push_back(v);
    }

    bool is_zero() const { return limbs_.empty(); }

    BigUint& operator+=(const BigUint& o) {
        if (limbs_.size() < o.limbs_.size()) limbs_.resize(o.limbs_.size(), 0);
        unsigned __int128 carry = 0;
        for (std::size_t i = 0; i < limbs_.size(); ++i) {
            unsigned __int128 s = carry + limbs_[i];
            if (i < o.limbs_.size()) s += o.limbs_[i];
            limbs_[i] = static_cast<std::uint64_t>(s);
            carry = s >> 64;
        }
        if (carry) limbs_.push_back(static_cast<std::uint64_t>(carry));
        return *this;
    }

    friend BigUint operator+(BigUint a, const BigUint& b) { return a += b; }

    BigUint& mul_small(std::uint64_t m) {
        if (m == 0 || is_zero()) {
            limbs_.clear();
            return *this;
        }
        unsigned __int128 carry = 0;
        for (auto& limb : limbs_) {
            unsigned __int128 p = static_cast<unsigned __int128>(limb) * m + carry;
            limb = static_cast<std::uint64_t>(p);
            carry = p >> 64;
        }
        if (carry) limbs_.push_back(static_cast<std::uint64_t>(carry));
        return *this;
    }

    friend bool operator==(const BigUint& a, const BigUint& b) { return a.limbs_ == b.limbs_; }
    friend bool operator!=(const BigUint& a, const BigUint& b) { return !(a == b); }

    friend bool operator<(const BigUint& a, const BigUint& b) {
        if (a.limbs_.size() != b.limbs_.size()) return a.limbs_.size() < b.limbs_.size();
        for (std::size_t i = a.limbs_.size(); i-- > 0;)
            if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i];
        return false;
    }

    std::string to_decimal() const {
        if (is_zero()) return "0";
        std::vector<std::uint64_t> work = limbs_;
        std::string out;
        while (!work.empty()) {
            // divide by 10^19, collect remainder
            unsigned __int128 rem = 0;
            constexpr std::uint64_t base = 10000000000000000000ull;
            for (std::size_t i = work.size(); i-- > 0;) {
                unsigned __int128 cur = (rem << 64) | work[i];
                work[i] = static_cast<std::uint64_t>(cur / base);
                rem = cur % base;
            }
            while (!work.empty() && work.back() == 0) work.pop_back();
            std::string chunk = std::to_string(static_cast<std::uint64_t>(rem));
            if (work.empty()) {
                out.insert(0, chunk);
            } else {
                out.insert(0, std::string(19 - chunk.size(), '0') + chunk);
            }
        }
        return out;
    }

    static BigUint from_decimal(std::string_view s) {
        if (s.empty()) throw std::invalid_argument("empty decimal string");
        BigUint r;
        for (char c : s) {
            if (c < '0' || c > '9') throw std::invalid_argument("bad decimal digit");
            r.mul_small(10);
            r += BigUint(static_cast<std::uint64_t>(c - '0'));
        }
        return r;
    }

private:
    std::vector<std::uint64_t> limbs_;
};

}  // namespace cyltwist
