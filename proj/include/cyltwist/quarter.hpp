#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cyltwist {

// Exact quarter-integer: value = num/4. All twist bookkeeping stays in
// this type; no floating point anywhere.
struct QuarterInt {
    std::int64_t num = 0;  // value in units of 1/4

    QuarterInt() = default;
    explicit QuarterInt(std::int64_t quarters) : num(quarters) {}
    static QuarterInt from_int(std::int64_t n) { return QuarterInt(4 * n); }

    bool is_integer() const { return num % 4 == 0; }
    std::int64_t to_integer() const {
        if (!is_integer()) throw std::logic_error("quarter value " + str() + " is not an integer");
        return num / 4;
    }

    QuarterInt& operator+=(QuarterInt o) { num += o.num; return *this; }
    QuarterInt& operator-=(QuarterInt o) { num -= o.num; return *this; }
    friend QuarterInt operator+(QuarterInt a, QuarterInt b) { return QuarterInt(a.num + b.num); }
    friend QuarterInt operator-(QuarterInt a, QuarterInt b) { return QuarterInt(a.num - b.num); }
    friend QuarterInt operator-(QuarterInt a) { return QuarterInt(-a.num); }
    friend bool operator==(QuarterInt a, QuarterInt b) { return a.num == b.num; }
    friend bool operator!=(QuarterInt a, QuarterInt b) { return a.num != b.num; }
    friend bool operator<(QuarterInt a, QuarterInt b) { return a.num < b.num; }

    std::string str() const {
        std::int64_t n = num;
        if (n % 4 == 0) return std::to_string(n / 4);
        if (n % 2 == 0) return std::to_string(n / 2) + "/2";
        return std::to_string(n) + "/4";
    }
};

}  // namespace cyltwist
