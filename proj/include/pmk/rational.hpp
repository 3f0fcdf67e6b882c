#pragma once

// Exact rational parameters (deltas, epsilons, grid values). Distances stay
// integral; rationals only enter through user-supplied error parameters.

#include <boost/rational.hpp>
#include <cstdint>
#include <string>

#include "pmk/core.hpp"

namespace pmk {

using Rat = boost::rational<long long>;

inline Rat make_rat(long long num, long long den = 1) { return Rat(num, den); }

// Accepts "a", "a/b", and a leading minus.
Rat parse_rat(const std::string& s);

std::string to_string(const Rat& r);

inline long long floor_rat(const Rat& r) {
    long long q = r.numerator() / r.denominator();
    if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
    return q;
}

inline long long ceil_rat(const Rat& r) { return -floor_rat(-r); }

inline double to_double(const Rat& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

} // namespace pmk
