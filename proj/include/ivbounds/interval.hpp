#pragma once

#include "ivbounds/rational.hpp"

#include <ostream>
#include <string>

namespace ivbounds {

// Closed interval [lo, hi] with lo <= hi.
class Interval {
public:
    Interval(Rational lo, Rational hi);
    static Interval point(const Rational& x) { return Interval(x, x); }

    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }
    Rational width() const { return hi_ - lo_; }
    bool is_point() const { return lo_ == hi_; }

    bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
    bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
    // Superset and not equal.
    bool properly_contains(const Interval& o) const { return contains(o) && *this != o; }
    // Both endpoints of o lie strictly inside.
    bool contains_in_interior(const Interval& o) const { return lo_ < o.lo_ && o.hi_ < hi_; }

    std::string to_string(int max_digits = 12) const;

    friend bool operator==(const Interval&, const Interval&) = default;
    friend std::ostream& operator<<(std::ostream& os, const Interval& iv) { return os << iv.to_string(); }

private:
    Rational lo_;
    Rational hi_;
};

}  // namespace ivbounds
