#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace ivbounds {

// Exact rational scalar. Always canonical (reduced, positive denominator).
class Rational {
public:
    Rational() = default;
    template <std::integral I>
    Rational(I value) : v_(static_cast<long>(value)) {}
    Rational(long num, long den);
    explicit Rational(mpq_class value);

    // Accepts "12", "-0.4555", "1.5e-3" and "3/4". Throws ParseError otherwise.
    static Rational parse(std::string_view text);
    static std::optional<Rational> try_parse(std::string_view text);

    // "p/q" or "p".
    std::string to_string() const;
    // Exactly `digits` fractional digits, or nullopt when not representable.
    std::optional<std::string> to_decimal(int digits) const;
    // Shortest exact decimal with at most max_digits fractional digits, else "p/q".
    std::string pretty(int max_digits = 12) const;

    double to_double() const { return v_.get_d(); }
    int sign() const { return sgn(v_); }
    bool is_zero() const { return sign() == 0; }
    Rational abs() const;
    const mpq_class& mpq() const { return v_; }

    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);
    Rational operator-() const;

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.pretty(); }

private:
    mpq_class v_;
};

inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace ivbounds
