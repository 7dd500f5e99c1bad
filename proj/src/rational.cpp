#include "ivbounds/rational.hpp"

#include "ivbounds/error.hpp"

#include <cctype>

namespace ivbounds {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NegativeMass: return "NegativeMass";
        case ErrorCode::MassNotOne: return "MassNotOne";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::InvalidSpaces: return "InvalidSpaces";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::EnumerationTooLarge: return "EnumerationTooLarge";
        case ErrorCode::UnknownModel: return "UnknownModel";
        case ErrorCode::IncompatibleSpaces: return "IncompatibleSpaces";
        case ErrorCode::NotBinaryTreatment: return "NotBinaryTreatment";
        case ErrorCode::NotBinaryProblem: return "NotBinaryProblem";
        case ErrorCode::SameTreatment: return "SameTreatment";
        case ErrorCode::Infeasible: return "Infeasible";
        case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
        case ErrorCode::SeedDoesNotRationalize: return "SeedDoesNotRationalize";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::LpFailure: return "LpFailure";
    }
    return "Unknown";
}

Rational::Rational(long num, long den) : v_(num, den) {
    if (den == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
    v_.canonicalize();
}

Rational::Rational(mpq_class value) : v_(std::move(value)) { v_.canonicalize(); }

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

std::optional<mpz_class> parse_int(std::string_view s) {
    bool neg = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) return std::nullopt;
    mpz_class z(std::string(s), 10);
    return neg ? mpz_class(-z) : z;
}

mpz_class pow10(unsigned long k) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, k);
    return r;
}

}  // namespace

std::optional<Rational> Rational::try_parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto num = parse_int(text.substr(0, slash));
        auto den_text = text.substr(slash + 1);
        if (!num || !all_digits(den_text)) return std::nullopt;
        mpz_class den(std::string(den_text), 10);
        if (den == 0) return std::nullopt;
        return Rational(mpq_class(*num, den));
    }

    bool neg = false;
    if (text.front() == '-' || text.front() == '+') {
        neg = text.front() == '-';
        text.remove_prefix(1);
    }
    long exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        auto exp = parse_int(text.substr(e + 1));
        if (!exp || !exp->fits_slong_p() || ::abs(*exp) > 10000) return std::nullopt;
        exponent = exp->get_si();
        text = text.substr(0, e);
    }
    std::string_view int_part = text, frac_part;
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        int_part = text.substr(0, dot);
        frac_part = text.substr(dot + 1);
    }
    if (int_part.empty() && frac_part.empty()) return std::nullopt;
    if (!int_part.empty() && !all_digits(int_part)) return std::nullopt;
    if (!frac_part.empty() && !all_digits(frac_part)) return std::nullopt;

    std::string digits = std::string(int_part) + std::string(frac_part);
    mpz_class num(digits, 10);
    if (neg) num = -num;
    long scale = static_cast<long>(frac_part.size()) - exponent;
    mpq_class v = scale >= 0 ? mpq_class(num, pow10(static_cast<unsigned long>(scale)))
                             : mpq_class(num * pow10(static_cast<unsigned long>(-scale)));
    return Rational(v);
}

Rational Rational::parse(std::string_view text) {
    if (auto r = try_parse(text)) return *r;
    throw ParseError("", "not an exact decimal or fraction: '" + std::string(text) + "'");
}

std::string Rational::to_string() const { return v_.get_str(10); }

std::optional<std::string> Rational::to_decimal(int digits) const {
    if (digits < 0) return std::nullopt;
    mpq_class scaled = v_ * mpq_class(pow10(static_cast<unsigned long>(digits)));
    scaled.canonicalize();
    if (scaled.get_den() != 1) return std::nullopt;
    mpz_class n = scaled.get_num();
    bool neg = n < 0;
    if (neg) n = -n;
    std::string s = n.get_str(10);
    if (digits > 0) {
        if (s.size() <= static_cast<std::size_t>(digits))
            s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
        s.insert(s.size() - static_cast<std::size_t>(digits), ".");
    }
    return neg ? "-" + s : s;
}

std::string Rational::pretty(int max_digits) const {
    for (int k = 0; k <= max_digits; ++k)
        if (auto s = to_decimal(k)) return *s;
    return to_string();
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(v_))); }

Rational& Rational::operator+=(const Rational& o) {
    v_ += o.v_;
    return *this;
}
Rational& Rational::operator-=(const Rational& o) {
    v_ -= o.v_;
    return *this;
}
Rational& Rational::operator*=(const Rational& o) {
    v_ *= o.v_;
    return *this;
}
Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw Error(ErrorCode::InvalidArgument, "division by zero");
    v_ /= o.v_;
    return *this;
}
Rational Rational::operator-() const { return Rational(mpq_class(-v_)); }

}  // namespace ivbounds
