#include "sympflow/rational.hpp"

#include "sympflow/errors.hpp"

#include <cctype>
#include <sstream>

namespace sympflow {

namespace {

bool is_integer_literal(std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

BigInt pow10(long k) {
    BigInt out = 1;
    for (long i = 0; i < k; ++i) out *= 10;
    return out;
}

/// cpp_int's string constructor treats a leading 0 as an octal prefix, so
/// decimal digit strings are normalized first.
BigInt parse_digits(std::string_view digits) {
    std::string normalized;
    std::size_t i = 0;
    if (i < digits.size() && (digits[i] == '+' || digits[i] == '-')) {
        if (digits[i] == '-') normalized += '-';
        ++i;
    }
    while (i + 1 < digits.size() && digits[i] == '0') ++i;
    normalized.append(digits.substr(i));
    if (normalized.empty() || normalized == "-") normalized += '0';
    return BigInt(normalized);
}

/// Decimal with optional fractional part and exponent, e.g. "12.5e-3".
Rational parse_decimal(std::string_view s) {
    long exponent = 0;
    const auto epos = s.find_first_of("eE");
    if (epos != std::string_view::npos) {
        const std::string_view expart = s.substr(epos + 1);
        if (!is_integer_literal(expart)) throw ParseError("bad exponent in number '" + std::string(s) + "'");
        exponent = std::stol(std::string(expart));
        s = s.substr(0, epos);
    }
    std::string digits;
    long frac_digits = 0;
    bool seen_dot = false, seen_digit = false;
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        if (s[i] == '-') digits += '-';
        ++i;
    }
    for (; i < s.size(); ++i) {
        const char c = s[i];
        if (c == '.') {
            if (seen_dot) throw ParseError("two decimal points in '" + std::string(s) + "'");
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits += c;
            seen_digit = true;
            if (seen_dot) ++frac_digits;
        } else {
            throw ParseError("invalid character in number '" + std::string(s) + "'");
        }
    }
    if (!seen_digit) throw ParseError("empty number '" + std::string(s) + "'");
    Rational value{parse_digits(digits), pow10(frac_digits)};
    if (exponent > 0) value *= Rational(pow10(exponent));
    if (exponent < 0) value /= Rational(pow10(-exponent));
    return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string compact;
    compact.reserve(text.size());
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
    if (compact.empty()) throw ParseError("empty number");

    const auto slash = compact.find('/');
    if (slash != std::string::npos) {
        const std::string_view num{compact.data(), slash};
        const std::string_view den{compact.data() + slash + 1, compact.size() - slash - 1};
        if (!is_integer_literal(num) || !is_integer_literal(den))
            throw ParseError("fraction parts must be integers: '" + compact + "'");
        const BigInt n = parse_digits(num);
        const BigInt d = parse_digits(den);
        if (d == 0) throw ParseError("zero denominator in '" + compact + "'");
        return Rational{n, d};
    }
    return parse_decimal(compact);
}

std::string to_string(const Rational& r) {
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1) os << '/' << denominator(r);
    return os.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::optional<Rational> exact_sqrt(const Rational& r) {
    if (r < 0) return std::nullopt;
    if (r == 0) return Rational(0);
    const BigInt num = numerator(r);
    const BigInt den = denominator(r);
    const BigInt sn = boost::multiprecision::sqrt(num);
    const BigInt sd = boost::multiprecision::sqrt(den);
    if (sn * sn != num || sd * sd != den) return std::nullopt;
    return Rational(sn, sd);
}

}  // namespace sympflow
