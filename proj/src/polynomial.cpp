#include "sympflow/polynomial.hpp"

#include "sympflow/errors.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace sympflow {

Polynomial Polynomial::monomial(int q_exp, int p_exp, const Rational& c) {
    if (q_exp < 0 || p_exp < 0) throw DomainError("negative monomial exponent");
    Polynomial out;
    out.add_term({q_exp, p_exp}, c);
    return out;
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Monomial{0, 0});
}

int Polynomial::degree() const {
    if (terms_.empty()) return -1;
    // graded-lex order puts a maximal-degree term first
    const auto& m = terms_.begin()->first;
    return m.q_exp + m.p_exp;
}

Rational Polynomial::coefficient(int q_exp, int p_exp) const {
    const auto it = terms_.find({q_exp, p_exp});
    return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(Monomial m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial Polynomial::derivative_q() const {
    Polynomial out;
    for (const auto& [m, c] : terms_)
        if (m.q_exp > 0) out.add_term({m.q_exp - 1, m.p_exp}, c * m.q_exp);
    return out;
}

Polynomial Polynomial::derivative_p() const {
    Polynomial out;
    for (const auto& [m, c] : terms_)
        if (m.p_exp > 0) out.add_term({m.q_exp, m.p_exp - 1}, c * m.p_exp);
    return out;
}

Polynomial Polynomial::antiderivative_q() const {
    Polynomial out;
    for (const auto& [m, c] : terms_)
        out.add_term({m.q_exp + 1, m.p_exp}, c / (m.q_exp + 1));
    return out;
}

Polynomial Polynomial::antiderivative_p() const {
    Polynomial out;
    for (const auto& [m, c] : terms_)
        out.add_term({m.q_exp, m.p_exp + 1}, c / (m.p_exp + 1));
    return out;
}

Polynomial Polynomial::at_p_zero() const {
    Polynomial out;
    for (const auto& [m, c] : terms_)
        if (m.p_exp == 0) out.add_term(m, c);
    return out;
}

double Polynomial::eval(double q, double p) const {
    double acc = 0.0;
    for (const auto& [m, c] : terms_)
        acc += to_double(c) * std::pow(q, m.q_exp) * std::pow(p, m.p_exp);
    return acc;
}

Polynomial Polynomial::operator-() const {
    Polynomial out = *this;
    for (auto& [m, c] : out.terms_) c = -c;
    return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
    for (const auto& [m, c] : other.terms_) add_term(m, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, coeff] : terms_) coeff *= c;
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_)
            out.add_term({ma.q_exp + mb.q_exp, ma.p_exp + mb.p_exp}, ca * cb);
    return out;
}

namespace {

std::string monomial_text(Polynomial::Monomial m) {
    std::string out;
    if (m.q_exp > 0) {
        out += 'q';
        if (m.q_exp > 1) out += '^' + std::to_string(m.q_exp);
    }
    if (m.p_exp > 0) {
        if (!out.empty()) out += '*';
        out += 'p';
        if (m.p_exp > 1) out += '^' + std::to_string(m.p_exp);
    }
    return out;
}

}  // namespace

std::string to_string(const Polynomial& poly) {
    if (poly.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : poly.terms()) {
        const bool negative = c < 0;
        const Rational mag = negative ? Rational(-c) : c;
        if (first) {
            if (negative) out += '-';
            first = false;
        } else {
            out += negative ? " - " : " + ";
        }
        const std::string vars = monomial_text(m);
        if (vars.empty()) {
            out += to_string(mag);
        } else if (mag == 1) {
            out += vars;
        } else {
            out += to_string(mag) + "*" + vars;
        }
    }
    return out;
}

namespace {

/// Recursive-descent parser over the whitespace-stripped expression.
class PolyParser {
public:
    explicit PolyParser(std::string_view text) {
        src_.reserve(text.size());
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c))) src_ += c;
    }

    Polynomial parse() {
        if (src_.empty()) throw ParseError("empty polynomial expression");
        Polynomial out;
        bool negative = consume_sign(true);
        while (true) {
            Polynomial term = parse_term();
            out += negative ? -term : term;
            if (pos_ == src_.size()) break;
            if (src_[pos_] == '+' || src_[pos_] == '-') {
                negative = consume_sign(false);
            } else {
                fail("expected '+' or '-'");
            }
        }
        return out;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError("polynomial parse error at position " + std::to_string(pos_) + ": " + why +
                         " in '" + src_ + "'");
    }

    bool consume_sign(bool optional) {
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
            const bool neg = src_[pos_] == '-';
            ++pos_;
            return neg;
        }
        if (!optional) fail("expected sign");
        return false;
    }

    Polynomial parse_term() {
        Polynomial term = parse_factor();
        while (pos_ < src_.size() && src_[pos_] == '*') {
            ++pos_;
            term = term * parse_factor();
        }
        if (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c != '+' && c != '-') fail(std::string("unexpected character '") + c + "'");
        }
        return term;
    }

    Polynomial parse_factor() {
        if (pos_ >= src_.size()) fail("expected factor");
        const char c = src_[pos_];
        if (c == 'q' || c == 'p') {
            ++pos_;
            const int exp = parse_exponent();
            return c == 'q' ? Polynomial::monomial(exp, 0, 1) : Polynomial::monomial(0, exp, 1);
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Polynomial::constant(parse_number());
        fail(std::string("unexpected character '") + c + "'");
    }

    int parse_exponent() {
        if (pos_ >= src_.size() || src_[pos_] != '^') return 1;
        ++pos_;
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected integer exponent after '^'");
        const long exp = std::stol(src_.substr(start, pos_ - start));
        if (exp > 1000) fail("exponent too large");
        return static_cast<int>(exp);
    }

    Rational parse_number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                ++pos_;
            } else if (c == 'e' || c == 'E') {
                // exponent only if followed by digits (optionally signed)
                std::size_t look = pos_ + 1;
                if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
                if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
                    pos_ = look + 1;
                    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
                }
                break;
            } else {
                break;
            }
        }
        std::string literal = src_.substr(start, pos_ - start);
        // fractional coefficient "a/b"
        if (pos_ < src_.size() && src_[pos_] == '/') {
            ++pos_;
            const std::size_t dstart = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            if (pos_ == dstart) fail("expected denominator digits after '/'");
            literal += '/' + src_.substr(dstart, pos_ - dstart);
        }
        try {
            return parse_rational(literal);
        } catch (const ParseError& e) {
            fail(e.what());
        }
    }

    std::string src_;
    std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text) { return PolyParser(text).parse(); }

}  // namespace sympflow
