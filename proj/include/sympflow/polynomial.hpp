#pragma once

#include "sympflow/rational.hpp"

#include <map>
#include <string>
#include <string_view>

namespace sympflow {

/// Exact bivariate polynomial in the canonical coordinates (q, p) with
/// rational coefficients, kept in canonical form: no zero coefficients are
/// stored and terms are ordered graded-lexicographically (total degree
/// descending, then q-power descending). Structural equality of the term
/// maps is therefore semantic equality.
class Polynomial {
public:
    struct Monomial {
        int q_exp = 0;
        int p_exp = 0;
        friend bool operator==(Monomial a, Monomial b) {
            return a.q_exp == b.q_exp && a.p_exp == b.p_exp;
        }
    };

    /// Graded-lex: higher total degree first, then q before p.
    struct MonomialOrder {
        bool operator()(Monomial a, Monomial b) const {
            const int da = a.q_exp + a.p_exp;
            const int db = b.q_exp + b.p_exp;
            if (da != db) return da > db;
            return a.q_exp > b.q_exp;
        }
    };

    using TermMap = std::map<Monomial, Rational, MonomialOrder>;

    Polynomial() = default;

    static Polynomial zero() { return {}; }
    static Polynomial one() { return constant(1); }
    static Polynomial q() { return monomial(1, 0, 1); }
    static Polynomial p() { return monomial(0, 1, 1); }
    static Polynomial constant(const Rational& c) { return monomial(0, 0, c); }
    static Polynomial monomial(int q_exp, int p_exp, const Rational& c);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    /// -1 for the zero polynomial.
    int degree() const;
    Rational coefficient(int q_exp, int p_exp) const;
    const TermMap& terms() const { return terms_; }

    Polynomial derivative_q() const;
    Polynomial derivative_p() const;
    /// Antiderivative in q with value 0 at q = 0.
    Polynomial antiderivative_q() const;
    /// Antiderivative in p with value 0 at p = 0.
    Polynomial antiderivative_p() const;
    /// Substitutes p = 0.
    Polynomial at_p_zero() const;

    double eval(double q, double p) const;

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);
    Polynomial& operator*=(const Rational& c);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
    friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

private:
    void add_term(Monomial m, const Rational& c);
    TermMap terms_;
};

/// Text form: sum of `c*q^i*p^j` terms, coefficients as integers or
/// fractions, graded-lex term order, e.g. "3/4*q^2*p - 2*q + 1".
std::string to_string(const Polynomial& poly);

/// Parses the text form. Accepts decimal ("0.25") and fractional ("1/4")
/// coefficients, `^` powers and explicit `*` products; whitespace-insensitive.
Polynomial parse_polynomial(std::string_view text);

}  // namespace sympflow
