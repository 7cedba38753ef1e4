#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace pslab {

// Program values and distribution supports live in unbounded Z.
using Integer = mpz_class;

std::string to_string(const Integer& n);

// Exact rational scalar. Always held in lowest terms with a positive
// denominator; every operation is exact. No floating point is involved
// anywhere in probability computations.
class Rational {
public:
    Rational() : q_(0) {}
    Rational(long n) : q_(n) {} // NOLINT: implicit by design, mirrors integer literals
    explicit Rational(const Integer& n) : q_(n) {}
    Rational(const Integer& num, const Integer& den);
    Rational(long num, long den) : Rational(Integer(num), Integer(den)) {}

    // Accepts "p" and "p/q" with an optional leading minus.
    static std::optional<Rational> parse(std::string_view text);

    Integer numerator() const { return q_.get_num(); }
    Integer denominator() const { return q_.get_den(); }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_one() const { return q_ == 1; }
    bool is_positive() const { return sgn(q_) > 0; }
    bool is_negative() const { return sgn(q_) < 0; }

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
    friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
    friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
    friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }
    Rational operator-() const;

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.q_, b.q_);
        if (c < 0) return std::strong_ordering::less;
        if (c > 0) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    // "p" when the denominator is 1, otherwise "p/q".
    std::string str() const;

private:
    mpq_class q_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

} // namespace pslab
