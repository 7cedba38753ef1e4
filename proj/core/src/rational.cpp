#include "pslab/rational.hpp"

#include <stdexcept>

namespace pslab {

std::string to_string(const Integer& n) { return n.get_str(); }

Rational::Rational(const Integer& num, const Integer& den) : q_(num, den) {
    if (sgn(den) == 0) {
        throw std::domain_error("rational with zero denominator");
    }
    q_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) {
        throw std::domain_error("rational division by zero");
    }
    q_ /= o.q_;
    return *this;
}

Rational Rational::operator-() const {
    Rational r;
    r.q_ = -q_;
    return r;
}

std::optional<Rational> Rational::parse(std::string_view text) {
    auto is_digits = [](std::string_view s) {
        if (s.empty()) return false;
        for (char c : s) {
            if (c < '0' || c > '9') return false;
        }
        return true;
    };
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    std::string_view num = text;
    std::string_view den = "1";
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        num = text.substr(0, slash);
        den = text.substr(slash + 1);
    }
    if (!is_digits(num) || !is_digits(den)) return std::nullopt;
    Integer n(std::string(num), 10);
    Integer d(std::string(den), 10);
    if (sgn(d) == 0) return std::nullopt;
    if (negative) n = -n;
    return Rational(n, d);
}

std::string Rational::str() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

} // namespace pslab
