#include "pslab/eval.hpp"

#include <stdexcept>

namespace pslab {

namespace {

// Inner evaluators assume all variables are bound (checked up front) and can
// therefore only produce values or faults.

struct ArithFault {
    std::string reason;
};

Integer eval_int_defined(const IntExprPtr& e, const State& sigma) {
    return std::visit(
        [&sigma](const auto& node) -> Integer {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, IntLit>) {
                return node.value;
            } else if constexpr (std::is_same_v<T, IntVar>) {
                const Integer* v = sigma.lookup(node.name);
                if (v == nullptr) throw std::logic_error("unbound variable after totality check");
                return *v;
            } else if constexpr (std::is_same_v<T, IntNeg>) {
                return Integer(-eval_int_defined(node.arg, sigma));
            } else {
                Integer lhs = eval_int_defined(node.lhs, sigma);
                Integer rhs = eval_int_defined(node.rhs, sigma);
                switch (node.op) {
                case IntBinOp::add: return Integer(lhs + rhs);
                case IntBinOp::sub: return Integer(lhs - rhs);
                case IntBinOp::mul: return Integer(lhs * rhs);
                case IntBinOp::div: {
                    if (sgn(rhs) == 0) throw ArithFault{"division by zero"};
                    Integer q;
                    mpz_fdiv_q(q.get_mpz_t(), lhs.get_mpz_t(), rhs.get_mpz_t());
                    return q;
                }
                case IntBinOp::mod: {
                    if (sgn(rhs) == 0) throw ArithFault{"modulus by zero"};
                    Integer r;
                    mpz_fdiv_r(r.get_mpz_t(), lhs.get_mpz_t(), rhs.get_mpz_t());
                    return r;
                }
                case IntBinOp::min: return lhs < rhs ? lhs : rhs;
                case IntBinOp::max: return lhs < rhs ? rhs : lhs;
                }
                throw std::logic_error("unhandled integer operator");
            }
        },
        e->node);
}

bool eval_bool_defined(const BoolExprPtr& b, const State& sigma) {
    return std::visit(
        [&sigma](const auto& node) -> bool {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, BoolLit>) {
                return node.value;
            } else if constexpr (std::is_same_v<T, BoolCmp>) {
                Integer lhs = eval_int_defined(node.lhs, sigma);
                Integer rhs = eval_int_defined(node.rhs, sigma);
                switch (node.op) {
                case CmpOp::eq: return lhs == rhs;
                case CmpOp::lt: return lhs < rhs;
                case CmpOp::le: return lhs <= rhs;
                }
                throw std::logic_error("unhandled comparison operator");
            } else if constexpr (std::is_same_v<T, BoolNot>) {
                return !eval_bool_defined(node.arg, sigma);
            } else {
                bool lhs = eval_bool_defined(node.lhs, sigma);
                bool rhs = eval_bool_defined(node.rhs, sigma);
                return node.op == BoolBinOp::conj ? (lhs && rhs) : (lhs || rhs);
            }
        },
        b->node);
}

Dist<Integer> eval_dist_defined(const DistExprPtr& d, const State& sigma) {
    return std::visit(
        [&sigma](const auto& node) -> Dist<Integer> {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, DistUniform1>) {
                Integer n = eval_int_defined(node.bound, sigma);
                Integer zero(0);
                return uniform_interval(n < zero ? n : zero, n < zero ? zero : n);
            } else if constexpr (std::is_same_v<T, DistUniform2>) {
                Integer lo = eval_int_defined(node.lo, sigma);
                Integer hi = eval_int_defined(node.hi, sigma);
                if (lo > hi) {
                    throw ArithFault{"uniform(" + lo.get_str() + ", " + hi.get_str() +
                                     ") has an empty range"};
                }
                return uniform_interval(lo, hi);
            } else if constexpr (std::is_same_v<T, DistBernoulli>) {
                std::vector<std::pair<Integer, Rational>> entries;
                entries.emplace_back(Integer(0), Rational(1) - node.p);
                entries.emplace_back(Integer(1), node.p);
                return Dist<Integer>::from_weights(entries);
            } else if constexpr (std::is_same_v<T, DistDirac>) {
                return Dist<Integer>::point(eval_int_defined(node.value, sigma));
            } else {
                std::vector<std::pair<Integer, Rational>> entries;
                entries.reserve(node.entries.size());
                for (const auto& [expr, weight] : node.entries) {
                    entries.emplace_back(eval_int_defined(expr, sigma), weight);
                }
                return Dist<Integer>::from_weights(entries);
            }
        },
        d->node);
}

} // namespace

Dist<Integer> uniform_interval(const Integer& lo, const Integer& hi) {
    if (lo > hi) throw std::invalid_argument("uniform_interval requires lo <= hi");
    Integer count(hi - lo + 1);
    Rational each(Integer(1), count);
    std::vector<std::pair<Integer, Rational>> entries;
    for (Integer v = lo; v <= hi; ++v) {
        entries.emplace_back(v, each);
    }
    return Dist<Integer>::from_weights(entries);
}

Eval<Integer> eval_int(const IntExprPtr& e, const State& sigma) {
    if (!sigma.is_total(vars_of(e))) return Undefined{};
    try {
        return eval_int_defined(e, sigma);
    } catch (const ArithFault& f) {
        return EvalFault{f.reason};
    }
}

Eval<bool> eval_bool(const BoolExprPtr& b, const State& sigma) {
    if (!sigma.is_total(vars_of(b))) return Undefined{};
    try {
        return eval_bool_defined(b, sigma);
    } catch (const ArithFault& f) {
        return EvalFault{f.reason};
    }
}

Eval<Dist<Integer>> eval_dist(const DistExprPtr& d, const State& sigma) {
    if (!sigma.is_total(vars_of(d))) return Undefined{};
    try {
        return eval_dist_defined(d, sigma);
    } catch (const ArithFault& f) {
        return EvalFault{f.reason};
    }
}

} // namespace pslab
