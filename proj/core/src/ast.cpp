#include "pslab/ast.hpp"

#include <sstream>
#include <stdexcept>

#include "pslab/hash.hpp"

namespace pslab {

namespace {

// Hash tags keep different node kinds (and different expression sorts)
// from colliding structurally.
enum : std::uint64_t {
    tag_int_lit = 0x11,
    tag_int_var,
    tag_int_neg,
    tag_int_bin,
    tag_bool_lit = 0x21,
    tag_bool_cmp,
    tag_bool_not,
    tag_bool_bin,
    tag_dist_uniform1 = 0x31,
    tag_dist_uniform2,
    tag_dist_bernoulli,
    tag_dist_dirac,
    tag_dist_discrete,
    tag_cmd_skip = 0x41,
    tag_cmd_assign,
    tag_cmd_sample,
    tag_cmd_seq,
    tag_cmd_if,
    tag_cmd_while,
};

std::uint64_t hash_tagged(std::uint64_t tag, std::initializer_list<std::uint64_t> parts) {
    Fnv fnv;
    fnv.feed(tag);
    for (auto p : parts) fnv.feed(p);
    return fnv.value();
}

std::uint64_t hash_string(std::uint64_t tag, const std::string& s) {
    Fnv fnv;
    fnv.feed(tag);
    fnv.feed(s);
    return fnv.value();
}

std::uint64_t hash_rational(const Rational& r) {
    Fnv fnv;
    fnv.feed(r.numerator().get_str());
    fnv.feed_byte('/');
    fnv.feed(r.denominator().get_str());
    return fnv.value();
}

} // namespace

// ---- builders -------------------------------------------------------------

IntExprPtr int_lit(Integer value) {
    auto h = hash_string(tag_int_lit, value.get_str());
    return std::make_shared<const IntExpr>(IntExpr{IntLit{std::move(value)}, h});
}

IntExprPtr int_lit(long value) { return int_lit(Integer(value)); }

IntExprPtr int_var(VarName name) {
    auto h = hash_string(tag_int_var, name.str());
    return std::make_shared<const IntExpr>(IntExpr{IntVar{std::move(name)}, h});
}

IntExprPtr int_var(const std::string& name) { return int_var(VarName(name)); }

IntExprPtr int_neg(IntExprPtr arg) {
    auto h = hash_tagged(tag_int_neg, {arg->hash});
    return std::make_shared<const IntExpr>(IntExpr{IntNeg{std::move(arg)}, h});
}

IntExprPtr int_bin(IntBinOp op, IntExprPtr lhs, IntExprPtr rhs) {
    auto h = hash_tagged(tag_int_bin, {static_cast<std::uint64_t>(op), lhs->hash, rhs->hash});
    return std::make_shared<const IntExpr>(IntExpr{IntBin{op, std::move(lhs), std::move(rhs)}, h});
}

BoolExprPtr bool_lit(bool value) {
    auto h = hash_tagged(tag_bool_lit, {value ? 1ull : 0ull});
    return std::make_shared<const BoolExpr>(BoolExpr{BoolLit{value}, h});
}

BoolExprPtr bool_cmp(CmpOp op, IntExprPtr lhs, IntExprPtr rhs) {
    auto h = hash_tagged(tag_bool_cmp, {static_cast<std::uint64_t>(op), lhs->hash, rhs->hash});
    return std::make_shared<const BoolExpr>(BoolExpr{BoolCmp{op, std::move(lhs), std::move(rhs)}, h});
}

BoolExprPtr bool_not(BoolExprPtr arg) {
    auto h = hash_tagged(tag_bool_not, {arg->hash});
    return std::make_shared<const BoolExpr>(BoolExpr{BoolNot{std::move(arg)}, h});
}

BoolExprPtr bool_bin(BoolBinOp op, BoolExprPtr lhs, BoolExprPtr rhs) {
    auto h = hash_tagged(tag_bool_bin, {static_cast<std::uint64_t>(op), lhs->hash, rhs->hash});
    return std::make_shared<const BoolExpr>(BoolExpr{BoolBin{op, std::move(lhs), std::move(rhs)}, h});
}

DistExprPtr dist_uniform(IntExprPtr bound) {
    auto h = hash_tagged(tag_dist_uniform1, {bound->hash});
    return std::make_shared<const DistExpr>(DistExpr{DistUniform1{std::move(bound)}, h});
}

DistExprPtr dist_uniform(IntExprPtr lo, IntExprPtr hi) {
    auto h = hash_tagged(tag_dist_uniform2, {lo->hash, hi->hash});
    return std::make_shared<const DistExpr>(DistExpr{DistUniform2{std::move(lo), std::move(hi)}, h});
}

DistExprPtr dist_bernoulli(Rational p) {
    if (p.is_negative() || p > Rational(1)) {
        throw std::invalid_argument("bernoulli parameter " + p.str() + " outside [0,1]");
    }
    auto h = hash_tagged(tag_dist_bernoulli, {hash_rational(p)});
    return std::make_shared<const DistExpr>(DistExpr{DistBernoulli{std::move(p)}, h});
}

DistExprPtr dist_dirac(IntExprPtr value) {
    auto h = hash_tagged(tag_dist_dirac, {value->hash});
    return std::make_shared<const DistExpr>(DistExpr{DistDirac{std::move(value)}, h});
}

DistExprPtr dist_discrete(std::vector<std::pair<IntExprPtr, Rational>> entries) {
    if (entries.empty()) {
        throw std::invalid_argument("discrete distribution needs at least one entry");
    }
    Rational total;
    Fnv fnv;
    fnv.feed(static_cast<std::uint64_t>(tag_dist_discrete));
    for (const auto& [expr, weight] : entries) {
        if (!weight.is_positive()) {
            throw std::invalid_argument("discrete weight " + weight.str() + " must be positive");
        }
        total += weight;
        fnv.feed(expr->hash);
        fnv.feed(hash_rational(weight));
    }
    if (!total.is_one()) {
        throw std::invalid_argument("discrete weights sum to " + total.str() + ", expected 1");
    }
    return std::make_shared<const DistExpr>(DistExpr{DistDiscrete{std::move(entries)}, fnv.value()});
}

CommandPtr cmd_skip() {
    static const CommandPtr skip =
        std::make_shared<const Command>(Command{CmdSkip{}, hash_tagged(tag_cmd_skip, {})});
    return skip;
}

CommandPtr cmd_assign(VarName target, IntExprPtr value) {
    Fnv fnv;
    fnv.feed(static_cast<std::uint64_t>(tag_cmd_assign));
    fnv.feed(target.str());
    fnv.feed(value->hash);
    return std::make_shared<const Command>(Command{CmdAssign{std::move(target), std::move(value)}, fnv.value()});
}

CommandPtr cmd_sample(VarName target, DistExprPtr dist) {
    Fnv fnv;
    fnv.feed(static_cast<std::uint64_t>(tag_cmd_sample));
    fnv.feed(target.str());
    fnv.feed(dist->hash);
    return std::make_shared<const Command>(Command{CmdSample{std::move(target), std::move(dist)}, fnv.value()});
}

CommandPtr cmd_seq(CommandPtr first, CommandPtr second) {
    auto h = hash_tagged(tag_cmd_seq, {first->hash, second->hash});
    return std::make_shared<const Command>(Command{CmdSeq{std::move(first), std::move(second)}, h});
}

CommandPtr cmd_if(BoolExprPtr guard, CommandPtr then_branch, CommandPtr else_branch) {
    auto h = hash_tagged(tag_cmd_if, {guard->hash, then_branch->hash, else_branch->hash});
    return std::make_shared<const Command>(
        Command{CmdIf{std::move(guard), std::move(then_branch), std::move(else_branch)}, h});
}

CommandPtr cmd_while(BoolExprPtr guard, CommandPtr body) {
    auto h = hash_tagged(tag_cmd_while, {guard->hash, body->hash});
    return std::make_shared<const Command>(Command{CmdWhile{std::move(guard), std::move(body)}, h});
}

// ---- structural equality ----------------------------------------------

bool equal(const IntExprPtr& a, const IntExprPtr& b) {
    if (a == b) return true;
    if (a->hash != b->hash || a->node.index() != b->node.index()) return false;
    return std::visit(
        [&b](const auto& lhs) -> bool {
            using T = std::decay_t<decltype(lhs)>;
            const auto& rhs = std::get<T>(b->node);
            if constexpr (std::is_same_v<T, IntLit>) {
                return lhs.value == rhs.value;
            } else if constexpr (std::is_same_v<T, IntVar>) {
                return lhs.name == rhs.name;
            } else if constexpr (std::is_same_v<T, IntNeg>) {
                return equal(lhs.arg, rhs.arg);
            } else {
                return lhs.op == rhs.op && equal(lhs.lhs, rhs.lhs) && equal(lhs.rhs, rhs.rhs);
            }
        },
        a->node);
}

bool equal(const BoolExprPtr& a, const BoolExprPtr& b) {
    if (a == b) return true;
    if (a->hash != b->hash || a->node.index() != b->node.index()) return false;
    return std::visit(
        [&b](const auto& lhs) -> bool {
            using T = std::decay_t<decltype(lhs)>;
            const auto& rhs = std::get<T>(b->node);
            if constexpr (std::is_same_v<T, BoolLit>) {
                return lhs.value == rhs.value;
            } else if constexpr (std::is_same_v<T, BoolCmp>) {
                return lhs.op == rhs.op && equal(lhs.lhs, rhs.lhs) && equal(lhs.rhs, rhs.rhs);
            } else if constexpr (std::is_same_v<T, BoolNot>) {
                return equal(lhs.arg, rhs.arg);
            } else {
                return lhs.op == rhs.op && equal(lhs.lhs, rhs.lhs) && equal(lhs.rhs, rhs.rhs);
            }
        },
        a->node);
}

bool equal(const DistExprPtr& a, const DistExprPtr& b) {
    if (a == b) return true;
    if (a->hash != b->hash || a->node.index() != b->node.index()) return false;
    return std::visit(
        [&b](const auto& lhs) -> bool {
            using T = std::decay_t<decltype(lhs)>;
            const auto& rhs = std::get<T>(b->node);
            if constexpr (std::is_same_v<T, DistUniform1>) {
                return equal(lhs.bound, rhs.bound);
            } else if constexpr (std::is_same_v<T, DistUniform2>) {
                return equal(lhs.lo, rhs.lo) && equal(lhs.hi, rhs.hi);
            } else if constexpr (std::is_same_v<T, DistBernoulli>) {
                return lhs.p == rhs.p;
            } else if constexpr (std::is_same_v<T, DistDirac>) {
                return equal(lhs.value, rhs.value);
            } else {
                if (lhs.entries.size() != rhs.entries.size()) return false;
                for (std::size_t i = 0; i < lhs.entries.size(); ++i) {
                    if (lhs.entries[i].second != rhs.entries[i].second) return false;
                    if (!equal(lhs.entries[i].first, rhs.entries[i].first)) return false;
                }
                return true;
            }
        },
        a->node);
}

bool equal(const CommandPtr& a, const CommandPtr& b) {
    if (a == b) return true;
    if (a->hash != b->hash || a->node.index() != b->node.index()) return false;
    return std::visit(
        [&b](const auto& lhs) -> bool {
            using T = std::decay_t<decltype(lhs)>;
            const auto& rhs = std::get<T>(b->node);
            if constexpr (std::is_same_v<T, CmdSkip>) {
                return true;
            } else if constexpr (std::is_same_v<T, CmdAssign>) {
                return lhs.target == rhs.target && equal(lhs.value, rhs.value);
            } else if constexpr (std::is_same_v<T, CmdSample>) {
                return lhs.target == rhs.target && equal(lhs.dist, rhs.dist);
            } else if constexpr (std::is_same_v<T, CmdSeq>) {
                return equal(lhs.first, rhs.first) && equal(lhs.second, rhs.second);
            } else if constexpr (std::is_same_v<T, CmdIf>) {
                return equal(lhs.guard, rhs.guard) && equal(lhs.then_branch, rhs.then_branch) &&
                       equal(lhs.else_branch, rhs.else_branch);
            } else {
                return equal(lhs.guard, rhs.guard) && equal(lhs.body, rhs.body);
            }
        },
        a->node);
}

// ---- variable analyses ----------------------------------------------------

namespace {

void collect(const IntExprPtr& e, VarSet& out) {
    std::visit(
        [&out](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, IntVar>) {
                out.insert(node.name);
            } else if constexpr (std::is_same_v<T, IntNeg>) {
                collect(node.arg, out);
            } else if constexpr (std::is_same_v<T, IntBin>) {
                collect(node.lhs, out);
                collect(node.rhs, out);
            }
        },
        e->node);
}

void collect(const BoolExprPtr& b, VarSet& out) {
    std::visit(
        [&out](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, BoolCmp>) {
                collect(node.lhs, out);
                collect(node.rhs, out);
            } else if constexpr (std::is_same_v<T, BoolNot>) {
                collect(node.arg, out);
            } else if constexpr (std::is_same_v<T, BoolBin>) {
                collect(node.lhs, out);
                collect(node.rhs, out);
            }
        },
        b->node);
}

void collect(const DistExprPtr& d, VarSet& out) {
    std::visit(
        [&out](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, DistUniform1>) {
                collect(node.bound, out);
            } else if constexpr (std::is_same_v<T, DistUniform2>) {
                collect(node.lo, out);
                collect(node.hi, out);
            } else if constexpr (std::is_same_v<T, DistDirac>) {
                collect(node.value, out);
            } else if constexpr (std::is_same_v<T, DistDiscrete>) {
                for (const auto& [expr, weight] : node.entries) collect(expr, out);
            }
        },
        d->node);
}

} // namespace

VarSet vars_of(const IntExprPtr& e) {
    VarSet out;
    collect(e, out);
    return out;
}

VarSet vars_of(const BoolExprPtr& b) {
    VarSet out;
    collect(b, out);
    return out;
}

VarSet vars_of(const DistExprPtr& d) {
    VarSet out;
    collect(d, out);
    return out;
}

VarSet mv(const CommandPtr& c) {
    VarSet out;
    std::visit(
        [&out](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, CmdAssign>) {
                out.insert(node.target);
            } else if constexpr (std::is_same_v<T, CmdSample>) {
                out.insert(node.target);
            } else if constexpr (std::is_same_v<T, CmdSeq>) {
                out.merge(mv(node.first));
                out.merge(mv(node.second));
            } else if constexpr (std::is_same_v<T, CmdIf>) {
                out.merge(mv(node.then_branch));
                out.merge(mv(node.else_branch));
            } else if constexpr (std::is_same_v<T, CmdWhile>) {
                out.merge(mv(node.body));
            }
        },
        c->node);
    return out;
}

// ---- pretty printer -----------------------------------------------------

namespace {

// Precedence levels; children are parenthesised when their level is below
// what the context requires. Binary operators are left-associative.
enum { prec_add = 1, prec_mul = 2, prec_neg = 3, prec_atom = 4 };

int precedence(const IntExpr& e) {
    return std::visit(
        [](const auto& node) -> int {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, IntBin>) {
                switch (node.op) {
                case IntBinOp::add:
                case IntBinOp::sub: return prec_add;
                case IntBinOp::mul:
                case IntBinOp::div:
                case IntBinOp::mod: return prec_mul;
                default: return prec_atom; // min/max print as calls
                }
            } else if constexpr (std::is_same_v<T, IntNeg>) {
                return prec_neg;
            } else {
                return prec_atom;
            }
        },
        e.node);
}

void print_int(std::ostream& os, const IntExprPtr& e, int min_prec);

void print_child(std::ostream& os, const IntExprPtr& child, int min_prec) {
    bool parens = precedence(*child) < min_prec;
    if (parens) os << "(";
    print_int(os, child, 0);
    if (parens) os << ")";
}

void print_int(std::ostream& os, const IntExprPtr& e, int) {
    std::visit(
        [&os](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, IntLit>) {
                os << node.value.get_str();
            } else if constexpr (std::is_same_v<T, IntVar>) {
                os << node.name.str();
            } else if constexpr (std::is_same_v<T, IntNeg>) {
                os << "-";
                print_child(os, node.arg, prec_neg);
            } else {
                switch (node.op) {
                case IntBinOp::min:
                case IntBinOp::max:
                    os << (node.op == IntBinOp::min ? "min(" : "max(");
                    print_child(os, node.lhs, 0);
                    os << ", ";
                    print_child(os, node.rhs, 0);
                    os << ")";
                    return;
                default: break;
                }
                int level = node.op == IntBinOp::add || node.op == IntBinOp::sub ? prec_add : prec_mul;
                const char* sym = nullptr;
                switch (node.op) {
                case IntBinOp::add: sym = " + "; break;
                case IntBinOp::sub: sym = " - "; break;
                case IntBinOp::mul: sym = " * "; break;
                case IntBinOp::div: sym = " / "; break;
                case IntBinOp::mod: sym = " mod "; break;
                default: break;
                }
                print_child(os, node.lhs, level);
                os << sym;
                print_child(os, node.rhs, level + 1); // left-assoc: parenthesise equal-level rhs
            }
        },
        e->node);
}

enum { prec_or = 1, prec_and = 2, prec_not = 3, prec_batom = 4 };

int precedence(const BoolExpr& b) {
    return std::visit(
        [](const auto& node) -> int {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, BoolBin>) {
                return node.op == BoolBinOp::disj ? prec_or : prec_and;
            } else if constexpr (std::is_same_v<T, BoolNot>) {
                return prec_not;
            } else {
                return prec_batom;
            }
        },
        b.node);
}

void print_bool(std::ostream& os, const BoolExprPtr& b);

void print_bool_child(std::ostream& os, const BoolExprPtr& child, int min_prec) {
    bool parens = precedence(*child) < min_prec;
    if (parens) os << "(";
    print_bool(os, child);
    if (parens) os << ")";
}

void print_bool(std::ostream& os, const BoolExprPtr& b) {
    std::visit(
        [&os](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, BoolLit>) {
                os << (node.value ? "true" : "false");
            } else if constexpr (std::is_same_v<T, BoolCmp>) {
                print_child(os, node.lhs, 0);
                switch (node.op) {
                case CmpOp::eq: os << " = "; break;
                case CmpOp::lt: os << " < "; break;
                case CmpOp::le: os << " <= "; break;
                }
                print_child(os, node.rhs, 0);
            } else if constexpr (std::is_same_v<T, BoolNot>) {
                os << "!";
                print_bool_child(os, node.arg, prec_not);
            } else {
                int level = node.op == BoolBinOp::disj ? prec_or : prec_and;
                print_bool_child(os, node.lhs, level);
                os << (node.op == BoolBinOp::disj ? " || " : " && ");
                print_bool_child(os, node.rhs, level + 1);
            }
        },
        b->node);
}

void print_dist(std::ostream& os, const DistExprPtr& d) {
    std::visit(
        [&os](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, DistUniform1>) {
                os << "uniform(";
                print_int(os, node.bound, 0);
                os << ")";
            } else if constexpr (std::is_same_v<T, DistUniform2>) {
                os << "uniform(";
                print_int(os, node.lo, 0);
                os << ", ";
                print_int(os, node.hi, 0);
                os << ")";
            } else if constexpr (std::is_same_v<T, DistBernoulli>) {
                os << "bernoulli(" << node.p.str() << ")";
            } else if constexpr (std::is_same_v<T, DistDirac>) {
                os << "dirac(";
                print_int(os, node.value, 0);
                os << ")";
            } else {
                os << "discrete{";
                bool first = true;
                for (const auto& [expr, weight] : node.entries) {
                    if (!first) os << ", ";
                    first = false;
                    print_int(os, expr, 0);
                    os << ": " << weight.str();
                }
                os << "}";
            }
        },
        d->node);
}

void print_indent(std::ostream& os, int indent) {
    for (int i = 0; i < indent; ++i) os << "  ";
}

void print_cmd(std::ostream& os, const CommandPtr& c, int indent) {
    std::visit(
        [&os, indent](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, CmdSkip>) {
                print_indent(os, indent);
                os << "skip";
            } else if constexpr (std::is_same_v<T, CmdAssign>) {
                print_indent(os, indent);
                os << node.target.str() << " := ";
                print_int(os, node.value, 0);
            } else if constexpr (std::is_same_v<T, CmdSample>) {
                print_indent(os, indent);
                os << node.target.str() << " ~ ";
                print_dist(os, node.dist);
            } else if constexpr (std::is_same_v<T, CmdSeq>) {
                print_cmd(os, node.first, indent);
                os << ";\n";
                print_cmd(os, node.second, indent);
            } else if constexpr (std::is_same_v<T, CmdIf>) {
                print_indent(os, indent);
                os << "if ";
                print_bool(os, node.guard);
                os << " then {\n";
                print_cmd(os, node.then_branch, indent + 1);
                os << "\n";
                print_indent(os, indent);
                os << "} else {\n";
                print_cmd(os, node.else_branch, indent + 1);
                os << "\n";
                print_indent(os, indent);
                os << "}";
            } else {
                print_indent(os, indent);
                os << "while ";
                print_bool(os, node.guard);
                os << " do {\n";
                print_cmd(os, node.body, indent + 1);
                os << "\n";
                print_indent(os, indent);
                os << "}";
            }
        },
        c->node);
}

} // namespace

std::string to_source(const IntExprPtr& e) {
    std::ostringstream os;
    print_int(os, e, 0);
    return os.str();
}

std::string to_source(const BoolExprPtr& b) {
    std::ostringstream os;
    print_bool(os, b);
    return os.str();
}

std::string to_source(const DistExprPtr& d) {
    std::ostringstream os;
    print_dist(os, d);
    return os.str();
}

std::string to_source(const CommandPtr& c) {
    std::ostringstream os;
    print_cmd(os, c, 0);
    os << "\n";
    return os.str();
}

} // namespace pslab
