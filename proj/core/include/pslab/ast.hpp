#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pslab/rational.hpp"
#include "pslab/state.hpp"

namespace pslab {

// pwhile abstract syntax. Nodes are immutable and shared; every node
// carries a precomputed structural hash so configurations can be compared
// and deduplicated cheaply during exploration.

struct IntExpr;
struct BoolExpr;
struct DistExpr;
struct Command;
using IntExprPtr = std::shared_ptr<const IntExpr>;
using BoolExprPtr = std::shared_ptr<const BoolExpr>;
using DistExprPtr = std::shared_ptr<const DistExpr>;
using CommandPtr = std::shared_ptr<const Command>;

// ---- integer expressions ---------------------------------------------

enum class IntBinOp { add, sub, mul, div, mod, min, max };

struct IntLit {
    Integer value;
};
struct IntVar {
    VarName name;
};
struct IntNeg {
    IntExprPtr arg;
};
struct IntBin {
    IntBinOp op;
    IntExprPtr lhs;
    IntExprPtr rhs;
};

struct IntExpr {
    std::variant<IntLit, IntVar, IntNeg, IntBin> node;
    std::uint64_t hash;
};

IntExprPtr int_lit(Integer value);
IntExprPtr int_lit(long value);
IntExprPtr int_var(VarName name);
IntExprPtr int_var(const std::string& name);
IntExprPtr int_neg(IntExprPtr arg);
IntExprPtr int_bin(IntBinOp op, IntExprPtr lhs, IntExprPtr rhs);

// ---- boolean expressions ---------------------------------------------

enum class CmpOp { eq, lt, le };
enum class BoolBinOp { conj, disj };

struct BoolLit {
    bool value;
};
struct BoolCmp {
    CmpOp op;
    IntExprPtr lhs;
    IntExprPtr rhs;
};
struct BoolNot {
    BoolExprPtr arg;
};
struct BoolBin {
    BoolBinOp op;
    BoolExprPtr lhs;
    BoolExprPtr rhs;
};

struct BoolExpr {
    std::variant<BoolLit, BoolCmp, BoolNot, BoolBin> node;
    std::uint64_t hash;
};

BoolExprPtr bool_lit(bool value);
BoolExprPtr bool_cmp(CmpOp op, IntExprPtr lhs, IntExprPtr rhs);
BoolExprPtr bool_not(BoolExprPtr arg);
BoolExprPtr bool_bin(BoolBinOp op, BoolExprPtr lhs, BoolExprPtr rhs);

// ---- distribution expressions ----------------------------------------

struct DistUniform1 {
    IntExprPtr bound; // uniform on [min(0,n), max(0,n)]
};
struct DistUniform2 {
    IntExprPtr lo;
    IntExprPtr hi; // requires lo <= hi at evaluation time
};
struct DistBernoulli {
    Rational p; // literal in [0,1], validated at construction
};
struct DistDirac {
    IntExprPtr value;
};
struct DistDiscrete {
    // weights are positive rational literals summing to 1, validated
    std::vector<std::pair<IntExprPtr, Rational>> entries;
};

struct DistExpr {
    std::variant<DistUniform1, DistUniform2, DistBernoulli, DistDirac, DistDiscrete> node;
    std::uint64_t hash;
};

DistExprPtr dist_uniform(IntExprPtr bound);
DistExprPtr dist_uniform(IntExprPtr lo, IntExprPtr hi);
DistExprPtr dist_bernoulli(Rational p);
DistExprPtr dist_dirac(IntExprPtr value);
DistExprPtr dist_discrete(std::vector<std::pair<IntExprPtr, Rational>> entries);

// ---- commands ----------------------------------------------------------

struct CmdSkip {};
struct CmdAssign {
    VarName target;
    IntExprPtr value;
};
struct CmdSample {
    VarName target;
    DistExprPtr dist;
};
struct CmdSeq {
    CommandPtr first;
    CommandPtr second;
};
struct CmdIf {
    BoolExprPtr guard;
    CommandPtr then_branch;
    CommandPtr else_branch;
};
struct CmdWhile {
    BoolExprPtr guard;
    CommandPtr body;
};

struct Command {
    std::variant<CmdSkip, CmdAssign, CmdSample, CmdSeq, CmdIf, CmdWhile> node;
    std::uint64_t hash;
};

CommandPtr cmd_skip();
CommandPtr cmd_assign(VarName target, IntExprPtr value);
CommandPtr cmd_sample(VarName target, DistExprPtr dist);
CommandPtr cmd_seq(CommandPtr first, CommandPtr second);
CommandPtr cmd_if(BoolExprPtr guard, CommandPtr then_branch, CommandPtr else_branch);
CommandPtr cmd_while(BoolExprPtr guard, CommandPtr body);

// ---- structural comparison ---------------------------------------------

bool equal(const IntExprPtr& a, const IntExprPtr& b);
bool equal(const BoolExprPtr& a, const BoolExprPtr& b);
bool equal(const DistExprPtr& a, const DistExprPtr& b);
bool equal(const CommandPtr& a, const CommandPtr& b);

// ---- variable analyses --------------------------------------------------

VarSet vars_of(const IntExprPtr& e);
VarSet vars_of(const BoolExprPtr& b);
VarSet vars_of(const DistExprPtr& d);

// The syntactic set of variables the command can modify (assignment and
// sampling targets, through all control structure).
VarSet mv(const CommandPtr& c);

// ---- canonical concrete syntax -------------------------------------------

std::string to_source(const IntExprPtr& e);
std::string to_source(const BoolExprPtr& b);
std::string to_source(const DistExprPtr& d);
std::string to_source(const CommandPtr& c);

} // namespace pslab
