#include "pslab/semantics.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "pslab/eval.hpp"
#include "pslab/hash.hpp"

namespace pslab {

namespace {

struct NodeKey {
    CommandPtr command;
    State state;
};

struct NodeKeyHash {
    std::size_t operator()(const NodeKey& k) const {
        Fnv fnv;
        fnv.feed(k.command->hash);
        fnv.feed(stable_hash(k.state));
        return static_cast<std::size_t>(fnv.value());
    }
};

struct NodeKeyEq {
    bool operator()(const NodeKey& a, const NodeKey& b) const {
        return equal(a.command, b.command) && a.state == b.state;
    }
};

std::vector<StepBranch> step_nt(const ConfigNT& cfg);

std::vector<StepBranch> single(Config next) {
    std::vector<StepBranch> out;
    out.push_back(StepBranch{std::nullopt, Rational(1), std::move(next)});
    return out;
}

std::vector<StepBranch> step_nt(const ConfigNT& cfg) {
    const State& sigma = cfg.state;
    return std::visit(
        [&](const auto& node) -> std::vector<StepBranch> {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, CmdSkip>) {
                return single(ConfigTerm{sigma});
            } else if constexpr (std::is_same_v<T, CmdAssign>) {
                Eval<Integer> v = eval_int(node.value, sigma);
                if (!is_value(v)) return single(ConfigFault{});
                return single(ConfigTerm{sigma.update(node.target, value_of(v))});
            } else if constexpr (std::is_same_v<T, CmdSample>) {
                Eval<Dist<Integer>> d = eval_dist(node.dist, sigma);
                if (!is_value(d)) return single(ConfigFault{});
                std::vector<StepBranch> out;
                const Dist<Integer>& dist = value_of(d);
                out.reserve(dist.support_size());
                for (const auto& [n, p] : dist.entries()) {
                    out.push_back(StepBranch{SampleLabel{n, dist}, p,
                                             ConfigTerm{sigma.update(node.target, n)}});
                }
                return out;
            } else if constexpr (std::is_same_v<T, CmdSeq>) {
                std::vector<StepBranch> inner = step_nt(ConfigNT{node.first, sigma});
                for (StepBranch& b : inner) {
                    if (const auto* nt = std::get_if<ConfigNT>(&b.next)) {
                        b.next = ConfigNT{cmd_seq(nt->command, node.second), nt->state};
                    } else if (const auto* term = std::get_if<ConfigTerm>(&b.next)) {
                        b.next = ConfigNT{node.second, term->state};
                    }
                    // fault propagates unchanged
                }
                return inner;
            } else if constexpr (std::is_same_v<T, CmdIf>) {
                Eval<bool> g = eval_bool(node.guard, sigma);
                if (!is_value(g)) return single(ConfigFault{});
                return single(ConfigNT{value_of(g) ? node.then_branch : node.else_branch, sigma});
            } else {
                Eval<bool> g = eval_bool(node.guard, sigma);
                if (!is_value(g)) return single(ConfigFault{});
                if (!value_of(g)) return single(ConfigTerm{sigma});
                return single(ConfigNT{cmd_seq(node.body, cfg.command), sigma});
            }
        },
        cfg.command->node);
}

void check_conservation(const ExplorationResult& r) {
    Rational total = r.terminal_total() + r.fault_mass + r.residual_mass;
    if (!total.is_one()) {
        throw std::logic_error("exploration mass " + total.str() + " != 1");
    }
}

} // namespace

std::vector<StepBranch> step(const Config& cfg) {
    const ConfigNT* nt = std::get_if<ConfigNT>(&cfg);
    if (nt == nullptr) {
        throw std::logic_error("step() requires a nonterminal configuration");
    }
    return step_nt(*nt);
}

Rational ExplorationResult::terminal_total() const {
    Rational total;
    for (const auto& [state, mass] : terminal) total += mass;
    return total;
}

ExplorationResult explore(const CommandPtr& c, const State& sigma, long budget,
                          const TraceFn& trace) {
    if (budget < 0) throw std::invalid_argument("exploration budget must be >= 0");

    struct Entry {
        CommandPtr command;
        State state;
        Rational mass;
    };
    std::vector<Entry> layer;
    layer.push_back(Entry{c, sigma, Rational(1)});

    ExplorationResult result;
    for (long depth = 0; depth < budget && !layer.empty(); ++depth) {
        std::vector<Entry> next;
        std::unordered_map<NodeKey, std::size_t, NodeKeyHash, NodeKeyEq> index;
        for (const Entry& entry : layer) {
            ConfigNT nt{entry.command, entry.state};
            for (const StepBranch& b : step_nt(nt)) {
                if (trace) trace(nt, b);
                Rational mass = entry.mass * b.prob;
                if (const auto* term = std::get_if<ConfigTerm>(&b.next)) {
                    result.terminal[term->state] += mass;
                } else if (std::holds_alternative<ConfigFault>(b.next)) {
                    result.fault_mass += mass;
                } else {
                    const auto& target = std::get<ConfigNT>(b.next);
                    NodeKey key{target.command, target.state};
                    auto it = index.find(key);
                    if (it == index.end()) {
                        index.emplace(key, next.size());
                        next.push_back(Entry{target.command, target.state, mass});
                    } else {
                        next[it->second].mass += mass;
                    }
                }
            }
        }
        layer = std::move(next);
    }
    for (const Entry& entry : layer) result.residual_mass += entry.mass;
    result.exact = result.residual_mass.is_zero();
    check_conservation(result);
    return result;
}

namespace {

// Absorption targets of the linear system: a terminal state, the fault
// node, or divergence (a closed strongly connected component of
// nonterminal configurations).
struct AbsKey {
    enum class Kind { terminal, fault, divergence } kind;
    State state; // meaningful for terminal

    bool operator<(const AbsKey& o) const {
        if (kind != o.kind) return kind < o.kind;
        if (kind != Kind::terminal) return false;
        return state < o.state;
    }
};

using AbsVector = std::map<AbsKey, Rational>;

void add_scaled(AbsVector& target, const AbsVector& source, const Rational& factor) {
    for (const auto& [key, mass] : source) {
        target[key] += mass * factor;
    }
}

// Iterative Tarjan; returns the SCC id of every node, ids assigned in
// reverse topological order of the condensation.
std::vector<int> strongly_connected_components(
    const std::vector<std::vector<std::pair<std::size_t, Rational>>>& succ, int& scc_count) {
    const std::size_t n = succ.size();
    std::vector<int> idx(n, -1), low(n, 0), comp(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    int next_index = 0;
    scc_count = 0;

    struct Frame {
        std::size_t node;
        std::size_t edge;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (idx[root] != -1) continue;
        std::vector<Frame> frames;
        frames.push_back({root, 0});
        idx[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.edge < succ[f.node].size()) {
                std::size_t target = succ[f.node][f.edge].first;
                ++f.edge;
                if (idx[target] == -1) {
                    idx[target] = low[target] = next_index++;
                    stack.push_back(target);
                    on_stack[target] = true;
                    frames.push_back({target, 0});
                } else if (on_stack[target]) {
                    low[f.node] = std::min(low[f.node], idx[target]);
                }
            } else {
                if (low[f.node] == idx[f.node]) {
                    for (;;) {
                        std::size_t v = stack.back();
                        stack.pop_back();
                        on_stack[v] = false;
                        comp[v] = scc_count;
                        if (v == f.node) break;
                    }
                    ++scc_count;
                }
                std::size_t done = f.node;
                frames.pop_back();
                if (!frames.empty()) {
                    low[frames.back().node] = std::min(low[frames.back().node], low[done]);
                }
            }
        }
    }
    return comp;
}

} // namespace

ExplorationResult absorption_solve(const CommandPtr& c, const State& sigma, long node_cap,
                                   const TraceFn& trace) {
    if (node_cap <= 0) throw std::invalid_argument("absorption node cap must be positive");

    // Discover the reachable configuration graph.
    std::vector<ConfigNT> nodes;
    std::vector<std::vector<StepBranch>> branches;
    std::unordered_map<NodeKey, std::size_t, NodeKeyHash, NodeKeyEq> index;
    bool overflow = false;

    auto intern = [&](const ConfigNT& nt) -> std::size_t {
        NodeKey key{nt.command, nt.state};
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        std::size_t id = nodes.size();
        index.emplace(key, id);
        nodes.push_back(nt);
        return id;
    };

    intern(ConfigNT{c, sigma});
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes.size() > static_cast<std::size_t>(node_cap)) {
            overflow = true;
            break;
        }
        branches.push_back(step_nt(nodes[i]));
        for (const StepBranch& b : branches[i]) {
            if (const auto* nt = std::get_if<ConfigNT>(&b.next)) {
                intern(*nt);
            }
        }
        if (nodes.size() > static_cast<std::size_t>(node_cap)) {
            overflow = true;
            break;
        }
    }

    if (overflow) {
        ExplorationResult fallback = explore(c, sigma, node_cap, trace);
        fallback.cap_exceeded = true;
        fallback.note = "configuration graph exceeds " + std::to_string(node_cap) +
                        " nodes; fell back to bounded exploration with budget " +
                        std::to_string(node_cap);
        return fallback;
    }

    const std::size_t n = nodes.size();
    if (trace) {
        for (std::size_t i = 0; i < n; ++i) {
            for (const StepBranch& b : branches[i]) trace(nodes[i], b);
        }
    }

    // Edge lists split by target kind.
    std::vector<std::vector<std::pair<std::size_t, Rational>>> succ(n);
    std::vector<AbsVector> direct(n); // one-step absorption masses
    for (std::size_t i = 0; i < n; ++i) {
        for (const StepBranch& b : branches[i]) {
            if (const auto* nt = std::get_if<ConfigNT>(&b.next)) {
                succ[i].emplace_back(index.at(NodeKey{nt->command, nt->state}), b.prob);
            } else if (const auto* term = std::get_if<ConfigTerm>(&b.next)) {
                direct[i][AbsKey{AbsKey::Kind::terminal, term->state}] += b.prob;
            } else {
                direct[i][AbsKey{AbsKey::Kind::fault, State()}] += b.prob;
            }
        }
    }

    // Divergence sinks: closed SCCs (no absorption edge, no edge out of the
    // component). Mass entering them never reaches an absorber.
    int scc_count = 0;
    std::vector<int> comp = strongly_connected_components(succ, scc_count);
    std::vector<bool> scc_closed(static_cast<std::size_t>(scc_count), true);
    for (std::size_t i = 0; i < n; ++i) {
        if (!direct[i].empty()) scc_closed[comp[i]] = false;
        for (const auto& [j, p] : succ[i]) {
            if (comp[j] != comp[i]) scc_closed[comp[i]] = false;
        }
    }
    std::vector<bool> divergent(n, false);
    for (std::size_t i = 0; i < n; ++i) divergent[i] = scc_closed[comp[i]];

    ExplorationResult result;
    result.exact = true;

    const AbsKey div_key{AbsKey::Kind::divergence, State()};
    const AbsKey fault_key{AbsKey::Kind::fault, State()};

    if (divergent[0]) {
        result.residual_mass = Rational(1);
        check_conservation(result);
        return result;
    }

    // Dense reindexing of transient nodes.
    std::vector<int> local(n, -1);
    std::vector<std::size_t> transient;
    for (std::size_t i = 0; i < n; ++i) {
        if (!divergent[i]) {
            local[i] = static_cast<int>(transient.size());
            transient.push_back(i);
        }
    }
    const std::size_t m = transient.size();

    // Row i of (I - Q) restricted to transient nodes, plus the absorption
    // right-hand side. Edges into divergent nodes count as divergence.
    std::vector<std::map<int, Rational>> rows(m);
    std::vector<AbsVector> rhs(m);
    for (std::size_t t = 0; t < m; ++t) {
        std::size_t i = transient[t];
        rows[t][static_cast<int>(t)] = Rational(1);
        rhs[t] = direct[i];
        for (const auto& [j, p] : succ[i]) {
            if (divergent[j]) {
                rhs[t][div_key] += p;
            } else {
                Rational& cell = rows[t][local[j]];
                cell -= p;
                if (cell.is_zero()) rows[t].erase(local[j]);
            }
        }
    }

    // Sparse Gaussian elimination; I - Q over the transient part is a
    // nonsingular M-matrix, so the natural-order pivots never vanish.
    std::vector<std::set<int>> col_rows(m);
    for (std::size_t r = 0; r < m; ++r) {
        for (const auto& [col, coeff] : rows[r]) col_rows[col].insert(static_cast<int>(r));
    }
    for (int k = 0; k < static_cast<int>(m); ++k) {
        auto pivot_it = rows[k].find(k);
        if (pivot_it == rows[k].end() || pivot_it->second.is_zero()) {
            throw std::logic_error("absorption pivot vanished");
        }
        Rational pivot = pivot_it->second;
        if (!pivot.is_one()) {
            for (auto& [col, coeff] : rows[k]) coeff /= pivot;
            for (auto& [key, mass] : rhs[k]) mass /= pivot;
        }
        std::vector<int> below(col_rows[k].lower_bound(k + 1), col_rows[k].end());
        for (int r : below) {
            auto entry = rows[r].find(k);
            if (entry == rows[r].end()) continue;
            Rational factor = entry->second;
            rows[r].erase(entry);
            col_rows[k].erase(r);
            for (const auto& [col, coeff] : rows[k]) {
                if (col == k) continue;
                Rational& cell = rows[r][col];
                bool was_zero = cell.is_zero();
                cell -= factor * coeff;
                if (cell.is_zero()) {
                    rows[r].erase(col);
                    col_rows[col].erase(r);
                } else if (was_zero) {
                    col_rows[col].insert(r);
                }
            }
            add_scaled(rhs[r], rhs[k], -factor);
            for (auto it = rhs[r].begin(); it != rhs[r].end();) {
                it = it->second.is_zero() ? rhs[r].erase(it) : std::next(it);
            }
        }
    }

    // Back substitution; only x_0 is reported but the chain is computed fully.
    std::vector<AbsVector> solution(m);
    for (int k = static_cast<int>(m) - 1; k >= 0; --k) {
        AbsVector x = rhs[k];
        for (const auto& [col, coeff] : rows[k]) {
            if (col == k) continue;
            add_scaled(x, solution[col], -coeff);
        }
        for (auto it = x.begin(); it != x.end();) {
            it = it->second.is_zero() ? x.erase(it) : std::next(it);
        }
        solution[k] = std::move(x);
    }

    for (const auto& [key, mass] : solution[local[0]]) {
        switch (key.kind) {
        case AbsKey::Kind::terminal: result.terminal[key.state] += mass; break;
        case AbsKey::Kind::fault: result.fault_mass += mass; break;
        case AbsKey::Kind::divergence: result.residual_mass += mass; break;
        }
    }
    check_conservation(result);
    return result;
}

ExplorationResult analyze(const CommandPtr& c, const State& sigma, const AnalysisMode& mode,
                          const TraceFn& trace) {
    if (mode.kind == AnalysisMode::Kind::bounded) {
        return explore(c, sigma, mode.limit, trace);
    }
    return absorption_solve(c, sigma, mode.limit, trace);
}

const ExplorationResult& Analyzer::result_for(const State& sigma) {
    auto it = cache_.find(sigma);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(sigma, analyze(command_, sigma, mode_)).first->second;
}

SampleFamily<State> RandomRun::final_family() const {
    return family.map([](const std::pair<std::size_t, State>& p) { return p.second; });
}

Dist<State> RandomRun::terminal_distribution() const {
    return distribution_of(final_family());
}

std::variant<RandomRun, NonTerminationReport> run_random(const CommandPtr& c,
                                                         const RandomState& sigma,
                                                         const AnalysisMode& mode,
                                                         Analyzer* analyzer) {
    Analyzer fallback(c, mode);
    Analyzer& cache = analyzer != nullptr ? *analyzer : fallback;

    NonTerminationReport report;
    std::vector<SampleFamily<std::pair<std::size_t, State>>::Point> points;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        const ExplorationResult& r = cache.result_for(sigma.value(i));
        if (!r.exact || !r.fault_mass.is_zero() || !r.residual_mass.is_zero()) {
            report.failures.push_back(PointFailure{i, r.fault_mass, r.residual_mass, r.exact});
            continue;
        }
        for (const auto& [state, mass] : r.terminal) {
            points.emplace_back(sigma.weight(i) * mass, std::make_pair(i, state));
        }
    }
    if (!report.failures.empty()) return report;
    return RandomRun{SampleFamily<std::pair<std::size_t, State>>(std::move(points))};
}

std::string_view to_string(Answer a) {
    switch (a) {
    case Answer::yes: return "yes";
    case Answer::no: return "no";
    case Answer::unknown: return "unknown";
    }
    return "?";
}

FaultFreedom is_fault_free(const CommandPtr& c, const RandomState& sigma,
                           const AnalysisMode& mode, Analyzer* analyzer) {
    Analyzer fallback(c, mode);
    Analyzer& cache = analyzer != nullptr ? *analyzer : fallback;

    Rational residual;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        const ExplorationResult& r = cache.result_for(sigma.value(i));
        if (!r.fault_mass.is_zero()) {
            FaultFreedom out{Answer::no, i, fault_trace(c, sigma.value(i), mode.limit), Rational(0)};
            return out;
        }
        residual += sigma.weight(i) * r.residual_mass;
    }
    // In bounded mode leftover mass could still hide faults.
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        const ExplorationResult& r = cache.result_for(sigma.value(i));
        if (!r.exact && !r.residual_mass.is_zero()) {
            return FaultFreedom{Answer::unknown, std::nullopt, {}, residual};
        }
    }
    return FaultFreedom{Answer::yes, std::nullopt, {}, Rational(0)};
}

Termination is_terminating(const CommandPtr& c, const RandomState& sigma,
                           const AnalysisMode& mode, Analyzer* analyzer) {
    Analyzer fallback(c, mode);
    Analyzer& cache = analyzer != nullptr ? *analyzer : fallback;

    Rational residual;
    bool any_unknown = false;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        const ExplorationResult& r = cache.result_for(sigma.value(i));
        if (!r.fault_mass.is_zero()) {
            // Faulting mass never terminates, regardless of the rest.
            return Termination{Answer::no, i, r.fault_mass, r.residual_mass, Rational(0)};
        }
        if (r.exact && !r.residual_mass.is_zero()) {
            return Termination{Answer::no, i, Rational(0), r.residual_mass, Rational(0)};
        }
        if (!r.exact) {
            any_unknown = true;
            residual += sigma.weight(i) * r.residual_mass;
        }
    }
    if (any_unknown) {
        return Termination{Answer::unknown, std::nullopt, Rational(0), Rational(0), residual};
    }
    return Termination{Answer::yes, std::nullopt, Rational(0), Rational(0), Rational(0)};
}

std::string format_config(const Config& cfg) {
    if (const auto* nt = std::get_if<ConfigNT>(&cfg)) {
        std::ostringstream os;
        os << "[cmd " << std::hex << nt->command->hash << std::dec << " | " << nt->state.str()
           << "]";
        return os.str();
    }
    if (const auto* term = std::get_if<ConfigTerm>(&cfg)) {
        return "terminal " + term->state.str();
    }
    return "fault";
}

std::vector<std::string> fault_trace(const CommandPtr& c, const State& sigma, long max_depth) {
    struct Visit {
        ConfigNT config;
        int parent;         // index into visits, -1 for the root
        std::string edge;   // transition description from the parent
        long depth;
    };
    std::vector<Visit> visits;
    std::unordered_map<NodeKey, std::size_t, NodeKeyHash, NodeKeyEq> seen;

    visits.push_back(Visit{ConfigNT{c, sigma}, -1, "", 0});
    seen.emplace(NodeKey{c, sigma}, 0);
    for (std::size_t head = 0; head < visits.size(); ++head) {
        const Visit snapshot = visits[head];
        if (snapshot.depth >= max_depth) continue;
        for (const StepBranch& b : step_nt(snapshot.config)) {
            std::ostringstream edge;
            edge << format_config(Config{snapshot.config}) << " -";
            if (b.label.has_value()) edge << "~" << b.label->value.get_str();
            edge << "-> " << format_config(b.next) << "  (prob " << b.prob.str() << ")";
            if (std::holds_alternative<ConfigFault>(b.next)) {
                std::vector<std::string> lines{edge.str()};
                for (int at = static_cast<int>(head); at > 0; at = visits[at].parent) {
                    lines.push_back(visits[at].edge);
                }
                std::reverse(lines.begin(), lines.end());
                return lines;
            }
            if (const auto* nt = std::get_if<ConfigNT>(&b.next)) {
                NodeKey key{nt->command, nt->state};
                if (!seen.contains(key)) {
                    seen.emplace(key, visits.size());
                    visits.push_back(Visit{*nt, static_cast<int>(head), edge.str(),
                                           snapshot.depth + 1});
                }
            }
        }
    }
    return {};
}

} // namespace pslab
