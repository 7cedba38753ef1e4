#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pslab/assert_syntax.hpp"
#include "pslab/literals.hpp"
#include "pslab/parser.hpp"
#include "pslab/speccheck.hpp"
#include "pslab/specfile.hpp"

namespace pslab::cli {

namespace {

using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;
constexpr int exit_unknown = 3;

struct ModeFlags {
    long bounded = 0;
    long absorb = 0;

    // Flag > spec-file mode > default.
    AnalysisMode resolve(const std::optional<AnalysisMode>& file_mode) const {
        if (bounded > 0) return AnalysisMode::bounded(bounded);
        if (absorb > 0) return AnalysisMode::absorb(absorb);
        if (file_mode.has_value()) return *file_mode;
        return AnalysisMode::absorb(10000);
    }
};

void add_mode_flags(CLI::App* cmd, ModeFlags& flags) {
    auto* b = cmd->add_option("--bounded", flags.bounded, "layer-by-layer exploration budget");
    auto* a = cmd->add_option("--absorb", flags.absorb, "absorption-solver node cap");
    b->excludes(a);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

long elapsed_ms(std::chrono::steady_clock::time_point start) {
    auto d = std::chrono::steady_clock::now() - start;
    return std::chrono::duration_cast<std::chrono::milliseconds>(d).count();
}

json verdict_json(const Verdict& v) {
    json j;
    j["verdict"] = std::string(to_string(v.kind));
    if (v.reason.has_value()) j["reason"] = std::string(to_string(*v.reason));
    if (!v.detail.empty()) j["detail"] = v.detail;
    if (!v.witness_trace.empty()) j["witness_trace"] = v.witness_trace;
    if (v.is_unknown()) {
        j["residual"] = v.residual.str();
        j["where"] = v.where;
    }
    if (v.terminal.has_value()) j["terminal"] = *v.terminal;
    if (!v.tables.empty()) {
        json tables = json::array();
        for (const NamedTable& t : v.tables) {
            json rows = json::array();
            for (const auto& [value, prob] : t.rows) {
                rows.push_back({{"value", value}, {"prob", prob.str()}});
            }
            tables.push_back({{"title", t.title}, {"rows", rows}});
        }
        j["tables"] = tables;
    }
    return j;
}

void print_verdict_text(std::ostream& out, const Verdict& v) {
    out << "verdict: " << to_string(v.kind) << "\n";
    if (v.reason.has_value()) out << "reason: " << to_string(*v.reason) << "\n";
    if (!v.detail.empty()) out << "detail: " << v.detail << "\n";
    for (const std::string& line : v.witness_trace) out << "  " << line << "\n";
    if (v.is_unknown()) {
        out << "residual: " << v.residual.str() << "\n";
        out << "where: " << v.where << "\n";
    }
    if (v.terminal.has_value()) out << "terminal: " << *v.terminal << "\n";
    for (const NamedTable& t : v.tables) {
        out << "table: " << t.title << "\n";
        for (const auto& [value, prob] : t.rows) {
            out << "  " << value << ": " << prob.str() << "\n";
        }
    }
}

int verdict_exit(const Verdict& v) {
    switch (v.kind) {
    case Verdict::Kind::holds: return exit_ok;
    case Verdict::Kind::fails: return exit_fail;
    case Verdict::Kind::unknown: return exit_unknown;
    }
    return exit_usage;
}

TraceFn make_trace(std::ostream& out) {
    return [&out](const ConfigNT& from, const StepBranch& branch) {
        std::ostringstream line;
        line << std::hex;
        line.width(16);
        line.fill('0');
        line << from.command->hash;
        line << std::dec << " | " << from.state.str() << " | ";
        if (branch.label.has_value()) {
            line << "~" << branch.label->value.get_str();
        } else {
            line << ".";
        }
        line << " | " << branch.prob.str();
        out << line.str() << "\n";
    };
}

// ---- run -------------------------------------------------------------

int cmd_run(const std::string& program_path, const std::string& state_literal,
            const ModeFlags& mode_flags, bool use_json, bool trace, std::ostream& out) {
    auto start = std::chrono::steady_clock::now();
    CommandPtr program = parse_program(read_file(program_path));
    State initial = parse_state_literal(state_literal);
    AnalysisMode mode = mode_flags.resolve(std::nullopt);

    TraceFn trace_fn;
    std::ostringstream trace_buffer;
    if (trace) trace_fn = make_trace(trace_buffer);

    ExplorationResult r = analyze(program, initial, mode, trace_fn);

    if (use_json) {
        json j;
        j["schema"] = 1;
        j["command"] = "run";
        j["exact"] = r.exact;
        json terminal = json::array();
        for (const auto& [state, mass] : r.terminal) {
            terminal.push_back({{"state", state.str()}, {"prob", mass.str()}});
        }
        j["terminal"] = terminal;
        j["fault"] = r.fault_mass.str();
        j["residual"] = r.residual_mass.str();
        if (r.cap_exceeded) j["cap_exceeded"] = true;
        if (!r.note.empty()) j["note"] = r.note;
        if (trace) j["trace"] = trace_buffer.str();
        j["timing_ms"] = elapsed_ms(start);
        out << j.dump(2) << "\n";
    } else {
        if (trace) out << trace_buffer.str();
        out << "exact: " << (r.exact ? "yes" : "no") << "\n";
        out << "terminal distribution:\n";
        for (const auto& [state, mass] : r.terminal) {
            out << "  " << state.str() << ": " << mass.str() << "\n";
        }
        out << "fault: " << r.fault_mass.str() << "\n";
        out << "residual: " << r.residual_mass.str() << "\n";
        if (!r.note.empty()) out << "note: " << r.note << "\n";
    }
    return r.fault_mass >= Rational(1, 2) ? exit_fail : exit_ok;
}

// ---- check / tightness ----------------------------------------------

struct LoadedSpec {
    Spec spec;
    std::optional<RandomState> input;
    std::optional<AnalysisMode> file_mode;
    std::optional<Assertion> frame;
};

LoadedSpec load_checked_spec(const std::string& spec_path, const std::string& state_literal,
                             bool apply_frame_section) {
    SpecFile file = load_spec_file(spec_path);
    Spec spec{file.pre, file.program, file.post};
    if (apply_frame_section && file.frame.has_value()) {
        spec = apply_frame(spec, *file.frame);
    }
    std::optional<RandomState> input = file.input;
    if (!state_literal.empty()) input = parse_random_state_literal(state_literal);
    return LoadedSpec{std::move(spec), std::move(input), file.mode, file.frame};
}

int report_verdict(const Verdict& v, const char* command, bool use_json,
                   std::chrono::steady_clock::time_point start, std::ostream& out) {
    if (use_json) {
        json j = verdict_json(v);
        j["schema"] = 1;
        j["command"] = command;
        j["timing_ms"] = elapsed_ms(start);
        out << j.dump(2) << "\n";
    } else {
        print_verdict_text(out, v);
    }
    return verdict_exit(v);
}

int cmd_check(const std::string& spec_path, const std::string& state_literal, bool total,
              bool unsafe, const ModeFlags& mode_flags, bool use_json, std::ostream& out,
              std::ostream& err) {
    auto start = std::chrono::steady_clock::now();
    LoadedSpec loaded = load_checked_spec(spec_path, state_literal, true);
    if (!loaded.input.has_value()) {
        err << "error: no input random state (add an `input:` section or pass --state)\n";
        return exit_usage;
    }
    CheckOptions opts;
    opts.enforce_safety = !unsafe;
    opts.mode = mode_flags.resolve(loaded.file_mode);
    if (loaded.frame.has_value()) opts.frame_vars = loaded.frame->fv;

    Verdict v = total ? check_total(loaded.spec, *loaded.input, opts)
                      : check_partial(loaded.spec, *loaded.input, opts);
    return report_verdict(v, "check", use_json, start, out);
}

int cmd_tightness(const std::string& spec_path, const std::string& state_literal, bool unsafe,
                  const ModeFlags& mode_flags, bool use_json, std::ostream& out,
                  std::ostream& err) {
    auto start = std::chrono::steady_clock::now();
    LoadedSpec loaded = load_checked_spec(spec_path, state_literal, true);
    if (!loaded.input.has_value()) {
        err << "error: no input random state (add an `input:` section or pass --state)\n";
        return exit_usage;
    }
    CheckOptions opts;
    opts.enforce_safety = !unsafe; // tightness itself never invokes the safety clause
    opts.mode = mode_flags.resolve(loaded.file_mode);

    Verdict v = check_relative_tightness(loaded.spec, *loaded.input, opts);
    return report_verdict(v, "tightness", use_json, start, out);
}

// ---- frame ------------------------------------------------------------

int cmd_frame(const std::string& spec_path, bool use_json, std::ostream& out, std::ostream& err) {
    SpecFile file = load_spec_file(spec_path);
    if (!file.frame.has_value()) {
        err << "error: spec file has no `frame:` section\n";
        return exit_usage;
    }
    Spec base{file.pre, file.program, file.post};
    try {
        Spec framed = apply_frame(base, *file.frame);
        if (use_json) {
            json j;
            j["schema"] = 1;
            j["command"] = "frame";
            j["valid"] = true;
            j["pre"] = framed.pre.text;
            j["post"] = framed.post.text;
            j["frame"] = file.frame->text;
            out << j.dump(2) << "\n";
        } else {
            out << "side condition: ok\n";
            out << "framed pre:  " << framed.pre.text << "\n";
            out << "framed post: " << framed.post.text << "\n";
        }
        return exit_ok;
    } catch (const FrameError& e) {
        if (use_json) {
            json j;
            j["schema"] = 1;
            j["command"] = "frame";
            j["valid"] = false;
            j["offending"] = to_string(e.offending);
            j["detail"] = e.what();
            out << j.dump(2) << "\n";
        } else {
            out << "side condition: violated\n";
            out << "offending variables: " << to_string(e.offending) << "\n";
        }
        return exit_fail;
    }
}

// ---- search ------------------------------------------------------------

std::vector<Integer> parse_values_flag(const std::string& text) {
    std::vector<Integer> out;
    if (auto dots = text.find(".."); dots != std::string::npos) {
        Integer lo(text.substr(0, dots), 10);
        Integer hi(text.substr(dots + 2), 10);
        for (Integer v = lo; v <= hi; ++v) out.push_back(v);
        return out;
    }
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        out.emplace_back(item, 10);
    }
    return out;
}

int cmd_search(const std::string& spec_path, const std::string& vars_flag,
               const std::string& values_flag, std::size_t max_points, unsigned long denom,
               bool total, bool unsafe, const ModeFlags& mode_flags, bool use_json,
               std::ostream& out) {
    auto start = std::chrono::steady_clock::now();
    LoadedSpec loaded = load_checked_spec(spec_path, "", true);

    SearchSpace space;
    std::istringstream vars_in(vars_flag);
    std::string var;
    while (std::getline(vars_in, var, ',')) {
        if (!var.empty()) space.vars.emplace_back(var);
    }
    space.values = parse_values_flag(values_flag);
    space.max_points = max_points;
    space.weight_denominator = denom;

    CheckOptions opts;
    opts.enforce_safety = !unsafe;
    opts.mode = mode_flags.resolve(loaded.file_mode);
    if (loaded.frame.has_value()) opts.frame_vars = loaded.frame->fv;

    SearchOutcome outcome = search_counterexample(loaded.spec, space, opts, total);

    if (use_json) {
        json j;
        j["schema"] = 1;
        j["command"] = "search";
        j["candidates"] = outcome.eligible;
        j["enumerated"] = outcome.enumerated;
        if (outcome.witness.has_value()) {
            j["witness"] = format_random_state(*outcome.witness);
            j["witness_verdict"] = verdict_json(outcome.verdict);
        }
        j["timing_ms"] = elapsed_ms(start);
        out << j.dump(2) << "\n";
    } else {
        if (outcome.witness.has_value()) {
            out << "witness: " << format_random_state(*outcome.witness) << "\n";
            print_verdict_text(out, outcome.verdict);
        } else {
            out << "0 failures / " << outcome.eligible << " candidates\n";
        }
    }
    return outcome.witness.has_value() ? exit_fail : exit_ok;
}

} // namespace

int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"psl-lab: exact checker for probabilistic separation logic over pwhile"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "execute a program and print its exact outcome");
    std::string run_program;
    std::string run_state = "{}";
    ModeFlags run_mode;
    bool run_json = false;
    bool run_trace = false;
    run->add_option("program", run_program, "program file (.pw)")->required();
    run->add_option("--state", run_state, "initial state literal, default {}");
    add_mode_flags(run, run_mode);
    run->add_flag("--json", run_json, "emit a JSON report");
    run->add_flag("--trace", run_trace, "dump one line per transition");

    // check
    auto* check = app.add_subcommand("check", "check a Hoare triple on an input random state");
    std::string check_spec;
    std::string check_state;
    bool check_total_flag = false;
    bool check_unsafe = false;
    ModeFlags check_mode;
    bool check_json = false;
    check->add_option("spec", check_spec, "spec file (.spec)")->required();
    check->add_option("--state", check_state, "input random-state literal (overrides input:)");
    check->add_flag("--total", check_total_flag, "require almost-sure termination");
    check->add_flag("--unsafe", check_unsafe, "drop the safety guarantee");
    add_mode_flags(check, check_mode);
    check->add_flag("--json", check_json, "emit a JSON report");

    // tightness
    auto* tight = app.add_subcommand("tightness", "check relative tightness on an input state");
    std::string tight_spec;
    std::string tight_state;
    bool tight_unsafe = false;
    ModeFlags tight_mode;
    bool tight_json = false;
    tight->add_option("spec", tight_spec, "spec file (.spec)")->required();
    tight->add_option("--state", tight_state, "input random-state literal (overrides input:)");
    tight->add_flag("--unsafe", tight_unsafe, "accepted for symmetry with check");
    add_mode_flags(tight, tight_mode);
    tight->add_flag("--json", tight_json, "emit a JSON report");

    // frame
    auto* frame = app.add_subcommand("frame", "validate the frame side condition and print the framed spec");
    std::string frame_spec;
    bool frame_json = false;
    frame->add_option("spec", frame_spec, "spec file (.spec)")->required();
    frame->add_flag("--json", frame_json, "emit a JSON report");

    // search
    auto* search = app.add_subcommand("search", "search a space of random states for a counterexample");
    std::string search_spec;
    std::string search_vars;
    std::string search_values = "0..1";
    std::size_t search_max_points = 2;
    unsigned long search_denom = 2;
    bool search_total = false;
    bool search_unsafe = false;
    ModeFlags search_mode;
    bool search_json = false;
    search->add_option("spec", search_spec, "spec file (.spec)")->required();
    search->add_option("--vars", search_vars, "comma-separated variables")->required();
    search->add_option("--values", search_values, "value list 0,1,2 or range 0..2");
    search->add_option("--max-points", search_max_points, "maximum sample points per candidate");
    search->add_option("--denom", search_denom, "weight-grid denominator");
    search->add_flag("--total", search_total, "use total-correctness checking");
    search->add_flag("--unsafe", search_unsafe, "drop the safety guarantee");
    add_mode_flags(search, search_mode);
    search->add_flag("--json", search_json, "emit a JSON report");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        if (run->parsed()) {
            return cmd_run(run_program, run_state, run_mode, run_json, run_trace, out);
        }
        if (check->parsed()) {
            return cmd_check(check_spec, check_state, check_total_flag, check_unsafe, check_mode,
                             check_json, out, err);
        }
        if (tight->parsed()) {
            return cmd_tightness(tight_spec, tight_state, tight_unsafe, tight_mode, tight_json,
                                 out, err);
        }
        if (frame->parsed()) {
            return cmd_frame(frame_spec, frame_json, out, err);
        }
        if (search->parsed()) {
            return cmd_search(search_spec, search_vars, search_values, search_max_points,
                              search_denom, search_total, search_unsafe, search_mode, search_json,
                              out);
        }
    } catch (const FrameError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return exit_usage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    err << "error: no subcommand\n";
    return exit_usage;
}

} // namespace pslab::cli
