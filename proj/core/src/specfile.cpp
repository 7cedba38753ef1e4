#include "pslab/specfile.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "pslab/assert_syntax.hpp"
#include "pslab/literals.hpp"
#include "pslab/parser.hpp"

namespace pslab {

namespace {

const char* section_names[] = {"pre", "program", "post", "frame", "input", "mode"};

std::optional<std::string> section_header(const std::string& line) {
    for (const char* name : section_names) {
        std::string prefix = std::string(name);
        if (line.rfind(prefix, 0) == 0) {
            std::size_t i = prefix.size();
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
            if (i < line.size() && line[i] == ':') return prefix;
        }
    }
    return std::nullopt;
}

std::string trim(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    std::size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

AnalysisMode parse_mode(const std::string& text) {
    TokenCursor cur(lex(text));
    Token name = cur.expect(Tok::identifier);
    cur.expect(Tok::lparen);
    Token limit = cur.expect(Tok::integer);
    cur.expect(Tok::rparen);
    if (!cur.at_end()) cur.fail("unexpected trailing input after mode");
    long n = limit.int_value.get_si();
    if (n <= 0 || limit.int_value > Integer(1000000000L)) {
        throw ParseError("mode limit out of range", limit.line, limit.col);
    }
    if (name.text == "bounded") return AnalysisMode::bounded(n);
    if (name.text == "absorb") return AnalysisMode::absorb(n);
    throw ParseError("unknown mode '" + name.text + "' (expected bounded or absorb)", name.line,
                     name.col);
}

} // namespace

SpecFile parse_spec_text(std::string_view text, const std::filesystem::path& base_dir) {
    std::map<std::string, std::string> sections;
    std::string current;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (auto name = section_header(line)) {
            if (sections.contains(*name)) {
                throw Error("duplicate section '" + *name + "' in spec file");
            }
            current = *name;
            std::string rest = line.substr(line.find(':') + 1);
            sections[current] = rest + "\n";
            continue;
        }
        if (current.empty()) {
            std::string t = trim(line);
            if (t.empty() || t.front() == '#') continue;
            throw Error("spec file content before any section header: '" + t + "'");
        }
        sections[current] += line + "\n";
    }

    for (const char* required : {"pre", "program", "post"}) {
        if (!sections.contains(required)) {
            throw Error(std::string("spec file is missing the '") + required + "' section");
        }
    }

    SpecFile out{make_top(), make_top(), std::nullopt, nullptr, "", std::nullopt, std::nullopt};
    out.pre = parse_assertion(sections.at("pre"));
    out.post = parse_assertion(sections.at("post"));
    if (sections.contains("frame")) {
        out.frame = parse_assertion(sections.at("frame"));
    }

    std::string program_text = sections.at("program");
    std::string trimmed = trim(program_text);
    if (!trimmed.empty() && trimmed.front() == '@') {
        std::filesystem::path ref = trim(trimmed.substr(1));
        std::filesystem::path resolved = ref.is_absolute() ? ref : base_dir / ref;
        std::ifstream file(resolved);
        if (!file) {
            throw Error("cannot open program file '" + resolved.string() + "'");
        }
        std::ostringstream buffer;
        buffer << file.rdbuf();
        program_text = buffer.str();
    }
    out.program_source = program_text;
    out.program = parse_program(program_text);

    if (sections.contains("input")) {
        out.input = parse_random_state_literal(sections.at("input"));
    }
    if (sections.contains("mode")) {
        out.mode = parse_mode(sections.at("mode"));
    }
    return out;
}

SpecFile load_spec_file(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) {
        throw Error("cannot open spec file '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return parse_spec_text(buffer.str(), path.parent_path());
}

} // namespace pslab
