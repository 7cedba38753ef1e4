#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "pslab/assertions.hpp"
#include "pslab/random_state.hpp"
#include "pslab/semantics.hpp"
#include "pslab/speccheck.hpp"

namespace pslab {

// A .spec file. Sections start at column 0 with `name:` and run until the
// next section header:
//   pre:      assertion
//   program:  inline pwhile source, or `@file.pw` relative to the spec file
//   post:     assertion
//   frame:    assertion (optional)
//   input:    random-state literal (optional)
//   mode:     bounded(N) | absorb(N) (optional)
struct SpecFile {
    Assertion pre;
    Assertion post;
    std::optional<Assertion> frame;
    CommandPtr program;
    std::string program_source;
    std::optional<RandomState> input;
    std::optional<AnalysisMode> mode;
};

SpecFile parse_spec_text(std::string_view text, const std::filesystem::path& base_dir);
SpecFile load_spec_file(const std::filesystem::path& path);

} // namespace pslab
