#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trellis/core_model.hpp"

namespace trellis::cli {

enum ExitCode : int { kOk = 0, kInternalError = 1, kUsageError = 2 };

// "<real>x<real>", e.g. "150x12" or "1.0x0.4".
std::optional<LabelDims> parse_wxh(std::string_view text);
// Comma separated counts with an optional K suffix: "1K,11K,500".
std::optional<std::vector<std::size_t>> parse_sizes(std::string_view text);

// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trellis::cli
