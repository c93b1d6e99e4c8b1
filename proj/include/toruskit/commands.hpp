#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toruskit/io.hpp"

namespace toruskit {

enum class Verdict { Pass, Fail, Error, Inconclusive };

const char* to_string(Verdict v);

struct RunOptions {
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::optional<double> budget_seconds;
};

struct CommandOutcome {
  Verdict verdict = Verdict::Error;
  int exit_code = 2;
  io::Json report;   // the machine-readable object
  std::string text;  // human-readable rendering
};

const std::vector<std::string>& command_names();

// Runs one command on a JSON input document. Never throws for bad input:
// exit 0 pass, 1 mathematical failure with witness, 2 malformed input or
// unmet precondition, 3 budget exhausted.
CommandOutcome execute(const std::string& command, std::string_view input, const RunOptions& options);

}  // namespace toruskit
