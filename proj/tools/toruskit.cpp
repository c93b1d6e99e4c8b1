#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "toruskit/toruskit.h"

namespace {

constexpr int kExitMalformed = 2;

std::optional<std::string> read_input(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct ReportDeleter {
  void operator()(tk_report* r) const { tk_report_free(r); }
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> commands;
  for (std::size_t i = 0; i < tk_command_count(); ++i) commands.emplace_back(tk_command_name(i));

  CLI::App app{"Exact checks for torus weight systems, GF(2) sparse sets and labeled one-skeleta"};
  app.set_version_flag("--version", std::string(tk_version()));
  std::string command;
  std::string input_path;
  std::string format = "text";
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  double budget = 0;
  std::optional<unsigned> dim;
  app.add_option("command", command, "Analysis to run")->required()->check(CLI::IsMember(commands));
  app.add_option("-i,--input", input_path, "Input JSON file, or - for stdin");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "machine"}));
  app.add_option("--seed", seed, "Seed for randomized identity testing");
  app.add_option("--jobs", jobs, "Worker threads for enumerations")->check(CLI::PositiveNumber);
  app.add_option("--budget", budget, "Wall-clock cutoff in seconds for enumerations")->check(CLI::PositiveNumber);
  app.add_option("--d", dim, "Dimension, in place of an input file (z2-max-sparse)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitMalformed;
  }

  std::string input;
  if (!input_path.empty()) {
    auto text = read_input(input_path);
    if (!text) {
      std::cerr << "error: cannot read input file '" << input_path << "'\n";
      return kExitMalformed;
    }
    input = std::move(*text);
  } else if (dim) {
    input = "{\"d\": " + std::to_string(*dim) + "}";
  } else {
    std::cerr << "error: --input is required\n";
    return kExitMalformed;
  }

  tk_options options;
  tk_options_init(&options);
  options.seed = seed;
  options.jobs = jobs;
  options.budget_seconds = budget;

  tk_report* raw = nullptr;
  if (tk_run(command.c_str(), input.data(), input.size(), &options, &raw) != TK_OK) {
    std::cerr << "error: " << tk_last_error() << "\n";
    return kExitMalformed;
  }
  std::unique_ptr<tk_report, ReportDeleter> report(raw);
  std::fputs(format == "machine" ? tk_report_machine(report.get()) : tk_report_text(report.get()), stdout);
  return tk_report_exit_code(report.get());
}
