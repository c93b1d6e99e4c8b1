#include "toruskit/toruskit.h"

#include <new>
#include <string>

#include "toruskit/commands.hpp"

struct tk_report {
  toruskit::CommandOutcome outcome;
  std::string machine;
};

namespace {

thread_local std::string last_error;

tk_status fail(tk_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

tk_verdict to_c(toruskit::Verdict v) {
  switch (v) {
    case toruskit::Verdict::Pass: return TK_VERDICT_PASS;
    case toruskit::Verdict::Fail: return TK_VERDICT_FAIL;
    case toruskit::Verdict::Inconclusive: return TK_VERDICT_INCONCLUSIVE;
    case toruskit::Verdict::Error: break;
  }
  return TK_VERDICT_ERROR;
}

}  // namespace

extern "C" {

void tk_options_init(tk_options* options) {
  if (!options) return;
  options->seed = 0;
  options->jobs = 1;
  options->budget_seconds = 0.0;
}

tk_status tk_run(const char* command, const char* input, size_t input_length, const tk_options* options,
                 tk_report** report) {
  if (!report) return fail(TK_ERR_INVALID_ARGUMENT, "report pointer is null");
  *report = nullptr;
  if (!command) return fail(TK_ERR_INVALID_ARGUMENT, "command is null");
  if (!input && input_length > 0) return fail(TK_ERR_INVALID_ARGUMENT, "input is null");
  toruskit::RunOptions run;
  if (options) {
    run.seed = options->seed;
    run.jobs = options->jobs == 0 ? 1 : options->jobs;
    if (options->budget_seconds > 0) run.budget_seconds = options->budget_seconds;
  }
  try {
    auto result = std::make_unique<tk_report>();
    result->outcome = toruskit::execute(command, std::string_view(input ? input : "", input_length), run);
    result->machine = result->outcome.report.dump(2) + "\n";
    *report = result.release();
    return TK_OK;
  } catch (const std::bad_alloc&) {
    return fail(TK_ERR_OUT_OF_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return fail(TK_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TK_ERR_INTERNAL, "unknown internal error");
  }
}

tk_verdict tk_report_verdict(const tk_report* report) {
  return report ? to_c(report->outcome.verdict) : TK_VERDICT_ERROR;
}

int tk_report_exit_code(const tk_report* report) { return report ? report->outcome.exit_code : 2; }

const char* tk_report_machine(const tk_report* report) { return report ? report->machine.c_str() : ""; }

const char* tk_report_text(const tk_report* report) { return report ? report->outcome.text.c_str() : ""; }

void tk_report_free(tk_report* report) { delete report; }

size_t tk_command_count(void) { return toruskit::command_names().size(); }

const char* tk_command_name(size_t index) {
  const auto& names = toruskit::command_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

const char* tk_last_error(void) { return last_error.c_str(); }

const char* tk_version(void) { return "0.1.0"; }
}
