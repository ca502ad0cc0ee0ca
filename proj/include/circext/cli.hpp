#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

namespace circext::cli {

enum class Command { rho, certify, scan, spectrum, report };
enum class Format { json, csv, svg };

/// A parsed invocation. Parameter keys are the long flag names without the
/// leading dashes; flags without a value map to "true".
struct RunConfig {
  Command command = Command::rho;
  std::map<std::string, std::string> parameters;
  Format output_format = Format::json;
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Command-line arguments to a RunConfig; throws UsageError. Help requests
/// are reported through the return flag so the caller can print usage.
RunConfig parse(int argc, const char* const* argv, bool* help_requested = nullptr, std::string* help_text = nullptr);

/// Executes the command and writes its report. Exit codes: 0 pass (or
/// informational), 1 a certification failed, 2 invalid configuration,
/// 3 numerical or I/O failure (a partial report is still written).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse + run with usage on errors.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::string usage();

}  // namespace circext::cli
