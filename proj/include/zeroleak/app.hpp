#ifndef ZEROLEAK_APP_HPP_
#define ZEROLEAK_APP_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "zeroleak/sweep.hpp"
#include "zeroleak/tolerances.hpp"

namespace zeroleak {

enum class Command { kAnalyze, kMechanism, kCode, kAudit, kSweep };
enum class OutputFormat { kText, kStructured };

inline constexpr std::uint64_t kDefaultSeed = 0x5eed2024ULL;

struct RunConfig {
  std::string input_path;
  Command command = Command::kAnalyze;
  Tolerances tol;
  std::uint64_t seed = kDefaultSeed;
  OutputFormat format = OutputFormat::kText;
  std::size_t n = 100;
  Family family = Family::kDeterministic;
  std::string code_path;       // audit: code to verify
  std::string save_code_path;  // code: where to write the two-part (or direct) code
};

std::optional<Command> ParseCommand(const std::string& name);
std::optional<OutputFormat> ParseFormat(const std::string& name);

// Exit statuses: 0 all invariants hold, 1 an invariant failed, 2 bad input.
struct RunResult {
  int exit_status = 0;
  std::string report;
};

RunResult Run(const RunConfig& config);

}  // namespace zeroleak

#endif  // ZEROLEAK_APP_HPP_
