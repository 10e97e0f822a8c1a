#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bilocal/states.hpp"

namespace bilocal::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitIoError = 3;

/// Environment variable naming the directory for scan output.
inline constexpr const char* kOutputDirEnv = "BILOCAL_OUTPUT_DIR";

/// A parsed state argument such as `t:-1,-1,-1` or `werner:0.5`.
struct StateSpec {
  std::string text;
  XParams x;
  std::optional<TParams> t;  ///< set for the t:, werner: and alpha: families
};

/// Families: x:pop00,pop01,pop10,pop11,coh0011,coh0110 | t:cx,cy,cz |
/// werner:v | alpha:a | hidden:a. Throws InvalidParameters.
StateSpec parse_state_spec(const std::string& text);

/// Runs one invocation; `args` excludes the program name. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bilocal::cli
