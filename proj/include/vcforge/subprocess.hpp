#pragma once

#include <string>

namespace vcforge {

struct RunResult {
  int exit_code = -1;  // 128 + signal when killed; -1 after a timeout
  bool timed_out = false;
  std::string output;  // stdout and stderr combined
  double wall_seconds = 0;
};

// Runs `command` under /bin/sh -c in its own process group, capturing
// combined output. When the wall clock passes timeout_seconds the whole
// group is killed and timed_out is set. Throws AdapterSpawnError when no
// process can be started at all.
RunResult run_command(const std::string& command, double timeout_seconds);

}  // namespace vcforge
