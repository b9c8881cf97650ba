#include "vcforge/subprocess.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>

#include "vcforge/errors.hpp"

namespace vcforge {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

}  // namespace

RunResult run_command(const std::string& command, double timeout_seconds) {
  int fds[2];
  if (pipe(fds) != 0)
    throw AdapterSpawnError(std::string("pipe: ") + std::strerror(errno));

  pid_t pid = fork();
  if (pid < 0) {
    int err = errno;
    close(fds[0]);
    close(fds[1]);
    throw AdapterSpawnError(std::string("fork: ") + std::strerror(err));
  }

  if (pid == 0) {
    setpgid(0, 0);
    dup2(fds[1], STDOUT_FILENO);
    dup2(fds[1], STDERR_FILENO);
    close(fds[0]);
    close(fds[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }

  // Both sides call setpgid so the group exists before any kill below,
  // whichever of the two processes gets scheduled first.
  setpgid(pid, pid);
  close(fds[1]);

  auto start = std::chrono::steady_clock::now();
  RunResult result;
  char buf[4096];

  for (;;) {
    double remain = timeout_seconds - seconds_since(start);
    if (remain <= 0) {
      result.timed_out = true;
      break;
    }
    struct pollfd pfd{fds[0], POLLIN, 0};
    int slice_ms = static_cast<int>(std::min(remain, 0.2) * 1000) + 1;
    int ready = poll(&pfd, 1, slice_ms);
    if (ready < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (ready == 0) continue;
    ssize_t n = read(fds[0], buf, sizeof buf);
    if (n > 0)
      result.output.append(buf, static_cast<size_t>(n));
    else
      break;  // EOF: every writer closed its end
  }

  if (result.timed_out) {
    kill(-pid, SIGKILL);
    kill(pid, SIGKILL);
  }
  close(fds[0]);

  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }

  result.wall_seconds = seconds_since(start);
  if (result.timed_out)
    result.exit_code = -1;
  else if (WIFEXITED(status))
    result.exit_code = WEXITSTATUS(status);
  else if (WIFSIGNALED(status))
    result.exit_code = 128 + WTERMSIG(status);
  return result;
}

}  // namespace vcforge
