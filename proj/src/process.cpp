// Copyright 2026 The Embermine Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "embermine/process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <map>

#include "embermine/errors.hpp"

extern char** environ;

namespace embermine {

namespace {

void set_nonblock(int fd) { fcntl(fd, F_SETFL, O_NONBLOCK); }

std::vector<std::string> merged_env(
    const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::map<std::string, std::string> env;
  for (char** e = environ; e && *e; ++e) {
    const char* eq = std::strchr(*e, '=');
    if (!eq) continue;
    env[std::string(*e, static_cast<std::size_t>(eq - *e))] =
        std::string(eq + 1);
  }
  for (const auto& [k, v] : overrides) env[k] = v;
  std::vector<std::string> flat;
  flat.reserve(env.size());
  for (const auto& [k, v] : env) flat.push_back(k + "=" + v);
  return flat;
}

}  // namespace

RunResult run_process(const std::vector<std::string>& argv,
                      const RunOptions& opts) {
  if (argv.empty()) throw IoError("run_process: empty argv");

  // CLOEXEC on every end keeps concurrently forked children from inheriting
  // each other's pipes; dup2 onto 0/1/2 clears the flag where it matters.
  int in_pipe[2], out_pipe[2], err_pipe[2];
  if (pipe2(in_pipe, O_CLOEXEC) != 0 || pipe2(out_pipe, O_CLOEXEC) != 0 ||
      pipe2(err_pipe, O_CLOEXEC) != 0)
    throw IoError("pipe() failed: " + std::string(std::strerror(errno)));

  std::vector<std::string> env = merged_env(opts.env);
  std::vector<char*> cargv, cenv;
  for (const std::string& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);
  for (const std::string& e : env) cenv.push_back(const_cast<char*>(e.c_str()));
  cenv.push_back(nullptr);

  pid_t pid = fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1],
                   err_pipe[0], err_pipe[1]})
      close(fd);
    throw IoError("fork() failed: " + std::string(std::strerror(errno)));
  }
  if (pid == 0) {
    if (!opts.cwd.empty() && chdir(opts.cwd.c_str()) != 0) _exit(127);
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_pipe[1], STDERR_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    close(err_pipe[0]);
    close(err_pipe[1]);
    execvpe(cargv[0], cargv.data(), cenv.data());
    _exit(127);
  }

  close(in_pipe[0]);
  close(out_pipe[1]);
  close(err_pipe[1]);
  set_nonblock(in_pipe[1]);
  set_nonblock(out_pipe[0]);
  set_nonblock(err_pipe[0]);

  RunResult result;
  std::size_t written = 0;
  bool stdin_open = true;
  if (opts.stdin_data.empty()) {
    close(in_pipe[1]);
    stdin_open = false;
  }

  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::milliseconds(opts.timeout_ms < 0 ? 0 : opts.timeout_ms);
  bool out_open = true, err_open = true;
  char buf[65536];

  while (out_open || err_open || stdin_open) {
    struct pollfd fds[3];
    int n = 0;
    int out_idx = -1, err_idx = -1, in_idx = -1;
    if (out_open) { fds[n] = {out_pipe[0], POLLIN, 0}; out_idx = n++; }
    if (err_open) { fds[n] = {err_pipe[0], POLLIN, 0}; err_idx = n++; }
    if (stdin_open) { fds[n] = {in_pipe[1], POLLOUT, 0}; in_idx = n++; }

    int wait_ms = -1;
    if (opts.timeout_ms >= 0) {
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                      deadline - std::chrono::steady_clock::now())
                      .count();
      if (left <= 0) {
        kill(pid, SIGKILL);
        result.timed_out = true;
        break;
      }
      wait_ms = static_cast<int>(left);
    }
    int rc = poll(fds, static_cast<nfds_t>(n), wait_ms);
    if (rc < 0) {
      if (errno == EINTR) continue;
      kill(pid, SIGKILL);
      break;
    }
    if (rc == 0) continue;  // loop re-checks the deadline

    auto drain = [&](int idx, int fd, std::string& sink, bool& open_flag) {
      if (idx < 0 || !(fds[idx].revents & (POLLIN | POLLHUP | POLLERR))) return;
      for (;;) {
        ssize_t got = read(fd, buf, sizeof buf);
        if (got > 0) { sink.append(buf, static_cast<std::size_t>(got)); continue; }
        if (got == 0) { close(fd); open_flag = false; }
        else if (errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR) {
          close(fd);
          open_flag = false;
        }
        break;
      }
    };
    drain(out_idx, out_pipe[0], result.out, out_open);
    drain(err_idx, err_pipe[0], result.err, err_open);

    if (in_idx >= 0 && (fds[in_idx].revents & (POLLOUT | POLLHUP | POLLERR))) {
      if (fds[in_idx].revents & (POLLHUP | POLLERR)) {
        close(in_pipe[1]);
        stdin_open = false;
      } else {
        ssize_t put = write(in_pipe[1], opts.stdin_data.data() + written,
                            opts.stdin_data.size() - written);
        if (put > 0) written += static_cast<std::size_t>(put);
        if (put < 0 && errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR) {
          close(in_pipe[1]);
          stdin_open = false;
        }
        if (written == opts.stdin_data.size()) {
          close(in_pipe[1]);
          stdin_open = false;
        }
      }
    }
  }
  if (out_open) close(out_pipe[0]);
  if (err_open) close(err_pipe[0]);
  if (stdin_open) close(in_pipe[1]);

  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {}
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  else if (WIFSIGNALED(status)) result.exit_code = 128 + WTERMSIG(status);
  return result;
}

}  // namespace embermine
