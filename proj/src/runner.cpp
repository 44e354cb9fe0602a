#include "nsvif/runner.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "nsvif/error.hpp"

namespace nsvif {

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out.push_back(c);
    }
  }
  out.push_back('\'');
  return out;
}

class TempFile {
 public:
  explicit TempFile(const std::string& content) {
    auto pattern = (std::filesystem::temp_directory_path() / "nsvif-checker-XXXXXX.py").string();
    int fd = mkstemps(pattern.data(), 3);
    if (fd < 0) throw Error(std::string("cannot create temp file: ") + std::strerror(errno));
    path_ = pattern;
    std::size_t done = 0;
    while (done < content.size()) {
      ssize_t n = ::write(fd, content.data() + done, content.size() - done);
      if (n < 0) {
        ::close(fd);
        throw Error(std::string("cannot write temp file: ") + std::strerror(errno));
      }
      done += static_cast<std::size_t>(n);
    }
    ::close(fd);
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace

CommandRunner::CommandRunner(std::string command_template, std::chrono::milliseconds timeout)
    : command_template_(std::move(command_template)), timeout_(timeout) {
  if (command_template_.find("{file}") == std::string::npos) {
    throw ValidationError("checker runner command must contain {file}: " + command_template_);
  }
}

RunOutcome CommandRunner::run(const std::string& program) {
  TempFile file(program);
  std::string command = command_template_;
  for (auto pos = command.find("{file}"); pos != std::string::npos; pos = command.find("{file}", pos)) {
    const std::string quoted = shell_quote(file.path());
    command.replace(pos, 6, quoted);
    pos += quoted.size();
  }

  int out_pipe[2];
  int err_pipe[2];
  if (pipe2(out_pipe, O_CLOEXEC) != 0 || pipe2(err_pipe, O_CLOEXEC) != 0) {
    throw Error(std::string("pipe failed: ") + std::strerror(errno));
  }
  pid_t pid = fork();
  if (pid < 0) throw Error(std::string("fork failed: ") + std::strerror(errno));
  if (pid == 0) {
    setpgid(0, 0);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_pipe[1], STDERR_FILENO);
    int devnull = open("/dev/null", O_RDONLY);
    if (devnull >= 0) dup2(devnull, STDIN_FILENO);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);

  RunOutcome outcome;
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
  int open_fds = 2;
  char buf[4096];
  while (open_fds > 0) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      outcome.timed_out = true;
      break;
    }
    int ready = poll(fds, 2, static_cast<int>(left.count()));
    if (ready < 0 && errno == EINTR) continue;
    if (ready <= 0) continue;
    for (int i = 0; i < 2; ++i) {
      if (fds[i].fd < 0 || !(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      ssize_t n = ::read(fds[i].fd, buf, sizeof buf);
      if (n > 0) {
        (i == 0 ? outcome.stdout_text : outcome.stderr_text).append(buf, static_cast<std::size_t>(n));
      } else {
        ::close(fds[i].fd);
        fds[i].fd = -1;
        --open_fds;
      }
    }
  }
  for (auto& f : fds) {
    if (f.fd >= 0) ::close(f.fd);
  }
  int status = 0;
  while (!outcome.timed_out) {
    pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid || (r < 0 && errno != EINTR)) break;
    if (std::chrono::steady_clock::now() >= deadline) {
      outcome.timed_out = true;
      break;
    }
    usleep(2000);
  }
  if (outcome.timed_out) {
    kill(-pid, SIGKILL);
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
  }
  if (outcome.timed_out) {
    outcome.exit_status = -1;
  } else if (WIFEXITED(status)) {
    outcome.exit_status = WEXITSTATUS(status);
  } else {
    outcome.exit_status = 128 + WTERMSIG(status);
  }
  return outcome;
}

ProgramVerdict read_program_verdict(const std::string& stdout_text) {
  std::string_view text = stdout_text;
  while (!text.empty()) {
    auto nl = text.find_last_of('\n');
    std::string_view line = nl == std::string_view::npos ? text : text.substr(nl + 1);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(0, nl);
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    if (line == "sat") return ProgramVerdict::sat;
    if (line == "unsat") return ProgramVerdict::unsat;
    return ProgramVerdict::missing;
  }
  return ProgramVerdict::missing;
}

}  // namespace nsvif
