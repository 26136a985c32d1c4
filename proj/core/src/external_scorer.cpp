#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include "longspan/errors.hpp"
#include "longspan/scorers.hpp"
#include "longspan/util.hpp"
#include "score_lines.hpp"

namespace longspan {

namespace {

std::string errno_text(const char* what) {
  return std::string(what) + ": " + std::strerror(errno);
}

void set_nonblocking(int fd) {
  const int flags = fcntl(fd, F_GETFL, 0);
  if (flags >= 0) fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

void close_fd(int& fd) {
  if (fd >= 0) {
    ::close(fd);
    fd = -1;
  }
}

void check_protocol_field(const std::string& id, const std::string& value,
                          const char* field) {
  if (value.find('\t') != std::string::npos ||
      value.find('\n') != std::string::npos ||
      value.find('\r') != std::string::npos) {
    throw serialization_error("segment '" + id + "': " + field +
                              " contains a tab or newline, cannot be sent "
                              "over the scorer protocol");
  }
}

std::string build_payload(const Corpus& corpus) {
  std::string payload = "#longspan-scorer-v1\n";
  for (const auto& seg : corpus.segments()) {
    check_protocol_field(seg.id, seg.id, "id");
    check_protocol_field(seg.id, seg.source, "src");
    check_protocol_field(seg.id, seg.hypothesis, "mt");
    if (seg.reference) check_protocol_field(seg.id, *seg.reference, "ref");
    payload += seg.id;
    payload += '\t';
    payload += seg.source;
    payload += '\t';
    payload += seg.hypothesis;
    payload += '\t';
    if (seg.reference) payload += *seg.reference;
    payload += '\n';
  }
  return payload;
}

std::string stderr_excerpt(const std::string& captured) {
  constexpr std::size_t max_len = 2000;
  std::string text = captured;
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) {
    text.pop_back();
  }
  if (text.empty()) return {};
  if (text.size() > max_len) {
    text = "..." + text.substr(text.size() - max_len);
  }
  return "; stderr: " + text;
}

struct ChildProcess {
  pid_t pid = -1;
  int stdin_fd = -1;
  int stdout_fd = -1;
  int stderr_fd = -1;

  ~ChildProcess() {
    close_fd(stdin_fd);
    close_fd(stdout_fd);
    close_fd(stderr_fd);
    if (pid > 0) {
      ::kill(pid, SIGKILL);
      int status = 0;
      ::waitpid(pid, &status, 0);
    }
  }
};

ChildProcess spawn(const std::string& command) {
  int in_pipe[2] = {-1, -1};
  int out_pipe[2] = {-1, -1};
  int err_pipe[2] = {-1, -1};
  if (::pipe(in_pipe) != 0 || ::pipe(out_pipe) != 0 ||
      ::pipe(err_pipe) != 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1],
                   err_pipe[0], err_pipe[1]}) {
      if (fd >= 0) ::close(fd);
    }
    throw scorer_error(errno_text("pipe"));
  }

  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1],
                   err_pipe[0], err_pipe[1]}) {
      ::close(fd);
    }
    throw scorer_error(errno_text("fork"));
  }

  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::dup2(err_pipe[1], STDERR_FILENO);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1],
                   err_pipe[0], err_pipe[1]}) {
      ::close(fd);
    }
    ::signal(SIGPIPE, SIG_DFL);
    ::execl("/bin/sh", "sh", "-c", command.c_str(),
            static_cast<char*>(nullptr));
    ::_exit(127);
  }

  ChildProcess child;
  child.pid = pid;
  child.stdin_fd = in_pipe[1];
  child.stdout_fd = out_pipe[0];
  child.stderr_fd = err_pipe[0];
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);
  set_nonblocking(child.stdin_fd);
  set_nonblocking(child.stdout_fd);
  set_nonblocking(child.stderr_fd);
  return child;
}

}  // namespace

std::uint64_t effective_scorer_timeout(const ExternalScorerConfig& config) {
  if (config.timeout_secs) return *config.timeout_secs;
  if (const char* env = std::getenv("LONGSPAN_SCORER_TIMEOUT_SECS")) {
    const auto value = parse_u64(env);
    if (!value || *value == 0) {
      throw config_error(
          "LONGSPAN_SCORER_TIMEOUT_SECS must be a positive integer, got '" +
          std::string(env) + "'");
    }
    return *value;
  }
  return 600;
}

ScoreVector run_external_scorer(const ExternalScorerConfig& config,
                                const Corpus& corpus) {
  if (config.command.empty()) {
    throw config_error("external scorer command is empty");
  }
  const std::string payload = build_payload(corpus);
  const std::uint64_t timeout_secs = effective_scorer_timeout(config);

  // A child that exits before consuming all of stdin must surface as its
  // exit status, not as SIGPIPE killing us.
  ::signal(SIGPIPE, SIG_IGN);

  ChildProcess child = spawn(config.command);

  using clock = std::chrono::steady_clock;
  const auto deadline =
      clock::now() + std::chrono::seconds(static_cast<long>(timeout_secs));
  const auto throw_timeout = [&]() -> void {
    // ~ChildProcess kills and reaps.
    throw timeout_error("external scorer exceeded the " +
                        std::to_string(timeout_secs) + " s timeout");
  };

  std::string out_buf;
  std::string err_buf;
  std::size_t sent = 0;
  char chunk[65536];

  while (child.stdin_fd >= 0 || child.stdout_fd >= 0 ||
         child.stderr_fd >= 0) {
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - clock::now());
    if (remaining.count() <= 0) throw_timeout();

    struct pollfd fds[3];
    int nfds = 0;
    int stdin_slot = -1, stdout_slot = -1, stderr_slot = -1;
    if (child.stdin_fd >= 0) {
      stdin_slot = nfds;
      fds[nfds++] = {child.stdin_fd, POLLOUT, 0};
    }
    if (child.stdout_fd >= 0) {
      stdout_slot = nfds;
      fds[nfds++] = {child.stdout_fd, POLLIN, 0};
    }
    if (child.stderr_fd >= 0) {
      stderr_slot = nfds;
      fds[nfds++] = {child.stderr_fd, POLLIN, 0};
    }

    const int rc = ::poll(fds, static_cast<nfds_t>(nfds),
                          static_cast<int>(std::min<long long>(
                              remaining.count(), 60000)));
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw scorer_error(errno_text("poll"));
    }
    if (rc == 0) continue;

    if (stdin_slot >= 0 && (fds[stdin_slot].revents & (POLLOUT | POLLERR))) {
      const ssize_t n = ::write(child.stdin_fd, payload.data() + sent,
                                std::min<std::size_t>(payload.size() - sent,
                                                      sizeof chunk));
      if (n > 0) {
        sent += static_cast<std::size_t>(n);
      } else if (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK &&
                 errno != EINTR) {
        // EPIPE: the child stopped reading; its exit status will tell.
        close_fd(child.stdin_fd);
      }
      if (sent == payload.size()) close_fd(child.stdin_fd);
    }

    const auto drain = [&](int slot, int& fd, std::string& buf) {
      if (slot < 0 || !(fds[slot].revents & (POLLIN | POLLHUP | POLLERR))) {
        return;
      }
      while (true) {
        const ssize_t n = ::read(fd, chunk, sizeof chunk);
        if (n > 0) {
          buf.append(chunk, static_cast<std::size_t>(n));
        } else if (n == 0) {
          close_fd(fd);
          break;
        } else {
          if (errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR) {
            close_fd(fd);
          }
          break;
        }
      }
    };
    drain(stdout_slot, child.stdout_fd, out_buf);
    drain(stderr_slot, child.stderr_fd, err_buf);
  }

  // Streams are closed; the child should exit promptly. Reap it within the
  // remaining budget rather than blocking forever on a lingering process.
  int status = 0;
  while (true) {
    const pid_t r = ::waitpid(child.pid, &status, WNOHANG);
    if (r == child.pid) {
      child.pid = -1;
      break;
    }
    if (r < 0 && errno != EINTR) {
      child.pid = -1;
      throw scorer_error(errno_text("waitpid"));
    }
    if (clock::now() >= deadline) throw_timeout();
    ::poll(nullptr, 0, 20);
  }

  if (WIFSIGNALED(status)) {
    throw scorer_error("external scorer killed by signal " +
                       std::to_string(WTERMSIG(status)) +
                       stderr_excerpt(err_buf));
  }
  const int exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (exit_code != 0) {
    throw scorer_error("external scorer exited with status " +
                       std::to_string(exit_code) + stderr_excerpt(err_buf));
  }

  std::istringstream out_stream(out_buf);
  const auto lines = detail::parse_score_lines(
      out_stream, [](std::size_t line_no, const std::string& msg) {
        throw protocol_error(line_no, msg);
      });

  ScoreVector result;
  result.scorer_name = config.name;
  for (const auto& entry : lines) {
    const auto [it, inserted] = result.entries.emplace(entry.id, entry.score);
    (void)it;
    if (!inserted) {
      throw protocol_error(entry.line_no, "duplicate id '" + entry.id + "'");
    }
  }
  check_coverage(result.entries, corpus);
  return result;
}

}  // namespace longspan
