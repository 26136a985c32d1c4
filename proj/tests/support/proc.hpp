#pragma once

// Helpers for driving the CLI binary and scratch files from tests.

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace proc {

namespace fs = std::filesystem;

inline std::string cli_path() { return LONGSPAN_CLI_PATH; }
inline std::string toy_scorer_path() { return TOY_SCORER_PATH; }

struct CmdResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline fs::path fresh_dir(const std::string& tag) {
  static std::atomic<unsigned> counter{0};
  const fs::path dir = fs::temp_directory_path() /
                       ("longspan_test_" + tag + "_" +
                        std::to_string(::getpid()) + "_" +
                        std::to_string(counter.fetch_add(1)));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Runs through /bin/sh, capturing exit code and both streams.
inline CmdResult run(const std::string& command) {
  const fs::path dir = fresh_dir("cmd");
  const fs::path out_path = dir / "out";
  const fs::path err_path = dir / "err";
  const std::string full = command + " >'" + out_path.string() + "' 2>'" +
                           err_path.string() + "'";
  const int status = std::system(full.c_str());
  CmdResult result;
  if (status < 0) {
    result.exit_code = -1;
  } else if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else {
    result.exit_code = 128;
  }
  result.out = read_file(out_path);
  result.err = read_file(err_path);
  fs::remove_all(dir);
  return result;
}

// Data lines of a TSV artifact: everything except '#' comments, minus the
// header when skip_header is set.
inline std::size_t data_lines(const fs::path& path, bool skip_header = true) {
  std::ifstream in(path, std::ios::binary);
  std::string line;
  std::size_t count = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '#') continue;
    if (skip_header && !header_seen) {
      header_seen = true;
      continue;
    }
    ++count;
  }
  return count;
}

}  // namespace proc
