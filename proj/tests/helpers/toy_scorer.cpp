// Minimal scorer child for exercising the subprocess wire protocol: reads
// "#longspan-scorer-v1" then id<TAB>src<TAB>mt<TAB>ref lines on stdin, writes
// id<TAB>score lines on stdout.
//
// Usage: toy_scorer [MODE]
//   hash         score derived from the id, stable across runs (default)
//   const:X      every segment scores X
//   lookup:FILE  scores joined from an id<TAB>score file
//   reverse      hash scores, lines emitted in reverse input order
//   fail         consume input, complain on stderr, exit 1
//   malformed    emit one unparseable line
//   sleep:N      sleep N seconds before answering (hash scores)
//   no-header    tolerate a missing header line (hash scores)

#include <unistd.h>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

double hash_score(const std::string& id) {
  return static_cast<double>(fnv1a64(id) % 10000) / 9999.0;
}

std::string first_field(const std::string& line) {
  const std::size_t tab = line.find('\t');
  return tab == std::string::npos ? line : line.substr(0, tab);
}

void print_score(const std::string& id, double score) {
  std::printf("%s\t%.17g\n", id.c_str(), score);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "hash";

  std::string line;
  if (!std::getline(std::cin, line)) {
    std::fprintf(stderr, "toy_scorer: empty input\n");
    return 2;
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> ids;
  if (line == "#longspan-scorer-v1") {
    // consumed
  } else if (mode == "no-header") {
    ids.push_back(first_field(line));
  } else {
    std::fprintf(stderr, "toy_scorer: expected #longspan-scorer-v1, got %s\n",
                 line.c_str());
    return 2;
  }

  while (std::getline(std::cin, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ids.push_back(first_field(line));
  }

  if (mode == "fail") {
    std::fprintf(stderr, "toy_scorer: refusing to score %zu segment(s)\n",
                 ids.size());
    return 1;
  }
  if (mode == "malformed") {
    std::printf("this line has no tab\n");
    return 0;
  }
  if (mode.rfind("sleep:", 0) == 0) {
    ::sleep(static_cast<unsigned>(std::atoi(mode.c_str() + 6)));
  }
  if (mode.rfind("const:", 0) == 0) {
    const double value = std::atof(mode.c_str() + 6);
    for (const auto& id : ids) print_score(id, value);
    return 0;
  }
  if (mode.rfind("lookup:", 0) == 0) {
    std::map<std::string, double> table;
    FILE* f = std::fopen(mode.c_str() + 7, "rb");
    if (!f) {
      std::fprintf(stderr, "toy_scorer: cannot open %s\n", mode.c_str() + 7);
      return 2;
    }
    char buf[4096];
    while (std::fgets(buf, sizeof buf, f)) {
      std::string entry(buf);
      while (!entry.empty() &&
             (entry.back() == '\n' || entry.back() == '\r')) {
        entry.pop_back();
      }
      if (entry.empty() || entry.front() == '#') continue;
      const std::size_t tab = entry.find('\t');
      if (tab == std::string::npos) continue;
      table[entry.substr(0, tab)] = std::atof(entry.c_str() + tab + 1);
    }
    std::fclose(f);
    for (const auto& id : ids) {
      const auto it = table.find(id);
      if (it == table.end()) {
        std::fprintf(stderr, "toy_scorer: no score for %s\n", id.c_str());
        return 2;
      }
      print_score(id, it->second);
    }
    return 0;
  }
  if (mode == "reverse") {
    for (auto it = ids.rbegin(); it != ids.rend(); ++it) {
      print_score(*it, hash_score(*it));
    }
    return 0;
  }
  for (const auto& id : ids) print_score(id, hash_score(id));
  return 0;
}
