#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace longspan {

// Error taxonomy shared by the library and the CLI. Each class maps to one
// CLI exit-code family:
//   2  schema / configuration / usage problems
//   3  data-integrity problems
//   4  external scorer failures
//   5  degenerate statistics (constant inputs, collapsed scales, zero weights)
class error : public std::runtime_error {
 public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
  virtual int exit_code() const { return 1; }
};

class schema_error : public error {
 public:
  using error::error;
  int exit_code() const override { return 2; }
};

// Malformed data row; carries the 1-based physical line number.
class row_error : public schema_error {
 public:
  row_error(std::size_t line_no, const std::string& msg)
      : schema_error("line " + std::to_string(line_no) + ": " + msg),
        line_no_(line_no) {}
  std::size_t line_no() const { return line_no_; }

 private:
  std::size_t line_no_;
};

// A field that cannot be represented in the TSV dialect (embedded tab/newline).
class serialization_error : public schema_error {
 public:
  using schema_error::schema_error;
};

class config_error : public schema_error {
 public:
  using schema_error::schema_error;
};

class usage_error : public schema_error {
 public:
  using schema_error::schema_error;
};

// Invalid call-level arguments (mismatched lengths, empty input where data is
// required, bad parameter ranges).
class argument_error : public error {
 public:
  using error::error;
  int exit_code() const override { return 2; }
};

class integrity_error : public error {
 public:
  using error::error;
  int exit_code() const override { return 3; }
};

// Segments offered for concatenation whose seg_index values are not
// consecutive within the document.
class adjacency_error : public integrity_error {
 public:
  using integrity_error::integrity_error;
};

// A score vector that does not cover the corpus; carries the missing ids.
class coverage_error : public integrity_error {
 public:
  coverage_error(const std::string& msg, std::vector<std::string> missing_ids)
      : integrity_error(msg), missing_ids_(std::move(missing_ids)) {}
  const std::vector<std::string>& missing_ids() const { return missing_ids_; }

 private:
  std::vector<std::string> missing_ids_;
};

// Bounds requested for a group that has no observations.
class fit_error : public integrity_error {
 public:
  using integrity_error::integrity_error;
};

class scorer_error : public error {
 public:
  using error::error;
  int exit_code() const override { return 4; }
};

// Malformed line on the external scorer's output stream.
class protocol_error : public scorer_error {
 public:
  protocol_error(std::size_t line_no, const std::string& msg)
      : scorer_error("scorer output line " + std::to_string(line_no) + ": " + msg),
        line_no_(line_no) {}
  std::size_t line_no() const { return line_no_; }

 private:
  std::size_t line_no_;
};

class timeout_error : public scorer_error {
 public:
  using scorer_error::scorer_error;
};

class degenerate_error : public error {
 public:
  using error::error;
  int exit_code() const override { return 5; }
};

}  // namespace longspan
