#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rwlap {

enum class ErrorCode {
  parse,
  validation,
  not_strongly_connected,
  singular,
  domain,
  unreachable,
  estimation,
};

std::string_view to_string(ErrorCode code);

// Base for every error the library raises. `nodes` holds internal indices of the
// offending nodes when known; `labels` holds their names when the raising code
// had access to them (e.g. during ingestion).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::vector<std::size_t> nodes = {},
        std::vector<std::string> labels = {})
      : std::runtime_error(message), code_(code), nodes_(std::move(nodes)), labels_(std::move(labels)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::vector<std::size_t>& nodes() const noexcept { return nodes_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

 private:
  ErrorCode code_;
  std::vector<std::size_t> nodes_;
  std::vector<std::string> labels_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line)
      : Error(ErrorCode::parse, line == 0 ? message : "line " + std::to_string(line) + ": " + message),
        line_(line) {}
  // 1-based; 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
  explicit ValidationError(const std::string& message, std::vector<std::size_t> nodes = {},
                           std::vector<std::string> labels = {})
      : Error(ErrorCode::validation, message, std::move(nodes), std::move(labels)) {}
};

class NotStronglyConnectedError : public Error {
 public:
  // `from` cannot reach `to`.
  NotStronglyConnectedError(std::size_t from, std::size_t to)
      : Error(ErrorCode::not_strongly_connected,
              "graph is not strongly connected: node " + std::to_string(from) + " cannot reach node " +
                  std::to_string(to),
              {from, to}) {}
};

class SingularError : public Error {
 public:
  explicit SingularError(const std::string& message) : Error(ErrorCode::singular, message) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message, std::vector<std::size_t> nodes = {})
      : Error(ErrorCode::domain, message, std::move(nodes)) {}
};

class UnreachableError : public Error {
 public:
  explicit UnreachableError(const std::string& message, std::vector<std::size_t> nodes = {})
      : Error(ErrorCode::unreachable, message, std::move(nodes)) {}
};

class EstimationError : public Error {
 public:
  EstimationError(const std::string& message, double acceptance_rate)
      : Error(ErrorCode::estimation, message), acceptance_rate_(acceptance_rate) {}
  double acceptance_rate() const noexcept { return acceptance_rate_; }

 private:
  double acceptance_rate_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse: return "parse_error";
    case ErrorCode::validation: return "validation_error";
    case ErrorCode::not_strongly_connected: return "not_strongly_connected";
    case ErrorCode::singular: return "singular_matrix";
    case ErrorCode::domain: return "domain_error";
    case ErrorCode::unreachable: return "unreachable";
    case ErrorCode::estimation: return "estimation_error";
  }
  return "error";
}

}  // namespace rwlap
