#pragma once

#include <stdexcept>
#include <string>

namespace gamemark {

// Caller broke a documented precondition (bad arguments, contract misuse).
class ContractError : public std::invalid_argument {
 public:
  explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

// Input text failed to parse; message names the offending field.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// The game structure is invalid (e.g. a history revisits itself).
class StructuralError : public std::runtime_error {
 public:
  explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

// A configured resource cap (node count, time) was exceeded.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// A gameplay trace is internally inconsistent (corrupt record, illegal move).
class TraceError : public std::runtime_error {
 public:
  explicit TraceError(const std::string& what) : std::runtime_error(what) {}
};

// An engine subprocess failed: died, timed out, or spoke broken UCI.
class SessionError : public std::runtime_error {
 public:
  explicit SessionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gamemark
