#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace vcforge {

// Every error the library raises derives from Error so callers can map a
// whole failure family to one exit code without enumerating subclasses.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct SourceLoc {
  size_t line = 0;    // 1-based; 0 means unknown
  size_t column = 0;  // 1-based byte column
  std::string to_string() const;
};

// --- input / corpus errors ---------------------------------------------

class ParseError : public Error {
public:
  ParseError(SourceLoc loc, const std::string& msg)
      : Error(loc.to_string() + ": " + msg), loc_(loc) {}
  const SourceLoc& where() const { return loc_; }

private:
  SourceLoc loc_;
};

class SchemaError : public Error {
public:
  SchemaError(SourceLoc loc, const std::string& msg)
      : Error(loc.to_string() + ": " + msg), loc_(loc) {}
  const SourceLoc& where() const { return loc_; }

private:
  SourceLoc loc_;
};

class ValidationError : public Error {
public:
  using Error::Error;
};

class CycleError : public Error {
public:
  explicit CycleError(std::vector<std::string> cycle);
  const std::vector<std::string>& cycle() const { return cycle_; }

private:
  std::vector<std::string> cycle_;
};

class EmptyInput : public Error {
public:
  using Error::Error;
};

// --- term-level errors --------------------------------------------------

class MalformedPattern : public Error {
public:
  using Error::Error;
};

// --- rewrite errors ------------------------------------------------------

class RuleFormatError : public Error {
public:
  using Error::Error;
};

class IllegalContractum : public Error {
public:
  using Error::Error;
};

class RewriteBudgetExceeded : public Error {
public:
  RewriteBudgetExceeded(const std::string& path, size_t budget)
      : Error("rewrite budget of " + std::to_string(budget) +
              " steps exceeded at subterm path '" + path + "'"),
        path_(path) {}
  const std::string& path() const { return path_; }

private:
  std::string path_;
};

// --- emission errors ------------------------------------------------------

class UnmappedConstant : public Error {
public:
  explicit UnmappedConstant(const std::string& name)
      : Error("constant '" + name +
              "' has no builtin mapping, notation, or in-scope declaration"),
        name_(name) {}
  const std::string& name() const { return name_; }

private:
  std::string name_;
};

class NonUniformUnsupported : public Error {
public:
  using Error::Error;
};

// --- complication errors ---------------------------------------------------

class LexError : public Error {
public:
  LexError(size_t offset, const std::string& msg)
      : Error("byte " + std::to_string(offset) + ": " + msg),
        offset_(offset) {}
  size_t offset() const { return offset_; }

private:
  size_t offset_;
};

class SpanMismatch : public Error {
public:
  using Error::Error;
};

// --- metrics / report errors -----------------------------------------------

class UnmappedGoal : public Error {
public:
  explicit UnmappedGoal(const std::string& goal_id)
      : Error("goal '" + goal_id + "' is missing from the category map") {}
};

// --- harness errors ----------------------------------------------------------

class AdapterSpawnError : public Error {
public:
  using Error::Error;
};

class PlaceholderMissing : public Error {
public:
  using Error::Error;
};

class InsufficientAttempts : public Error {
public:
  InsufficientAttempts(const std::string& goal_id, size_t have, size_t need)
      : Error("goal '" + goal_id + "' has " + std::to_string(have) +
              " attempts, pass@" + std::to_string(need) + " needs " +
              std::to_string(need)) {}
};

// --- io ----------------------------------------------------------------------

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace vcforge
