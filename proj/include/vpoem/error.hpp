#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vpoem {

/// Base class for every error the toolkit reports on bad input data.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyToken : public Error {
 public:
  EmptyToken() : Error("token is empty after stripping punctuation") {}
};

class EmptyPoem : public Error {
 public:
  EmptyPoem() : Error("poem has no non-blank lines") {}
};

class UnknownGenre : public Error {
 public:
  explicit UnknownGenre(const std::string& what) : Error("unknown genre: " + what) {}
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

class FileNotFound : public Error {
 public:
  explicit FileNotFound(const std::string& path) : Error("file not found: " + path) {}
};

class MalformedRecord : public Error {
 public:
  MalformedRecord(std::size_t line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class PoemTooShort : public Error {
 public:
  PoemTooShort(std::size_t wanted, std::size_t available)
      : Error("poem has " + std::to_string(available) + " content words, " +
              std::to_string(wanted) + " requested") {}
};

class MissingPlaceholder : public Error {
 public:
  explicit MissingPlaceholder(const std::string& name)
      : Error("template lacks placeholder {" + name + "}") {}
};

class LengthMismatch : public Error {
 public:
  LengthMismatch(std::size_t results, std::size_t labels)
      : Error(std::to_string(results) + " results but " + std::to_string(labels) + " labels") {}
};

}  // namespace vpoem
