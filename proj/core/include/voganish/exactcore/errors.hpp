#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace voganish {

enum class ErrorKind { Parse, Precondition, Check, Budget };

// Every library failure carries a kind (mapped to CLI exit codes) and a short name.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string name, const std::string& what)
      : std::runtime_error(name + ": " + what), kind_(kind), name_(std::move(name)) {}
  ErrorKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

 private:
  ErrorKind kind_;
  std::string name_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : Error(ErrorKind::Parse, "ParseError", what + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

inline Error precondition(const std::string& name, const std::string& what) {
  return Error(ErrorKind::Precondition, name, what);
}

}  // namespace voganish
