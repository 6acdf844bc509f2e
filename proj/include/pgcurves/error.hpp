#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pgc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unrecognized character in an expression; offset is a byte index.
class LexError : public Error {
 public:
  LexError(std::size_t offset, const std::string& what)
      : Error("lex error at offset " + std::to_string(offset) + ": " + what),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t token_index, const std::string& expected)
      : Error("parse error at token " + std::to_string(token_index) +
              ": expected " + expected),
        token_index_(token_index),
        expected_(expected) {}
  std::size_t token_index() const noexcept { return token_index_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t token_index_;
  std::string expected_;
};

/// Evaluation outside a primitive's domain (log of a non-positive value, ...).
class DomainError : public Error {
 public:
  DomainError(const std::string& node, const std::string& what)
      : Error("domain error in " + node + ": " + what), node_(node) {}
  const std::string& node() const noexcept { return node_; }

 private:
  std::string node_;
};

/// Non-graph parametrization (dx/dt = 0) or lightlike second derivative.
class NotAdmissible : public Error {
 public:
  explicit NotAdmissible(const std::string& what) : Error("not admissible: " + what) {}
};

class SingularFrame : public Error {
 public:
  using Error::Error;
};

class InvalidProfile : public Error {
 public:
  using Error::Error;
};

class BadInitialFrame : public Error {
 public:
  using Error::Error;
};

class ZeroTorsion : public Error {
 public:
  using Error::Error;
};

class NonConstantInvariants : public Error {
 public:
  using Error::Error;
};

class DegenerateFit : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or argument.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace pgc
