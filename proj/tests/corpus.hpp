#pragma once

// Test corpora shared by the unit and acceptance suites.

#include <optional>
#include <string>
#include <vector>

namespace pgc::testing {

enum class Outcome { Ok, LexError, ParseError };

struct GoldenExpr {
  std::string source;
  Outcome outcome;
  std::string sexpr;                   // expected tree when Ok
  std::optional<std::size_t> offset;  // expected LexError offset
};

inline const std::vector<GoldenExpr>& golden_expressions() {
  static const std::vector<GoldenExpr> corpus = {
      {"1+2*3", Outcome::Ok, "(+ 1 (* 2 3))", {}},
      {"2^3^2", Outcome::Ok, "(^ 2 (^ 3 2))", {}},
      {"1-2-3", Outcome::Ok, "(- (- 1 2) 3)", {}},
      {"8/4/2", Outcome::Ok, "(/ (/ 8 4) 2)", {}},
      {"-2^2", Outcome::Ok, "(neg (^ 2 2))", {}},
      {"-s*3", Outcome::Ok, "(* (neg s) 3)", {}},
      {"2*-s", Outcome::Ok, "(* 2 (neg s))", {}},
      {"(1+2)*3", Outcome::Ok, "(* (+ 1 2) 3)", {}},
      {"s^2/2", Outcome::Ok, "(/ (^ s 2) 2)", {}},
      {"cosh(s)", Outcome::Ok, "(cosh s)", {}},
      {"sin(cos(s))", Outcome::Ok, "(sin (cos s))", {}},
      {"2^-1", Outcome::Ok, "(^ 2 (neg 1))", {}},
      {"--s", Outcome::Ok, "(neg (neg s))", {}},
      {"1.5e3*s", Outcome::Ok, "(* 1500 s)", {}},
      {".5+s", Outcome::Ok, "(+ 0.5 s)", {}},
      {"exp(s)^2", Outcome::Ok, "(^ (exp s) 2)", {}},
      {"s^(1/2)", Outcome::Ok, "(^ s (/ 1 2))", {}},
      {"abs(s-1)*log(s)", Outcome::Ok, "(* (abs (- s 1)) (log s))", {}},
      {"tanh(s)/sinh(s)+cos(s)", Outcome::Ok, "(+ (/ (tanh s) (sinh s)) (cos s))", {}},
      {"1 - -1", Outcome::Ok, "(- 1 (neg 1))", {}},
      {"2*3^2", Outcome::Ok, "(* 2 (^ 3 2))", {}},
      {"s*(2+3)*4", Outcome::Ok, "(* (* s (+ 2 3)) 4)", {}},
      {"2.5E-1 * sqrt(s)", Outcome::Ok, "(* 0.25 (sqrt s))", {}},
      {"  s  ", Outcome::Ok, "s", {}},
      {"sin()", Outcome::ParseError, "", {}},
      {"a+1", Outcome::ParseError, "", {}},
      {"s^s", Outcome::ParseError, "", {}},
      {"2^(1+s)", Outcome::ParseError, "", {}},
      {"1+", Outcome::ParseError, "", {}},
      {"(1+2", Outcome::ParseError, "", {}},
      {"1+2)", Outcome::ParseError, "", {}},
      {"sqrt s", Outcome::ParseError, "", {}},
      {"", Outcome::ParseError, "", {}},
      {"sin", Outcome::ParseError, "", {}},
      {"x", Outcome::ParseError, "", {}},
      {"2 3", Outcome::ParseError, "", {}},
      {"2..5", Outcome::LexError, "", 1},
      {"s#2", Outcome::LexError, "", 1},
      {"1e", Outcome::LexError, "", 1},
      {"3s", Outcome::LexError, "", 1},
      {"s $", Outcome::LexError, "", 2},
  };
  return corpus;
}

/// Admissible closed-form curves (y''^2 - z''^2 keeps one sign on the range).
struct DslCurve {
  std::string y;
  std::string z;
  double s_min;
  double s_max;
};

inline const std::vector<DslCurve>& admissible_curves() {
  static const std::vector<DslCurve> corpus = {
      {"cosh(s)", "sinh(s)", -2.0, 2.0},
      {"s^2/2", "0", -3.0, 3.0},
      {"s", "s^2", -2.0, 2.0},
      {"s^3/6 + s^2", "0", -1.0, 3.0},
      {"exp(s)", "s", -2.0, 2.0},
      {"2*cosh(s)", "sin(s)", -2.0, 2.0},
      {"sqrt(s+4) + s^2", "sin(s)/4", -1.0, 1.0},
      {"s^2/2 + 0.1*tanh(s)", "0.05*s^3", -1.0, 1.0},
      {"sin(s)", "cosh(s) + s^2", -2.0, 2.0},
      {"0.5*exp(-s)", "2*s^2 + cos(s)", -1.0, 1.0},
      {"s^4/12 + s^2/2", "0.25*s^2", -1.5, 1.5},
      {"(1+s^2)^1.5", "log(2+s)", -1.0, 1.0},
  };
  return corpus;
}

}  // namespace pgc::testing
