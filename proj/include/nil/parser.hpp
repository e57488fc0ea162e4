#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nil/expr.hpp"

namespace nil {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(int line_, int col_, const std::string& msg)
      : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                           std::to_string(col_) + ": " + msg),
        line(line_),
        col(col_) {}
};

struct UndeclaredVariable : ParseError {
  std::string name;
  UndeclaredVariable(int line_, int col_, const std::string& name_)
      : ParseError(line_, col_, "undeclared variable '" + name_ + "'"),
        name(name_) {}
};

struct BadDegree : ParseError {
  BadDegree(int line_, int col_, const std::string& msg)
      : ParseError(line_, col_, msg) {}
};

Problem parse_problem(const std::string& text);

// Parses a bare formula against an existing variable list (tests, report
// validation). Same grammar as the phi/psi bodies.
FormulaPtr parse_formula_text(const std::string& text,
                              const std::vector<std::string>& vars);

}  // namespace nil
