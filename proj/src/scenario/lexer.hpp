#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "moments/scenario/scenario.hpp"

namespace moments::scenario::detail {

struct Token {
  std::string text;
  std::size_t column = 1;  // 1-based
};

// Whitespace-separated tokens; brackets and parentheses keep their contents
// (spaces included) in one token. Stops at '#'.
std::vector<Token> tokenize(std::string_view line, std::size_t line_number);

// Sequential access to one line's tokens; failures raise ParseError.
class Cursor {
 public:
  Cursor(const std::vector<Token>& tokens, std::size_t line, std::size_t end_column)
      : tokens_(tokens), line_(line), end_column_(end_column) {}

  bool done() const { return index_ >= tokens_.size(); }
  const Token* peek() const { return done() ? nullptr : &tokens_[index_]; }
  const Token& next(std::string_view expected);
  std::size_t line() const { return line_; }
  // Column of the next token, or just past the line end.
  std::size_t column() const { return done() ? end_column_ : tokens_[index_].column; }

  [[noreturn]] void fail(const Token& at, const std::string& reason) const;
  [[noreturn]] void fail_here(const std::string& reason) const;
  void expect_end() const;

 private:
  const std::vector<Token>& tokens_;
  std::size_t index_ = 0;
  std::size_t line_;
  std::size_t end_column_;
};

// Literal parsers; throw ValueError with a reason on malformed input.
double parse_real(std::string_view text);
Complex parse_complex(std::string_view text);
MatrixLiteral parse_matrix(std::string_view text);
std::size_t parse_count(std::string_view text);
std::size_t parse_moment(std::string_view text);  // "@k"
Axis parse_axis(std::string_view text);
bool is_identifier(std::string_view text);

// Round-trippable text forms.
std::string format_real(double value);
std::string format_complex(Complex value);
std::string format_matrix(const MatrixLiteral& rows);
std::string axis_name(Axis axis);

StateSpec parse_state(Cursor& cursor);
ObservableSpec parse_observable(Cursor& cursor);
UnitarySpec parse_unitary(Cursor& cursor);

}  // namespace moments::scenario::detail
