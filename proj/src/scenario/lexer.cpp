#include "lexer.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace moments::scenario::detail {

std::vector<Token> tokenize(std::string_view line, std::size_t line_number) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') break;
    const std::size_t start = i;
    int depth = 0;
    while (i < line.size()) {
      const char d = line[i];
      if (depth == 0 && (std::isspace(static_cast<unsigned char>(d)) || d == '#')) break;
      if (d == '[' || d == '(') ++depth;
      if (d == ']' || d == ')') {
        if (depth == 0) throw ParseError(line_number, i + 1, std::string("unbalanced '") + d + "'");
        --depth;
      }
      ++i;
    }
    if (depth != 0) throw ParseError(line_number, start + 1, "unterminated bracket");
    tokens.push_back({std::string(line.substr(start, i - start)), start + 1});
  }
  return tokens;
}

const Token& Cursor::next(std::string_view expected) {
  if (done()) fail_here("expected " + std::string(expected));
  return tokens_[index_++];
}

void Cursor::fail(const Token& at, const std::string& reason) const { throw ParseError(line_, at.column, reason); }

void Cursor::fail_here(const std::string& reason) const { throw ParseError(line_, column(), reason); }

void Cursor::expect_end() const {
  if (!done()) fail(tokens_[index_], "unexpected token '" + tokens_[index_].text + "'");
}

namespace {

// expr := [sign] factor (('*' | '/') factor)*
// factor := number | pi | sqrt '(' expr ')' | '(' expr ')'
class RealParser {
 public:
  explicit RealParser(std::string_view s) : s_(s) {}

  double parse() {
    const double v = expr();
    if (pos_ != s_.size()) throw ValueError("unexpected '" + std::string(s_.substr(pos_)) + "'");
    if (!std::isfinite(v)) throw ValueError("value is not finite");
    return v;
  }

 private:
  double expr() {
    double sign = 1;
    if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) sign = s_[pos_++] == '-' ? -1 : 1;
    double v = factor();
    while (pos_ < s_.size() && (s_[pos_] == '*' || s_[pos_] == '/')) {
      const char op = s_[pos_++];
      const double rhs = factor();
      v = op == '*' ? v * rhs : v / rhs;
    }
    return sign * v;
  }

  double factor() {
    if (s_.substr(pos_).starts_with("pi")) {
      pos_ += 2;
      return std::numbers::pi;
    }
    if (s_.substr(pos_).starts_with("sqrt(")) {
      pos_ += 5;
      const double v = expr();
      close();
      if (v < 0) throw ValueError("sqrt of a negative number");
      return std::sqrt(v);
    }
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      const double v = expr();
      close();
      return v;
    }
    if (pos_ >= s_.size() || !(std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
      throw ValueError(pos_ >= s_.size() ? "missing number" : "unexpected '" + std::string(s_.substr(pos_)) + "'");
    }
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc()) throw ValueError("bad number");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return v;
  }

  void close() {
    if (pos_ >= s_.size() || s_[pos_] != ')') throw ValueError("missing ')'");
    ++pos_;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

std::string strip_spaces(std::string_view text) {
  std::string out;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

}  // namespace

double parse_real(std::string_view text) {
  if (text.empty()) throw ValueError("empty number");
  return RealParser(text).parse();
}

Complex parse_complex(std::string_view text) {
  if (text.empty()) throw ValueError("empty number");
  if (text.back() != 'i') return {parse_real(text), 0.0};
  const std::string_view body = text.substr(0, text.size() - 1);
  // split at the last top-level sign that is not an exponent or operator sign
  std::size_t split = std::string_view::npos;
  int depth = 0;
  for (std::size_t p = body.size(); p-- > 1;) {
    const char c = body[p];
    if (c == ')') ++depth;
    if (c == '(') --depth;
    if (depth != 0 || (c != '+' && c != '-')) continue;
    const char prev = body[p - 1];
    if (prev == 'e' || prev == 'E' || prev == '*' || prev == '/' || prev == '(') continue;
    split = p;
    break;
  }
  const std::string_view real_text = split == std::string_view::npos ? std::string_view{} : body.substr(0, split);
  const std::string_view imag_text = split == std::string_view::npos ? body : body.substr(split);
  double imag = 0;
  if (imag_text.empty() || imag_text == "+") {
    imag = 1;
  } else if (imag_text == "-") {
    imag = -1;
  } else {
    imag = parse_real(imag_text);
  }
  return {real_text.empty() ? 0.0 : parse_real(real_text), imag};
}

MatrixLiteral parse_matrix(std::string_view text) {
  const std::string s = strip_spaces(text);
  if (!s.starts_with("[[") || !s.ends_with("]]")) throw ValueError("matrix literal must look like [[a,b],[c,d]]");
  MatrixLiteral rows;
  std::size_t pos = 1;
  while (true) {
    if (pos >= s.size() || s[pos] != '[') throw ValueError("expected '[' to open a row");
    const std::size_t close = s.find(']', pos);
    if (close == std::string::npos) throw ValueError("unterminated row");
    std::vector<Complex> row;
    std::string_view entries(s.data() + pos + 1, close - pos - 1);
    if (entries.empty()) throw ValueError("empty row");
    while (true) {
      const std::size_t comma = entries.find(',');
      row.push_back(parse_complex(entries.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      entries.remove_prefix(comma + 1);
    }
    rows.push_back(std::move(row));
    pos = close + 1;
    if (pos < s.size() && s[pos] == ',') {
      ++pos;
      continue;
    }
    if (pos == s.size() - 1 && s[pos] == ']') break;
    throw ValueError("expected ',' or ']' after a row");
  }
  for (const auto& row : rows)
    if (row.size() != rows.size()) throw ValueError("matrix literal must be square");
  return rows;
}

std::size_t parse_count(std::string_view text) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ValueError("expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

std::size_t parse_moment(std::string_view text) {
  if (!text.starts_with('@')) throw ValueError("expected a moment '@k', got '" + std::string(text) + "'");
  return parse_count(text.substr(1));
}

Axis parse_axis(std::string_view text) {
  if (text == "x") return Axis::x;
  if (text == "y") return Axis::y;
  if (text == "z") return Axis::z;
  throw ValueError("expected axis x, y or z, got '" + std::string(text) + "'");
}

bool is_identifier(std::string_view text) {
  if (text.empty() || std::isdigit(static_cast<unsigned char>(text.front()))) return false;
  for (char c : text)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

std::string format_real(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string format_complex(Complex value) {
  if (value.imag() == 0) return format_real(value.real());
  const std::string imag = format_real(value.imag()) + "i";
  if (value.real() == 0) return imag;
  return format_real(value.real()) + (value.imag() < 0 ? "" : "+") + imag;
}

std::string format_matrix(const MatrixLiteral& rows) {
  std::string out = "[";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out += r ? ",[" : "[";
    for (std::size_t c = 0; c < rows[r].size(); ++c) out += (c ? "," : "") + format_complex(rows[r][c]);
    out += "]";
  }
  return out + "]";
}

std::string axis_name(Axis axis) {
  switch (axis) {
    case Axis::x: return "x";
    case Axis::y: return "y";
    case Axis::z: break;
  }
  return "z";
}

namespace {

template <typename F>
auto literal(Cursor& cursor, const Token& token, const char* what, F&& parse) {
  try {
    return parse(token.text);
  } catch (const ValueError& e) {
    cursor.fail(token, std::string("malformed ") + what + ": " + e.what());
  }
}

double real_arg(Cursor& cursor, const char* what) {
  const Token& t = cursor.next(what);
  return literal(cursor, t, what, [](std::string_view s) { return parse_real(s); });
}

Axis axis_arg(Cursor& cursor) {
  const Token& t = cursor.next("axis x, y or z");
  return literal(cursor, t, "axis", [](std::string_view s) { return parse_axis(s); });
}

MatrixLiteral matrix_arg(Cursor& cursor) {
  const Token& t = cursor.next("matrix literal");
  return literal(cursor, t, "matrix literal", [](std::string_view s) { return parse_matrix(s); });
}

}  // namespace

StateSpec parse_state(Cursor& cursor) {
  const Token& kw = cursor.next("state");
  if (kw.text == "ket") {
    KetState ket;
    do {
      const Token& t = cursor.next("amplitude");
      ket.amplitudes.push_back(literal(cursor, t, "amplitude", [](std::string_view s) { return parse_complex(s); }));
    } while (!cursor.done());
    return ket;
  }
  if (kw.text == "basis") {
    const Token& t = cursor.next("basis index");
    return BasisState{literal(cursor, t, "basis index", [](std::string_view s) { return parse_count(s); })};
  }
  if (kw.text == "up" || kw.text == "down") return AxisState{axis_arg(cursor), kw.text == "up"};
  if (kw.text == "spin") {
    const double theta = real_arg(cursor, "polar angle");
    const double phi = real_arg(cursor, "azimuthal angle");
    return SpinState{theta, phi};
  }
  if (kw.text == "singlet") return SingletState{};
  if (kw.text == "bell") {
    const Token& t = cursor.next("bell state name");
    if (t.text == "phi+") return BellState{Bell::phi_plus};
    if (t.text == "phi-") return BellState{Bell::phi_minus};
    if (t.text == "psi+") return BellState{Bell::psi_plus};
    if (t.text == "psi-") return BellState{Bell::psi_minus};
    cursor.fail(t, "unknown bell state '" + t.text + "' (phi+, phi-, psi+, psi-)");
  }
  cursor.fail(kw, "unknown state '" + kw.text + "'");
}

ObservableSpec parse_observable(Cursor& cursor) {
  const Token& kw = cursor.next("observable");
  if (kw.text == "pauli") return PauliObservable{axis_arg(cursor)};
  if (kw.text == "spin") {
    const double theta = real_arg(cursor, "polar angle");
    const double phi = real_arg(cursor, "azimuthal angle");
    return SpinObservable{theta, phi};
  }
  if (kw.text == "matrix") return MatrixObservable{matrix_arg(cursor)};
  cursor.fail(kw, "unknown observable '" + kw.text + "'");
}

UnitarySpec parse_unitary(Cursor& cursor) {
  const Token& t = cursor.next("unitary");
  if (t.text == "h") return NamedUnitary{"h", 0};
  for (const char* name : {"rx", "ry", "rz"}) {
    const std::string open = std::string(name) + "(";
    if (t.text.starts_with(open) && t.text.ends_with(")")) {
      const std::string_view arg = std::string_view(t.text).substr(3, t.text.size() - 4);
      return NamedUnitary{name, literal(cursor, t, "rotation angle", [&](std::string_view) { return parse_real(arg); })};
    }
  }
  if (t.text.starts_with('[')) {
    return MatrixUnitary{literal(cursor, t, "matrix literal", [](std::string_view s) { return parse_matrix(s); })};
  }
  cursor.fail(t, "unknown unitary '" + t.text + "'");
}

}  // namespace moments::scenario::detail
