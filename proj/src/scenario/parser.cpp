#include <string>

#include "lexer.hpp"
#include "moments/scenario/scenario.hpp"
#include "resolver.hpp"

namespace moments::scenario {

ParseError::ParseError(std::size_t line, std::size_t column, std::string reason)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + reason),
      line_(line),
      column_(column),
      reason_(std::move(reason)) {}

namespace {

using detail::Columns;
using detail::Cursor;
using detail::Token;

template <typename F>
auto literal(Cursor& cursor, const Token& token, const char* what, F&& parse) {
  try {
    return parse(std::string_view(token.text));
  } catch (const ValueError& e) {
    cursor.fail(token, std::string("malformed ") + what + ": " + e.what());
  }
}

std::size_t moment_arg(Cursor& cursor, std::size_t& column) {
  const Token& t = cursor.next("moment '@k'");
  column = t.column;
  return literal(cursor, t, "moment", detail::parse_moment);
}

std::optional<std::size_t> optional_moment(Cursor& cursor, std::size_t& column) {
  column = cursor.column();
  if (cursor.peek() && cursor.peek()->text.starts_with('@')) return moment_arg(cursor, column);
  return std::nullopt;
}

std::string system_arg(Cursor& cursor, std::size_t& column) {
  const Token& t = cursor.next("system name");
  column = t.column;
  return t.text;
}

std::vector<std::string> system_list(Cursor& cursor, std::size_t& column) {
  const Token& t = cursor.next("system list");
  column = t.column;
  std::vector<std::string> out;
  std::string_view rest = t.text;
  while (true) {
    const std::size_t comma = rest.find(',');
    const std::string_view name = rest.substr(0, comma);
    if (name.empty()) cursor.fail(t, "malformed system list '" + t.text + "'");
    out.emplace_back(name);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

double real_arg(Cursor& cursor, const char* what) {
  const Token& t = cursor.next(what);
  return literal(cursor, t, what, detail::parse_real);
}

std::size_t count_arg(Cursor& cursor, const char* what, std::size_t& column) {
  const Token& t = cursor.next(what);
  column = t.column;
  return literal(cursor, t, what, detail::parse_count);
}

// Optional trailing "<keyword> <count>".
std::optional<std::size_t> option(Cursor& cursor, const char* keyword, std::size_t& column) {
  if (!cursor.peek() || cursor.peek()->text != keyword) return std::nullopt;
  cursor.next(keyword);
  return count_arg(cursor, keyword, column);
}

DirectiveBody parse_body(const Token& keyword, Cursor& cursor, Columns& c) {
  const std::string& kw = keyword.text;
  if (kw == "system") {
    SystemDecl d{system_arg(cursor, c.system), 2};
    const Token& kind = cursor.next("'qubit' or 'qudit <d>'");
    c.value = kind.column;
    if (kind.text == "qudit") {
      d.dimension = count_arg(cursor, "qudit dimension", c.value);
    } else if (kind.text != "qubit") {
      cursor.fail(kind, "expected 'qubit' or 'qudit <d>', got '" + kind.text + "'");
    }
    return d;
  }
  if (kw == "prepare" || kw == "postselect") {
    auto systems = system_list(cursor, c.system);
    auto moment = optional_moment(cursor, c.moment);
    c.value = cursor.column();
    auto state = detail::parse_state(cursor);
    if (kw == "prepare") return PrepareDecl{std::move(systems), moment, std::move(state)};
    return PostselectDecl{std::move(systems), moment, std::move(state)};
  }
  if (kw == "link") {
    LinkDecl d;
    d.system = system_arg(cursor, c.system);
    d.moment = moment_arg(cursor, c.moment);
    const Token& kind = cursor.next("'identity', 'unitary' or 'partial'");
    c.value = cursor.column();
    if (kind.text == "identity") {
      d.kind = IdentityKind{};
      c.value = kind.column;
    } else if (kind.text == "unitary") {
      d.kind = UnitaryKind{detail::parse_unitary(cursor)};
    } else if (kind.text == "partial") {
      PartialKind p{detail::parse_observable(cursor)};
      p.alpha = real_arg(cursor, "alpha");
      p.beta = real_arg(cursor, "beta");
      d.kind = std::move(p);
    } else {
      cursor.fail(kind, "unknown link kind '" + kind.text + "'");
    }
    c.option = cursor.column();
    d.stride = option(cursor, "stride", c.option).value_or(1);
    return d;
  }
  if (kw == "collapse") {
    CollapseDecl d;
    d.system = system_arg(cursor, c.system);
    d.moment = moment_arg(cursor, c.moment);
    c.value = cursor.column();
    d.state = detail::parse_state(cursor);
    return d;
  }
  if (kw == "measure") {
    MeasureDecl d;
    d.system = system_arg(cursor, c.system);
    d.moment = moment_arg(cursor, c.moment);
    c.value = cursor.column();
    d.observable = detail::parse_observable(cursor);
    return d;
  }
  if (kw == "partial") {
    PartialDecl d;
    d.system = system_arg(cursor, c.system);
    d.moment = moment_arg(cursor, c.moment);
    c.value = cursor.column();
    d.basis = detail::parse_observable(cursor);
    d.alpha = real_arg(cursor, "alpha");
    d.beta = real_arg(cursor, "beta");
    return d;
  }
  if (kw == "meter-diff") {
    MeterDiffDecl d;
    c.value = cursor.column();
    d.label = cursor.next("meter label").text;
    d.first_system = system_arg(cursor, c.system);
    d.first_moment = moment_arg(cursor, c.moment);
    d.second_system = system_arg(cursor, c.second_system);
    d.second_moment = moment_arg(cursor, c.second_moment);
    c.option = cursor.column();
    d.observable = detail::parse_observable(cursor);
    std::size_t dim_column = 0;
    d.dimension = option(cursor, "dim", dim_column);
    if (d.dimension) c.option = dim_column;
    return d;
  }
  if (kw == "bellpost") {
    const Token& pair = cursor.peek() ? *cursor.peek() : keyword;
    auto systems = system_list(cursor, c.system);
    if (systems.size() != 2) cursor.fail(pair, "bellpost needs exactly two systems 'a,b'");
    BellpostDecl d{systems[0], systems[1], optional_moment(cursor, c.moment)};
    c.value = c.system;
    return d;
  }
  cursor.fail(keyword, "unknown directive '" + kw + "'");
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (true) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (line.ends_with('\r')) line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

template <typename T, typename F>
T parse_standalone(std::string_view text, F&& parse) {
  const auto tokens = detail::tokenize(text, 1);
  Cursor cursor(tokens, 1, text.size() + 1);
  T spec = parse(cursor);
  cursor.expect_end();
  return spec;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Scenario scenario;
  detail::Resolver resolver;
  const auto lines = split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t line = n + 1;
    const auto tokens = detail::tokenize(lines[n], line);
    if (tokens.empty()) continue;
    Cursor cursor(tokens, line, lines[n].size() + 1);
    const Token& keyword = cursor.next("directive");
    Columns columns = Columns::at(keyword.column);
    Directive directive{parse_body(keyword, cursor, columns), {line, keyword.column}};
    cursor.expect_end();
    resolver.add(directive, columns);
    scenario.directives.push_back(std::move(directive));
  }
  return scenario;
}

StateSpec parse_state_spec(std::string_view text) {
  return parse_standalone<StateSpec>(text, detail::parse_state);
}

ObservableSpec parse_observable_spec(std::string_view text) {
  return parse_standalone<ObservableSpec>(text, detail::parse_observable);
}

}  // namespace moments::scenario
