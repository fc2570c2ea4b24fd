#include "milnor/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "milnor/errors.hpp"

namespace milnor {
namespace {

// A monomial before the variable count is known: index -> (nu, mu).
struct RawTerm {
  Complex coeff{1.0, 0.0};
  std::map<int, std::pair<int, int>> powers;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::vector<RawTerm> parse_poly() {
    std::vector<RawTerm> terms;
    skip_ws();
    if (at_end()) fail("empty expression");
    double sign = 1.0;
    if (peek() == '-') {
      sign = -1.0;
      ++pos_;
    } else if (peek() == '+') {
      ++pos_;
    }
    terms.push_back(parse_term(sign));
    while (true) {
      skip_ws();
      if (at_end()) break;
      const char c = peek();
      if (c != '+' && c != '-') fail(std::string("unexpected '") + c + "'");
      ++pos_;
      terms.push_back(parse_term(c == '-' ? -1.0 : 1.0));
    }
    return terms;
  }

  int max_index() const { return max_index_; }

 private:
  RawTerm parse_term(double sign) {
    RawTerm t;
    t.coeff = sign;
    parse_factor(t);
    while (true) {
      skip_ws();
      if (at_end() || peek() != '*') break;
      ++pos_;
      parse_factor(t);
    }
    return t;
  }

  void parse_factor(RawTerm& t) {
    skip_ws();
    if (at_end()) fail("expected a factor");
    const char c = peek();
    if (c == 'z') {
      parse_variable(t);
    } else if (c == '(') {
      t.coeff *= parse_parenthesized();
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      t.coeff *= parse_real();
    } else {
      fail(std::string("unexpected '") + c + "'");
    }
  }

  void parse_variable(RawTerm& t) {
    ++pos_;  // 'z'
    bool conj = false;
    if (!at_end() && peek() == 'b') {
      conj = true;
      ++pos_;
    }
    const std::size_t index_pos = pos_;
    const int index = parse_uint("variable index");
    if (index < 1) throw ParseError("variable index must be >= 1", index_pos);
    max_index_ = std::max(max_index_, index);
    int exponent = 1;
    skip_ws();
    if (!at_end() && peek() == '^') {
      ++pos_;
      skip_ws();
      if (!at_end() && peek() == '-') throw ParseError("negative exponent", pos_);
      exponent = parse_uint("exponent");
      if (!at_end() && (peek() == '.' || peek() == 'e' || peek() == 'E'))
        throw ParseError("non-integer exponent", pos_);
    }
    auto& [nu, mu] = t.powers[index - 1];
    (conj ? mu : nu) += exponent;
  }

  Complex parse_parenthesized() {
    ++pos_;  // '('
    const double first = parse_signed_real();
    skip_ws();
    if (at_end()) fail("unterminated literal");
    Complex value;
    if (peek() == ')') {
      value = {first, 0.0};
    } else if (peek() == 'i') {
      ++pos_;
      value = {0.0, first};
    } else if (peek() == '+' || peek() == '-') {
      const double s = peek() == '-' ? -1.0 : 1.0;
      ++pos_;
      skip_ws();
      const double second = parse_real();
      skip_ws();
      expect('i');
      value = {first, s * second};
    } else {
      fail("malformed complex literal");
    }
    skip_ws();
    expect(')');
    return value;
  }

  double parse_signed_real() {
    skip_ws();
    double s = 1.0;
    if (!at_end() && (peek() == '+' || peek() == '-')) {
      if (peek() == '-') s = -1.0;
      ++pos_;
      skip_ws();
    }
    return s * parse_real();
  }

  // digits [. digits] [(e|E) [+-] digits]
  double parse_real() {
    skip_ws();
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t k = 0;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
        ++pos_;
        ++k;
      }
      return k;
    };
    std::size_t mantissa = digits();
    if (!at_end() && peek() == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError("expected a number", start);
    if (!at_end() && (peek() == 'e' || peek() == 'E')) {
      const std::size_t mark = pos_;
      ++pos_;
      if (!at_end() && (peek() == '+' || peek() == '-')) ++pos_;
      if (digits() == 0) pos_ = mark;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_ || !std::isfinite(value))
      throw ParseError("invalid number", start);
    return value;
  }

  int parse_uint(const char* what) {
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (pos_ == start) throw ParseError(std::string("expected ") + what, start);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc()) throw ParseError(std::string(what) + " too large", start);
    return value;
  }

  void expect(char c) {
    if (at_end() || peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  std::string_view text_;
  std::size_t pos_ = 0;
  int max_index_ = 0;
};

std::string format_real(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string format_monomial(const MixedTerm& t) {
  std::string out;
  auto append = [&](const char* name, int index, int e) {
    if (e == 0) return;
    if (!out.empty()) out += '*';
    out += name;
    out += std::to_string(index + 1);
    if (e != 1) out += '^' + std::to_string(e);
  };
  for (std::size_t j = 0; j < t.nu.size(); ++j) {
    append("z", static_cast<int>(j), t.nu[j]);
    append("zb", static_cast<int>(j), t.mu[j]);
  }
  return out;
}

}  // namespace

MixedPolynomial parse_mixed_expression(std::string_view text, std::optional<int> num_vars) {
  Parser parser(text);
  std::vector<RawTerm> raw = parser.parse_poly();
  const int n = num_vars.value_or(std::max(1, parser.max_index()));
  if (n < 1) throw InputError("number of variables must be positive");
  if (parser.max_index() > n)
    throw InputError("variable index " + std::to_string(parser.max_index()) +
                     " out of range for n = " + std::to_string(n));
  std::vector<MixedTerm> terms;
  terms.reserve(raw.size());
  for (const auto& r : raw) {
    MixedTerm t{r.coeff, Exponent(n, 0), Exponent(n, 0)};
    for (const auto& [j, e] : r.powers) {
      t.nu[j] = e.first;
      t.mu[j] = e.second;
    }
    terms.push_back(std::move(t));
  }
  return MixedPolynomial(n, std::move(terms));
}

std::string to_expression(const MixedPolynomial& f) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : f.terms()) {
    const std::string mono = format_monomial(t);
    const double re = t.coeff.real();
    const double im = t.coeff.imag();
    std::string sign = "+";
    std::string coeff;
    if (im == 0.0) {
      if (re < 0.0) sign = "-";
      const double mag = std::abs(re);
      if (mag != 1.0 || mono.empty()) coeff = format_real(mag);
    } else {
      coeff = "(" + format_real(re) + (im < 0.0 ? "-" : "+") + format_real(std::abs(im)) + "i)";
    }
    if (first) {
      if (sign == "-") out += "-";
    } else {
      out += " " + sign + " ";
    }
    first = false;
    out += coeff;
    if (!coeff.empty() && !mono.empty()) out += '*';
    out += mono;
  }
  return out;
}

}  // namespace milnor
