#pragma once

#include <Eigen/Dense>
#include "json.hpp"

#include <cctype>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>

#include "oddsphere/error.hpp"
#include "oddsphere/gauss_rational.hpp"
#include "oddsphere/polynomial.hpp"

namespace oddsphere {

using json = nlohmann::json;

/// 17 significant digits, the output format for every emitted float.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

/// Recursive-descent parser for symbol expressions such as
///   "(1/2)*z1^2*zb2 - 3*i*z1 + 0.25".
/// zK is coordinate K (1-based), zbK its conjugate, i the imaginary unit.
class SymbolParser {
 public:
  SymbolParser(std::string_view text, std::size_t d) : text_(text), d_(d) {}

  ExactSymbol parse() {
    ExactSymbol out(d_);
    skip();
    bool first = true;
    while (true) {
      skip();
      bool negative = false;
      if (peek() == '+' || peek() == '-') {
        negative = peek() == '-';
        ++pos_;
      } else if (!first) {
        if (at_end()) break;
        fail("expected '+' or '-'");
      }
      first = false;
      skip();
      ExactSymbol t = term();
      if (negative) t = -t;
      out += t;
      skip();
      if (at_end()) break;
    }
    return out;
  }

 private:
  ExactSymbol term() {
    ExactSymbol t = factor();
    skip();
    while (peek() == '*') {
      ++pos_;
      skip();
      t = t * factor();
      skip();
    }
    return t;
  }

  ExactSymbol factor() {
    skip();
    const std::size_t start = pos_;
    char c = peek();
    if (c == '(') {
      ++pos_;
      skip();
      Rational r = number(true);
      skip();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return ExactSymbol::constant(d_, GaussRational(r));
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return ExactSymbol::constant(d_, GaussRational(number(false)));
    }
    if (c == 'i' && !std::isalnum(static_cast<unsigned char>(peek(1)))) {
      ++pos_;
      return ExactSymbol::constant(d_, GaussRational(0, 1));
    }
    if (c == 'z') {
      ++pos_;
      bool conj = false;
      if (peek() == 'b') {
        conj = true;
        ++pos_;
      }
      std::size_t coord_at = pos_;
      long k = integer();
      if (k < 1 || static_cast<std::size_t>(k) > d_) {
        pos_ = coord_at;
        fail("coordinate index out of range 1.." + std::to_string(d_));
      }
      long e = 1;
      skip();
      if (peek() == '^') {
        ++pos_;
        skip();
        e = integer();
      }
      MultiIndex a(d_), b(d_);
      (conj ? b : a)[static_cast<std::size_t>(k - 1)] = static_cast<int>(e);
      return ExactSymbol::monomial(a, b);
    }
    pos_ = start;
    fail(at_end() ? "unexpected end of expression" : std::string("unexpected character '") + c + "'");
  }

  Rational number(bool allow_sign) {
    const std::size_t start = pos_;
    if (allow_sign && (peek() == '+' || peek() == '-')) ++pos_;
    while (!at_end()) {
      char c = peek();
      bool exp_sign = (c == '+' || c == '-') && pos_ > start && (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E');
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '/' || c == 'e' || c == 'E' || exp_sign)
        ++pos_;
      else
        break;
    }
    auto r = parse_rational(std::string(text_.substr(start, pos_ - start)));
    if (!r) {
      pos_ = start;
      fail("malformed number");
    }
    return *r;
  }

  long integer() {
    const std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (pos_ == start) fail("expected an integer");
    if (pos_ - start > 6) {
      pos_ = start;
      fail("integer too large");
    }
    return std::stol(std::string(text_.substr(start, pos_ - start)));
  }

  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError("symbol parse error: " + msg, pos_); }

  std::string_view text_;
  std::size_t d_;
  std::size_t pos_ = 0;
};

inline json multi_index_json(const MultiIndex& k) { return json(k.entries()); }

inline MultiIndex multi_index_from_json(const json& j, std::size_t d) {
  require(j.is_array() && j.size() == d, "multi-index must be an array of length d");
  std::vector<int> e;
  for (const auto& x : j) {
    require(x.is_number_integer(), "multi-index entries must be integers");
    e.push_back(x.get<int>());
  }
  return MultiIndex(std::move(e));
}

inline Rational rational_from_json(const json& j) {
  if (j.is_string()) {
    auto r = parse_rational(j.get<std::string>());
    require(r.has_value(), "malformed rational string '" + j.get<std::string>() + "'");
    return *r;
  }
  require(j.is_number(), "coefficient must be a rational string or a number");
  if (j.is_number_integer()) return Rational(j.get<long>());
  return rational_from_double(j.get<double>());
}

}  // namespace detail

/// Parses the CLI symbol grammar in dimension d.
inline ExactSymbol parse_symbol(std::string_view text, std::size_t d) {
  require(d >= 1, "dimension d must be >= 1");
  return detail::SymbolParser(text, d).parse();
}

/// Symbol JSON: {"d": int, "terms": [{"a": [..], "b": [..], "re": .., "im": ..}]}.
/// Exact coefficients are "p/q" strings, float ones JSON numbers.
template <class C>
json symbol_to_json(const Polynomial<C>& p) {
  json terms = json::array();
  for (const auto& [key, c] : p.terms()) {
    json t;
    t["a"] = detail::multi_index_json(key.first);
    t["b"] = detail::multi_index_json(key.second);
    if constexpr (ScalarTraits<C>::exact) {
      t["re"] = to_string(c.re);
      t["im"] = to_string(c.im);
    } else {
      t["re"] = c.real();
      t["im"] = c.imag();
    }
    terms.push_back(std::move(t));
  }
  return json{{"d", p.dim()}, {"terms", std::move(terms)}};
}

inline ExactSymbol symbol_from_json(const json& j) {
  require(j.is_object() && j.contains("d") && j.contains("terms"), "symbol JSON needs 'd' and 'terms'");
  require(j["d"].is_number_integer() && j["d"].get<long>() >= 1, "symbol JSON 'd' must be a positive integer");
  auto d = static_cast<std::size_t>(j["d"].get<long>());
  ExactSymbol p(d);
  for (const auto& t : j["terms"]) {
    require(t.contains("a") && t.contains("b") && t.contains("re"), "symbol term needs 'a', 'b', 're'");
    GaussRational c(detail::rational_from_json(t["re"]),
                    t.contains("im") ? detail::rational_from_json(t["im"]) : Rational(0));
    p.add_term(detail::multi_index_from_json(t["a"], d), detail::multi_index_from_json(t["b"], d), c);
  }
  return p;
}

/// Human-readable form in the CLI grammar; parse_symbol inverts it.
inline std::string format_symbol(const ExactSymbol& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  auto emit = [&](const Rational& r, bool imag, const ExactSymbol::Key& key) {
    if (sgn(r) == 0) return;
    if (!first) os << " + ";
    first = false;
    os << '(' << to_string(r) << ')';
    if (imag) os << "*i";
    for (std::size_t i = 0; i < p.dim(); ++i) {
      if (key.first[i]) os << "*z" << i + 1 << '^' << key.first[i];
      if (key.second[i]) os << "*zb" << i + 1 << '^' << key.second[i];
    }
  };
  for (const auto& [key, c] : p.terms()) {
    emit(c.re, false, key);
    emit(c.im, true, key);
  }
  return os.str();
}

/// Density matrix JSON: {"M": int, "re": [[..]], "im": [[..]]} (im optional).
inline Eigen::MatrixXcd density_from_json(const json& j) {
  require(j.is_object() && j.contains("M") && j.contains("re"), "density JSON needs 'M' and 're'");
  auto m = j["M"].get<long>();
  require(m >= 1, "density JSON 'M' must be positive");
  Eigen::MatrixXcd rho(m, m);
  const json& re = j["re"];
  require(re.is_array() && static_cast<long>(re.size()) == m, "density 're' must have M rows");
  for (long r = 0; r < m; ++r) {
    require(re[r].is_array() && static_cast<long>(re[r].size()) == m, "density rows must have M entries");
    for (long c = 0; c < m; ++c) {
      double im = 0.0;
      if (j.contains("im")) im = j["im"].at(r).at(c).get<double>();
      rho(r, c) = {re[r][c].get<double>(), im};
    }
  }
  return rho;
}

}  // namespace oddsphere
