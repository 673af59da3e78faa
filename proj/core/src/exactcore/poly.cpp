#include "voganish/exactcore/poly.hpp"

#include "voganish/exactcore/errors.hpp"

#include <cctype>

namespace voganish::exactcore {

namespace {

class PolyParser {
 public:
  PolyParser(std::string_view s, VarRegistry& reg) : s_(s), reg_(reg) {}

  QPoly parse() {
    QPoly p = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError("unexpected character '" + std::string(1, s_[pos_]) + "'", pos_);
    return p;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '[' || c == ']';
  }

  QPoly expr() {
    QPoly acc;
    bool neg = eat('-');
    if (!neg) eat('+');
    QPoly t = term();
    acc = neg ? -t : t;
    for (;;) {
      if (eat('+'))
        acc += term();
      else if (eat('-'))
        acc -= term();
      else
        return acc;
    }
  }

  QPoly term() {
    QPoly acc = factor();
    for (;;) {
      if (eat('*')) {
        acc *= factor();
      } else if (eat('/')) {
        std::size_t at = pos_;
        QPoly d = factor();
        if (!d.is_constant() || d.is_zero()) throw ParseError("division by a non-constant or zero", at);
        acc = acc.scaled(Rat(1) / d.constant_term());
      } else {
        return acc;
      }
    }
  }

  QPoly factor() {
    QPoly base = atom();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) throw ParseError("expected exponent", pos_);
      base = pow(base, static_cast<unsigned>(std::stoul(std::string(s_.substr(start, pos_ - start)))));
    }
    return base;
  }

  QPoly atom() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      QPoly p = expr();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return p;
    }
    if (c == '-') {
      ++pos_;
      return -factor();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return QPoly(Rat(mpz_class(std::string(s_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
      return QPoly::variable(reg_.intern(s_.substr(start, pos_ - start)));
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  std::string_view s_;
  VarRegistry& reg_;
  std::size_t pos_ = 0;
};

}  // namespace

QPoly parse_qpoly(std::string_view text, VarRegistry& reg) { return PolyParser(text, reg).parse(); }

}  // namespace voganish::exactcore
