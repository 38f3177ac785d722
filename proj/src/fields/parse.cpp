#include <cctype>

#include "valdisc/errors.hpp"
#include "valdisc/field.hpp"

namespace valdisc {

namespace {

// expr   := term (('+' | '-') term)*
// term   := unary (('*' | '/') unary)*
// unary  := '-' unary | power
// power  := atom ('^' exponent)?
// atom   := integer | name | '(' expr ')'
// exponent := ['-'] integer | '(' ['-'] integer ['/' integer] ')'
class Parser {
 public:
  Parser(const std::string& text, const FieldPtr& node) : s_(text), node_(node) {}

  FieldElement run() {
    FieldElement e = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidInput("cannot parse '" + s_ + "' at offset " + std::to_string(i_) + ": " + what);
  }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  FieldElement expr() {
    FieldElement a = term();
    for (;;) {
      if (eat('+'))
        a = a + term();
      else if (eat('-'))
        a = a - term();
      else
        return a;
    }
  }

  FieldElement term() {
    FieldElement a = unary();
    for (;;) {
      if (eat('*'))
        a = a * unary();
      else if (eat('/'))
        a = a / unary();
      else
        return a;
    }
  }

  FieldElement unary() {
    if (eat('-')) return -unary();
    return power();
  }

  std::string integer() {
    skip();
    std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) fail("expected an integer");
    return s_.substr(start, i_ - start);
  }

  Rat exponent() {
    if (eat('(')) {
      std::string t = eat('-') ? "-" : "";
      t += integer();
      if (eat('/')) t += "/" + integer();
      if (!eat(')')) fail("expected ')'");
      return Rat::parse(t);
    }
    std::string t = eat('-') ? "-" : "";
    return Rat::parse(t + integer());
  }

  FieldElement power() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end of input");
    char c = s_[i_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i_;
      while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
      std::string name = s_.substr(start, i_ - start);
      Rat e(1);
      if (eat('^')) e = exponent();
      auto v = node_->symbol(name, e);
      if (!v) fail("unknown name '" + name + "' in '" + node_->id() + "'");
      return *v;
    }
    FieldElement base = node_->zero();
    if (eat('(')) {
      base = expr();
      if (!eat(')')) fail("expected ')'");
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string n = integer();
      base = node_->from_int(std::stol(n));
    } else {
      fail("unexpected '" + std::string(1, c) + "'");
    }
    if (eat('^')) {
      Rat e = exponent();
      if (!e.is_integer()) fail("only names take fractional exponents");
      base = base.pow(e.to_long());
    }
    return base;
  }

  std::string s_;
  FieldPtr node_;
  std::size_t i_ = 0;
};

}  // namespace

FieldElement parse_element(const std::string& text, const FieldPtr& node) { return Parser(text, node).run(); }

}  // namespace valdisc
