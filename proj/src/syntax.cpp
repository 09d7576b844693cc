#include "csr/syntax.hpp"

#include <array>
#include <cctype>
#include <cerrno>
#include <cstdlib>

#include "csr/errors.hpp"

namespace csr::syntax {

namespace {

constexpr std::array<std::string_view, 8> kFunctions = {"exp", "log", "sin", "cos", "tan", "sqrt", "flat", "bump"};

enum class Tok { Number, Var, Theta, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;
  Number number;
  int index = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      if (i_ >= src_.size()) {
        out.push_back({Tok::End, i_, "", {}, 0});
        return out;
      }
      char c = src_[i_];
      std::size_t start = i_;
      if (std::isdigit(static_cast<unsigned char>(c))) {
        out.push_back(lex_number());
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        out.push_back(lex_word());
      } else {
        Tok k;
        switch (c) {
          case '+': k = Tok::Plus; break;
          case '-': k = Tok::Minus; break;
          case '*': k = Tok::Star; break;
          case '/': k = Tok::Slash; break;
          case '^': k = Tok::Caret; break;
          case '(': k = Tok::LParen; break;
          case ')': k = Tok::RParen; break;
          case ',': k = Tok::Comma; break;
          default: throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
        ++i_;
        out.push_back({k, start, std::string(1, c), {}, 0});
      }
    }
  }

 private:
  void skip_space() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
  }

  std::size_t digits() {
    std::size_t n = 0;
    while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) {
      ++i_;
      ++n;
    }
    return n;
  }

  Token lex_number() {
    std::size_t start = i_;
    digits();
    bool real = false;
    if (i_ < src_.size() && src_[i_] == '.') {
      real = true;
      ++i_;
      digits();
    }
    if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
      std::size_t save = i_;
      ++i_;
      if (i_ < src_.size() && (src_[i_] == '+' || src_[i_] == '-')) ++i_;
      if (digits() == 0) {
        i_ = save;  // not an exponent
      } else {
        real = true;
      }
    }
    std::string text(src_.substr(start, i_ - start));
    Token t{Tok::Number, start, text, {}, 0};
    if (real) {
      t.number = Number::real(std::strtod(text.c_str(), nullptr));
    } else {
      errno = 0;
      long long v = std::strtoll(text.c_str(), nullptr, 10);
      t.number = errno == ERANGE ? Number::real(std::strtod(text.c_str(), nullptr)) : Number(v);
    }
    return t;
  }

  Token lex_word() {
    std::size_t start = i_;
    while (i_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[i_]))) ++i_;
    std::string word(src_.substr(start, i_ - start));
    if (word == "x" || word == "t") {
      std::size_t dstart = i_;
      if (digits() == 0) throw ParseError("expected index after '" + word + "'", i_);
      int idx = std::atoi(std::string(src_.substr(dstart, i_ - dstart)).c_str());
      if (idx < 1) throw ParseError("indices start at 1", dstart);
      return {word == "x" ? Tok::Var : Tok::Theta, start, word, {}, idx};
    }
    if (!is_function_name(word)) throw ParseError("unknown identifier '" + word + "'", start);
    return {Tok::Ident, start, word, {}, 0};
  }

  std::string_view src_;
  std::size_t i_ = 0;
};

Node number_node(Number n, std::size_t pos) {
  Node node;
  node.kind = Kind::Number;
  node.number = n;
  node.position = pos;
  return node;
}

Node negate(Node n) {
  if (n.kind == Kind::Number) {
    n.number = -n.number;
    return n;
  }
  if (n.kind == Kind::Mul && !n.args.empty() && n.args.front().kind == Kind::Number) {
    Number c = -n.args.front().number;
    if (c.is_one()) {
      n.args.erase(n.args.begin());
      if (n.args.size() == 1) return n.args.front();
    } else {
      n.args.front().number = c;
    }
    return n;
  }
  Node m;
  m.kind = Kind::Mul;
  m.position = n.position;
  if (n.kind == Kind::Mul) {
    m.args.push_back(number_node(Number(-1), n.position));
    for (auto& a : n.args) m.args.push_back(std::move(a));
  } else {
    m.args.push_back(number_node(Number(-1), n.position));
    m.args.push_back(std::move(n));
  }
  return m;
}

// Builds an n-ary node of the given kind, splicing children of the same kind.
Node flatten(Kind kind, std::vector<Node> items, std::size_t pos) {
  if (items.size() == 1) return std::move(items.front());
  Node n;
  n.kind = kind;
  n.position = pos;
  for (auto& it : items) {
    if (it.kind == kind) {
      for (auto& a : it.args) n.args.push_back(std::move(a));
    } else {
      n.args.push_back(std::move(it));
    }
  }
  return n;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Node parse_all() {
    Node e = expr();
    if (peek().kind != Tok::End) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    return e;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& take() { return toks_[i_++]; }
  void expect(Tok k, const char* what) {
    if (peek().kind != k) throw ParseError(std::string("expected ") + what, peek().pos);
    ++i_;
  }

  Node expr() {
    std::size_t pos = peek().pos;
    std::vector<Node> terms;
    terms.push_back(term());
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      bool minus = take().kind == Tok::Minus;
      Node t = term();
      terms.push_back(minus ? negate(std::move(t)) : std::move(t));
    }
    return flatten(Kind::Add, std::move(terms), pos);
  }

  Node term() {
    std::size_t pos = peek().pos;
    std::vector<Node> product;
    product.push_back(factor());
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      bool divide = take().kind == Tok::Slash;
      Node f = factor();
      if (!divide) {
        product.push_back(std::move(f));
        continue;
      }
      Node num = flatten(Kind::Mul, std::move(product), pos);
      product.clear();
      if (num.kind == Kind::Number && f.kind == Kind::Number && num.number.is_exact() &&
          f.number.is_exact() && !f.number.is_zero()) {
        product.push_back(number_node(num.number / f.number, pos));
        continue;
      }
      Node d;
      d.kind = Kind::Div;
      d.position = pos;
      d.args.push_back(std::move(num));
      d.args.push_back(std::move(f));
      product.push_back(std::move(d));
    }
    return flatten(Kind::Mul, std::move(product), pos);
  }

  Node factor() {
    if (peek().kind == Tok::Minus) {
      take();
      return negate(factor());
    }
    Node a = atom();
    if (peek().kind == Tok::Caret) {
      std::size_t pos = take().pos;
      bool neg = false;
      if (peek().kind == Tok::Minus) {
        take();
        neg = true;
      }
      const Token& t = peek();
      if (t.kind != Tok::Number || !t.number.is_integer()) throw ParseError("expected integer exponent", t.pos);
      take();
      Node p;
      p.kind = Kind::Pow;
      p.position = pos;
      p.index = static_cast<int>(t.number.numerator()) * (neg ? -1 : 1);
      p.args.push_back(std::move(a));
      return p;
    }
    return a;
  }

  Node atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number:
        take();
        return number_node(t.number, t.pos);
      case Tok::Var: {
        take();
        Node n;
        n.kind = Kind::Var;
        n.index = t.index;
        n.position = t.pos;
        return n;
      }
      case Tok::Theta: {
        Node n;
        n.kind = Kind::Theta;
        n.position = t.pos;
        while (peek().kind == Tok::Theta) n.thetas.push_back(take().index);
        return n;
      }
      case Tok::Ident: {
        take();
        Node n;
        n.kind = Kind::Call;
        n.name = t.text;
        n.position = t.pos;
        expect(Tok::LParen, "'(' after function name");
        n.args.push_back(expr());
        while (peek().kind == Tok::Comma) {
          take();
          n.args.push_back(expr());
        }
        expect(Tok::RParen, "')'");
        return n;
      }
      case Tok::LParen: {
        take();
        Node e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      default:
        throw ParseError(t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'", t.pos);
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

}  // namespace

bool is_function_name(std::string_view name) {
  for (auto f : kFunctions) {
    if (f == name) return true;
  }
  return false;
}

Node parse(std::string_view text) { return Parser(Lexer(text).run()).parse_all(); }

}  // namespace csr::syntax
