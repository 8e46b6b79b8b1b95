#include "statsub/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include "statsub/errors.hpp"

namespace statsub {

enum class Fn { Sin, Cos, Tan, Exp, Log, Sqrt, Tanh, Abs };
enum class Op { Add, Sub, Mul, Div };

struct Expression::Node {
  enum class Kind { Number, Coordinate, Negate, Binary, Call, PowInt, PowReal } kind;
  double number = 0.0;        // Number, PowReal exponent
  long long ipow = 0;         // PowInt exponent
  int coordinate = -1;        // Coordinate
  Fn fn = Fn::Sin;            // Call
  Op op = Op::Add;            // Binary
  NodePtr a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = Expression::NodePtr;
using Kind = Node::Kind;

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

const std::map<std::string, Fn, std::less<>> kFunctions = {
    {"sin", Fn::Sin}, {"cos", Fn::Cos},   {"tan", Fn::Tan},   {"exp", Fn::Exp},
    {"log", Fn::Log}, {"sqrt", Fn::Sqrt}, {"tanh", Fn::Tanh}, {"abs", Fn::Abs},
};

const char* fn_name(Fn f) {
  switch (f) {
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    case Fn::Tan: return "tan";
    case Fn::Exp: return "exp";
    case Fn::Log: return "log";
    case Fn::Sqrt: return "sqrt";
    case Fn::Tanh: return "tanh";
    case Fn::Abs: return "abs";
  }
  return "?";
}

struct Token {
  enum class Type { Number, Ident, Punct, End } type;
  std::string_view text;
  double number = 0.0;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    tok_.pos = i_;
    if (i_ >= s_.size()) {
      tok_ = {Token::Type::End, "", 0.0, i_};
      return;
    }
    const char c = s_[i_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i_;
      while (j < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[j])) || s_[j] == '.')) ++j;
      if (j < s_.size() && (s_[j] == 'e' || s_[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < s_.size() && (s_[k] == '+' || s_[k] == '-')) ++k;
        if (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) {
          ++k;
          while (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) ++k;
          j = k;
        }
      }
      double value = 0.0;
      const auto res = std::from_chars(s_.data() + i_, s_.data() + j, value);
      if (res.ec != std::errc() || res.ptr != s_.data() + j)
        throw SyntaxError("malformed number", i_);
      tok_ = {Token::Type::Number, s_.substr(i_, j - i_), value, i_};
      i_ = j;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i_;
      while (j < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_'))
        ++j;
      tok_ = {Token::Type::Ident, s_.substr(i_, j - i_), 0.0, i_};
      i_ = j;
      return;
    }
    tok_ = {Token::Type::Punct, s_.substr(i_, 1), 0.0, i_};
    ++i_;
  }

  std::string_view s_;
  std::size_t i_ = 0;
  Token tok_;
};

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> coords)
      : lex_(text), coords_(coords) {}

  NodePtr run() {
    NodePtr e = expression();
    const Token& t = lex_.peek();
    if (t.type != Token::Type::End)
      throw SyntaxError("unexpected trailing input '" + std::string(t.text) + "'", t.pos);
    return e;
  }

 private:
  bool punct(std::string_view p) const {
    return lex_.peek().type == Token::Type::Punct && lex_.peek().text == p;
  }

  NodePtr expression() {
    NodePtr lhs = term();
    while (punct("+") || punct("-")) {
      const Op op = punct("+") ? Op::Add : Op::Sub;
      lex_.take();
      NodePtr rhs = term();
      lhs = make({Kind::Binary, 0, 0, -1, Fn::Sin, op, lhs, rhs});
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (punct("*") || punct("/")) {
      const Op op = punct("*") ? Op::Mul : Op::Div;
      lex_.take();
      NodePtr rhs = unary();
      lhs = make({Kind::Binary, 0, 0, -1, Fn::Sin, op, lhs, rhs});
    }
    return lhs;
  }

  NodePtr unary() {
    if (punct("-")) {
      lex_.take();
      NodePtr a = unary();
      return make({Kind::Negate, 0, 0, -1, Fn::Sin, Op::Add, a, nullptr});
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (!punct("^")) return base;
    const std::size_t pos = lex_.peek().pos;
    lex_.take();
    NodePtr e = unary();  // right-associative, allows x^-2 and x^2^3
    const std::optional<double> c = fold_constant(e);
    if (!c) throw SyntaxError("exponent must be a constant", pos);
    const double v = *c;
    if (v == std::floor(v) && std::abs(v) < 1e9) {
      return make({Kind::PowInt, 0, static_cast<long long>(v), -1, Fn::Sin, Op::Add, base, nullptr});
    }
    return make({Kind::PowReal, v, 0, -1, Fn::Sin, Op::Add, base, nullptr});
  }

  NodePtr primary() {
    const Token t = lex_.take();
    if (t.type == Token::Type::Number)
      return make({Kind::Number, t.number, 0, -1, Fn::Sin, Op::Add, nullptr, nullptr});
    if (t.type == Token::Type::Ident) {
      if (punct("(")) return call(t);
      if (t.text == "pi")
        return make({Kind::Number, std::acos(-1.0), 0, -1, Fn::Sin, Op::Add, nullptr, nullptr});
      if (t.text == "e")
        return make({Kind::Number, std::exp(1.0), 0, -1, Fn::Sin, Op::Add, nullptr, nullptr});
      for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (coords_[i] == t.text)
          return make(
              {Kind::Coordinate, 0, 0, static_cast<int>(i), Fn::Sin, Op::Add, nullptr, nullptr});
      }
      throw UnknownIdentifier(std::string(t.text), t.pos);
    }
    if (t.type == Token::Type::Punct && t.text == "(") {
      NodePtr e = expression();
      expect(")");
      return e;
    }
    throw SyntaxError("unexpected token '" + std::string(t.text) + "'", t.pos);
  }

  NodePtr call(const Token& name) {
    const auto it = kFunctions.find(name.text);
    if (it == kFunctions.end()) throw UnknownIdentifier(std::string(name.text), name.pos);
    expect("(");
    std::vector<NodePtr> args;
    if (!punct(")")) {
      args.push_back(expression());
      while (punct(",")) {
        lex_.take();
        args.push_back(expression());
      }
    }
    expect(")");
    if (args.size() != 1) throw ArityError(std::string(name.text), 1, args.size());
    return make({Kind::Call, 0, 0, -1, it->second, Op::Add, args[0], nullptr});
  }

  void expect(std::string_view p) {
    if (!punct(p))
      throw SyntaxError("expected '" + std::string(p) + "'", lex_.peek().pos);
    lex_.take();
  }

  // Evaluates coordinate-free subtrees; nullopt when a coordinate occurs.
  static std::optional<double> fold_constant(const NodePtr& n) {
    switch (n->kind) {
      case Kind::Number: return n->number;
      case Kind::Coordinate: return std::nullopt;
      case Kind::Negate: {
        auto a = fold_constant(n->a);
        return a ? std::optional<double>(-*a) : std::nullopt;
      }
      case Kind::Binary: {
        auto a = fold_constant(n->a), b = fold_constant(n->b);
        if (!a || !b) return std::nullopt;
        switch (n->op) {
          case Op::Add: return *a + *b;
          case Op::Sub: return *a - *b;
          case Op::Mul: return *a * *b;
          case Op::Div: return *b == 0.0 ? std::optional<double>() : std::optional<double>(*a / *b);
        }
        return std::nullopt;
      }
      case Kind::Call: return std::nullopt;  // keep folding conservative
      case Kind::PowInt: {
        auto a = fold_constant(n->a);
        return a ? std::optional<double>(std::pow(*a, static_cast<double>(n->ipow))) : std::nullopt;
      }
      case Kind::PowReal: {
        auto a = fold_constant(n->a);
        return a ? std::optional<double>(std::pow(*a, n->number)) : std::nullopt;
      }
    }
    return std::nullopt;
  }

  Lexer lex_;
  std::span<const std::string> coords_;
};

// double counterparts of the jet functions, so eval_node<double> compiles
// with the same unqualified spellings.
using std::abs;
using std::cos;
using std::exp;
using std::log;
using std::sin;
using std::sqrt;
using std::tan;
using std::tanh;

double pow_int(double a, long long n) {
  if (n == 0) return 1.0;
  const bool neg = n < 0;
  unsigned long long k = neg ? static_cast<unsigned long long>(-n) : static_cast<unsigned long long>(n);
  double r = a;
  for (unsigned long long i = 1; i < k; ++i) r *= a;
  if (neg) {
    if (r == 0.0) throw DomainError("division by zero");
    r = 1.0 / r;
  }
  return r;
}

double pow_real(double a, double e) {
  if (a <= 0.0) throw DomainError("non-integer power of a non-positive base");
  return std::pow(a, e);
}

template <class T, class Seed>
T eval_node(const Node& n, const Seed& seed) {
  switch (n.kind) {
    case Kind::Number: return seed.constant(n.number);
    case Kind::Coordinate: return seed.coordinate(n.coordinate);
    case Kind::Negate: return seed.constant(0.0) - eval_node<T>(*n.a, seed);
    case Kind::Binary: {
      T a = eval_node<T>(*n.a, seed);
      T b = eval_node<T>(*n.b, seed);
      switch (n.op) {
        case Op::Add: return a + b;
        case Op::Sub: return a - b;
        case Op::Mul: return a * b;
        case Op::Div: return a / b;
      }
      throw DomainError("unreachable");
    }
    case Kind::Call: {
      T a = eval_node<T>(*n.a, seed);
      switch (n.fn) {
        case Fn::Sin: return sin(a);
        case Fn::Cos: return cos(a);
        case Fn::Tan: return tan(a);
        case Fn::Exp: return exp(a);
        case Fn::Log: return log(a);
        case Fn::Sqrt: return sqrt(a);
        case Fn::Tanh: return tanh(a);
        case Fn::Abs: return abs(a);
      }
      throw DomainError("unreachable");
    }
    case Kind::PowInt: return pow_int(eval_node<T>(*n.a, seed), n.ipow);
    case Kind::PowReal: return pow_real(eval_node<T>(*n.a, seed), n.number);
  }
  throw DomainError("unreachable");
}

// --- symbolic differentiation -------------------------------------------
// Smart constructors fold the neutral elements so derivative trees stay
// reasonably small without any general simplification pass.

bool is_const(const NodePtr& n, double v) {
  return n->kind == Kind::Number && n->number == v;
}

NodePtr num(double v) {
  return make({Kind::Number, v, 0, -1, Fn::Sin, Op::Add, nullptr, nullptr});
}

NodePtr neg(NodePtr a) {
  if (a->kind == Kind::Number) return num(-a->number);
  return make({Kind::Negate, 0, 0, -1, Fn::Sin, Op::Add, std::move(a), nullptr});
}

NodePtr add(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return make({Kind::Binary, 0, 0, -1, Fn::Sin, Op::Add, std::move(a), std::move(b)});
}

NodePtr sub(NodePtr a, NodePtr b) {
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return neg(std::move(b));
  return make({Kind::Binary, 0, 0, -1, Fn::Sin, Op::Sub, std::move(a), std::move(b)});
}

NodePtr mul(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return num(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (a->kind == Kind::Number && b->kind == Kind::Number) return num(a->number * b->number);
  return make({Kind::Binary, 0, 0, -1, Fn::Sin, Op::Mul, std::move(a), std::move(b)});
}

NodePtr divide(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0)) return num(0.0);
  if (is_const(b, 1.0)) return a;
  return make({Kind::Binary, 0, 0, -1, Fn::Sin, Op::Div, std::move(a), std::move(b)});
}

NodePtr fun(Fn f, NodePtr a) {
  return make({Kind::Call, 0, 0, -1, f, Op::Add, std::move(a), nullptr});
}

NodePtr ipow_node(NodePtr a, long long n) {
  if (n == 0) return num(1.0);
  if (n == 1) return a;
  return make({Kind::PowInt, 0, n, -1, Fn::Sin, Op::Add, std::move(a), nullptr});
}

NodePtr diff(const NodePtr& n, int coord) {
  switch (n->kind) {
    case Kind::Number: return num(0.0);
    case Kind::Coordinate: return num(n->coordinate == coord ? 1.0 : 0.0);
    case Kind::Negate: return neg(diff(n->a, coord));
    case Kind::Binary: {
      NodePtr da = diff(n->a, coord);
      NodePtr db = diff(n->b, coord);
      switch (n->op) {
        case Op::Add: return add(std::move(da), std::move(db));
        case Op::Sub: return sub(std::move(da), std::move(db));
        case Op::Mul: return add(mul(std::move(da), n->b), mul(n->a, std::move(db)));
        case Op::Div:
          return divide(sub(mul(std::move(da), n->b), mul(n->a, std::move(db))),
                        ipow_node(n->b, 2));
      }
      return num(0.0);
    }
    case Kind::Call: {
      NodePtr da = diff(n->a, coord);
      if (is_const(da, 0.0)) return num(0.0);
      switch (n->fn) {
        case Fn::Sin: return mul(fun(Fn::Cos, n->a), std::move(da));
        case Fn::Cos: return neg(mul(fun(Fn::Sin, n->a), std::move(da)));
        case Fn::Tan: return divide(std::move(da), ipow_node(fun(Fn::Cos, n->a), 2));
        case Fn::Exp: return mul(fun(Fn::Exp, n->a), std::move(da));
        case Fn::Log: return divide(std::move(da), n->a);
        case Fn::Sqrt: return divide(std::move(da), mul(num(2.0), fun(Fn::Sqrt, n->a)));
        case Fn::Tanh:
          return mul(sub(num(1.0), ipow_node(fun(Fn::Tanh, n->a), 2)), std::move(da));
        case Fn::Abs: return divide(mul(n->a, std::move(da)), fun(Fn::Abs, n->a));
      }
      return num(0.0);
    }
    case Kind::PowInt: {
      NodePtr da = diff(n->a, coord);
      if (is_const(da, 0.0) || n->ipow == 0) return num(0.0);
      return mul(mul(num(static_cast<double>(n->ipow)), ipow_node(n->a, n->ipow - 1)),
                 std::move(da));
    }
    case Kind::PowReal: {
      NodePtr da = diff(n->a, coord);
      if (is_const(da, 0.0)) return num(0.0);
      NodePtr p = make({Kind::PowReal, n->number - 1.0, 0, -1, Fn::Sin, Op::Add, n->a, nullptr});
      return mul(mul(num(n->number), std::move(p)), std::move(da));
    }
  }
  return num(0.0);
}

struct DoubleSeed {
  std::span<const double> x;
  double constant(double c) const { return c; }
  double coordinate(int i) const { return x[i]; }
};

struct JetSeed {
  std::span<const double> x;
  Jet2 constant(double c) const { return Jet2::constant(c, static_cast<int>(x.size())); }
  Jet2 coordinate(int i) const {
    return Jet2::coordinate(x[i], i, static_cast<int>(x.size()));
  }
};

struct Printer {
  static void print(std::ostream& os, const Node& n, const std::vector<std::string>& coords,
                    int parent_prec) {
    // precedence: add 1, mul 2, unary minus 3, power 4, atom 5
    switch (n.kind) {
      case Kind::Number: {
        const bool paren = n.number < 0.0 && parent_prec > 1;
        if (paren) os << '(';
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, n.number);
        os << std::string_view(buf, res.ptr - buf);
        if (paren) os << ')';
        return;
      }
      case Kind::Coordinate:
        os << coords[n.coordinate];
        return;
      case Kind::Negate: {
        const bool paren = parent_prec > 3;
        if (paren) os << '(';
        os << '-';
        print(os, *n.a, coords, 3);
        if (paren) os << ')';
        return;
      }
      case Kind::Binary: {
        const int prec = (n.op == Op::Add || n.op == Op::Sub) ? 1 : 2;
        const bool paren = parent_prec > prec;
        if (paren) os << '(';
        print(os, *n.a, coords, prec);
        switch (n.op) {
          case Op::Add: os << " + "; break;
          case Op::Sub: os << " - "; break;
          case Op::Mul: os << "*"; break;
          case Op::Div: os << "/"; break;
        }
        // left-associative: the right child needs one notch more
        print(os, *n.b, coords, prec + 1);
        if (paren) os << ')';
        return;
      }
      case Kind::Call:
        os << fn_name(n.fn) << '(';
        print(os, *n.a, coords, 0);
        os << ')';
        return;
      case Kind::PowInt:
      case Kind::PowReal: {
        const bool paren = parent_prec > 4;
        if (paren) os << '(';
        print(os, *n.a, coords, 5);
        os << '^';
        if (n.kind == Kind::PowInt) {
          if (n.ipow < 0) os << '(' << n.ipow << ')';
          else os << n.ipow;
        } else {
          char buf[64];
          const auto res = std::to_chars(buf, buf + sizeof buf, n.number);
          if (n.number < 0.0) os << '(' << std::string_view(buf, res.ptr - buf) << ')';
          else os << std::string_view(buf, res.ptr - buf);
        }
        if (paren) os << ')';
        return;
      }
    }
  }
};

}  // namespace

Expression::Expression(NodePtr root, std::vector<std::string> coords)
    : root_(std::move(root)), coords_(std::move(coords)), dim_(static_cast<int>(coords_.size())) {}

Expression Expression::parse(std::string_view text, std::span<const std::string> coordinates) {
  Parser p(text, coordinates);
  return Expression(p.run(), {coordinates.begin(), coordinates.end()});
}

double Expression::eval(std::span<const double> point) const {
  const double r = eval_node<double>(*root_, DoubleSeed{point});
  if (!std::isfinite(r)) throw DomainError("expression evaluated to a non-finite value");
  return r;
}

Jet2 Expression::eval_jet(std::span<const double> point) const {
  Jet2 r = eval_node<Jet2>(*root_, JetSeed{point});
  if (!r.finite()) throw DomainError("expression jet has non-finite components");
  return r;
}

Expression Expression::derivative(int coordinate) const {
  if (!root_) return *this;
  return Expression(diff(root_, coordinate), coords_);
}

std::string Expression::str() const {
  std::ostringstream os;
  Printer::print(os, *root_, coords_, 0);
  return os.str();
}

}  // namespace statsub
