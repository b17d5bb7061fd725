#include "twp/symcalc/text.hpp"

#include <cctype>
#include <memory>
#include <sstream>

namespace twp::sym {

// ---------------------------------------------------------------- printing

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

namespace {

std::string trig_string(const std::string& name, int mode) {
  const int n = std::abs(mode);
  std::string arg = n == 1 ? "2*pi*" + name : std::to_string(2 * n) + "*pi*" + name;
  return (mode > 0 ? "cos(" : "sin(") + arg + ")";
}

std::vector<std::string> factor_strings(const Monomial& m, const Chart& chart) {
  std::vector<std::string> out;
  if (m.twopi == 1) out.push_back("(2*pi)");
  if (m.twopi != 0 && m.twopi != 1) out.push_back("(2*pi)^" + std::to_string(m.twopi));
  for (const auto& f : m.factors) {
    const std::string& name = chart.coord(static_cast<std::size_t>(f.var)).name;
    if (f.power == 1) out.push_back(name);
    if (f.power != 0 && f.power != 1) out.push_back(name + "^" + std::to_string(f.power));
    if (f.mode != 0) out.push_back(trig_string(name, f.mode));
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += sep;
    s += parts[i];
  }
  return s;
}

std::string term_string(const Monomial& m, const Rational& c, const Chart& chart) {
  auto fs = factor_strings(m, chart);
  if (fs.empty()) return to_string(c);
  const std::string body = join(fs, "*");
  if (c == 1) return body;
  if (c == -1) return "-" + body;
  return to_string(c) + "*" + body;
}

std::string poly_string(const Poly& p, const Chart& chart) {
  if (p.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    std::string t = term_string(m, c, chart);
    if (first) {
      s = t;
      first = false;
    } else if (t[0] == '-') {
      s += " - " + t.substr(1);
    } else {
      s += " + " + t;
    }
  }
  return s;
}

template <class Kind>
std::string tensor_string(const Alternating<Kind>& t, const char* prefix) {
  const Chart& chart = t.chart();
  if (t.degree() == 0) return to_string(t.coefficient({}), chart);
  if (t.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [idx, c] : t.coefficients()) {
    std::vector<std::string> names;
    for (int i : idx) names.push_back(prefix + chart.coord(static_cast<std::size_t>(i)).name);
    const std::string basis = join(names, "^");
    std::string term;
    auto cv = c.constant_value();
    if (cv && *cv == 1) {
      term = basis;
    } else if (cv && *cv == -1) {
      term = "-" + basis;
    } else if (c.is_polynomial() && c.numerator().size() == 1) {
      term = to_string(c, chart) + "*" + basis;
    } else {
      term = "(" + to_string(c, chart) + ")*" + basis;
    }
    if (first) {
      s = term;
      first = false;
    } else if (term[0] == '-') {
      s += " - " + term.substr(1);
    } else {
      s += " + " + term;
    }
  }
  return s;
}

}  // namespace

std::string to_string(const Scalar& f, const Chart& chart) {
  std::string num = poly_string(f.numerator(), chart);
  if (f.is_polynomial()) return num;
  if (f.numerator().size() > 1) num = "(" + num + ")";
  std::vector<std::string> parts;
  for (const auto& [a, e] : f.denominator()) {
    std::string s = "(" + poly_string(a, chart) + ")";
    if (e > 1) s += "^" + std::to_string(e);
    parts.push_back(s);
  }
  std::string den = join(parts, "*");
  if (parts.size() > 1) den = "(" + den + ")";
  return num + "/" + den;
}

std::string to_string(const Form& w) { return tensor_string(w, "d"); }
std::string to_string(const Multivector& m) { return tensor_string(m, "d/d"); }

std::string angle_image_to_string(const AngleImage& img, const Chart& source) {
  std::string s;
  for (auto& [v, k] : img.terms) {
    std::string t = source.coord(v).name;
    if (k == -1) t = "-" + t;
    if (k != 1 && k != -1) t = std::to_string(k) + "*" + t;
    if (s.empty())
      s = t;
    else if (t[0] == '-')
      s += " - " + t.substr(1);
    else
      s += " + " + t;
  }
  if (!img.shift.is_zero()) {
    std::string sh = to_string(img.shift, source);
    if (s.empty())
      s = sh;
    else if (sh[0] == '-' && img.shift.is_polynomial() && img.shift.numerator().size() == 1)
      s += " - " + sh.substr(1);
    else
      s += " + (" + sh + ")";
  }
  return s.empty() ? "0" : s;
}

// ---------------------------------------------------------------- lexing

namespace {

enum class Tok { number, name, basis, op, end };
enum class BasisMode { none, form, multivector };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  std::size_t col = 0;
  int basis = -1;
};

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(std::string_view s, const Chart& chart, BasisMode mode) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t col = i + 1;
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      std::size_t j = i;
      while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.')) ++j;
      out.push_back({Tok::number, std::string(s.substr(i, j - i)), col});
      i = j;
      continue;
    }
    if (is_name_start(c)) {
      std::size_t j = i;
      while (j < s.size() && is_name_char(s[j])) ++j;
      std::string name(s.substr(i, j - i));
      if (mode == BasisMode::multivector && name == "d" && j + 1 < s.size() && s[j] == '/' && s[j + 1] == 'd') {
        std::size_t k = j + 2;
        while (k < s.size() && is_name_char(s[k])) ++k;
        std::string coord(s.substr(j + 2, k - j - 2));
        if (auto idx = chart.find(coord)) {
          out.push_back({Tok::basis, "d/d" + coord, col, static_cast<int>(*idx)});
          i = k;
          continue;
        }
        throw ParseError("unknown coordinate '" + coord + "' in basis element", j + 3);
      }
      if (mode == BasisMode::form && name.size() > 1 && name[0] == 'd' && !chart.find(name)) {
        if (auto idx = chart.find(name.substr(1))) {
          out.push_back({Tok::basis, name, col, static_cast<int>(*idx)});
          i = j;
          continue;
        }
      }
      out.push_back({Tok::name, name, col});
      i = j;
      continue;
    }
    if (std::string_view("+-*/^(),").find(c) != std::string_view::npos) {
      out.push_back({Tok::op, std::string(1, c), col});
      ++i;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", col);
  }
  out.push_back({Tok::end, "", s.size() + 1});
  return out;
}

Rational parse_number(const std::string& t, std::size_t col) {
  auto dot = t.find('.');
  if (t.find('.', dot == std::string::npos ? 0 : dot + 1) != std::string::npos && dot != std::string::npos)
    throw ParseError("malformed number '" + t + "'", col);
  if (dot == std::string::npos) return Rational(mpz_class(t, 10));
  std::string digits = t.substr(0, dot) + t.substr(dot + 1);
  if (digits.empty()) throw ParseError("malformed number", col);
  mpz_class den = 1;
  for (std::size_t k = dot + 1; k < t.size(); ++k) den *= 10;
  Rational q(mpz_class(digits, 10), den);
  q.canonicalize();
  return q;
}

// ---------------------------------------------------------------- parsing

struct Node {
  enum Kind { num, name, pi, neg, add, sub, mul, div, pow, call } kind;
  std::size_t col = 0;
  Rational q;
  std::string text;
  int exponent = 0;
  std::unique_ptr<Node> a, b;
};
using NodeP = std::unique_ptr<Node>;

NodeP make(Node::Kind k, std::size_t col) {
  auto n = std::make_unique<Node>();
  n->kind = k;
  n->col = col;
  return n;
}

class Parser {
 public:
  Parser(const std::vector<Token>& toks, std::size_t begin, std::size_t end) : t_(toks), pos_(begin), end_(end) {}

  NodeP parse_all() {
    NodeP n = expr();
    if (pos_ != end_) throw ParseError("unexpected '" + t_[pos_].text + "'", t_[pos_].col);
    return n;
  }

 private:
  const Token& peek() const { return pos_ < end_ ? t_[pos_] : end_token(); }
  const Token& end_token() const { return t_[std::min(end_, t_.size() - 1)]; }
  bool is_op(char c) const { return pos_ < end_ && t_[pos_].kind == Tok::op && t_[pos_].text[0] == c; }

  NodeP expr() {
    NodeP l = term();
    while (is_op('+') || is_op('-')) {
      const bool plus = is_op('+');
      const std::size_t col = t_[pos_++].col;
      NodeP n = make(plus ? Node::add : Node::sub, col);
      n->a = std::move(l);
      n->b = term();
      l = std::move(n);
    }
    return l;
  }

  NodeP term() {
    NodeP l = unary();
    while (is_op('*') || is_op('/')) {
      const bool times = is_op('*');
      const std::size_t col = t_[pos_++].col;
      NodeP n = make(times ? Node::mul : Node::div, col);
      n->a = std::move(l);
      n->b = unary();
      l = std::move(n);
    }
    return l;
  }

  NodeP unary() {
    if (is_op('-')) {
      const std::size_t col = t_[pos_++].col;
      NodeP n = make(Node::neg, col);
      n->a = unary();
      return n;
    }
    if (is_op('+')) {
      ++pos_;
      return unary();
    }
    return power();
  }

  NodeP power() {
    NodeP base = primary();
    if (!is_op('^')) return base;
    const std::size_t col = t_[pos_++].col;
    bool negative = false;
    if (is_op('-')) {
      negative = true;
      ++pos_;
    }
    const Token& e = peek();
    if (e.kind != Tok::number || e.text.find('.') != std::string::npos)
      throw ParseError("exponent must be an integer", e.col);
    ++pos_;
    NodeP n = make(Node::pow, col);
    n->a = std::move(base);
    n->exponent = std::stoi(e.text) * (negative ? -1 : 1);
    return n;
  }

  NodeP primary() {
    const Token& tk = peek();
    if (tk.kind == Tok::number) {
      ++pos_;
      NodeP n = make(Node::num, tk.col);
      n->q = parse_number(tk.text, tk.col);
      return n;
    }
    if (tk.kind == Tok::name) {
      ++pos_;
      if (tk.text == "pi") return make(Node::pi, tk.col);
      if (tk.text == "sin" || tk.text == "cos") {
        if (!is_op('(')) throw ParseError("expected '(' after " + tk.text, peek().col);
        ++pos_;
        NodeP n = make(Node::call, tk.col);
        n->text = tk.text;
        n->a = expr();
        if (!is_op(')')) throw ParseError("expected ')'", peek().col);
        ++pos_;
        return n;
      }
      NodeP n = make(Node::name, tk.col);
      n->text = tk.text;
      return n;
    }
    if (is_op('(')) {
      ++pos_;
      NodeP n = expr();
      if (!is_op(')')) throw ParseError("expected ')'", peek().col);
      ++pos_;
      return n;
    }
    if (tk.kind == Tok::basis) throw ParseError("unexpected basis element '" + tk.text + "'", tk.col);
    if (tk.kind == Tok::end) throw ParseError("unexpected end of expression", tk.col);
    throw ParseError("unexpected '" + tk.text + "'", tk.col);
  }

  const std::vector<Token>& t_;
  std::size_t pos_, end_;
};

struct EvalContext {
  bool angles_as_polynomial = false;
  bool inside_trig = false;
};

class Evaluator {
 public:
  explicit Evaluator(const Chart& chart) : chart_(chart) {}

  Scalar eval(const Node& n, EvalContext ctx) {
    switch (n.kind) {
      case Node::num:
        return Scalar(n.q);
      case Node::pi:
        return Scalar::pi();
      case Node::name:
        return name(n, ctx);
      case Node::neg:
        return -eval(*n.a, ctx);
      case Node::add:
        return eval(*n.a, ctx) + eval(*n.b, ctx);
      case Node::sub:
        return eval(*n.a, ctx) - eval(*n.b, ctx);
      case Node::mul:
        return eval(*n.a, ctx) * eval(*n.b, ctx);
      case Node::div: {
        Scalar v = eval(*n.a, ctx);
        divide_by(v, *n.b, ctx);
        return v;
      }
      case Node::pow: {
        Scalar b = eval(*n.a, ctx);
        try {
          return b.pow(n.exponent);
        } catch (const DivisionByZero&) {
          throw ParseError("negative power of zero", n.col);
        }
      }
      case Node::call:
        return call(n, ctx);
    }
    throw ParseError("internal parser error", n.col);
  }

 private:
  // Divide factor by factor so that products in a denominator stay factored.
  void divide_by(Scalar& v, const Node& d, EvalContext ctx) {
    if (d.kind == Node::mul) {
      divide_by(v, *d.a, ctx);
      divide_by(v, *d.b, ctx);
      return;
    }
    if (d.kind == Node::pow && d.exponent > 0) {
      Scalar base = eval(*d.a, ctx);
      if (base.is_zero()) throw ParseError("division by zero", d.col);
      for (int i = 0; i < d.exponent; ++i) v /= base;
      return;
    }
    Scalar x = eval(d, ctx);
    if (x.is_zero()) throw ParseError("division by zero", d.col);
    v /= x;
  }

  Scalar name(const Node& n, EvalContext ctx) {
    auto idx = chart_.find(n.text);
    if (!idx) throw ParseError("unknown name '" + n.text + "'", n.col);
    const bool angle = chart_.is_angle(*idx);
    if (ctx.inside_trig && !angle)
      throw ParseError("kind violation: sin/cos of real coordinate '" + n.text + "'", n.col);
    if (angle && !ctx.angles_as_polynomial && !ctx.inside_trig)
      throw ParseError("kind violation: angle coordinate '" + n.text + "' may only appear inside sin/cos", n.col);
    return Scalar::variable(static_cast<int>(*idx));
  }

  Scalar call(const Node& n, EvalContext ctx) {
    if (ctx.inside_trig) throw ParseError("nested sin/cos is not supported", n.col);
    EvalContext inner{true, true};
    Scalar arg = eval(*n.a, inner);
    // argument must be k * (2 pi) * angle with integer k
    const auto& terms = arg.numerator().terms();
    const bool ok_shape = arg.is_polynomial() && terms.size() == 1 && terms.begin()->first.twopi == 1 &&
                          terms.begin()->first.factors.size() == 1 &&
                          terms.begin()->first.factors[0].power == 1 && terms.begin()->first.factors[0].mode == 0;
    if (!ok_shape) throw ParseError("argument of " + n.text + " must be an integer multiple of 2*pi*<angle>", n.a->col);
    Rational k = terms.begin()->second;
    k.canonicalize();
    if (k.get_den() != 1) throw ParseError("argument of " + n.text + " must be an integer multiple of 2*pi*<angle>", n.a->col);
    const int var = terms.begin()->first.factors[0].var;
    const int freq = static_cast<int>(k.get_num().get_si());
    return n.text == "sin" ? Scalar::sin(var, freq) : Scalar::cos(var, freq);
  }

  const Chart& chart_;
};

Scalar parse_range(const std::vector<Token>& toks, std::size_t b, std::size_t e, const Chart& chart, EvalContext ctx) {
  Parser p(toks, b, e);
  NodeP n = p.parse_all();
  return Evaluator(chart).eval(*n, ctx);
}

template <class T>
T parse_tensor(std::string_view text, const Chart& chart, int degree, BasisMode mode) {
  auto toks = lex(text, chart, mode);
  const std::size_t end = toks.size() - 1;
  if (degree == 0) return T::function(chart, parse_range(toks, 0, end, chart, {}));
  T result(chart, degree);
  if (end == 1 && toks[0].kind == Tok::number && toks[0].text == "0") return result;
  // split into top-level terms
  std::size_t start = 0;
  int depth = 0;
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  for (std::size_t i = 0; i < end; ++i) {
    const Token& tk = toks[i];
    if (tk.kind != Tok::op) continue;
    const char c = tk.text[0];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if ((c == '+' || c == '-') && depth == 0 && i > start) {
      const Token& prev = toks[i - 1];
      const bool after_op = prev.kind == Tok::op && std::string_view("^*/(").find(prev.text[0]) != std::string_view::npos;
      if (!after_op) {
        ranges.emplace_back(start, i);
        start = i;
      }
    }
  }
  ranges.emplace_back(start, end);
  for (auto [b, e] : ranges) {
    bool negate = false;
    if (toks[b].kind == Tok::op && (toks[b].text == "+" || toks[b].text == "-")) {
      negate = toks[b].text == "-";
      ++b;
    }
    if (b >= e) throw ParseError("empty term", toks[b].col);
    // trailing basis run: B (^ B)*
    std::size_t k = e;
    Indices idx;
    while (k > b && toks[k - 1].kind == Tok::basis) {
      idx.insert(idx.begin(), toks[k - 1].basis);
      --k;
      if (k > b && toks[k - 1].kind == Tok::op && toks[k - 1].text == "^" && k - 1 > b && toks[k - 2].kind == Tok::basis)
        --k;
      else
        break;
    }
    if (idx.empty()) throw ParseError("term without basis element", toks[b].col);
    if (static_cast<int>(idx.size()) != degree)
      throw ParseError("term has degree " + std::to_string(idx.size()) + ", expected " + std::to_string(degree), toks[k].col);
    Scalar coeff(1);
    if (k > b) {
      if (!(toks[k - 1].kind == Tok::op && toks[k - 1].text == "*"))
        throw ParseError("expected '*' before basis element", toks[k].col);
      if (k - 1 == b) throw ParseError("missing coefficient before '*'", toks[b].col);
      coeff = parse_range(toks, b, k - 1, chart, {});
    }
    result.accumulate(idx, negate ? -coeff : coeff);
  }
  return result;
}

}  // namespace

Scalar parse_scalar(std::string_view text, const Chart& chart) {
  auto toks = lex(text, chart, BasisMode::none);
  return parse_range(toks, 0, toks.size() - 1, chart, {});
}

Form parse_form(std::string_view text, const Chart& chart, int degree) {
  return parse_tensor<Form>(text, chart, degree, BasisMode::form);
}

Multivector parse_multivector(std::string_view text, const Chart& chart, int degree) {
  return parse_tensor<Multivector>(text, chart, degree, BasisMode::multivector);
}

AngleImage parse_angle_image(std::string_view text, const Chart& source) {
  auto toks = lex(text, source, BasisMode::none);
  Scalar v = parse_range(toks, 0, toks.size() - 1, source, EvalContext{true, false});
  // Integer coefficients of the source angles, read off from partial derivatives,
  // so that shifts may be rational functions.
  AngleImage img;
  Scalar rest = v;
  for (std::size_t a : source.angle_indices()) {
    const int var = static_cast<int>(a);
    if (!v.depends_on(var)) continue;
    const auto k = v.derivative(var).constant_value();
    if (!k) throw ParseError("angle image must be linear in source angles", 1);
    Rational c = *k;
    c.canonicalize();
    if (c.get_den() != 1)
      throw ParseError("angle image must be an integer combination of source angles plus a shift", 1);
    const int n = static_cast<int>(c.get_num().get_si());
    if (n != 0) img.terms.emplace_back(a, n);
    rest -= Scalar(c) * Scalar::variable(var);
  }
  for (std::size_t a : source.angle_indices())
    if (rest.depends_on(static_cast<int>(a))) throw ParseError("angle shift may not depend on source angles", 1);
  img.shift = rest;
  return img;
}

}  // namespace twp::sym
