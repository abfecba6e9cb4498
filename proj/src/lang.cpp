#include "pforge/lang.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

namespace pforge {

int bit_count(IntWidth w) { return w == IntWidth::I32 ? 32 : 64; }

std::int64_t min_value(IntWidth w) {
  return w == IntWidth::I32 ? INT32_MIN : INT64_MIN;
}

std::int64_t max_value(IntWidth w) {
  return w == IntWidth::I32 ? INT32_MAX : INT64_MAX;
}

std::string_view java_type_name(IntWidth w) {
  return w == IntWidth::I32 ? "int" : "long";
}

std::string_view op_symbol(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::And: return "&";
    case BinOp::Or: return "|";
    case BinOp::Xor: return "^";
    case BinOp::Shl: return "<<";
    case BinOp::Shr: return ">>";
    case BinOp::UShr: return ">>>";
  }
  return "?";
}

std::string_view op_name(BinOp op) {
  switch (op) {
    case BinOp::Add: return "Add";
    case BinOp::Sub: return "Sub";
    case BinOp::Mul: return "Mul";
    case BinOp::And: return "And";
    case BinOp::Or: return "Or";
    case BinOp::Xor: return "Xor";
    case BinOp::Shl: return "Shl";
    case BinOp::Shr: return "Shr";
    case BinOp::UShr: return "UShr";
  }
  return "?";
}

std::string_view cmp_symbol(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

ExprPtr Expr::var(std::string name, SourceLoc loc) {
  return std::make_shared<const Expr>(Expr{Var{std::move(name)}, loc});
}

ExprPtr Expr::lit(std::int64_t value, SourceLoc loc) {
  return std::make_shared<const Expr>(Expr{Lit{value}, loc});
}

ExprPtr Expr::binary(BinOp op, ExprPtr lhs, ExprPtr rhs, SourceLoc loc) {
  return std::make_shared<const Expr>(
      Expr{Binary{op, std::move(lhs), std::move(rhs)}, loc});
}

const Param* Pattern::find_param(std::string_view n) const {
  for (const auto& p : params) {
    if (p.name == n) return &p;
  }
  return nullptr;
}

namespace {

std::string format_error(const std::string& message, SourceLoc loc) {
  std::ostringstream os;
  os << loc.line << ":" << loc.column << ": " << message;
  return os.str();
}

}  // namespace

PatternError::PatternError(std::string message, SourceLoc loc)
    : std::runtime_error(format_error(message, loc)),
      message_(std::move(message)),
      loc_(loc) {}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok { Ident, Int, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  // Magnitude of an integer literal; fits in 64 unsigned bits.
  std::uint64_t magnitude = 0;
  SourceLoc loc;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      Token t;
      t.loc = {line_, col_};
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '_' || src_[pos_] == '$')) {
          advance();
        }
        t.kind = Tok::Ident;
        t.text = std::string(src_.substr(start, pos_ - start));
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        lex_number(t);
      } else {
        lex_punct(t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (src_.substr(pos_, 2) == "/*") {
        SourceLoc start{line_, col_};
        advance();
        advance();
        while (pos_ < src_.size() && src_.substr(pos_, 2) != "*/") advance();
        if (pos_ >= src_.size()) {
          throw PatternError("unterminated block comment", start);
        }
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  void lex_number(Token& t) {
    std::size_t start = pos_;
    int base = 10;
    if (src_.substr(pos_, 2) == "0x" || src_.substr(pos_, 2) == "0X") {
      base = 16;
      advance();
      advance();
      start = pos_;
    }
    while (pos_ < src_.size() &&
           std::isxdigit(static_cast<unsigned char>(src_[pos_])) &&
           (base == 16 || std::isdigit(static_cast<unsigned char>(src_[pos_])))) {
      advance();
    }
    std::string_view digits = src_.substr(start, pos_ - start);
    if (digits.empty()) throw PatternError("malformed integer literal", t.loc);
    std::uint64_t value = 0;
    auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), value, base);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) {
      throw PatternError("integer literal out of range", t.loc);
    }
    if (pos_ < src_.size() && (src_[pos_] == 'L' || src_[pos_] == 'l')) advance();
    if (pos_ < src_.size() &&
        (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      throw PatternError("malformed integer literal", t.loc);
    }
    t.kind = Tok::Int;
    t.text = std::string(digits);
    t.magnitude = value;
  }

  void lex_punct(Token& t) {
    static constexpr std::string_view kPuncts[] = {
        ">>>", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||", "+", "-",
        "*",   "/",  "%",  "&",  "|",  "^",  "~",  "!",  "<",  ">", "=",
        "(",   ")",  "{",  "}",  ",",  ";",  "@",  "."};
    for (std::string_view p : kPuncts) {
      if (src_.substr(pos_, p.size()) == p) {
        for (std::size_t i = 0; i < p.size(); ++i) advance();
        t.kind = Tok::Punct;
        t.text = std::string(p);
        return;
      }
    }
    throw PatternError(std::string("unexpected character '") + src_[pos_] + "'",
                       t.loc);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser

struct Stmt {
  enum class Kind { Before, After, If, Block };
  Kind kind;
  SourceLoc loc;
  ExprPtr expr;
  CondPtr cond;
  std::vector<Stmt> children;
};

std::optional<BinOp> binop_for(const Token& t, int& prec) {
  if (t.kind != Tok::Punct) return std::nullopt;
  struct Entry {
    std::string_view text;
    BinOp op;
    int prec;
  };
  static constexpr Entry kTable[] = {
      {"|", BinOp::Or, 1},    {"^", BinOp::Xor, 2},   {"&", BinOp::And, 3},
      {"<<", BinOp::Shl, 4},  {">>", BinOp::Shr, 4},  {">>>", BinOp::UShr, 4},
      {"+", BinOp::Add, 5},   {"-", BinOp::Sub, 5},   {"*", BinOp::Mul, 6},
  };
  for (const auto& e : kTable) {
    if (t.text == e.text) {
      prec = e.prec;
      return e.op;
    }
  }
  return std::nullopt;
}

std::optional<CmpOp> cmpop_for(const Token& t) {
  if (t.kind != Tok::Punct) return std::nullopt;
  if (t.text == "==") return CmpOp::Eq;
  if (t.text == "!=") return CmpOp::Ne;
  if (t.text == "<") return CmpOp::Lt;
  if (t.text == "<=") return CmpOp::Le;
  if (t.text == ">") return CmpOp::Gt;
  if (t.text == ">=") return CmpOp::Ge;
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  IntWidth width = IntWidth::I32;

  bool at_end() const { return peek().kind == Tok::End; }

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }

  bool is_punct(std::string_view p, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Punct && t.text == p;
  }

  bool is_ident(std::string_view id, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Ident && t.text == id;
  }

  Token take() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw PatternError(msg, peek().loc);
  }

  std::string describe(const Token& t) const {
    if (t.kind == Tok::End) return "end of input";
    return "'" + t.text + "'";
  }

  void expect_punct(std::string_view p) {
    if (!is_punct(p)) {
      fail("expected '" + std::string(p) + "' but found " + describe(peek()));
    }
    take();
  }

  Token expect_ident(std::string_view what) {
    if (peek().kind != Tok::Ident) {
      fail("expected " + std::string(what) + " but found " + describe(peek()));
    }
    return take();
  }

  // -- integer expressions -------------------------------------------------

  ExprPtr parse_int_expr(int min_prec = 1) {
    ExprPtr lhs = parse_primary();
    for (;;) {
      int prec = 0;
      auto op = binop_for(peek(), prec);
      if (!op) {
        if (is_punct("/") || is_punct("%")) {
          fail("unsupported operator '" + peek().text + "'");
        }
        return lhs;
      }
      if (prec < min_prec) return lhs;
      SourceLoc loc = take().loc;
      ExprPtr rhs = parse_int_expr(prec + 1);
      lhs = Expr::binary(*op, std::move(lhs), std::move(rhs), loc);
    }
  }

  ExprPtr make_literal(const Token& t, bool negative, SourceLoc loc) {
    const std::uint64_t limit = static_cast<std::uint64_t>(max_value(width));
    if (t.magnitude > limit + (negative ? 1 : 0)) {
      throw PatternError("integer literal " + std::string(negative ? "-" : "") +
                             t.text + " does not fit in " +
                             std::string(java_type_name(width)),
                         loc);
    }
    std::int64_t v = negative ? static_cast<std::int64_t>(0 - t.magnitude)
                              : static_cast<std::int64_t>(t.magnitude);
    return Expr::lit(v, loc);
  }

  ExprPtr parse_primary() {
    const Token& t = peek();
    if (t.kind == Tok::Int) {
      Token lit = take();
      return make_literal(lit, false, lit.loc);
    }
    if (t.kind == Tok::Punct) {
      if (t.text == "-") {
        SourceLoc loc = take().loc;
        if (peek().kind == Tok::Int) return make_literal(take(), true, loc);
        throw PatternError(
            "unsupported construct: unary minus on a non-literal (write 0 - e)",
            loc);
      }
      if (t.text == "~" || t.text == "!" || t.text == "+") {
        fail("unsupported construct: unary operator '" + t.text + "'");
      }
      if (t.text == "(") {
        take();
        ExprPtr inner = parse_int_expr();
        expect_punct(")");
        return inner;
      }
      fail("expected an expression but found " + describe(t));
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "true" || t.text == "false") {
        fail("boolean literal in integer expression");
      }
      if (is_punct("(", 1) || is_punct(".", 1)) {
        fail("unsupported construct: method call '" + t.text + "'");
      }
      Token id = take();
      return Expr::var(id.text, id.loc);
    }
    fail("expected an expression but found " + describe(t));
  }

  // -- conditions ----------------------------------------------------------

  CondPtr parse_cond() {
    CondPtr lhs = parse_cond_and();
    while (is_punct("||")) {
      SourceLoc loc = take().loc;
      CondPtr rhs = parse_cond_and();
      lhs = std::make_shared<const Cond>(Cond{Cond::Logic{false, lhs, rhs}, loc});
    }
    return lhs;
  }

  CondPtr parse_cond_and() {
    CondPtr lhs = parse_cond_unary();
    while (is_punct("&&")) {
      SourceLoc loc = take().loc;
      CondPtr rhs = parse_cond_unary();
      lhs = std::make_shared<const Cond>(Cond{Cond::Logic{true, lhs, rhs}, loc});
    }
    return lhs;
  }

  CondPtr parse_cond_unary() {
    const Token& t = peek();
    SourceLoc loc = t.loc;
    if (is_punct("!")) {
      take();
      CondPtr operand = parse_cond_unary();
      return std::make_shared<const Cond>(Cond{Cond::Not{operand}, loc});
    }
    if (is_ident("true") || is_ident("false")) {
      bool v = take().text == "true";
      return std::make_shared<const Cond>(Cond{Cond::BoolLit{v}, loc});
    }
    if (t.kind == Tok::Ident && (is_punct("(", 1) || is_punct(".", 1))) {
      return parse_call();
    }
    if (is_punct("(")) {
      // Either a parenthesized condition or a comparison whose left operand
      // starts with a parenthesis.
      std::size_t saved = pos_;
      try {
        take();
        CondPtr inner = parse_cond();
        expect_punct(")");
        return inner;
      } catch (const PatternError&) {
        pos_ = saved;
      }
    }
    ExprPtr lhs = parse_int_expr();
    auto op = cmpop_for(peek());
    if (!op) fail("expected a comparison operator but found " + describe(peek()));
    take();
    ExprPtr rhs = parse_int_expr();
    return std::make_shared<const Cond>(Cond{Cond::Compare{*op, lhs, rhs}, loc});
  }

  CondPtr parse_call() {
    SourceLoc loc = peek().loc;
    std::string callee = take().text;
    while (is_punct(".")) {
      take();
      callee += "." + expect_ident("identifier").text;
    }
    expect_punct("(");
    Cond::Call call{callee, {}};
    if (!is_punct(")")) {
      call.args.push_back(parse_int_expr());
      while (is_punct(",")) {
        take();
        call.args.push_back(parse_int_expr());
      }
    }
    expect_punct(")");
    return std::make_shared<const Cond>(Cond{std::move(call), loc});
  }

  // -- pattern declarations ------------------------------------------------

  Pattern parse_pattern() {
    Pattern p;
    p.loc = peek().loc;
    expect_punct("@");
    Token marker = expect_ident("'Pattern'");
    if (marker.text != "Pattern") {
      throw PatternError("expected @Pattern but found @" + marker.text, marker.loc);
    }
    static const std::set<std::string> kModifiers = {"public", "private",
                                                     "protected", "static", "final"};
    while (peek().kind == Tok::Ident && kModifiers.count(peek().text)) take();
    if (!is_ident("void")) fail("expected 'void' but found " + describe(peek()));
    take();
    p.name = expect_ident("pattern name").text;
    expect_punct("(");
    if (!is_punct(")")) {
      p.params.push_back(parse_param());
      while (is_punct(",")) {
        take();
        p.params.push_back(parse_param());
      }
    }
    expect_punct(")");
    if (!p.params.empty()) {
      width = p.params.front().width;
      for (const auto& prm : p.params) {
        if (prm.width != width) {
          throw PatternError("mixed integer widths in pattern '" + p.name + "'",
                             p.loc);
        }
      }
    } else {
      width = IntWidth::I32;
    }
    p.width = width;

    SourceLoc body_loc = peek().loc;
    Stmt body{Stmt::Kind::Block, body_loc, nullptr, nullptr, parse_block()};
    assemble(p, body);
    return p;
  }

  Param parse_param() {
    Param prm;
    if (is_punct("@")) {
      take();
      Token ann = expect_ident("annotation name");
      if (ann.text != "Constant") {
        throw PatternError("unsupported parameter annotation @" + ann.text, ann.loc);
      }
      prm.kind = ParamKind::Constant;
    }
    Token type = expect_ident("parameter type");
    if (type.text == "int") {
      prm.width = IntWidth::I32;
    } else if (type.text == "long") {
      prm.width = IntWidth::I64;
    } else {
      throw PatternError("unsupported parameter type '" + type.text + "'", type.loc);
    }
    prm.name = expect_ident("parameter name").text;
    return prm;
  }

  std::vector<Stmt> parse_block() {
    expect_punct("{");
    std::vector<Stmt> stmts;
    while (!is_punct("}")) {
      if (at_end()) fail("unexpected end of input inside method body");
      stmts.push_back(parse_stmt());
    }
    take();
    return stmts;
  }

  Stmt parse_stmt() {
    SourceLoc loc = peek().loc;
    if (is_punct("{")) return Stmt{Stmt::Kind::Block, loc, nullptr, nullptr, parse_block()};
    if (is_ident("before") || is_ident("after")) {
      bool before = take().text == "before";
      expect_punct("(");
      ExprPtr e = parse_int_expr();
      expect_punct(")");
      expect_punct(";");
      return Stmt{before ? Stmt::Kind::Before : Stmt::Kind::After, loc, e, nullptr, {}};
    }
    if (is_ident("if")) {
      take();
      expect_punct("(");
      CondPtr c = parse_cond();
      expect_punct(")");
      std::vector<Stmt> then;
      if (is_punct("{")) {
        then = parse_block();
      } else {
        then.push_back(parse_stmt());
      }
      if (is_ident("else")) fail("unsupported construct: else branch");
      return Stmt{Stmt::Kind::If, loc, nullptr, c, std::move(then)};
    }
    if (peek().kind == Tok::Ident && is_punct("=", 1)) {
      fail("unsupported construct: assignment statement");
    }
    fail("unsupported statement starting with " + describe(peek()));
  }

  // Locates before/after, enforces the placement rule and collects the
  // enclosing if-conditions as preconditions.
  void assemble(Pattern& p, const Stmt& body) {
    struct Found {
      const Stmt* stmt = nullptr;
      std::vector<std::size_t> path;
      std::vector<const Stmt*> ifs;
    };
    std::vector<Found> befores, afters;
    std::vector<std::size_t> path;
    std::vector<const Stmt*> ifs;

    // Returns true if the subtree holds a before or after statement.
    auto walk = [&](auto&& self, const Stmt& s) -> bool {
      switch (s.kind) {
        case Stmt::Kind::Before:
          befores.push_back({&s, path, ifs});
          return true;
        case Stmt::Kind::After:
          afters.push_back({&s, path, ifs});
          return true;
        case Stmt::Kind::If:
        case Stmt::Kind::Block: {
          if (s.kind == Stmt::Kind::If) ifs.push_back(&s);
          bool any = false;
          for (std::size_t i = 0; i < s.children.size(); ++i) {
            path.push_back(i);
            any = self(self, s.children[i]) || any;
            path.pop_back();
          }
          if (s.kind == Stmt::Kind::If) {
            ifs.pop_back();
            if (!any) {
              throw PatternError("if statement contains neither before nor after",
                                 s.loc);
            }
          }
          return any;
        }
      }
      return false;
    };
    walk(walk, body);

    if (befores.empty()) throw PatternError("missing BeforeStmt", p.loc);
    if (afters.empty()) throw PatternError("missing AfterStmt", p.loc);
    if (befores.size() > 1) {
      throw PatternError("multiple BeforeStmt in one pattern are not supported",
                         befores[1].stmt->loc);
    }
    if (afters.size() > 1) {
      throw PatternError("multiple AfterStmt in one pattern are not supported",
                         afters[1].stmt->loc);
    }
    const Found& b = befores.front();
    const Found& a = afters.front();
    // The after statement must be a later sibling of before, or nested in one.
    const std::size_t depth = b.path.size();
    bool placed = a.path.size() >= depth &&
                  std::equal(b.path.begin(), b.path.end() - 1, a.path.begin()) &&
                  a.path[depth - 1] > b.path[depth - 1];
    if (!placed) {
      throw PatternError(
          "AfterStmt must follow BeforeStmt as a later sibling or inside one",
          a.stmt->loc);
    }
    p.before = b.stmt->expr;
    p.after = a.stmt->expr;
    std::set<const Stmt*> seen;
    for (const auto* group : {&b.ifs, &a.ifs}) {
      for (const Stmt* s : *group) {
        if (seen.insert(s).second) p.preconds.push_back(s->cond);
      }
    }
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Validation helpers

void collect_names(const Expr& e, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Var>) {
          if (std::find(out.begin(), out.end(), n.name) == out.end()) {
            out.push_back(n.name);
          }
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          collect_names(*n.lhs, out);
          collect_names(*n.rhs, out);
        }
      },
      e.node);
}

void collect_names(const Cond& c, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Cond::Compare>) {
          collect_names(*n.lhs, out);
          collect_names(*n.rhs, out);
        } else if constexpr (std::is_same_v<T, Cond::Not>) {
          collect_names(*n.operand, out);
        } else if constexpr (std::is_same_v<T, Cond::Logic>) {
          collect_names(*n.lhs, out);
          collect_names(*n.rhs, out);
        }
      },
      c.node);
}

const Cond::Call* find_call(const Cond& c) {
  if (auto* call = std::get_if<Cond::Call>(&c.node)) return call;
  if (auto* n = std::get_if<Cond::Not>(&c.node)) return find_call(*n->operand);
  if (auto* l = std::get_if<Cond::Logic>(&c.node)) {
    if (auto* r = find_call(*l->lhs)) return r;
    return find_call(*l->rhs);
  }
  return nullptr;
}

void check_vars(const Expr& e, const Pattern& p, std::vector<Diagnostic>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Var>) {
          if (!p.find_param(n.name)) {
            out.push_back({"undeclared variable '" + n.name + "'", e.loc});
          }
        } else if constexpr (std::is_same_v<T, Expr::Lit>) {
          if (n.value < min_value(p.width) || n.value > max_value(p.width)) {
            out.push_back({"integer literal " + std::to_string(n.value) +
                               " does not fit in " + std::string(java_type_name(p.width)),
                           e.loc});
          }
        } else {
          check_vars(*n.lhs, p, out);
          check_vars(*n.rhs, p, out);
        }
      },
      e.node);
}

void check_cond_vars(const Cond& c, const Pattern& p, std::vector<Diagnostic>& out) {
  if (auto* cmp = std::get_if<Cond::Compare>(&c.node)) {
    check_vars(*cmp->lhs, p, out);
    check_vars(*cmp->rhs, p, out);
  } else if (auto* n = std::get_if<Cond::Not>(&c.node)) {
    check_cond_vars(*n->operand, p, out);
  } else if (auto* l = std::get_if<Cond::Logic>(&c.node)) {
    check_cond_vars(*l->lhs, p, out);
    check_cond_vars(*l->rhs, p, out);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Public entry points

std::vector<Pattern> parse_pattern_file(std::string_view source) {
  Parser parser(Lexer(source).run());
  std::vector<Pattern> out;
  std::set<std::string> names;
  while (!parser.at_end()) {
    Pattern p = parser.parse_pattern();
    if (!names.insert(p.name).second) {
      throw PatternError("duplicate pattern name '" + p.name + "'", p.loc);
    }
    auto diags = validate_pattern(p);
    if (!diags.empty()) throw PatternError(diags.front().message, diags.front().loc);
    out.push_back(std::move(p));
  }
  return out;
}

ExprPtr parse_expression(std::string_view source, IntWidth width) {
  Parser parser(Lexer(source).run());
  parser.width = width;
  ExprPtr e = parser.parse_int_expr();
  if (!parser.at_end()) parser.fail("unexpected " + parser.describe(parser.peek()));
  return e;
}

CondPtr parse_condition(std::string_view source, IntWidth width) {
  Parser parser(Lexer(source).run());
  parser.width = width;
  CondPtr c = parser.parse_cond();
  if (!parser.at_end()) parser.fail("unexpected " + parser.describe(parser.peek()));
  return c;
}

std::vector<Diagnostic> validate_pattern(const Pattern& p) {
  std::vector<Diagnostic> out;
  std::set<std::string> seen;
  for (const auto& prm : p.params) {
    if (!seen.insert(prm.name).second) {
      out.push_back({"duplicate parameter name '" + prm.name + "'", p.loc});
    }
    if (prm.width != p.width) {
      out.push_back({"mixed integer widths in pattern '" + p.name + "'", p.loc});
    }
  }
  if (!p.before) {
    out.push_back({"missing BeforeStmt", p.loc});
    return out;
  }
  if (!p.after) {
    out.push_back({"missing AfterStmt", p.loc});
    return out;
  }
  check_vars(*p.before, p, out);
  check_vars(*p.after, p, out);

  const auto bound = referenced_names(*p.before);
  for (const auto& n : referenced_names(*p.after)) {
    if (p.find_param(n) && std::find(bound.begin(), bound.end(), n) == bound.end()) {
      out.push_back({"after references '" + n + "' which before does not bind",
                     p.after->loc});
    }
  }

  for (const auto& c : p.preconds) {
    if (const auto* call = find_call(*c)) {
      out.push_back({"precondition contains a call expression '" + call->callee + "'",
                     c->loc});
      continue;
    }
    check_cond_vars(*c, p, out);
    for (const auto& n : referenced_names(*c)) {
      const Param* prm = p.find_param(n);
      if (!prm) continue;
      if (prm->kind == ParamKind::Free) {
        out.push_back({"precondition over free variables unsupported ('" + n + "')",
                       c->loc});
        break;
      }
      if (std::find(bound.begin(), bound.end(), n) == bound.end()) {
        out.push_back({"precondition references '" + n + "' which before does not bind",
                       c->loc});
      }
    }
  }
  return out;
}

std::vector<std::string> referenced_names(const Expr& e) {
  std::vector<std::string> out;
  collect_names(e, out);
  return out;
}

std::vector<std::string> referenced_names(const Cond& c) {
  std::vector<std::string> out;
  collect_names(c, out);
  return out;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void print(const Expr& e, std::ostream& os, bool wrap) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Var>) {
          os << n.name;
        } else if constexpr (std::is_same_v<T, Expr::Lit>) {
          os << n.value;
        } else {
          if (wrap) os << "(";
          print(*n.lhs, os, true);
          os << " " << op_symbol(n.op) << " ";
          print(*n.rhs, os, true);
          if (wrap) os << ")";
        }
      },
      e.node);
}

void print(const Cond& c, std::ostream& os, bool wrap) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Cond::BoolLit>) {
          os << (n.value ? "true" : "false");
        } else if constexpr (std::is_same_v<T, Cond::Compare>) {
          if (wrap) os << "(";
          print(*n.lhs, os, false);
          os << " " << cmp_symbol(n.op) << " ";
          print(*n.rhs, os, false);
          if (wrap) os << ")";
        } else if constexpr (std::is_same_v<T, Cond::Not>) {
          os << "!";
          print(*n.operand, os, true);
        } else if constexpr (std::is_same_v<T, Cond::Logic>) {
          if (wrap) os << "(";
          print(*n.lhs, os, true);
          os << (n.is_and ? " && " : " || ");
          print(*n.rhs, os, true);
          if (wrap) os << ")";
        } else {
          os << n.callee << "(";
          for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i) os << ", ";
            print(*n.args[i], os, false);
          }
          os << ")";
        }
      },
      c.node);
}

}  // namespace

std::string to_source(const Expr& e) {
  std::ostringstream os;
  print(e, os, false);
  return os.str();
}

std::string to_source(const Cond& c) {
  std::ostringstream os;
  print(c, os, false);
  return os.str();
}

std::string to_source(const Pattern& p) {
  std::ostringstream os;
  os << "@Pattern\npublic void " << p.name << "(";
  for (std::size_t i = 0; i < p.params.size(); ++i) {
    const Param& prm = p.params[i];
    if (i) os << ", ";
    if (prm.kind == ParamKind::Constant) os << "@Constant ";
    os << java_type_name(prm.width) << " " << prm.name;
  }
  os << ") {\n";
  os << "  before(" << to_source(*p.before) << ");\n";
  std::string indent = "  ";
  for (const auto& c : p.preconds) {
    os << indent << "if (" << to_source(*c) << ") {\n";
    indent += "  ";
  }
  os << indent << "after(" << to_source(*p.after) << ");\n";
  for (std::size_t i = 0; i < p.preconds.size(); ++i) {
    indent.resize(indent.size() - 2);
    os << indent << "}\n";
  }
  os << "}\n";
  return os.str();
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  if (auto* va = std::get_if<Expr::Var>(&a.node)) {
    return va->name == std::get<Expr::Var>(b.node).name;
  }
  if (auto* la = std::get_if<Expr::Lit>(&a.node)) {
    return la->value == std::get<Expr::Lit>(b.node).value;
  }
  const auto& ba = std::get<Expr::Binary>(a.node);
  const auto& bb = std::get<Expr::Binary>(b.node);
  return ba.op == bb.op && structurally_equal(*ba.lhs, *bb.lhs) &&
         structurally_equal(*ba.rhs, *bb.rhs);
}

bool structurally_equal(const Cond& a, const Cond& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        const auto& m = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Cond::BoolLit>) {
          return n.value == m.value;
        } else if constexpr (std::is_same_v<T, Cond::Compare>) {
          return n.op == m.op && structurally_equal(*n.lhs, *m.lhs) &&
                 structurally_equal(*n.rhs, *m.rhs);
        } else if constexpr (std::is_same_v<T, Cond::Not>) {
          return structurally_equal(*n.operand, *m.operand);
        } else if constexpr (std::is_same_v<T, Cond::Logic>) {
          return n.is_and == m.is_and && structurally_equal(*n.lhs, *m.lhs) &&
                 structurally_equal(*n.rhs, *m.rhs);
        } else {
          return n.callee == m.callee;
        }
      },
      a.node);
}

bool structurally_equal(const Pattern& a, const Pattern& b) {
  if (a.name != b.name || a.width != b.width || a.params.size() != b.params.size() ||
      a.preconds.size() != b.preconds.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    const auto& pa = a.params[i];
    const auto& pb = b.params[i];
    if (pa.name != pb.name || pa.width != pb.width || pa.kind != pb.kind) return false;
  }
  for (std::size_t i = 0; i < a.preconds.size(); ++i) {
    if (!structurally_equal(*a.preconds[i], *b.preconds[i])) return false;
  }
  return structurally_equal(*a.before, *b.before) &&
         structurally_equal(*a.after, *b.after);
}

}  // namespace pforge
