// Pattern language: data model, parser, validator and printer.
//
// A pattern file holds one or more declarations of the form
//
//   @Pattern
//   public void pAdd6(long a, long b, long c) {
//     before((a - b) + (c - a));
//     after(c - b);
//   }
//
// Parameters are free variables (match any subexpression) unless marked
// `@Constant`, in which case they match only a constant literal. Conditions
// of `if` statements enclosing the before/after statements become the
// pattern's preconditions.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pforge {

enum class IntWidth { I32, I64 };

int bit_count(IntWidth w);
std::int64_t min_value(IntWidth w);
std::int64_t max_value(IntWidth w);
std::string_view java_type_name(IntWidth w);

enum class BinOp { Add, Sub, Mul, And, Or, Xor, Shl, Shr, UShr };

inline constexpr BinOp kAllBinOps[] = {BinOp::Add, BinOp::Sub, BinOp::Mul,
                                       BinOp::And, BinOp::Or,  BinOp::Xor,
                                       BinOp::Shl, BinOp::Shr, BinOp::UShr};

std::string_view op_symbol(BinOp op);
std::string_view op_name(BinOp op);

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };
std::string_view cmp_symbol(CmpOp op);

struct SourceLoc {
  int line = 1;
  int column = 1;
};

// Integer-valued expression tree as written in the source.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  struct Var {
    std::string name;
  };
  struct Lit {
    std::int64_t value;
  };
  struct Binary {
    BinOp op;
    ExprPtr lhs;
    ExprPtr rhs;
  };

  std::variant<Var, Lit, Binary> node;
  SourceLoc loc;

  static ExprPtr var(std::string name, SourceLoc loc = {});
  static ExprPtr lit(std::int64_t value, SourceLoc loc = {});
  static ExprPtr binary(BinOp op, ExprPtr lhs, ExprPtr rhs, SourceLoc loc = {});
};

// Boolean precondition tree.
struct Cond;
using CondPtr = std::shared_ptr<const Cond>;

struct Cond {
  struct BoolLit {
    bool value;
  };
  struct Compare {
    CmpOp op;
    ExprPtr lhs;
    ExprPtr rhs;
  };
  struct Not {
    CondPtr operand;
  };
  struct Logic {
    bool is_and;
    CondPtr lhs;
    CondPtr rhs;
  };
  struct Call {
    std::string callee;
    std::vector<ExprPtr> args;
  };

  std::variant<BoolLit, Compare, Not, Logic, Call> node;
  SourceLoc loc;
};

enum class ParamKind { Free, Constant };

struct Param {
  std::string name;
  IntWidth width = IntWidth::I32;
  ParamKind kind = ParamKind::Free;
};

struct Pattern {
  std::string name;
  std::vector<Param> params;
  ExprPtr before;
  ExprPtr after;
  std::vector<CondPtr> preconds;
  IntWidth width = IntWidth::I32;
  SourceLoc loc;

  const Param* find_param(std::string_view name) const;
};

class PatternError : public std::runtime_error {
 public:
  PatternError(std::string message, SourceLoc loc);

  const std::string& message() const { return message_; }
  SourceLoc loc() const { return loc_; }

 private:
  std::string message_;
  SourceLoc loc_;
};

struct Diagnostic {
  std::string message;
  SourceLoc loc;
};

/// Parses a pattern file. Patterns are returned in textual order and each one
/// has already passed validate_pattern(). Throws PatternError on the first
/// syntax or semantic problem.
std::vector<Pattern> parse_pattern_file(std::string_view source);

/// Parses a standalone integer expression (used for concrete program
/// expressions, where identifiers denote opaque atoms). Integer literals are
/// range-checked against `width`.
ExprPtr parse_expression(std::string_view source, IntWidth width);

/// Parses a standalone precondition expression.
CondPtr parse_condition(std::string_view source, IntWidth width);

/// Precondition checks: only comparisons, logical connectives and
/// arithmetic over Constant params and literals are supported.
std::vector<Diagnostic> validate_pattern(const Pattern& p);

// Printing. Binary operands that are themselves binary are parenthesized, so
// `(a - b) + (c - a)` prints exactly as written in the usual style.
std::string to_source(const Expr& e);
std::string to_source(const Cond& c);
std::string to_source(const Pattern& p);

bool structurally_equal(const Expr& a, const Expr& b);
bool structurally_equal(const Cond& a, const Cond& b);
bool structurally_equal(const Pattern& a, const Pattern& b);

// Names of every variable referenced, in first-occurrence order.
std::vector<std::string> referenced_names(const Expr& e);
std::vector<std::string> referenced_names(const Cond& c);

}  // namespace pforge
