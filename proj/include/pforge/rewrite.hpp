// Direct execution of patterns over concrete expressions: matching,
// after-side instantiation, wrapping integer evaluation and semantic fuzzing.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pforge/east.hpp"
#include "pforge/lang.hpp"
#include "pforge/rng.hpp"

namespace pforge {

// ---------------------------------------------------------------------------
// Integer semantics (two's complement, JVM shift rules)

// Truncates to the width and sign-extends back to 64 bits.
std::int64_t wrap(std::int64_t v, IntWidth w);
std::int64_t apply_op(BinOp op, std::int64_t a, std::int64_t b, IntWidth w);
bool apply_cmp(CmpOp op, std::int64_t a, std::int64_t b);

// ---------------------------------------------------------------------------
// Concrete expressions

enum class CKind : std::uint8_t { Atom, Lit, Op };

struct CNode {
  CKind kind = CKind::Lit;
  BinOp op = BinOp::Add;
  std::int64_t value = 0;  // literal value, or atom index for atoms
  NodeId lhs = kNoNode;
  NodeId rhs = kNoNode;
};

// Hash-consed DAG of program expressions at a single width. Leaves are opaque
// atoms (program values) or literals.
class ConcreteArena {
 public:
  explicit ConcreteArena(IntWidth width) : width_(width) {}

  IntWidth width() const { return width_; }

  NodeId atom(std::string_view name);
  NodeId lit(std::int64_t value);
  NodeId op(BinOp op, NodeId lhs, NodeId rhs);

  const CNode& operator[](NodeId id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }
  const std::string& atom_name(const CNode& n) const { return atoms_[n.value]; }

  NodeId from_ast(const Expr& e);
  // Same grammar as pattern expressions; identifiers are atoms.
  NodeId parse(std::string_view text);
  std::string to_source(NodeId id) const;

  // Discards every node created after mark() was taken.
  std::size_t mark() const { return nodes_.size(); }
  void rollback(std::size_t mark);

 private:
  struct Key {
    CKind kind;
    BinOp op;
    std::int64_t value;
    NodeId lhs;
    NodeId rhs;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };

  NodeId intern(const CNode& n);

  IntWidth width_;
  std::vector<CNode> nodes_;
  std::unordered_map<Key, NodeId, KeyHash> index_;
  std::vector<std::string> atoms_;
  std::unordered_map<std::string, std::int64_t> atom_index_;
};

using Env = std::map<std::string, std::int64_t, std::less<>>;

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wrapping evaluation; throws EvalError if an atom is missing from `env`.
std::int64_t evaluate(const ConcreteArena& arena, NodeId root, const Env& env);

// Evaluation of pattern DAGs with every parameter given a value.
std::int64_t evaluate_east(const PatternEasts& e, NodeId root, const Env& env,
                           IntWidth w);
bool evaluate_precondition(const PatternEasts& e, NodeId root, const Env& env,
                           IntWidth w);

// ---------------------------------------------------------------------------
// Matching and rewriting

struct Binding {
  std::map<std::string, NodeId> free;
  std::map<std::string, std::int64_t> constants;
};

std::optional<Binding> match_expr(const CompiledPattern& p, const ConcreteArena& arena,
                                  NodeId root);

/// Builds the after expression in `arena`. All-constant subtrees are folded
/// to a single literal.
NodeId instantiate_after(const CompiledPattern& p, const Binding& b,
                         ConcreteArena& arena);

struct Applied {
  NodeId root;
  std::size_t pattern_index;
};

/// Tries each pattern at `root` in order; the first match is instantiated.
std::optional<Applied> apply_first(std::span<const CompiledPattern> patterns,
                                   ConcreteArena& arena, NodeId root);

// ---------------------------------------------------------------------------
// Semantic fuzzing

struct FuzzOutcome {
  enum class Status { Pass, Counterexample, Unsampleable };
  Status status = Status::Pass;
  std::size_t trials_run = 0;
  Env env;  // the failing environment for Counterexample
  std::int64_t before_value = 0;
  std::int64_t after_value = 0;
};

inline constexpr std::size_t kMaxRejectionDraws = 100000;

/// Checks before == after on `trials` seeded environments. Constant params
/// are drawn by rejection sampling against the preconditions, at most
/// kMaxRejectionDraws draws in total.
FuzzOutcome semantic_fuzz_check(const CompiledPattern& p, std::size_t trials,
                                std::uint64_t seed);

// ---------------------------------------------------------------------------
// Random and exhaustive expression generation

struct ExprAlphabet {
  std::vector<std::string> atoms;
  std::vector<std::int64_t> consts;
  std::vector<BinOp> ops;

  std::size_t leaf_count() const { return atoms.size() + consts.size(); }
};

NodeId random_expr(ConcreteArena& arena, int depth, const ExprAlphabet& alphabet,
                   SplitMix64& rng);
NodeId random_expr(ConcreteArena& arena, int depth, const ExprAlphabet& alphabet,
                   std::uint64_t seed);

/// Every distinct expression of depth <= `depth`, shallower ones first.
std::vector<NodeId> enumerate_exprs(ConcreteArena& arena, int depth,
                                    const ExprAlphabet& alphabet);

}  // namespace pforge
