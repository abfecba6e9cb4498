// Shadow analysis: does pattern X match every expression pattern Y matches?
// If so, Y placed after X in the same Ideal() body is dead.
//
// The decision goes through an SMT encoding over a tree datatype
//
//   T = nil(Int) | tree(Opcode, T, T)
//
// with one T variable per reachable before-node of each pattern (x1.., y1..),
// and asks the solver for a model of the negation of
//
//   forall ys. (PhiY && PreY) => exists xs. (PhiX && PreX && Psi)
//
// where Psi pairs nodes visited in lockstep from both roots.

#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pforge/east.hpp"
#include "pforge/rewrite.hpp"

namespace pforge {

enum class Verdict { Yes, No, Unknown };
std::string_view verdict_name(Verdict v);  // "YES", "NO", "UNKNOWN"

struct ShadowVerdict {
  Verdict result = Verdict::Unknown;
  std::string witness;
};

/// Weak structural prefilter: a leaf on either side matches anything.
bool same_shape(const EArena& ax, NodeId bx, const EArena& ay, NodeId by);
bool same_shape(const CompiledPattern& x, const CompiledPattern& y);

struct SmtScript {
  std::string text;
  std::vector<std::string> x_nodes;  // x1, x2, ... in preorder
  std::vector<std::string> y_nodes;
  std::vector<std::string> x_values;  // wx_<param> per constant leaf
  std::vector<std::string> y_values;
  std::vector<std::pair<std::string, std::string>> equalities;  // Psi, in DFS order
};

SmtScript encode_shadow_smt(const CompiledPattern& x, const CompiledPattern& y);

// ---------------------------------------------------------------------------
// Solvers

enum class SolverAnswer { Sat, Unsat, Unknown };

struct SolverResult {
  SolverAnswer answer = SolverAnswer::Unknown;
  std::string status;  // first line of solver output, or "timeout"
};

// Missing binary, crash or unparseable output. Never folded into UNKNOWN.
class SolverInfraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Solver {
 public:
  virtual ~Solver() = default;
  // Must be safe to call concurrently.
  virtual SolverResult check(const std::string& script, std::chrono::seconds timeout) = 0;
};

// Runs `<path> -in -smt2 -T:<secs>` with the script on stdin, and kills it
// if it outlives the timeout by more than a grace period.
class ProcessSolver : public Solver {
 public:
  explicit ProcessSolver(std::string path);
  SolverResult check(const std::string& script, std::chrono::seconds timeout) override;
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// PFORGE_SOLVER if set, else "z3" (resolved through PATH).
std::string default_solver_path();

ShadowVerdict determine_shadow(const CompiledPattern& x, const CompiledPattern& y,
                               Solver& solver, std::chrono::seconds timeout);

// ---------------------------------------------------------------------------
// Brute-force oracle

struct OracleConfig {
  int depth = 3;
  std::vector<std::string> atoms = {"p", "q", "r"};
  std::vector<std::int64_t> consts = {-1, 0, 1, 2};
};

struct Counterexample {
  std::string text;
  std::shared_ptr<ConcreteArena> arena;
  NodeId root = kNoNode;
};

/// First expression E of depth <= cfg.depth, in enumeration order, with
/// match(Y, E) and !match(X, E). Candidates are Y's before DAG with free
/// variables replaced by every expression over the atoms, constants and the
/// operators of X and Y that keeps E within the depth bound, and constant
/// variables replaced by every pool constant satisfying Y's preconditions.
std::optional<Counterexample> brute_force_counterexample(const CompiledPattern& x,
                                                         const CompiledPattern& y,
                                                         const OracleConfig& cfg);

// ---------------------------------------------------------------------------
// Matrix

struct MatrixOptions {
  std::chrono::seconds timeout{10};
  std::size_t workers = 1;
  bool oracle = false;
  OracleConfig oracle_config;
};

struct MatrixEntry {
  std::size_t x = 0;
  std::size_t y = 0;
  ShadowVerdict verdict;
  bool oracle_ran = false;
  bool disagreement = false;  // YES with an oracle counterexample
  std::string error;          // infrastructure failure for this pair
};

/// All ordered pairs (x, y), x != y, in row-major order.
std::vector<MatrixEntry> shadow_matrix(std::span<const CompiledPattern> patterns,
                                       Solver& solver, const MatrixOptions& opts);

/// One `X\tY\tverdict\twitness` line per entry, then a `#` summary line.
std::string format_matrix_report(std::span<const CompiledPattern> patterns,
                                 std::span<const MatrixEntry> entries);

}  // namespace pforge
