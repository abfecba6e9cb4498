// Hash-consed expression DAGs ("eASTs") for a pattern's before, after and
// precondition expressions, plus access-path computation over the before DAG.

#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pforge/lang.hpp"

namespace pforge {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

enum class NodeKind {
  Var,       // free-variable leaf
  ConstVar,  // constant-variable leaf
  Lit,       // integer literal leaf
  Op,        // binary integer operator
  // Precondition structure; never reachable from before/after roots.
  Cmp,
  Logic,
  Not,
  Bool,
};

struct ENode {
  NodeKind kind = NodeKind::Lit;
  IntWidth width = IntWidth::I32;
  std::string name;
  std::int64_t value = 0;
  BinOp op = BinOp::Add;
  CmpOp cmp = CmpOp::Eq;
  bool is_and = false;
  NodeId lhs = kNoNode;
  NodeId rhs = kNoNode;

  bool is_leaf() const {
    return kind == NodeKind::Var || kind == NodeKind::ConstVar || kind == NodeKind::Lit;
  }
};

// Append-only arena. Structurally identical nodes share one id, and children
// always have smaller ids than their parents.
class EArena {
 public:
  NodeId intern(ENode node);

  const ENode& operator[](NodeId id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }
  std::span<const ENode> nodes() const { return nodes_; }

  // One node per line: `id kind children`, e.g. `3 Sub 0 1`.
  std::string dump() const;

 private:
  std::vector<ENode> nodes_;
  std::unordered_map<std::string, NodeId> index_;
};

struct PatternEasts {
  EArena arena;
  NodeId before_root = kNoNode;
  NodeId after_root = kNoNode;
  std::vector<NodeId> precond_roots;
};

PatternEasts build_easts(const Pattern& p);

// A pattern bundled with its DAGs; most downstream stages take this.
struct CompiledPattern {
  Pattern pattern;
  PatternEasts easts;

  const std::string& name() const { return pattern.name; }
  IntWidth width() const { return pattern.width; }
};

CompiledPattern compile(Pattern p);
std::vector<CompiledPattern> compile_all(std::vector<Pattern> patterns);

// Child indices from a root, 1 = left and 2 = right. The empty path is the root.
struct AccessPath {
  std::vector<std::uint8_t> steps;

  auto operator<=>(const AccessPath&) const = default;
  bool operator==(const AccessPath&) const = default;

  // "11" for [1,1]; empty for the root.
  std::string digits() const;
  // "[1,1]"
  std::string to_string() const;
};

struct NodePaths {
  AccessPath canonical;
  std::vector<AccessPath> all;  // lexicographically sorted; front() == canonical
};

// Every root-to-node path for each node reachable from `root`.
std::map<NodeId, NodePaths> canonical_paths(const EArena& arena, NodeId root);
std::map<NodeId, NodePaths> canonical_paths(const PatternEasts& e);

// All paths of the tree unfolding of the DAG below `root`, in lexicographic
// (preorder) order, excluding the root itself.
std::vector<std::pair<AccessPath, NodeId>> unfolded_paths(const EArena& arena,
                                                          NodeId root);

std::optional<NodeId> resolve_path(const EArena& arena, NodeId root,
                                   const AccessPath& path);

// Operator counts over the distinct Op nodes reachable from `root`.
std::map<BinOp, int> opcode_multiset(NodeId root, const PatternEasts& e);

// Distinct nodes reachable from `root`, numbered in preorder of first visit.
std::vector<NodeId> reachable_preorder(const EArena& arena, NodeId root);

// Height of the DAG below `root`; a leaf has depth 0.
int depth(const EArena& arena, NodeId root);

}  // namespace pforge
