#include "pforge/east.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace pforge {

namespace {

std::string key_of(const ENode& n) {
  std::ostringstream os;
  os << static_cast<int>(n.kind) << '|' << static_cast<int>(n.width) << '|';
  switch (n.kind) {
    case NodeKind::Var:
    case NodeKind::ConstVar:
      os << n.name;
      break;
    case NodeKind::Lit:
    case NodeKind::Bool:
      os << n.value;
      break;
    case NodeKind::Op:
      os << static_cast<int>(n.op) << '|' << n.lhs << '|' << n.rhs;
      break;
    case NodeKind::Cmp:
      os << static_cast<int>(n.cmp) << '|' << n.lhs << '|' << n.rhs;
      break;
    case NodeKind::Logic:
      os << n.is_and << '|' << n.lhs << '|' << n.rhs;
      break;
    case NodeKind::Not:
      os << n.lhs;
      break;
  }
  return os.str();
}

class Builder {
 public:
  Builder(const Pattern& p, EArena& arena) : p_(p), arena_(arena) {}

  NodeId expr(const Expr& e) {
    return std::visit(
        [&](const auto& n) -> NodeId {
          using T = std::decay_t<decltype(n)>;
          ENode node;
          node.width = p_.width;
          if constexpr (std::is_same_v<T, Expr::Var>) {
            const Param* prm = p_.find_param(n.name);
            node.kind = prm && prm->kind == ParamKind::Constant ? NodeKind::ConstVar
                                                                : NodeKind::Var;
            node.name = n.name;
          } else if constexpr (std::is_same_v<T, Expr::Lit>) {
            node.kind = NodeKind::Lit;
            node.value = n.value;
          } else {
            node.kind = NodeKind::Op;
            node.op = n.op;
            node.lhs = expr(*n.lhs);
            node.rhs = expr(*n.rhs);
          }
          return arena_.intern(std::move(node));
        },
        e.node);
  }

  NodeId cond(const Cond& c) {
    return std::visit(
        [&](const auto& n) -> NodeId {
          using T = std::decay_t<decltype(n)>;
          ENode node;
          node.width = p_.width;
          if constexpr (std::is_same_v<T, Cond::BoolLit>) {
            node.kind = NodeKind::Bool;
            node.value = n.value ? 1 : 0;
          } else if constexpr (std::is_same_v<T, Cond::Compare>) {
            node.kind = NodeKind::Cmp;
            node.cmp = n.op;
            node.lhs = expr(*n.lhs);
            node.rhs = expr(*n.rhs);
          } else if constexpr (std::is_same_v<T, Cond::Not>) {
            node.kind = NodeKind::Not;
            node.lhs = cond(*n.operand);
          } else if constexpr (std::is_same_v<T, Cond::Logic>) {
            node.kind = NodeKind::Logic;
            node.is_and = n.is_and;
            node.lhs = cond(*n.lhs);
            node.rhs = cond(*n.rhs);
          } else {
            // Calls are rejected by validation; treat as opaque true.
            node.kind = NodeKind::Bool;
            node.value = 1;
          }
          return arena_.intern(std::move(node));
        },
        c.node);
  }

 private:
  const Pattern& p_;
  EArena& arena_;
};

std::string_view kind_label(const ENode& n) {
  switch (n.kind) {
    case NodeKind::Var: return "var";
    case NodeKind::ConstVar: return "const";
    case NodeKind::Lit: return "lit";
    case NodeKind::Op: return op_name(n.op);
    case NodeKind::Cmp: return cmp_symbol(n.cmp);
    case NodeKind::Logic: return n.is_and ? "&&" : "||";
    case NodeKind::Not: return "!";
    case NodeKind::Bool: return "bool";
  }
  return "?";
}

}  // namespace

NodeId EArena::intern(ENode node) {
  std::string key = key_of(node);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(std::move(node));
  index_.emplace(std::move(key), id);
  return id;
}

std::string EArena::dump() const {
  std::ostringstream os;
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    const ENode& n = nodes_[id];
    os << id << ' ' << kind_label(n);
    if (n.kind == NodeKind::Var || n.kind == NodeKind::ConstVar) os << ' ' << n.name;
    if (n.kind == NodeKind::Lit || n.kind == NodeKind::Bool) os << ' ' << n.value;
    if (n.lhs != kNoNode) os << ' ' << n.lhs;
    if (n.rhs != kNoNode) os << ' ' << n.rhs;
    os << '\n';
  }
  return os.str();
}

PatternEasts build_easts(const Pattern& p) {
  PatternEasts out;
  Builder b(p, out.arena);
  out.before_root = b.expr(*p.before);
  out.after_root = b.expr(*p.after);
  for (const auto& c : p.preconds) out.precond_roots.push_back(b.cond(*c));
  return out;
}

CompiledPattern compile(Pattern p) {
  CompiledPattern cp{std::move(p), {}};
  cp.easts = build_easts(cp.pattern);
  return cp;
}

std::vector<CompiledPattern> compile_all(std::vector<Pattern> patterns) {
  std::vector<CompiledPattern> out;
  out.reserve(patterns.size());
  for (auto& p : patterns) out.push_back(compile(std::move(p)));
  return out;
}

std::string AccessPath::digits() const {
  std::string s;
  for (auto step : steps) s += static_cast<char>('0' + step);
  return s;
}

std::string AccessPath::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(steps[i]);
  }
  return s + "]";
}

std::vector<std::pair<AccessPath, NodeId>> unfolded_paths(const EArena& arena,
                                                          NodeId root) {
  std::vector<std::pair<AccessPath, NodeId>> out;
  AccessPath path;
  // Preorder with the left child first visits paths in lexicographic order.
  std::function<void(NodeId)> walk = [&](NodeId id) {
    const ENode& n = arena[id];
    if (n.kind != NodeKind::Op) return;
    for (std::uint8_t i = 1; i <= 2; ++i) {
      NodeId child = i == 1 ? n.lhs : n.rhs;
      path.steps.push_back(i);
      out.emplace_back(path, child);
      walk(child);
      path.steps.pop_back();
    }
  };
  walk(root);
  return out;
}

std::map<NodeId, NodePaths> canonical_paths(const EArena& arena, NodeId root) {
  std::map<NodeId, NodePaths> out;
  out[root].all.push_back(AccessPath{});
  for (auto& [path, id] : unfolded_paths(arena, root)) out[id].all.push_back(path);
  for (auto& [id, np] : out) np.canonical = np.all.front();
  return out;
}

std::map<NodeId, NodePaths> canonical_paths(const PatternEasts& e) {
  return canonical_paths(e.arena, e.before_root);
}

std::optional<NodeId> resolve_path(const EArena& arena, NodeId root,
                                   const AccessPath& path) {
  NodeId cur = root;
  for (auto step : path.steps) {
    const ENode& n = arena[cur];
    if (n.kind != NodeKind::Op) return std::nullopt;
    cur = step == 1 ? n.lhs : n.rhs;
  }
  return cur;
}

std::vector<NodeId> reachable_preorder(const EArena& arena, NodeId root) {
  std::vector<NodeId> out;
  std::set<NodeId> seen;
  std::function<void(NodeId)> walk = [&](NodeId id) {
    if (!seen.insert(id).second) return;
    out.push_back(id);
    const ENode& n = arena[id];
    if (n.lhs != kNoNode) walk(n.lhs);
    if (n.rhs != kNoNode) walk(n.rhs);
  };
  walk(root);
  return out;
}

std::map<BinOp, int> opcode_multiset(NodeId root, const PatternEasts& e) {
  std::map<BinOp, int> out;
  for (NodeId id : reachable_preorder(e.arena, root)) {
    const ENode& n = e.arena[id];
    if (n.kind == NodeKind::Op) ++out[n.op];
  }
  return out;
}

int depth(const EArena& arena, NodeId root) {
  const ENode& n = arena[root];
  if (n.kind != NodeKind::Op) return 0;
  return 1 + std::max(depth(arena, n.lhs), depth(arena, n.rhs));
}

}  // namespace pforge
