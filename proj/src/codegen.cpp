#include "pforge/codegen.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace pforge {

namespace {

std::string var_for(const AccessPath& path) { return "_P_in" + path.digits(); }

std::string cpp_literal(std::int64_t v, IntWidth w) {
  if (v == min_value(w)) return "(" + std::to_string(max_value(w)) + " - 1)";
  return std::to_string(v);
}

std::string_view con_opcode(IntWidth w) { return w == IntWidth::I32 ? "Op_ConI" : "Op_ConL"; }
std::string_view con_getter(IntWidth w) { return w == IntWidth::I32 ? "get_int()" : "get_long()"; }
std::string_view con_ctor(IntWidth w) { return w == IntWidth::I32 ? "phase->intcon" : "phase->longcon"; }
std::string_view value_type(IntWidth w) { return w == IntWidth::I32 ? "jint" : "jlong"; }

// Integer expressions over extracted constant values.
std::string cpp_expr(const EArena& a, NodeId id, IntWidth w, bool nested) {
  const ENode& n = a[id];
  switch (n.kind) {
    case NodeKind::Var:
    case NodeKind::ConstVar:
      return "_P_val_" + n.name;
    case NodeKind::Lit:
      return cpp_literal(n.value, w);
    case NodeKind::Op: {
      std::string l = cpp_expr(a, n.lhs, w, true);
      std::string r = cpp_expr(a, n.rhs, w, true);
      if (n.op == BinOp::UShr) return "java_shift_right_unsigned(" + l + ", " + r + ")";
      std::string s = l + " " + std::string(op_symbol(n.op)) + " " + r;
      return nested ? "(" + s + ")" : s;
    }
    default:
      throw CodegenError("boolean node in integer context");
  }
}

std::string cpp_cond(const EArena& a, NodeId id, IntWidth w) {
  const ENode& n = a[id];
  auto wrapped = [&](NodeId c) {
    const NodeKind k = a[c].kind;
    std::string s = cpp_cond(a, c, w);
    return k == NodeKind::Logic ? "(" + s + ")" : s;
  };
  switch (n.kind) {
    case NodeKind::Bool:
      return n.value ? "true" : "false";
    case NodeKind::Cmp:
      return cpp_expr(a, n.lhs, w, true) + " " + std::string(cmp_symbol(n.cmp)) + " " +
             cpp_expr(a, n.rhs, w, true);
    case NodeKind::Not:
      return "!(" + cpp_cond(a, n.lhs, w) + ")";
    case NodeKind::Logic:
      return wrapped(n.lhs) + (n.is_and ? " && " : " || ") + wrapped(n.rhs);
    default:
      throw CodegenError("integer node in boolean context");
  }
}

bool is_constant_tree(const EArena& a, NodeId id) {
  const ENode& n = a[id];
  if (n.kind == NodeKind::Lit || n.kind == NodeKind::ConstVar) return true;
  if (n.kind != NodeKind::Op) return false;
  return is_constant_tree(a, n.lhs) && is_constant_tree(a, n.rhs);
}

}  // namespace

std::string node_class_stem(BinOp op, IntWidth w) {
  std::string base;
  switch (op) {
    case BinOp::Add: base = "Add"; break;
    case BinOp::Sub: base = "Sub"; break;
    case BinOp::Mul: base = "Mul"; break;
    case BinOp::And: base = "And"; break;
    case BinOp::Or: base = "Or"; break;
    case BinOp::Xor: base = "Xor"; break;
    case BinOp::Shl: base = "LShift"; break;
    case BinOp::Shr: base = "RShift"; break;
    case BinOp::UShr: base = "URShift"; break;
  }
  return base + (w == IntWidth::I32 ? "I" : "L");
}

EmittedSnippet emit_matcher_snippet(const CompiledPattern& p) {
  const EArena& a = p.easts.arena;
  const NodeId root = p.easts.before_root;
  const IntWidth w = p.width();
  if (a[root].kind != NodeKind::Op) {
    throw CodegenError("pattern '" + p.name() + "': before must be an operator expression");
  }

  EmittedSnippet out;
  out.pattern_name = p.name();
  auto use_token = [&](std::string tok) {
    if (std::find(out.opcode_tokens.begin(), out.opcode_tokens.end(), tok) ==
        out.opcode_tokens.end()) {
      out.opcode_tokens.push_back(tok);
    }
    return tok;
  };
  use_token("Op_" + node_class_stem(a[root].op, w));

  auto paths = canonical_paths(a, root);
  std::vector<std::pair<AccessPath, NodeId>> by_canonical;
  for (const auto& [id, np] : paths) {
    if (id != root) by_canonical.emplace_back(np.canonical, id);
  }
  std::sort(by_canonical.begin(), by_canonical.end());

  std::ostringstream os;
  os << "{\n";
  os << "  // " << p.name() << ": " << to_source(*p.pattern.before) << " => "
     << to_source(*p.pattern.after) << "\n";

  for (const auto& [path, id] : unfolded_paths(a, root)) {
    (void)id;
    if (path.steps.size() == 1) {
      os << "  Node* " << var_for(path) << " = in(" << int(path.steps[0]) << ");\n";
      continue;
    }
    AccessPath parent{{path.steps.begin(), path.steps.end() - 1}};
    const int idx = path.steps.back();
    const std::string pv = var_for(parent);
    os << "  Node* " << var_for(path) << " = " << pv << " != NULL && " << idx << " < "
       << pv << "->req() ? " << pv << "->in(" << idx << ") : NULL;\n";
  }

  for (const auto& [path, id] : by_canonical) {
    const ENode& n = a[id];
    if (n.kind != NodeKind::ConstVar) continue;
    const std::string v = var_for(path);
    os << "  " << value_type(w) << " _P_val_" << n.name << " = " << v << " != NULL && " << v
       << "->Opcode() == " << use_token(std::string(con_opcode(w))) << " ? " << v << "->"
       << con_getter(w) << " : 0;\n";
  }

  std::vector<std::string> conds;
  for (const auto& [path, id] : by_canonical) {
    const ENode& n = a[id];
    if (n.kind == NodeKind::Op) {
      conds.push_back(var_for(path) + "->Opcode() == " +
                      use_token("Op_" + node_class_stem(n.op, w)));
    }
  }
  for (const auto& [path, id] : by_canonical) {
    const ENode& n = a[id];
    if (n.kind != NodeKind::ConstVar && n.kind != NodeKind::Lit) continue;
    conds.push_back(var_for(path) + "->Opcode() == " + use_token(std::string(con_opcode(w))));
    if (n.kind == NodeKind::Lit) {
      conds.push_back(var_for(path) + "->" + std::string(con_getter(w)) +
                      " == " + cpp_literal(n.value, w));
    }
  }
  // A path below a non-canonical path is implied equal by the check on its prefix.
  std::set<AccessPath> non_canonical;
  for (const auto& [id, np] : paths) {
    for (std::size_t i = 1; i < np.all.size(); ++i) non_canonical.insert(np.all[i]);
  }
  auto implied = [&](const AccessPath& path) {
    for (std::size_t len = 1; len < path.steps.size(); ++len) {
      AccessPath prefix{{path.steps.begin(), path.steps.begin() + len}};
      if (non_canonical.count(prefix)) return true;
    }
    return false;
  };
  for (const auto& [path, id] : by_canonical) {
    const auto& all = paths.at(id).all;
    for (std::size_t i = 1; i < all.size(); ++i) {
      if (!implied(all[i])) conds.push_back(var_for(path) + " == " + var_for(all[i]));
    }
  }
  for (NodeId c : p.easts.precond_roots) conds.push_back("(" + cpp_cond(a, c, w) + ")");

  std::function<std::string(NodeId, bool)> build = [&](NodeId id, bool top) -> std::string {
    if (id == root) return "this";
    if (auto it = paths.find(id); it != paths.end()) return var_for(it->second.canonical);
    const ENode& n = a[id];
    if (is_constant_tree(a, id)) {
      return std::string(con_ctor(w)) + "(" + cpp_expr(a, id, w, false) + ")";
    }
    if (n.kind != NodeKind::Op) {
      throw CodegenError("pattern '" + p.name() + "': after uses unbound '" + n.name + "'");
    }
    const std::string stem = node_class_stem(n.op, w);
    std::string made = "new " + stem + "Node(" + build(n.lhs, false) + ", " +
                       build(n.rhs, false) + ")";
    return top ? made : "phase->transform(" + made + ")";
  };
  const std::string result = build(p.easts.after_root, true);

  std::string indent = "  ";
  if (!conds.empty()) {
    os << "  if (" << conds[0];
    for (std::size_t i = 1; i < conds.size(); ++i) os << "\n      && " << conds[i];
    os << ") {\n";
    indent = "    ";
  }
  os << indent << "return " << result << ";\n";
  if (!conds.empty()) os << "  }\n";
  os << "}\n";
  out.text = os.str();
  return out;
}

std::string emit_pass_file(std::span<const CompiledPattern> patterns,
                           std::string_view source_name) {
  struct Group {
    std::string stem;
    std::vector<std::string> snippets;
  };
  std::vector<Group> groups;
  for (const auto& p : patterns) {
    EmittedSnippet s = emit_matcher_snippet(p);
    const std::string stem =
        node_class_stem(p.easts.arena[p.easts.before_root].op, p.width());
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const Group& g) { return g.stem == stem; });
    if (it == groups.end()) {
      groups.push_back({stem, {}});
      it = groups.end() - 1;
    }
    it->snippets.push_back(std::move(s.text));
  }

  std::ostringstream os;
  if (source_name.empty()) {
    os << "// Generated by pforge. Do not edit.\n";
  } else {
    os << "// Generated from " << source_name << " by pforge. Do not edit.\n";
  }
  for (const auto& g : groups) {
    os << "\nNode* " << g.stem << "Node::Ideal(PhaseGVN* phase, bool can_reshape) {\n";
    for (const auto& text : g.snippets) {
      std::istringstream lines(text);
      for (std::string line; std::getline(lines, line);) {
        os << (line.empty() ? "" : "  ") << line << "\n";
      }
    }
    os << "  return NULL;\n}\n";
  }
  return os.str();
}

}  // namespace pforge
