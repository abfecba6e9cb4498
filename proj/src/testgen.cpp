#include "pforge/testgen.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "pforge/rng.hpp"

namespace pforge {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string java_literal(std::int64_t v, IntWidth w) {
  return std::to_string(v) + (w == IntWidth::I64 ? "L" : "");
}

std::string java_expr(const Expr& e, const std::map<std::string, std::int64_t>& consts,
                      IntWidth w, bool nested) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Var>) {
          auto it = consts.find(n.name);
          return it == consts.end() ? n.name : java_literal(it->second, w);
        } else if constexpr (std::is_same_v<T, Expr::Lit>) {
          return java_literal(n.value, w);
        } else {
          std::string s = java_expr(*n.lhs, consts, w, true) + " " +
                          std::string(op_symbol(n.op)) + " " +
                          java_expr(*n.rhs, consts, w, true);
          return nested ? "(" + s + ")" : s;
        }
      },
      e.node);
}

bool constant_tree(const EArena& a, NodeId id) {
  const ENode& n = a[id];
  if (n.kind == NodeKind::Lit || n.kind == NodeKind::ConstVar) return true;
  return n.kind == NodeKind::Op && constant_tree(a, n.lhs) && constant_tree(a, n.rhs);
}

// Operator counts that survive constant folding by the compiler.
std::map<BinOp, int> surviving_ops(const EArena& a, NodeId root) {
  std::map<BinOp, int> out;
  std::set<NodeId> seen;
  std::function<void(NodeId)> walk = [&](NodeId id) {
    if (!seen.insert(id).second) return;
    const ENode& n = a[id];
    if (n.kind != NodeKind::Op || constant_tree(a, id)) return;
    ++out[n.op];
    walk(n.lhs);
    walk(n.rhs);
  };
  walk(root);
  return out;
}

std::string group_name(BinOp op) {
  switch (op) {
    case BinOp::Add: return "Add";
    case BinOp::Sub: return "Sub";
    case BinOp::Mul: return "Mul";
    case BinOp::And: return "And";
    case BinOp::Or: return "Or";
    case BinOp::Xor: return "Xor";
    case BinOp::Shl: return "LShift";
    case BinOp::Shr: return "RShift";
    case BinOp::UShr: return "URShift";
  }
  return "";
}

}  // namespace

std::string_view ir_token(BinOp op) {
  switch (op) {
    case BinOp::Add: return "ADD";
    case BinOp::Sub: return "SUB";
    case BinOp::Mul: return "MUL";
    case BinOp::And: return "AND";
    case BinOp::Or: return "OR";
    case BinOp::Xor: return "XOR";
    case BinOp::Shl: return "LSHIFT";
    case BinOp::Shr: return "RSHIFT";
    case BinOp::UShr: return "URSHIFT";
  }
  return "";
}

IrAnnotation derive_ir_annotations(const CompiledPattern& p) {
  if (!p.pattern.preconds.empty()) {
    throw TestgenError("pattern '" + p.name() + "' has preconditions: unsupported for test generation");
  }
  const EArena& a = p.easts.arena;
  auto before = surviving_ops(a, p.easts.before_root);
  auto after = surviving_ops(a, p.easts.after_root);
  IrAnnotation out;
  // std::map over BinOp iterates in declaration order, which is the token order.
  for (const auto& [op, n] : before) {
    if (!after.count(op)) out.fail_on.push_back(op);
  }
  for (const auto& [op, n] : after) out.counts.emplace_back(op, n);
  return out;
}

IrTest emit_ir_test(const CompiledPattern& p, std::uint64_t seed) {
  IrAnnotation ann = derive_ir_annotations(p);
  const IntWidth w = p.width();

  IrTest t;
  t.pattern_name = p.name();
  t.method_name = "test" + p.name();
  SplitMix64 rng = SplitMix64::stream(seed, fnv1a(p.name()));
  for (const auto& prm : p.pattern.params) {
    if (prm.kind != ParamKind::Constant) continue;
    const std::uint64_t raw = rng.next();
    t.constants[prm.name] = w == IntWidth::I32
                                ? static_cast<std::int64_t>(static_cast<std::int32_t>(raw))
                                : static_cast<std::int64_t>(raw);
  }
  t.return_expr = java_expr(*p.pattern.before, t.constants, w, false);
  const std::string after = java_expr(*p.pattern.after, t.constants, w, true);

  std::ostringstream os;
  os << "@Test\n";
  auto token_list = [](const std::vector<BinOp>& ops) {
    std::string s;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (i) s += ", ";
      s += "IRNode." + std::string(ir_token(ops[i]));
    }
    return s;
  };
  if (!ann.fail_on.empty()) os << "@IR(failOn = {" << token_list(ann.fail_on) << "})\n";
  if (!ann.counts.empty()) {
    os << "@IR(counts = {";
    for (std::size_t i = 0; i < ann.counts.size(); ++i) {
      if (i) os << ", ";
      os << "IRNode." << ir_token(ann.counts[i].first) << ", \"" << ann.counts[i].second
         << "\"";
    }
    os << "})\n";
  }
  os << "// Checks " << t.return_expr << " => " << after << "\n";
  const std::string_view type = java_type_name(w);
  os << "public " << type << " " << t.method_name << "(";
  bool first = true;
  for (const auto& prm : p.pattern.params) {
    if (prm.kind != ParamKind::Free) continue;
    if (!first) os << ", ";
    first = false;
    os << type << " " << prm.name;
  }
  os << ") {\n  return " << t.return_expr << ";\n}\n";
  t.text = os.str();
  return t;
}

TestSuite emit_test_classes(std::span<const CompiledPattern> patterns, std::uint64_t seed) {
  struct Group {
    std::string name;
    std::vector<std::string> methods;
  };
  std::vector<Group> groups;
  TestSuite suite;
  for (const auto& p : patterns) {
    if (!p.pattern.preconds.empty()) {
      suite.skipped.push_back({p.name(), "has preconditions"});
      continue;
    }
    const ENode& root = p.easts.arena[p.easts.before_root];
    if (root.kind != NodeKind::Op) {
      suite.skipped.push_back({p.name(), "before is not an operator expression"});
      continue;
    }
    const std::string name = "Test" + group_name(root.op) + "Node";
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const Group& g) { return g.name == name; });
    if (it == groups.end()) {
      groups.push_back({name, {}});
      it = groups.end() - 1;
    }
    it->methods.push_back(emit_ir_test(p, seed).text);
  }

  for (const auto& g : groups) {
    std::ostringstream os;
    os << "package compiler.c2.irTests;\n\n"
       << "import compiler.lib.ir_framework.*;\n\n"
       << "public class " << g.name << " {\n\n"
       << "    public static void main(String[] args) {\n"
       << "        TestFramework.run();\n"
       << "    }\n";
    for (const auto& m : g.methods) {
      os << "\n";
      std::istringstream lines(m);
      for (std::string line; std::getline(lines, line);) {
        os << (line.empty() ? "" : "    ") << line << "\n";
      }
    }
    os << "}\n";
    suite.files.push_back({g.name + ".java", g.name, os.str()});
  }
  return suite;
}

}  // namespace pforge
