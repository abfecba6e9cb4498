#include "pforge/rewrite.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace pforge {

std::int64_t wrap(std::int64_t v, IntWidth w) {
  if (w == IntWidth::I64) return v;
  return static_cast<std::int32_t>(static_cast<std::uint32_t>(v));
}

std::int64_t apply_op(BinOp op, std::int64_t a, std::int64_t b, IntWidth w) {
  const auto ua = static_cast<std::uint64_t>(a);
  const auto ub = static_cast<std::uint64_t>(b);
  const int bits = bit_count(w);
  const unsigned shift = static_cast<unsigned>(ub & static_cast<std::uint64_t>(bits - 1));
  switch (op) {
    case BinOp::Add: return wrap(static_cast<std::int64_t>(ua + ub), w);
    case BinOp::Sub: return wrap(static_cast<std::int64_t>(ua - ub), w);
    case BinOp::Mul: return wrap(static_cast<std::int64_t>(ua * ub), w);
    case BinOp::And: return wrap(a & b, w);
    case BinOp::Or: return wrap(a | b, w);
    case BinOp::Xor: return wrap(a ^ b, w);
    case BinOp::Shl: return wrap(static_cast<std::int64_t>(ua << shift), w);
    case BinOp::Shr: return wrap(wrap(a, w) >> shift, w);
    case BinOp::UShr: {
      std::uint64_t bitsv = w == IntWidth::I32 ? (ua & 0xFFFFFFFFULL) : ua;
      return wrap(static_cast<std::int64_t>(bitsv >> shift), w);
    }
  }
  return 0;
}

bool apply_cmp(CmpOp op, std::int64_t a, std::int64_t b) {
  switch (op) {
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Gt: return a > b;
    case CmpOp::Ge: return a >= b;
  }
  return false;
}

// ---------------------------------------------------------------------------
// ConcreteArena

std::size_t ConcreteArena::KeyHash::operator()(const Key& k) const {
  std::uint64_t h = static_cast<std::uint64_t>(k.kind) * 0x9E3779B97F4A7C15ULL;
  auto mix = [&](std::uint64_t v) {
    h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  };
  mix(static_cast<std::uint64_t>(k.op));
  mix(static_cast<std::uint64_t>(k.value));
  mix(k.lhs);
  mix(k.rhs);
  return static_cast<std::size_t>(h);
}

NodeId ConcreteArena::intern(const CNode& n) {
  Key key{n.kind, n.op, n.value, n.lhs, n.rhs};
  auto [it, inserted] = index_.try_emplace(key, static_cast<NodeId>(nodes_.size()));
  if (inserted) nodes_.push_back(n);
  return it->second;
}

NodeId ConcreteArena::atom(std::string_view name) {
  auto it = atom_index_.find(std::string(name));
  std::int64_t idx;
  if (it == atom_index_.end()) {
    idx = static_cast<std::int64_t>(atoms_.size());
    atoms_.emplace_back(name);
    atom_index_.emplace(std::string(name), idx);
  } else {
    idx = it->second;
  }
  CNode n;
  n.kind = CKind::Atom;
  n.value = idx;
  return intern(n);
}

NodeId ConcreteArena::lit(std::int64_t value) {
  CNode n;
  n.kind = CKind::Lit;
  n.value = wrap(value, width_);
  return intern(n);
}

NodeId ConcreteArena::op(BinOp o, NodeId lhs, NodeId rhs) {
  CNode n;
  n.kind = CKind::Op;
  n.op = o;
  n.lhs = lhs;
  n.rhs = rhs;
  return intern(n);
}

void ConcreteArena::rollback(std::size_t m) {
  while (nodes_.size() > m) {
    const CNode& n = nodes_.back();
    index_.erase(Key{n.kind, n.op, n.value, n.lhs, n.rhs});
    nodes_.pop_back();
  }
}

NodeId ConcreteArena::from_ast(const Expr& e) {
  return std::visit(
      [&](const auto& n) -> NodeId {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Var>) {
          return atom(n.name);
        } else if constexpr (std::is_same_v<T, Expr::Lit>) {
          return lit(n.value);
        } else {
          NodeId l = from_ast(*n.lhs);
          NodeId r = from_ast(*n.rhs);
          return op(n.op, l, r);
        }
      },
      e.node);
}

NodeId ConcreteArena::parse(std::string_view text) {
  return from_ast(*parse_expression(text, width_));
}

std::string ConcreteArena::to_source(NodeId id) const {
  std::function<void(NodeId, bool, std::ostringstream&)> print =
      [&](NodeId i, bool wrap_parens, std::ostringstream& os) {
        const CNode& n = nodes_[i];
        switch (n.kind) {
          case CKind::Atom: os << atoms_[n.value]; break;
          case CKind::Lit: os << n.value; break;
          case CKind::Op:
            if (wrap_parens) os << "(";
            print(n.lhs, true, os);
            os << " " << op_symbol(n.op) << " ";
            print(n.rhs, true, os);
            if (wrap_parens) os << ")";
            break;
        }
      };
  std::ostringstream os;
  print(id, false, os);
  return os.str();
}

// ---------------------------------------------------------------------------
// Evaluation

std::int64_t evaluate(const ConcreteArena& arena, NodeId root, const Env& env) {
  std::unordered_map<NodeId, std::int64_t> memo;
  std::function<std::int64_t(NodeId)> eval = [&](NodeId id) -> std::int64_t {
    if (auto it = memo.find(id); it != memo.end()) return it->second;
    const CNode& n = arena[id];
    std::int64_t v = 0;
    switch (n.kind) {
      case CKind::Atom: {
        auto it = env.find(arena.atom_name(n));
        if (it == env.end()) {
          throw EvalError("no value for atom '" + arena.atom_name(n) + "'");
        }
        v = wrap(it->second, arena.width());
        break;
      }
      case CKind::Lit: v = n.value; break;
      case CKind::Op: v = apply_op(n.op, eval(n.lhs), eval(n.rhs), arena.width()); break;
    }
    memo.emplace(id, v);
    return v;
  };
  return eval(root);
}

std::int64_t evaluate_east(const PatternEasts& e, NodeId root, const Env& env,
                           IntWidth w) {
  const ENode& n = e.arena[root];
  switch (n.kind) {
    case NodeKind::Var:
    case NodeKind::ConstVar: {
      auto it = env.find(n.name);
      if (it == env.end()) throw EvalError("no value for '" + n.name + "'");
      return wrap(it->second, w);
    }
    case NodeKind::Lit: return wrap(n.value, w);
    case NodeKind::Op:
      return apply_op(n.op, evaluate_east(e, n.lhs, env, w),
                      evaluate_east(e, n.rhs, env, w), w);
    default: throw EvalError("boolean node in integer context");
  }
}

bool evaluate_precondition(const PatternEasts& e, NodeId root, const Env& env,
                           IntWidth w) {
  const ENode& n = e.arena[root];
  switch (n.kind) {
    case NodeKind::Bool: return n.value != 0;
    case NodeKind::Cmp:
      return apply_cmp(n.cmp, evaluate_east(e, n.lhs, env, w),
                       evaluate_east(e, n.rhs, env, w));
    case NodeKind::Not: return !evaluate_precondition(e, n.lhs, env, w);
    case NodeKind::Logic:
      if (n.is_and) {
        return evaluate_precondition(e, n.lhs, env, w) &&
               evaluate_precondition(e, n.rhs, env, w);
      }
      return evaluate_precondition(e, n.lhs, env, w) ||
             evaluate_precondition(e, n.rhs, env, w);
    default: throw EvalError("integer node in boolean context");
  }
}

// ---------------------------------------------------------------------------
// Matching

std::optional<Binding> match_expr(const CompiledPattern& p, const ConcreteArena& arena,
                                  NodeId root) {
  if (arena.width() != p.width()) return std::nullopt;
  const EArena& pa = p.easts.arena;
  std::unordered_map<NodeId, NodeId> memo;
  Binding b;

  std::function<bool(NodeId, NodeId)> match = [&](NodeId pid, NodeId cid) -> bool {
    if (auto it = memo.find(pid); it != memo.end()) return it->second == cid;
    const ENode& pn = pa[pid];
    const CNode& cn = arena[cid];
    switch (pn.kind) {
      case NodeKind::Var:
        b.free[pn.name] = cid;
        break;
      case NodeKind::ConstVar:
        if (cn.kind != CKind::Lit) return false;
        b.constants[pn.name] = cn.value;
        break;
      case NodeKind::Lit:
        if (cn.kind != CKind::Lit || cn.value != wrap(pn.value, arena.width())) {
          return false;
        }
        break;
      case NodeKind::Op:
        if (cn.kind != CKind::Op || cn.op != pn.op) return false;
        if (!match(pn.lhs, cn.lhs) || !match(pn.rhs, cn.rhs)) return false;
        break;
      default:
        return false;
    }
    memo.emplace(pid, cid);
    return true;
  };

  if (!match(p.easts.before_root, root)) return std::nullopt;

  Env consts(b.constants.begin(), b.constants.end());
  for (NodeId c : p.easts.precond_roots) {
    if (!evaluate_precondition(p.easts, c, consts, p.width())) return std::nullopt;
  }
  return b;
}

NodeId instantiate_after(const CompiledPattern& p, const Binding& b,
                         ConcreteArena& arena) {
  const EArena& pa = p.easts.arena;
  Env consts(b.constants.begin(), b.constants.end());

  std::unordered_map<NodeId, bool> constant_memo;
  std::function<bool(NodeId)> all_constant = [&](NodeId id) -> bool {
    if (auto it = constant_memo.find(id); it != constant_memo.end()) return it->second;
    const ENode& n = pa[id];
    bool r = n.kind == NodeKind::Lit || n.kind == NodeKind::ConstVar ||
             (n.kind == NodeKind::Op && all_constant(n.lhs) && all_constant(n.rhs));
    constant_memo.emplace(id, r);
    return r;
  };

  std::unordered_map<NodeId, NodeId> built;
  std::function<NodeId(NodeId)> build = [&](NodeId id) -> NodeId {
    if (auto it = built.find(id); it != built.end()) return it->second;
    const ENode& n = pa[id];
    NodeId out;
    if (all_constant(id)) {
      out = arena.lit(evaluate_east(p.easts, id, consts, p.width()));
    } else if (n.kind == NodeKind::Var) {
      out = b.free.at(n.name);
    } else {
      NodeId l = build(n.lhs);
      NodeId r = build(n.rhs);
      out = arena.op(n.op, l, r);
    }
    built.emplace(id, out);
    return out;
  };
  return build(p.easts.after_root);
}

std::optional<Applied> apply_first(std::span<const CompiledPattern> patterns,
                                   ConcreteArena& arena, NodeId root) {
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    if (auto b = match_expr(patterns[i], arena, root)) {
      return Applied{instantiate_after(patterns[i], *b, arena), i};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Fuzzing

namespace {

std::int64_t draw_value(SplitMix64& rng, IntWidth w) {
  // A quarter of the draws come from boundary-heavy values, which is where
  // wrapping bugs live.
  if (rng.below(4) == 0) {
    const std::int64_t specials[] = {0,
                                     1,
                                     -1,
                                     2,
                                     min_value(w),
                                     max_value(w),
                                     min_value(w) + 1,
                                     max_value(w) - 1,
                                     bit_count(w) - 1,
                                     bit_count(w)};
    if (rng.below(2) == 0) {
      return specials[rng.below(std::size(specials))];
    }
    return static_cast<std::int64_t>(rng.below(65)) - 32;
  }
  return wrap(static_cast<std::int64_t>(rng.next()), w);
}

}  // namespace

FuzzOutcome semantic_fuzz_check(const CompiledPattern& p, std::size_t trials,
                                std::uint64_t seed) {
  FuzzOutcome out;
  SplitMix64 rng(seed);
  std::size_t draws = 0;
  const IntWidth w = p.width();

  for (std::size_t t = 0; t < trials; ++t) {
    Env env;
    for (const auto& prm : p.pattern.params) {
      if (prm.kind == ParamKind::Free) env[prm.name] = draw_value(rng, w);
    }
    for (;;) {
      for (const auto& prm : p.pattern.params) {
        if (prm.kind == ParamKind::Constant) env[prm.name] = draw_value(rng, w);
      }
      bool ok = true;
      for (NodeId c : p.easts.precond_roots) {
        if (!evaluate_precondition(p.easts, c, env, w)) {
          ok = false;
          break;
        }
      }
      if (ok) break;
      if (++draws >= kMaxRejectionDraws) {
        out.status = FuzzOutcome::Status::Unsampleable;
        out.trials_run = t;
        return out;
      }
    }
    std::int64_t before = evaluate_east(p.easts, p.easts.before_root, env, w);
    std::int64_t after = evaluate_east(p.easts, p.easts.after_root, env, w);
    if (before != after) {
      out.status = FuzzOutcome::Status::Counterexample;
      out.trials_run = t + 1;
      out.env = std::move(env);
      out.before_value = before;
      out.after_value = after;
      return out;
    }
  }
  out.trials_run = trials;
  return out;
}

// ---------------------------------------------------------------------------
// Expression generation

NodeId random_expr(ConcreteArena& arena, int depth, const ExprAlphabet& alphabet,
                   SplitMix64& rng) {
  const bool can_branch = depth > 0 && !alphabet.ops.empty();
  if (!can_branch || rng.below(3) == 0) {
    std::uint64_t pick = rng.below(alphabet.leaf_count());
    if (pick < alphabet.atoms.size()) return arena.atom(alphabet.atoms[pick]);
    return arena.lit(alphabet.consts[pick - alphabet.atoms.size()]);
  }
  BinOp op = alphabet.ops[rng.below(alphabet.ops.size())];
  NodeId l = random_expr(arena, depth - 1, alphabet, rng);
  NodeId r = random_expr(arena, depth - 1, alphabet, rng);
  return arena.op(op, l, r);
}

NodeId random_expr(ConcreteArena& arena, int depth, const ExprAlphabet& alphabet,
                   std::uint64_t seed) {
  SplitMix64 rng(seed);
  return random_expr(arena, depth, alphabet, rng);
}

std::vector<NodeId> enumerate_exprs(ConcreteArena& arena, int depth,
                                    const ExprAlphabet& alphabet) {
  std::vector<NodeId> all;
  for (const auto& a : alphabet.atoms) all.push_back(arena.atom(a));
  for (auto c : alphabet.consts) all.push_back(arena.lit(c));
  // [level_start[k], level_start[k+1]) holds the expressions of depth exactly k.
  std::vector<std::size_t> level_start = {0, all.size()};
  for (int k = 1; k <= depth; ++k) {
    const std::size_t prev_begin = level_start[k - 1];
    const std::size_t prev_end = level_start[k];
    for (BinOp op : alphabet.ops) {
      for (std::size_t i = 0; i < prev_end; ++i) {
        for (std::size_t j = 0; j < prev_end; ++j) {
          if (i < prev_begin && j < prev_begin) continue;
          all.push_back(arena.op(op, all[i], all[j]));
        }
      }
    }
    level_start.push_back(all.size());
  }
  return all;
}

}  // namespace pforge
