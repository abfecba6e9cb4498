#include "pforge/shadow.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include "pforge/codegen.hpp"

extern char** environ;

namespace pforge {

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "YES";
    case Verdict::No: return "NO";
    case Verdict::Unknown: return "UNKNOWN";
  }
  return "?";
}

bool same_shape(const EArena& ax, NodeId bx, const EArena& ay, NodeId by) {
  const ENode& nx = ax[bx];
  const ENode& ny = ay[by];
  if (nx.kind != NodeKind::Op || ny.kind != NodeKind::Op) return true;
  if (nx.op != ny.op) return false;
  return same_shape(ax, nx.lhs, ay, ny.lhs) && same_shape(ax, nx.rhs, ay, ny.rhs);
}

bool same_shape(const CompiledPattern& x, const CompiledPattern& y) {
  return same_shape(x.easts.arena, x.easts.before_root, y.easts.arena, y.easts.before_root);
}

// ---------------------------------------------------------------------------
// Encoding

namespace {

std::string smt_int(std::int64_t v) {
  if (v < 0) {
    // Avoid negating INT64_MIN.
    return "(- " + std::to_string(static_cast<std::uint64_t>(0) - static_cast<std::uint64_t>(v)) +
           ")";
  }
  return std::to_string(v);
}

std::string conj(const std::vector<std::string>& parts) {
  if (parts.empty()) return "true";
  if (parts.size() == 1) return parts[0];
  std::string s = "(and";
  for (const auto& p : parts) s += "\n    " + p;
  return s + ")";
}

struct Side {
  const CompiledPattern* p;
  char prefix;  // 'x' or 'y'
  std::vector<NodeId> order;
  std::map<NodeId, std::string> names;
  std::vector<std::string> value_vars;
  std::vector<std::string> phi;
  std::vector<std::string> pre;
};

class Encoder {
 public:
  bool needs_bv32 = false;
  bool needs_bv64 = false;

  void build(Side& s) {
    const EArena& a = s.p->easts.arena;
    s.order = reachable_preorder(a, s.p->easts.before_root);
    for (std::size_t i = 0; i < s.order.size(); ++i) {
      s.names[s.order[i]] = std::string(1, s.prefix) + std::to_string(i + 1);
    }
    const IntWidth w = s.p->width();
    for (NodeId id : s.order) {
      const ENode& n = a[id];
      const std::string& v = s.names[id];
      switch (n.kind) {
        case NodeKind::Op:
          s.phi.push_back("(= " + v + " (tree " + node_class_stem(n.op, w) + " " +
                          s.names[n.lhs] + " " + s.names[n.rhs] + "))");
          break;
        case NodeKind::Lit:
          s.phi.push_back("(= " + v + " (nil " + smt_int(n.value) + "))");
          break;
        case NodeKind::ConstVar: {
          std::string wv = value_name(s, n.name);
          s.value_vars.push_back(wv);
          s.phi.push_back("(= " + v + " (nil " + wv + "))");
          s.phi.push_back("(<= " + smt_int(min_value(w)) + " " + wv + " " +
                          smt_int(max_value(w)) + ")");
          break;
        }
        default:
          break;
      }
    }
    for (NodeId c : s.p->easts.precond_roots) s.pre.push_back(cond(s, c));
  }

  static std::string value_name(const Side& s, const std::string& param) {
    return std::string("w") + s.prefix + "_" + param;
  }

 private:
  std::string bv(const std::string& e, int bits) {
    return "((_ int2bv " + std::to_string(bits) + ") " + e + ")";
  }

  std::string expr(const Side& s, NodeId id) {
    const EArena& a = s.p->easts.arena;
    const ENode& n = a[id];
    switch (n.kind) {
      case NodeKind::ConstVar:
      case NodeKind::Var:
        return value_name(s, n.name);
      case NodeKind::Lit:
        return smt_int(n.value);
      case NodeKind::Op: {
        std::string l = expr(s, n.lhs);
        std::string r = expr(s, n.rhs);
        switch (n.op) {
          case BinOp::Add: return "(+ " + l + " " + r + ")";
          case BinOp::Sub: return "(- " + l + " " + r + ")";
          case BinOp::Mul: return "(* " + l + " " + r + ")";
          default: break;
        }
        const int bits = bit_count(s.p->width());
        (bits == 32 ? needs_bv32 : needs_bv64) = true;
        const std::string conv = bits == 32 ? "pf_signed32" : "pf_signed64";
        const std::string count =
            "(bvand " + bv(r, bits) + " ((_ int2bv " + std::to_string(bits) + ") " +
            std::to_string(bits - 1) + "))";
        std::string body;
        switch (n.op) {
          case BinOp::And: body = "(bvand " + bv(l, bits) + " " + bv(r, bits) + ")"; break;
          case BinOp::Or: body = "(bvor " + bv(l, bits) + " " + bv(r, bits) + ")"; break;
          case BinOp::Xor: body = "(bvxor " + bv(l, bits) + " " + bv(r, bits) + ")"; break;
          case BinOp::Shl: body = "(bvshl " + bv(l, bits) + " " + count + ")"; break;
          case BinOp::Shr: body = "(bvashr " + bv(l, bits) + " " + count + ")"; break;
          case BinOp::UShr: body = "(bvlshr " + bv(l, bits) + " " + count + ")"; break;
          default: break;
        }
        return "(" + conv + " " + body + ")";
      }
      default:
        return "0";
    }
  }

  std::string cond(const Side& s, NodeId id) {
    const ENode& n = s.p->easts.arena[id];
    switch (n.kind) {
      case NodeKind::Bool:
        return n.value ? "true" : "false";
      case NodeKind::Not:
        return "(not " + cond(s, n.lhs) + ")";
      case NodeKind::Logic:
        return std::string(n.is_and ? "(and " : "(or ") + cond(s, n.lhs) + " " +
               cond(s, n.rhs) + ")";
      case NodeKind::Cmp: {
        std::string l = expr(s, n.lhs);
        std::string r = expr(s, n.rhs);
        switch (n.cmp) {
          case CmpOp::Eq: return "(= " + l + " " + r + ")";
          case CmpOp::Ne: return "(distinct " + l + " " + r + ")";
          case CmpOp::Lt: return "(< " + l + " " + r + ")";
          case CmpOp::Le: return "(<= " + l + " " + r + ")";
          case CmpOp::Gt: return "(> " + l + " " + r + ")";
          case CmpOp::Ge: return "(>= " + l + " " + r + ")";
        }
        return "true";
      }
      default:
        return "true";
    }
  }
};

}  // namespace

SmtScript encode_shadow_smt(const CompiledPattern& x, const CompiledPattern& y) {
  Side sx{&x, 'x', {}, {}, {}, {}, {}};
  Side sy{&y, 'y', {}, {}, {}, {}, {}};
  Encoder enc;
  enc.build(sx);
  enc.build(sy);

  SmtScript out;
  for (NodeId id : sx.order) out.x_nodes.push_back(sx.names[id]);
  for (NodeId id : sy.order) out.y_nodes.push_back(sy.names[id]);
  out.x_values = sx.value_vars;
  out.y_values = sy.value_vars;

  // Lockstep walk over the tree unfoldings; pairs are recorded once.
  const EArena& ax = x.easts.arena;
  const EArena& ay = y.easts.arena;
  std::set<std::pair<NodeId, NodeId>> seen;
  std::function<void(NodeId, NodeId)> walk = [&](NodeId bx, NodeId by) {
    if (seen.insert({bx, by}).second) out.equalities.emplace_back(sx.names[bx], sy.names[by]);
    const ENode& nx = ax[bx];
    const ENode& ny = ay[by];
    if (nx.kind == NodeKind::Op && ny.kind == NodeKind::Op) {
      walk(nx.lhs, ny.lhs);
      walk(nx.rhs, ny.rhs);
    }
  };
  walk(x.easts.before_root, y.easts.before_root);

  std::ostringstream os;
  os << "; shadow check: does " << x.name() << " match everything " << y.name()
     << " matches?\n";
  os << "(set-logic ALL)\n";
  os << "(declare-datatype Opcode (";
  bool first = true;
  for (IntWidth w : {IntWidth::I32, IntWidth::I64}) {
    for (BinOp op : kAllBinOps) {
      os << (first ? "" : " ") << "(" << node_class_stem(op, w) << ")";
      first = false;
    }
  }
  os << "))\n";
  os << "(declare-datatype T ((nil (nil_val Int)) (tree (tree_op Opcode) (tree_l T) (tree_r T))))\n";
  if (enc.needs_bv32) {
    os << "(define-fun pf_signed32 ((b (_ BitVec 32))) Int\n"
          "  (ite (bvslt b (_ bv0 32)) (- (bv2nat b) 4294967296) (bv2nat b)))\n";
  }
  if (enc.needs_bv64) {
    os << "(define-fun pf_signed64 ((b (_ BitVec 64))) Int\n"
          "  (ite (bvslt b (_ bv0 64)) (- (bv2nat b) 18446744073709551616) (bv2nat b)))\n";
  }

  auto binders = [](const std::vector<std::string>& nodes, const std::vector<std::string>& vals) {
    std::string s;
    for (const auto& n : nodes) s += (s.empty() ? "" : " ") + ("(" + n + " T)");
    for (const auto& v : vals) s += (s.empty() ? "" : " ") + ("(" + v + " Int)");
    return s;
  };

  std::vector<std::string> premise = sy.phi;
  premise.insert(premise.end(), sy.pre.begin(), sy.pre.end());
  std::vector<std::string> body = sx.phi;
  body.insert(body.end(), sx.pre.begin(), sx.pre.end());
  for (const auto& [a, b] : out.equalities) body.push_back("(= " + a + " " + b + ")");

  os << "(assert (not (forall (" << binders(out.y_nodes, out.y_values) << ")\n";
  os << "  (=> " << conj(premise) << "\n";
  os << "  (exists (" << binders(out.x_nodes, out.x_values) << ")\n";
  os << "    " << conj(body) << ")))))\n";
  os << "(check-sat)\n";
  out.text = os.str();
  return out;
}

// ---------------------------------------------------------------------------
// Solver process

ProcessSolver::ProcessSolver(std::string path) : path_(std::move(path)) {}

std::string default_solver_path() {
  const char* env = std::getenv("PFORGE_SOLVER");
  return env && *env ? std::string(env) : std::string("z3");
}

namespace {

struct Fd {
  int fd = -1;
  ~Fd() { reset(); }
  void reset() {
    if (fd >= 0) ::close(fd);
    fd = -1;
  }
};

}  // namespace

SolverResult ProcessSolver::check(const std::string& script, std::chrono::seconds timeout) {
  int in_pair[2];
  int out_pipe[2];
  // A socket for stdin so writes can use MSG_NOSIGNAL if the solver dies early.
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, in_pair) != 0) {
    throw SolverInfraError(std::string("socketpair: ") + std::strerror(errno));
  }
  Fd in_w{in_pair[0]}, in_r{in_pair[1]};
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    throw SolverInfraError(std::string("pipe: ") + std::strerror(errno));
  }
  Fd out_r{out_pipe[0]}, out_w{out_pipe[1]};

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_r.fd, 0);
  posix_spawn_file_actions_adddup2(&actions, out_w.fd, 1);
  posix_spawn_file_actions_adddup2(&actions, out_w.fd, 2);

  const std::string tflag = "-T:" + std::to_string(std::max<long>(1, timeout.count()));
  std::vector<std::string> args = {path_, "-in", "-smt2", tflag};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_t pid = 0;
  int rc = ::posix_spawnp(&pid, path_.c_str(), &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) {
    throw SolverInfraError("cannot run solver '" + path_ + "': " + std::strerror(rc));
  }
  in_r.reset();
  out_w.reset();

  std::size_t off = 0;
  while (off < script.size()) {
    ssize_t n = ::send(in_w.fd, script.data() + off, script.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      break;  // the solver exited; its output says why
    }
    off += static_cast<std::size_t>(n);
  }
  ::shutdown(in_w.fd, SHUT_WR);
  in_w.reset();

  const auto deadline = std::chrono::steady_clock::now() + timeout + std::chrono::seconds(5);
  std::string output;
  bool timed_out = false;
  char buf[4096];
  for (;;) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      timed_out = true;
      break;
    }
    pollfd pfd{out_r.fd, POLLIN, 0};
    int pr = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (pr < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (pr == 0) continue;
    ssize_t n = ::read(out_r.fd, buf, sizeof buf);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    output.append(buf, static_cast<std::size_t>(n));
  }
  if (timed_out) ::kill(pid, SIGKILL);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (timed_out) return {SolverAnswer::Unknown, "timeout"};

  std::istringstream lines(output);
  std::string first;
  for (std::string line; std::getline(lines, line);) {
    line.erase(0, line.find_first_not_of(" \t\r"));
    line.erase(line.find_last_not_of(" \t\r") + 1);
    if (!line.empty()) {
      first = line;
      break;
    }
  }
  if (first == "sat") return {SolverAnswer::Sat, first};
  if (first == "unsat") return {SolverAnswer::Unsat, first};
  if (first == "unknown" || first == "timeout") return {SolverAnswer::Unknown, first};
  if (WIFEXITED(status) && WEXITSTATUS(status) == 127) {
    throw SolverInfraError("cannot run solver '" + path_ + "'");
  }
  throw SolverInfraError("unexpected solver output: " + (output.empty() ? "<empty>" : output));
}

ShadowVerdict determine_shadow(const CompiledPattern& x, const CompiledPattern& y,
                               Solver& solver, std::chrono::seconds timeout) {
  if (x.width() != y.width() || !same_shape(x, y)) return {Verdict::No, "shape-mismatch"};
  SmtScript script = encode_shadow_smt(x, y);
  SolverResult r = solver.check(script.text, timeout);
  switch (r.answer) {
    case SolverAnswer::Unsat: return {Verdict::Yes, r.status};
    case SolverAnswer::Sat: return {Verdict::No, r.status};
    case SolverAnswer::Unknown: return {Verdict::Unknown, r.status};
  }
  return {Verdict::Unknown, r.status};
}

// ---------------------------------------------------------------------------
// Oracle

std::optional<Counterexample> brute_force_counterexample(const CompiledPattern& x,
                                                         const CompiledPattern& y,
                                                         const OracleConfig& cfg) {
  const EArena& ya = y.easts.arena;
  const NodeId yroot = y.easts.before_root;
  if (depth(ya, yroot) > cfg.depth) return std::nullopt;

  auto arena = std::make_shared<ConcreteArena>(y.width());
  ExprAlphabet alphabet;
  alphabet.atoms = cfg.atoms;
  alphabet.consts = cfg.consts;
  std::set<BinOp> ops;
  for (const CompiledPattern* p : {&x, &y}) {
    for (const auto& [op, n] : opcode_multiset(p->easts.before_root, p->easts)) ops.insert(op);
  }
  alphabet.ops.assign(ops.begin(), ops.end());

  // One slot per variable leaf of Y, in preorder of first occurrence.
  struct Slot {
    NodeId node;
    bool constant;
    std::vector<NodeId> values;  // free: expressions; constant: literal nodes
  };
  std::vector<Slot> slots;
  auto paths = canonical_paths(ya, yroot);
  for (NodeId id : reachable_preorder(ya, yroot)) {
    const ENode& n = ya[id];
    if (n.kind == NodeKind::Var) {
      std::size_t deepest = 0;
      for (const auto& pth : paths.at(id).all) deepest = std::max(deepest, pth.steps.size());
      slots.push_back({id, false, enumerate_exprs(*arena, cfg.depth - static_cast<int>(deepest), alphabet)});
    } else if (n.kind == NodeKind::ConstVar) {
      std::vector<NodeId> lits;
      std::set<std::int64_t> seen;
      for (auto c : cfg.consts) {
        const std::int64_t v = wrap(c, y.width());
        if (seen.insert(v).second) lits.push_back(arena->lit(v));
      }
      slots.push_back({id, true, std::move(lits)});
    }
  }
  for (const auto& s : slots) {
    if (s.values.empty()) return std::nullopt;
  }

  const std::size_t mark = arena->mark();
  std::vector<std::size_t> pick(slots.size(), 0);
  std::vector<NodeId> built(ya.size(), kNoNode);
  for (;;) {
    bool pre_ok = true;
    if (!y.easts.precond_roots.empty()) {
      Env env;
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].constant) {
          env[ya[slots[i].node].name] = (*arena)[slots[i].values[pick[i]]].value;
        }
      }
      for (NodeId c : y.easts.precond_roots) {
        if (!evaluate_precondition(y.easts, c, env, y.width())) {
          pre_ok = false;
          break;
        }
      }
    }

    if (pre_ok) {
      std::fill(built.begin(), built.end(), kNoNode);
      for (std::size_t i = 0; i < slots.size(); ++i) built[slots[i].node] = slots[i].values[pick[i]];
      // Y's arena is bottom-up, so one pass in id order instantiates it.
      for (NodeId id = 0; id <= yroot; ++id) {
        const ENode& n = ya[id];
        if (n.kind == NodeKind::Lit) {
          built[id] = arena->lit(n.value);
        } else if (n.kind == NodeKind::Op && built[n.lhs] != kNoNode && built[n.rhs] != kNoNode) {
          built[id] = arena->op(n.op, built[n.lhs], built[n.rhs]);
        }
      }
      const NodeId e = built[yroot];
      if (!match_expr(x, *arena, e) && match_expr(y, *arena, e)) {
        Counterexample ce;
        ce.text = arena->to_source(e);
        ce.root = e;
        ce.arena = std::move(arena);
        return ce;
      }
      arena->rollback(mark);
    }

    std::size_t i = slots.size();
    while (i > 0) {
      --i;
      if (++pick[i] < slots[i].values.size()) break;
      pick[i] = 0;
      if (i == 0) return std::nullopt;
    }
    if (slots.empty()) return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Matrix

std::vector<MatrixEntry> shadow_matrix(std::span<const CompiledPattern> patterns,
                                       Solver& solver, const MatrixOptions& opts) {
  std::vector<MatrixEntry> entries;
  for (std::size_t x = 0; x < patterns.size(); ++x) {
    for (std::size_t y = 0; y < patterns.size(); ++y) {
      if (x != y) entries.push_back({x, y, {}, false, false, {}});
    }
  }

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= entries.size()) return;
      MatrixEntry& e = entries[i];
      const CompiledPattern& px = patterns[e.x];
      const CompiledPattern& py = patterns[e.y];
      try {
        e.verdict = determine_shadow(px, py, solver, opts.timeout);
      } catch (const SolverInfraError& err) {
        e.error = err.what();
        continue;
      }
      if (!opts.oracle || e.verdict.witness == "shape-mismatch" ||
          e.verdict.result == Verdict::Unknown) {
        continue;
      }
      e.oracle_ran = true;
      auto ce = brute_force_counterexample(px, py, opts.oracle_config);
      if (!ce) continue;
      if (e.verdict.result == Verdict::Yes) {
        e.disagreement = true;
        e.verdict.witness = "oracle counterexample " + ce->text;
      } else {
        e.verdict.witness = ce->text;
      }
    }
  };

  const std::size_t n = std::max<std::size_t>(1, std::min(opts.workers, entries.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return entries;
}

std::string format_matrix_report(std::span<const CompiledPattern> patterns,
                                 std::span<const MatrixEntry> entries) {
  std::ostringstream os;
  std::size_t yes = 0, no = 0, unknown = 0, errors = 0, disagreements = 0;
  for (const auto& e : entries) {
    os << patterns[e.x].name() << '\t' << patterns[e.y].name() << '\t';
    if (!e.error.empty()) {
      ++errors;
      os << "ERROR\t" << e.error << '\n';
      continue;
    }
    switch (e.verdict.result) {
      case Verdict::Yes: ++yes; break;
      case Verdict::No: ++no; break;
      case Verdict::Unknown: ++unknown; break;
    }
    if (e.disagreement) ++disagreements;
    os << verdict_name(e.verdict.result) << '\t' << e.verdict.witness << '\n';
  }
  os << "# pairs " << entries.size() << ", YES " << yes << ", NO " << no << ", UNKNOWN "
     << unknown << ", errors " << errors << ", oracle disagreements " << disagreements << '\n';
  return os.str();
}

}  // namespace pforge
