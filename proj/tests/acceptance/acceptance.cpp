// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.
//
//   acceptance <path-to-pforge-binary> <test-data-dir>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <thread>
#include <vector>

#include "../codegen_interpreter.hpp"
#include "pforge/codegen.hpp"
#include "pforge/east.hpp"
#include "pforge/lang.hpp"
#include "pforge/metrics.hpp"
#include "pforge/rewrite.hpp"
#include "pforge/shadow.hpp"
#include "pforge/testgen.hpp"

namespace fs = std::filesystem;
using namespace pforge;
using namespace std::chrono_literals;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_cli;
fs::path g_data;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<CompiledPattern> load(const std::string& name) {
  return compile_all(parse_pattern_file(slurp(g_data / name)));
}

const CompiledPattern& find(const std::vector<CompiledPattern>& ps, const std::string& name) {
  for (const auto& p : ps) {
    if (p.name() == name) return p;
  }
  throw std::runtime_error("no pattern " + name);
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Result {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

Result criterion1() {
  Result r;
  const auto t0 = Clock::now();
  auto corpus = load("corpus.pat");
  const std::vector<std::string> names = {
      "pAdd2", "pAdd5", "pAdd6", "pNewAddAddSub1156", "pNewAddAddSub1202",
      "pNewXPlus_ConMinusY_", "pNewXPlus_ConMinusY_Sym", "pNewSubAddSub1564",
      "pNewSub_XOrY_Minus_XXorY_", "pNewSubAddSub1574"};
  for (const auto& n : names) find(corpus, n);
  const auto& p1574 = find(corpus, "pNewSubAddSub1574");
  if (p1574.pattern.preconds.size() != 1 ||
      !std::holds_alternative<Cond::BoolLit>(p1574.pattern.preconds[0]->node))
    r.fail("pNewSubAddSub1574 guard is not the literal true");
  for (const auto& p : corpus) {
    auto o = semantic_fuzz_check(p, 10000, 0);
    if (o.status != FuzzOutcome::Status::Pass || o.trials_run != 10000)
      r.fail(p.name() + " did not pass 10000 trials");
  }
  const double s = seconds_since(t0);
  if (s >= 60) r.fail("took " + std::to_string(s) + " s");
  if (r.ok) r.detail = std::to_string(corpus.size()) + " patterns, " + std::to_string(s).substr(0, 4) + " s";
  return r;
}

Result criterion2() {
  Result r;
  ProcessSolver z3(default_solver_path());
  auto fam = load("pAdd_family.pat");
  const auto& a2 = find(fam, "pAdd2");
  const auto& a5 = find(fam, "pAdd5");
  const auto& a6 = find(fam, "pAdd6");
  auto U = compile(parse_pattern_file(
                       "@Pattern\npublic void U(int a) { before(a + a); after(a << 1); }\n")
                       .front());
  auto V = compile(parse_pattern_file(
                       "@Pattern\npublic void V(int a, int b) { before(a + b); after(b + a); }\n")
                       .front());
  struct Case {
    const CompiledPattern* x;
    const CompiledPattern* y;
    Verdict want;
  };
  const std::vector<Case> cases = {{&a2, &a5, Verdict::Yes}, {&a2, &a6, Verdict::Yes},
                                   {&U, &V, Verdict::No},    {&a5, &a2, Verdict::No},
                                   {&a6, &a2, Verdict::No}};
  for (const auto& c : cases) {
    const auto t0 = Clock::now();
    auto v = determine_shadow(*c.x, *c.y, z3, 10s);
    const std::string pair = "(" + c.x->name() + ", " + c.y->name() + ")";
    if (seconds_since(t0) > 10) r.fail(pair + " exceeded 10 s");
    if (v.result != c.want)
      r.fail(pair + " = " + std::string(verdict_name(v.result)));
    if (c.want == Verdict::No) {
      OracleConfig cfg;
      if (c.x == &U) cfg = OracleConfig{1, {}, {1, 2}};
      auto ce = brute_force_counterexample(*c.x, *c.y, cfg);
      if (!ce) {
        r.fail(pair + " has no oracle witness");
      } else if (!match_expr(*c.y, *ce->arena, ce->root) || match_expr(*c.x, *ce->arena, ce->root)) {
        r.fail(pair + " witness " + ce->text + " does not re-verify");
      } else if (c.x == &U && ce->text != "1 + 2") {
        r.fail("U/V witness is " + ce->text);
      }
    }
  }
  return r;
}

Result criterion3() {
  Result r;
  const auto t0 = Clock::now();
  auto corpus = load("corpus.pat");
  ProcessSolver z3(default_solver_path());
  MatrixOptions opts;
  opts.workers = std::max(1u, std::thread::hardware_concurrency());
  opts.oracle = true;
  auto m = shadow_matrix(corpus, z3, opts);
  std::size_t yes = 0;
  for (const auto& e : m) {
    if (!e.error.empty()) r.fail(e.error);
    if (e.disagreement)
      r.fail(corpus[e.x].name() + " vs " + corpus[e.y].name() + ": " + e.verdict.witness);
    yes += e.verdict.result == Verdict::Yes;
  }
  if (corpus.size() < 9 || m.size() < 72) r.fail("matrix too small");
  const double s = seconds_since(t0);
  if (s >= 600) r.fail("took " + std::to_string(s) + " s");
  if (r.ok) r.detail = std::to_string(m.size()) + " pairs, " + std::to_string(yes) + " YES";
  return r;
}

Result criterion4() {
  Result r;
  auto p = find(load("pAdd6_long.pat"), "pAdd6");
  auto a = derive_ir_annotations(p);
  if (a.fail_on != std::vector<BinOp>{BinOp::Add}) r.fail("failOn differs");
  if (a.counts != std::vector<std::pair<BinOp, int>>{{BinOp::Sub, 1}}) r.fail("counts differ");
  auto t = emit_ir_test(p, 0);
  if (t.text.find("  return (a - b) + (c - a);\n") == std::string::npos) r.fail("body differs");
  auto suite = emit_test_classes(std::vector<CompiledPattern>{p}, 0);
  if (suite.files.size() != 1 || suite.files[0].text != slurp(g_data / "golden/TestAddNode_pAdd6.java"))
    r.fail("class file differs from golden");
  return r;
}

Result criterion5() {
  Result r;
  auto p6 = find(load("pAdd6_long.pat"), "pAdd6");
  auto s = emit_matcher_snippet(p6);
  if (s.text.find("_P_in1->Opcode() == Op_SubL") == std::string::npos ||
      s.text.find("_P_in2->Opcode() == Op_SubL") == std::string::npos)
    r.fail("missing SubL opcode checks");
  if (s.text.find("_P_in11 == _P_in22") == std::string::npos) r.fail("missing same-node check");
  if (s.text.find("new SubLNode(_P_in21, _P_in12)") == std::string::npos) r.fail("missing SubL construction");

  std::vector<CompiledPattern> fixtures = load("corpus.pat");
  for (auto& p : load("negate_precond.pat")) fixtures.push_back(std::move(p));
  fixtures.push_back(p6);
  std::size_t total = 0, disagreements = 0;
  for (const auto& p : fixtures) {
    std::vector<CompiledPattern> single = {p};
    auto groups = testing::split_pass(emit_pass_file(single));
    ConcreteArena arena(p.width());
    ExprAlphabet alpha{{"p", "q", "r"}, {-1, 0, 1, 2}, {}};
    std::set<BinOp> ops;
    for (const auto& [op, n] : opcode_multiset(p.easts.before_root, p.easts)) ops.insert(op);
    alpha.ops.assign(ops.begin(), ops.end());
    for (const auto& n : p.easts.arena.nodes()) {
      if (n.kind == NodeKind::Lit) alpha.consts.push_back(n.value);
    }
    SplitMix64 rng(1);
    for (int i = 0; i < 1000; ++i) {
      NodeId e;
      if (i % 2 == 0) {
        std::map<std::string, NodeId> subst;
        for (const auto& prm : p.pattern.params) {
          subst[prm.name] = prm.kind == ParamKind::Constant
                                ? arena.lit(alpha.consts[rng.below(alpha.consts.size())])
                                : random_expr(arena, 1, alpha, rng);
        }
        std::function<NodeId(NodeId)> inst = [&](NodeId id) -> NodeId {
          const ENode& n = p.easts.arena[id];
          if (n.kind == NodeKind::Lit) return arena.lit(n.value);
          if (n.kind != NodeKind::Op) return subst.at(n.name);
          NodeId l = inst(n.lhs);
          NodeId rr = inst(n.rhs);
          return arena.op(n.op, l, rr);
        };
        e = inst(p.easts.before_root);
      } else {
        e = random_expr(arena, 3, alpha, rng);
      }
      ++total;
      disagreements += match_expr(p, arena, e).has_value() !=
                       testing::interpret_pass(groups, arena, e).has_value();
    }
  }
  if (disagreements) r.fail(std::to_string(disagreements) + " disagreements");
  if (r.ok) r.detail = std::to_string(total) + " expressions, 0 disagreements";
  return r;
}

Result criterion6() {
  Result r;
  auto p = find(load("pAdd6_long.pat"), "pAdd6");
  for (const auto& [id, np] : canonical_paths(p.easts)) {
    const ENode& n = p.easts.arena[id];
    if (n.kind == NodeKind::Var && n.name == "a") {
      r.detail = "a -> " + np.canonical.to_string();
      if (np.canonical.to_string() != "[1,1]") r.fail(r.detail);
      return r;
    }
  }
  r.fail("shared node not found");
  return r;
}

Result criterion7() {
  Result r;
  const auto a = count_identifiers(slurp(g_data / "count_sample.pat.txt"), Language::PatternLang);
  const auto b = count_identifiers(slurp(g_data / "count_sample.cpp"), Language::CppLike);
  r.detail = "pattern " + std::to_string(a) + " (want 11), C++ " + std::to_string(b) + " (want 27)";
  if (a != 11 || b != 27) r.ok = false;
  return r;
}

int run_cli_process(const std::vector<std::string>& args) {
  std::string cmd = "'" + g_cli + "'";
  for (const auto& a : args) cmd += " '" + a + "'";
  cmd += " >/dev/null 2>&1";
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

void full_run(const fs::path& out) {
  const std::string corpus = (g_data / "corpus.pat").string();
  const std::string neg = (g_data / "negate_precond.pat").string();
  const std::vector<std::vector<std::string>> steps = {
      {"translate", corpus, neg, "--out", (out / "translate").string()},
      {"gen-tests", corpus, neg, "--out", (out / "tests").string()},
      {"verify", corpus, neg, "--out", (out / "verify").string()},
      {"shadow", corpus, "--oracle", "--out", (out / "shadow").string()},
      {"metrics", (g_data / "count_sample.pat.txt").string(), (g_data / "count_sample.cpp").string(), corpus,
       "--out", (out / "metrics").string()},
  };
  for (const auto& s : steps) {
    if (int rc = run_cli_process(s); rc != 0)
      throw std::runtime_error(s[0] + " exited " + std::to_string(rc));
  }
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), root).string()] = slurp(e.path());
  }
  return files;
}

Result criterion8() {
  Result r;
  const fs::path base = fs::temp_directory_path() / "pforge_acceptance";
  fs::remove_all(base);
  full_run(base / "run1");
  full_run(base / "run2");
  auto t1 = tree(base / "run1");
  auto t2 = tree(base / "run2");
  if (t1 != t2) r.fail("output trees differ");
  if (t1.empty()) r.fail("no artifacts");
  if (r.ok) r.detail = std::to_string(t1.size()) + " files identical";
  fs::remove_all(base);
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <pforge-binary> <test-data-dir>\n";
    return 2;
  }
  g_cli = fs::absolute(argv[1]).string();
  g_data = argv[2];

  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"corpus parses and verifies", criterion1},
      {"shadow facts", criterion2},
      {"oracle agreement over corpus matrix", criterion3},
      {"IR test golden", criterion4},
      {"codegen structure and interpreter agreement", criterion5},
      {"canonical access path", criterion6},
      {"identifier counts", criterion7},
      {"deterministic CLI output", criterion8},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r.ok = false;
      r.detail = std::string("error: ") + e.what();
    }
    failed += !r.ok;
    std::cout << (r.ok ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first;
    if (!r.detail.empty()) std::cout << ": " << r.detail;
    std::cout << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed ? 1 : 0;
}
