#include "pforge/cli.hpp"

#include <unistd.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "pforge/codegen.hpp"
#include "pforge/metrics.hpp"
#include "pforge/rewrite.hpp"
#include "pforge/shadow.hpp"
#include "pforge/testgen.hpp"

namespace fs = std::filesystem;

namespace pforge {

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot read file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Write-then-rename so a failed run never leaves a partial artifact.
void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError(tmp.string() + ": cannot write file");
    out << content;
    out.flush();
    if (!out) throw InputError(tmp.string() + ": write failed");
  }
  fs::rename(tmp, path);
}

std::vector<CompiledPattern> load_patterns(const std::vector<std::string>& paths) {
  std::vector<Pattern> all;
  for (const auto& path : paths) {
    const std::string text = read_file(path);
    try {
      for (auto& p : parse_pattern_file(text)) all.push_back(std::move(p));
    } catch (const PatternError& e) {
      throw InputError(path + ":" + e.what());
    }
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (all[i].name == all[j].name) {
        throw InputError("duplicate pattern name '" + all[i].name + "' across inputs");
      }
    }
  }
  return compile_all(std::move(all));
}

// Emits to `<out>/<name>` when an output directory is given, else to stdout.
void emit(const std::string& out_dir, const std::string& name, const std::string& text,
          std::ostream& out) {
  if (out_dir.empty()) {
    out << text;
    return;
  }
  write_atomic(fs::path(out_dir) / name, text);
}

struct Config {
  std::vector<std::string> inputs;
  std::string out_dir;
  std::uint64_t seed = 0;
  long timeout_secs = 10;
  int depth = 3;
  std::size_t workers = 1;
  std::string solver;
  bool oracle = false;
  std::size_t trials = 10000;
  std::vector<std::string> exprs;
  int width_bits = 32;
};

int cmd_translate(const Config& cfg, std::ostream& out) {
  auto patterns = load_patterns(cfg.inputs);
  if (patterns.empty()) throw InputError("no patterns in input");
  std::string names;
  for (const auto& in : cfg.inputs) names += (names.empty() ? "" : ", ") + fs::path(in).filename().string();
  std::string text;
  try {
    text = emit_pass_file(patterns, names);
  } catch (const CodegenError& e) {
    throw InputError(e.what());
  }
  emit(cfg.out_dir, fs::path(cfg.inputs.front()).stem().string() + "_ideal.cpp", text, out);
  return kExitOk;
}

int cmd_gen_tests(const Config& cfg, std::ostream& out, std::ostream& err) {
  auto patterns = load_patterns(cfg.inputs);
  TestSuite suite = emit_test_classes(patterns, cfg.seed);
  for (const auto& s : suite.skipped) {
    err << "skipped " << s.pattern_name << ": " << s.reason << " (unsupported for test generation)\n";
  }
  for (const auto& f : suite.files) {
    if (cfg.out_dir.empty()) out << "// " << f.file_name << "\n";
    emit(cfg.out_dir, f.file_name, f.text, out);
  }
  return kExitOk;
}

int cmd_verify(const Config& cfg, std::ostream& out) {
  auto patterns = load_patterns(cfg.inputs);
  std::ostringstream report;
  bool failed = false;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    const auto& p = patterns[i];
    FuzzOutcome r = semantic_fuzz_check(p, cfg.trials, SplitMix64::stream(cfg.seed, i).next());
    report << p.name() << '\t';
    switch (r.status) {
      case FuzzOutcome::Status::Pass:
        report << "PASS\t" << r.trials_run << " trials\n";
        break;
      case FuzzOutcome::Status::Unsampleable:
        failed = true;
        report << "UNSAMPLEABLE\tno constants satisfying the preconditions after "
               << kMaxRejectionDraws << " draws\n";
        break;
      case FuzzOutcome::Status::Counterexample: {
        failed = true;
        report << "FAIL\t";
        bool first = true;
        for (const auto& [k, v] : r.env) {
          report << (first ? "" : ", ") << k << "=" << v;
          first = false;
        }
        report << "; before=" << r.before_value << " after=" << r.after_value << "\n";
        break;
      }
    }
  }

  const IntWidth w = cfg.width_bits == 64 ? IntWidth::I64 : IntWidth::I32;
  for (std::size_t k = 0; k < cfg.exprs.size(); ++k) {
    const std::string& text = cfg.exprs[k];
    ConcreteArena arena(w);
    ExprPtr ast;
    try {
      ast = parse_expression(text, w);
    } catch (const PatternError& e) {
      throw InputError("--expr '" + text + "': " + e.what());
    }
    const NodeId root = arena.from_ast(*ast);
    report << text << '\t';
    auto applied = apply_first(patterns, arena, root);
    if (!applied) {
      report << "UNCHANGED\n";
      continue;
    }
    const auto atoms = referenced_names(*ast);
    SplitMix64 rng = SplitMix64::stream(cfg.seed, 0x45585052 + k);
    bool same = true;
    for (std::size_t t = 0; t < cfg.trials && same; ++t) {
      Env env;
      for (const auto& a : atoms) env[a] = wrap(static_cast<std::int64_t>(rng.next()), w);
      same = evaluate(arena, root, env) == evaluate(arena, applied->root, env);
    }
    if (!same) failed = true;
    report << (same ? "REWRITTEN\t" : "MISCOMPILED\t") << arena.to_source(applied->root)
           << "\tby " << patterns[applied->pattern_index].name() << "\n";
  }

  emit(cfg.out_dir, "verify_report.tsv", report.str(), out);
  if (!cfg.out_dir.empty()) out << report.str();
  return failed ? kExitFailure : kExitOk;
}

int cmd_shadow(const Config& cfg, std::ostream& out) {
  auto patterns = load_patterns(cfg.inputs);
  ProcessSolver solver(cfg.solver);
  MatrixOptions opts;
  opts.timeout = std::chrono::seconds(cfg.timeout_secs);
  opts.workers = cfg.workers;
  opts.oracle = cfg.oracle;
  opts.oracle_config.depth = cfg.depth;
  auto entries = shadow_matrix(patterns, solver, opts);
  for (const auto& e : entries) {
    if (!e.error.empty()) throw SolverInfraError(e.error);
  }
  const std::string report = format_matrix_report(patterns, entries);
  emit(cfg.out_dir, "shadow_report.tsv", report, out);
  if (!cfg.out_dir.empty()) out << report;

  bool infra = false, disagree = false;
  for (const auto& e : entries) {
    infra |= !e.error.empty();
    disagree |= e.disagreement;
  }
  if (infra) return kExitInfra;
  return disagree ? kExitFailure : kExitOk;
}

int cmd_metrics(const Config& cfg, std::ostream& out) {
  std::ostringstream report;
  for (const auto& path : cfg.inputs) {
    const std::string text = read_file(path);
    ComplexityCount c;
    try {
      c = measure(text, language_for_path(path));
    } catch (const MetricsError& e) {
      throw InputError(path + ": " + e.what());
    }
    report << path << '\t' << c.characters << '\t' << c.identifiers << '\n';
  }
  emit(cfg.out_dir, "metrics.tsv", report.str(), out);
  if (!cfg.out_dir.empty()) out << report.str();
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"pforge: peephole patterns to matchers, tests and shadow reports"};
  app.require_subcommand(1);
  Config cfg;
  cfg.solver = default_solver_path();
  cfg.workers = std::max(1u, std::thread::hardware_concurrency());

  auto add_inputs = [&](CLI::App* sub) {
    sub->add_option("inputs", cfg.inputs, "Pattern files")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", cfg.out_dir, "Output directory (default: stdout)");
  };

  auto* translate = app.add_subcommand("translate", "Emit a C++ pass file from pattern files");
  add_inputs(translate);

  auto* gen = app.add_subcommand("gen-tests", "Emit IR test classes");
  add_inputs(gen);
  gen->add_option("--seed", cfg.seed, "Seed for constant substitution");

  auto* verify = app.add_subcommand("verify", "Fuzz every pattern for semantic equivalence");
  add_inputs(verify);
  verify->add_option("--seed", cfg.seed, "Fuzz seed");
  verify->add_option("--trials", cfg.trials, "Environments per pattern")
      ->check(CLI::PositiveNumber);
  verify->add_option("--expr", cfg.exprs, "Concrete expression to rewrite and check");
  verify->add_option("--width", cfg.width_bits, "Bit width of --expr inputs")
      ->check(CLI::IsMember({32, 64}));

  auto* shadow = app.add_subcommand("shadow", "Compute the pairwise shadow matrix");
  add_inputs(shadow);
  shadow->add_option("--timeout-secs", cfg.timeout_secs, "Solver timeout per pair")
      ->check(CLI::PositiveNumber);
  shadow->add_option("--workers", cfg.workers, "Concurrent solver processes")
      ->check(CLI::PositiveNumber);
  shadow->add_option("--solver", cfg.solver, "Solver executable (env PFORGE_SOLVER)");
  shadow->add_flag("--oracle", cfg.oracle, "Cross-check verdicts by enumeration");
  shadow->add_option("--depth", cfg.depth, "Oracle expression depth bound")
      ->check(CLI::NonNegativeNumber);
  shadow->add_option("--seed", cfg.seed, "Unused; accepted for uniform invocation");

  auto* metrics = app.add_subcommand("metrics", "Count characters and identifiers");
  add_inputs(metrics);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (translate->parsed()) return cmd_translate(cfg, out);
    if (gen->parsed()) return cmd_gen_tests(cfg, out, err);
    if (verify->parsed()) return cmd_verify(cfg, out);
    if (shadow->parsed()) return cmd_shadow(cfg, out);
    if (metrics->parsed()) return cmd_metrics(cfg, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SolverInfraError& e) {
    err << "solver error: " << e.what() << "\n";
    return kExitInfra;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace pforge
