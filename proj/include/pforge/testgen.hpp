// IR-shape test generation in the ir_framework annotation style:
//
//   @Test
//   @IR(failOn = {IRNode.ADD})
//   @IR(counts = {IRNode.SUB, "1"})
//   // Checks (a - b) + (c - a) => (c - b)
//   public long testpAdd6(long a, long b, long c) {
//     return (a - b) + (c - a);
//   }

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pforge/east.hpp"

namespace pforge {

class TestgenError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ADD, SUB, MUL, AND, OR, XOR, LSHIFT, RSHIFT, URSHIFT
std::string_view ir_token(BinOp op);

struct IrAnnotation {
  std::vector<BinOp> fail_on;
  std::vector<std::pair<BinOp, int>> counts;
};

/// Throws TestgenError for patterns with preconditions.
IrAnnotation derive_ir_annotations(const CompiledPattern& p);

struct IrTest {
  std::string pattern_name;
  std::string method_name;
  std::string return_expr;  // before with constants substituted
  std::map<std::string, std::int64_t> constants;
  std::string text;         // unindented method with annotations
};

/// Constant params are replaced by draws from SplitMix64::stream(seed, h)
/// where h is the FNV-1a hash of the pattern name, in param order.
IrTest emit_ir_test(const CompiledPattern& p, std::uint64_t seed);

struct TestClassFile {
  std::string file_name;   // e.g. TestAddNode.java
  std::string class_name;
  std::string text;
};

struct SkippedPattern {
  std::string pattern_name;
  std::string reason;
};

struct TestSuite {
  std::vector<TestClassFile> files;  // one per before-root operator, first-seen order
  std::vector<SkippedPattern> skipped;
};

TestSuite emit_test_classes(std::span<const CompiledPattern> patterns, std::uint64_t seed);

}  // namespace pforge
