// Emission of HotSpot-style Ideal() matcher snippets.
//
// For pAdd6 the snippet reads
//
//   {
//     // pAdd6: (a - b) + (c - a) => c - b
//     Node* _P_in1 = in(1);
//     Node* _P_in11 = _P_in1 != NULL && 1 < _P_in1->req() ? _P_in1->in(1) : NULL;
//     ...
//     if (_P_in1->Opcode() == Op_SubL
//         && _P_in2->Opcode() == Op_SubL
//         && _P_in11 == _P_in22) {
//       return new SubLNode(_P_in21, _P_in12);
//     }
//   }

#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pforge/east.hpp"

namespace pforge {

class CodegenError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EmittedSnippet {
  std::string pattern_name;
  std::string text;
  std::vector<std::string> opcode_tokens;  // e.g. "Op_SubL", in first-use order
};

// "AddI", "URShiftL", ...
std::string node_class_stem(BinOp op, IntWidth w);

/// Throws CodegenError when the before root is not an operator.
EmittedSnippet emit_matcher_snippet(const CompiledPattern& p);

/// Snippets grouped into one Ideal() body per (root operator, width), groups
/// in first-seen order, patterns in input order within a group.
std::string emit_pass_file(std::span<const CompiledPattern> patterns,
                           std::string_view source_name = {});

}  // namespace pforge
