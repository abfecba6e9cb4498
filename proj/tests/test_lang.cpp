#include <gtest/gtest.h>

#include "pforge/lang.hpp"
#include "test_support.hpp"

using namespace pforge;
using pforge::testing::read_data;

namespace {

std::string wrap_pattern(const std::string& params, const std::string& body) {
  return "@Pattern\npublic void pT(" + params + ") {\n" + body + "\n}\n";
}

std::string error_of(const std::string& src) {
  try {
    parse_pattern_file(src);
  } catch (const PatternError& e) {
    return e.message();
  }
  return "";
}

}  // namespace

TEST(Parse, PAdd6Long) {
  auto ps = parse_pattern_file(read_data("pAdd6_long.pat"));
  ASSERT_EQ(ps.size(), 1u);
  const Pattern& p = ps[0];
  EXPECT_EQ(p.name, "pAdd6");
  EXPECT_EQ(p.width, IntWidth::I64);
  ASSERT_EQ(p.params.size(), 3u);
  for (const auto& prm : p.params) {
    EXPECT_EQ(prm.kind, ParamKind::Free);
    EXPECT_EQ(prm.width, IntWidth::I64);
  }
  EXPECT_EQ(to_source(*p.before), "(a - b) + (c - a)");
  EXPECT_EQ(to_source(*p.after), "c - b");
  EXPECT_TRUE(p.preconds.empty());
}

TEST(Parse, ConstantParam1202) {
  auto ps = parse_pattern_file(read_data("corpus.pat"));
  const Pattern* p = nullptr;
  for (const auto& q : ps) {
    if (q.name == "pNewAddAddSub1202") p = &q;
  }
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->width, IntWidth::I32);
  EXPECT_EQ(p->find_param("x")->kind, ParamKind::Free);
  EXPECT_EQ(p->find_param("c")->kind, ParamKind::Constant);
  EXPECT_EQ(to_source(*p->before), "(x ^ -1) + c");
  EXPECT_EQ(to_source(*p->after), "(c - 1) - x");
}

TEST(Parse, CorpusInFileOrder) {
  auto ps = parse_pattern_file(read_data("corpus.pat"));
  std::vector<std::string> names;
  for (const auto& p : ps) names.push_back(p.name);
  EXPECT_EQ(names, (std::vector<std::string>{
                       "pNewSubAddSub1574", "pNewAddAddSub1156", "pNewAddAddSub1202",
                       "pNewXPlus_ConMinusY_", "pNewXPlus_ConMinusY_Sym", "pNewSubAddSub1564",
                       "pNewSub_XOrY_Minus_XXorY_", "pAdd2", "pAdd5", "pAdd6"}));
  for (const auto& p : ps) EXPECT_TRUE(validate_pattern(p).empty()) << p.name;
}

TEST(Parse, PreconditionFromEnclosingIf) {
  auto ps = parse_pattern_file(read_data("negate_precond.pat"));
  ASSERT_EQ(ps.size(), 1u);
  ASSERT_EQ(ps[0].preconds.size(), 1u);
  EXPECT_EQ(to_source(*ps[0].preconds[0]), "c != 0");
}

TEST(Parse, NestedIfsConjoin) {
  auto ps = parse_pattern_file(wrap_pattern(
      "int x, @Constant int c, @Constant int d",
      "before((x + c) + d); if (c > 0) { if (d > 0) { after(x + (c + d)); } }"));
  ASSERT_EQ(ps[0].preconds.size(), 2u);
  EXPECT_EQ(to_source(*ps[0].preconds[0]), "c > 0");
  EXPECT_EQ(to_source(*ps[0].preconds[1]), "d > 0");
}

TEST(Parse, Precedence) {
  auto e = parse_expression("a | b ^ c & d << 1 + e * f", IntWidth::I32);
  EXPECT_EQ(to_source(*e), "a | (b ^ (c & (d << (1 + (e * f)))))");
  auto l = parse_expression("a - b - c", IntWidth::I32);
  EXPECT_EQ(to_source(*l), "(a - b) - c");
  auto s = parse_expression("a >> b >>> c << d", IntWidth::I32);
  EXPECT_EQ(to_source(*s), "((a >> b) >>> c) << d");
  auto p = parse_expression("(a | b) * c", IntWidth::I32);
  EXPECT_EQ(to_source(*p), "(a | b) * c");
}

TEST(Parse, LiteralsAndWidthRange) {
  EXPECT_EQ(to_source(*parse_expression("x ^ -1", IntWidth::I32)), "x ^ -1");
  EXPECT_EQ(to_source(*parse_expression("-2147483648", IntWidth::I32)), "-2147483648");
  EXPECT_EQ(to_source(*parse_expression("0x10", IntWidth::I32)), "16");
  EXPECT_THROW(parse_expression("2147483648", IntWidth::I32), PatternError);
  EXPECT_NO_THROW(parse_expression("2147483648L", IntWidth::I64));
}

TEST(ParseErrors, MissingAfter) {
  EXPECT_EQ(error_of(wrap_pattern("int a", "before(a + a);")), "missing AfterStmt");
}

TEST(ParseErrors, MissingBefore) {
  EXPECT_EQ(error_of(wrap_pattern("int a", "after(a);")), "missing BeforeStmt");
}

TEST(ParseErrors, SyntaxErrorHasLocation) {
  try {
    parse_pattern_file(wrap_pattern("int a", "before(a + );\n after(a);"));
    FAIL();
  } catch (const PatternError& e) {
    EXPECT_EQ(e.loc().line, 3);
    EXPECT_GT(e.loc().column, 1);
    EXPECT_NE(std::string(e.what()).find("3:"), std::string::npos);
  }
}

TEST(ParseErrors, DuplicateParam) {
  EXPECT_EQ(error_of(wrap_pattern("int a, int a", "before(a + a); after(a << 1);")),
            "duplicate parameter name 'a'");
}

TEST(ParseErrors, UndeclaredVariable) {
  EXPECT_EQ(error_of(wrap_pattern("int a", "before(a + b); after(a);")),
            "undeclared variable 'b'");
}

TEST(ParseErrors, AfterBeforeBefore) {
  EXPECT_NE(error_of(wrap_pattern("int a", "after(a); before(a + 0);")).find("AfterStmt must"),
            std::string::npos);
}

TEST(ParseErrors, AfterInsideIfAfterBeforeIsFine) {
  EXPECT_EQ(error_of(wrap_pattern("int a, @Constant int c",
                                  "before(a + c); if (c == 0) { after(a); }")),
            "");
}

TEST(ParseErrors, UnsupportedConstructs) {
  EXPECT_NE(error_of(wrap_pattern("int a", "before(-a + a); after(0);")).find("unary minus"),
            std::string::npos);
  EXPECT_NE(error_of(wrap_pattern("int a", "before(~a); after(a);")).find("unsupported"),
            std::string::npos);
  EXPECT_NE(error_of(wrap_pattern("int a", "before(f(a)); after(a);")).find("method call"),
            std::string::npos);
  EXPECT_NE(error_of(wrap_pattern("int a", "before(a / 2); after(a);")).find("unsupported operator"),
            std::string::npos);
  EXPECT_NE(error_of(wrap_pattern("int a", "a = a; before(a); after(a);")).find("assignment"),
            std::string::npos);
}

TEST(ParseErrors, MixedWidths) {
  EXPECT_NE(error_of(wrap_pattern("int a, long b", "before(a + b); after(b + a);")).find("mixed"),
            std::string::npos);
}

TEST(Validate, ConstantPreconditionOk) {
  auto ps = parse_pattern_file(read_data("negate_precond.pat"));
  EXPECT_TRUE(validate_pattern(ps[0]).empty());
}

TEST(Validate, FreeVariablePreconditionRejected) {
  // Unary minus on a shift is not in the grammar, so the guard is spelled 0 - (...).
  const std::string src = wrap_pattern(
      "int x, int y, @Constant int C0, @Constant int C1",
      "before((x << C0) + (y << C1)); if (C0 < 5 && -5 < C1 && C1 < 0 && x >= 0 - (y << C0)) "
      "{ after((x + y) << C0); }");
  EXPECT_NE(error_of(src).find("precondition over free variables unsupported"),
            std::string::npos);
}

TEST(Validate, CallInPreconditionRejected) {
  const std::string src = wrap_pattern(
      "int x, @Constant int c0, @Constant int c1",
      "before(c0 - (x + c1)); if (Lib.okToConvert(x + c1, c0)) { after((c0 - c1) - x); }");
  EXPECT_NE(error_of(src).find("precondition contains a call expression"), std::string::npos);
}

TEST(Validate, DiagnosticsOnHandBuiltPattern) {
  Pattern p;
  p.name = "bad";
  p.params = {{"a", IntWidth::I32, ParamKind::Free}};
  p.before = Expr::binary(BinOp::Add, Expr::var("a"), Expr::var("z"));
  p.after = Expr::var("a");
  auto d = validate_pattern(p);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].message, "undeclared variable 'z'");
}

// Round trip over every fixture: print, reparse, compare structurally.
TEST(Properties, RoundTrip) {
  for (const char* file : {"corpus.pat", "pAdd6_long.pat", "pAdd_family.pat",
                           "negate_precond.pat"}) {
    for (const auto& p : parse_pattern_file(read_data(file))) {
      const std::string printed = to_source(p);
      auto again = parse_pattern_file(printed);
      ASSERT_EQ(again.size(), 1u) << printed;
      EXPECT_TRUE(structurally_equal(p, again[0])) << printed;
      EXPECT_EQ(to_source(again[0]), printed);
    }
  }
}

TEST(Properties, Deterministic) {
  const std::string src = read_data("corpus.pat");
  auto a = parse_pattern_file(src);
  auto b = parse_pattern_file(src);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_TRUE(structurally_equal(a[i], b[i]));
    EXPECT_EQ(to_source(a[i]), to_source(b[i]));
  }
}
