#include <gtest/gtest.h>

#include <fstream>

#include "mbhf/series.hpp"

using namespace mbhf;

namespace {

// reference values from mpmath at 30 digits
const Bindings P{{"a", 0.31}, {"b", 0.43}, {"b'", 0.57}, {"c", 2.11}, {"c'", 1.73}, {"a'", 0.67}};

cplx call(const NamedRegistry& r, const std::string& name, std::vector<std::string> ps,
          std::vector<std::string> xs, const Bindings& point) {
  NamedCall c{name, {}, {}};
  for (auto& p : ps) c.params.push_back(parse_paramlin(p));
  for (auto& x : xs) c.args.push_back(parse_expr(x));
  SeriesOptions o;
  o.tol = 1e-15;
  HornResult h = horn_eval(instantiate(r, c), P, point, o);
  EXPECT_TRUE(h.converged);
  return h.value;
}

}  // namespace

TEST(Pochhammer, PositiveAndNegative) {
  EXPECT_NEAR(pochhammer(0.5, 3).real(), 0.5 * 1.5 * 2.5, 1e-15);
  EXPECT_NEAR(pochhammer(0.5, -2).real(), 1.0 / ((-0.5) * (-1.5)), 1e-15);
  EXPECT_EQ(pochhammer(-2.0, 5).real(), 0.0);
  EXPECT_THROW(pochhammer(2.0, -3), Error);
  try {
    pochhammer(1.0, -1);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PoleInNegativeExtension);
  }
}

TEST(Series, ParsePrint) {
  auto p = parse_pochs("(a)_{m+n}(b)_m(b')_n/(c)_{m+n}");
  ASSERT_EQ(p.size(), 4u);
  EXPECT_EQ(p[0].form, (LinearForm{1, 1, 0}));
  EXPECT_EQ(p[3].side, Side::Den);
  EXPECT_EQ(poch_string(p), "(a)_{m+n}(b)_m(b')_n/(c)_{m+n}");
  EXPECT_EQ(poch_string(parse_pochs("(alpha)_{m-n}/(e)_m")), "(alpha)_{m-n}/(e)_m");
  EXPECT_THROW(parse_pochs("(a)_q"), Error);
  EXPECT_THROW(parse_pochs("(a_m"), Error);
}

TEST(Series, NamedAgainstReference) {
  auto r = NamedRegistry::builtin();
  EXPECT_NEAR(call(r, "2F1", {"a", "b", "c"}, {"x"}, {{"x", -0.3}}).real(), 0.982558812226543015985763844517,
              1e-12);
  EXPECT_NEAR(call(r, "F1", {"13/10", "9/10", "11/10", "27/10"}, {"x", "y"}, {{"x", -0.4}, {"y", -0.3}}).real(),
              0.748914654927226122079181558018, 1e-12);
  EXPECT_NEAR(call(r, "F2", {"a", "b", "b'", "c", "c'"}, {"x", "y"}, {{"x", -0.2}, {"y", 0.15}}).real(),
              1.00350536629707832452992714935, 1e-12);
  EXPECT_NEAR(call(r, "F3", {"a", "a'", "b", "b'", "c"}, {"x", "y"}, {{"x", -0.4}, {"y", 0.3}}).real(),
              1.0389567855238530233142138772, 1e-12);
  EXPECT_NEAR(call(r, "F4", {"a", "b", "c", "c'"}, {"x", "y"}, {{"x", -0.05}, {"y", 0.04}}).real(),
              0.999876724716093767427616645763, 1e-12);
  EXPECT_NEAR(call(r, "H2", {"a", "b", "b'", "a'", "c"}, {"x", "y"}, {{"x", 0.3}, {"y", -0.2}}).real(),
              1.14535368118030891166459704441, 1e-12);
  EXPECT_NEAR(call(r, "H_C", {"a", "b", "b'", "c"}, {"x", "y", "z"}, {{"x", -0.1}, {"y", 0.12}, {"z", -0.08}}).real(),
              0.99052452411408525330895676735, 1e-12);
}

TEST(Series, KampeDeFerietReducesToF1) {
  auto r = NamedRegistry::builtin();
  // F^{1:1;1}_{1:0;0} is F1
  cplx k = call(r, "KdF[1:1;1/1:0;0]", {"a", "b", "b'", "c"}, {"x", "y"}, {{"x", -0.4}, {"y", 0.3}});
  cplx f = call(r, "F1", {"a", "b", "b'", "c"}, {"x", "y"}, {{"x", -0.4}, {"y", 0.3}});
  EXPECT_NEAR(std::abs(k - f), 0.0, 1e-14);
  EXPECT_EQ(r.get("KdF[1:1;1/1:0;0]").slots, (std::vector<std::string>{"a1", "b1", "c1", "al1"}));
  EXPECT_THROW(r.get("KdF"), Error);
}

TEST(Series, TerminatingAndPoles) {
  HornSeries s;
  s.args = {Expr::var("x")};
  s.pochs = parse_pochs("(-3)_m(b)_m/(c)_m");
  auto h = horn_eval(s, P, {{"x", 2.0}});
  EXPECT_TRUE(h.converged);
  // 2F1(-3,b;c;x) polynomial
  double b = 0.43, c = 2.11, x = 2.0, ref = 1 - 3 * b / c * x + 3 * b * (b + 1) / (c * (c + 1)) * x * x -
                                         b * (b + 1) * (b + 2) / (c * (c + 1) * (c + 2)) * x * x * x;
  EXPECT_NEAR(h.value.real(), ref, 1e-13);

  s.pochs = parse_pochs("(b)_m/(-2)_m");
  try {
    horn_eval(s, P, {{"x", 0.1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DenominatorPochPole);
  }
}

TEST(Series, DivergentReportsNotConverged) {
  auto r = NamedRegistry::builtin();
  NamedCall c{"2F1", {parse_paramlin("a"), parse_paramlin("b"), parse_paramlin("c")}, {parse_expr("x")}};
  auto h = horn_eval(instantiate(r, c), P, {{"x", 1.5}});
  EXPECT_FALSE(h.converged);
}

TEST(Series, BlockPrefactorAndBranch) {
  // Pfaff: 2F1(a,b;c;x) = (1-x)^{-a} 2F1(a,c-b;c;x/(x-1))
  auto r = NamedRegistry::builtin();
  SeriesBlock blk;
  blk.prefactor.powers.push_back({parse_expr("1-x"), parse_paramlin("-a")});
  blk.series = instantiate(r, {"2F1", {parse_paramlin("a"), parse_paramlin("c-b"), parse_paramlin("c")},
                               {parse_expr("x/(x-1)")}});
  auto v = block_eval(blk, P, {{"x", -0.3}});
  EXPECT_NEAR(v.value.real(), 0.982558812226543015985763844517, 1e-9);
  EXPECT_TRUE(v.converged);
  try {
    block_eval(blk, P, {{"x", 1.5}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BranchCutViolation);
  }
}

TEST(Series, JsonRoundTrip) {
  HornSeries s;
  s.nindices = 2;
  s.args = {parse_expr("x/(x-1)"), parse_expr("y")};
  s.pochs = parse_pochs("(c-a)_{m+n}(b)_m/(c)_{m+n}");
  s.constant = Rational(3, 2);
  auto back = horn_from_json(to_json(s));
  EXPECT_EQ(poch_string(back.pochs), poch_string(s.pochs));
  EXPECT_EQ(back.constant, s.constant);
  EXPECT_EQ(back.args[0].str(), s.args[0].str());
  json bad = to_json(s);
  bad["schema"] = "horn-series.v0";
  EXPECT_THROW(horn_from_json(bad), Error);
}

TEST(Registry, DuplicateAndValidation) {
  auto r = NamedRegistry::builtin();
  EXPECT_THROW(r.register_named(make_named("F1", {"a"}, 1, "(a)_m")), Error);
  // wrong MB form for a new name fails validation
  NamedSeries bad = make_named("2F1bad", {"a", "b", "c"}, 1, "(a)_m(b)_m/(c)_m");
  bad.mb = make_integral({"-x"}, "G(-z1)G(a+z1)G(b+z1)/G(c+z1)", "G(c)/G(a)");
  bad.validation = ValidationPoint{{{"a", 1.3}, {"b", 1.45}, {"c", 3.1}}, {{"x", -0.3}}};
  try {
    r.register_named(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ValidationFailure);
  }
  NamedSeries good = bad;
  good.name = "2F1copy";
  good.mb = make_integral({"-x"}, "G(-z1)G(a+z1)G(b+z1)/G(c+z1)", "G(c)/G(a)G(b)");
  EXPECT_TRUE(r.register_named(good).validated);
}

TEST(Registry, BuiltinsMatchMellinBarnes) {
  auto r = NamedRegistry::builtin();
  for (auto& [name, e] : r.entries()) {
    if (!e.mb || !e.validation) continue;
    EXPECT_LT(NamedRegistry::validation_deviation(e), 1e-6) << name;
  }
}

TEST(Registry, ShippedFileMatchesBuiltins) {
  std::ifstream f(std::string(MBHF_DATA_DIR) + "/named-series.v1.json");
  ASSERT_TRUE(f.good());
  json doc = json::parse(f);
  auto builtin = NamedRegistry::builtin();
  EXPECT_EQ(doc, registry_to_json(builtin));
}

TEST(Registry, LiteratureFileLoads) {
  std::ifstream f(std::string(MBHF_DATA_DIR) + "/literature-series.v1.json");
  ASSERT_TRUE(f.good());
  auto r = NamedRegistry::builtin();
  load_named_series(r, json::parse(f));
  ASSERT_TRUE(r.contains("H_B"));
  EXPECT_FALSE(r.get("H_B").validated);
}
