#include <gtest/gtest.h>

#include <fstream>

#include "mbhf/mbhf.hpp"

using namespace mbhf;

namespace {

json pfaff(const std::string& id, const std::string& rhs_b) {
  return json::parse(R"j({
    "id": ")j" + id + R"j(",
    "lhs": {"call": ["2F1", ["a", "b", "c"], ["z"]]},
    "rhs": [{"prefactor": {"powers": [["1-z", "-a"]]},
             "call": ["2F1", ["a", ")j" + rhs_b + R"j(", "c"], ["z/(z-1)"]]}],
    "points": [{"params": {"a": 0.31, "b": 0.43, "c": 2.11}, "point": {"z": -0.3}},
               {"params": {"a": 0.31, "b": 0.43, "c": 2.11}, "point": {"z": 0.4}}],
    "tolerance": 1e-10
  })j");
}

json corpus(std::vector<json> ids) {
  return {{"schema", "identity-corpus.v1"}, {"identities", ids}};
}

json read(const std::string& rel) {
  std::ifstream f(std::string(MBHF_DATA_DIR) + "/" + rel);
  return json::parse(f);
}

}  // namespace

TEST(Corpus, PfaffPassesAndMisprintFails) {
  auto c = corpus_from_json(corpus({pfaff("good", "c-b"), pfaff("bad", "c+b")}));
  auto r = run_corpus(c, NamedRegistry::builtin(), {});
  ASSERT_EQ(r.identities.size(), 2u);
  EXPECT_EQ(r.identities[0].status, Status::Pass);
  EXPECT_LT(r.identities[0].points[1].deviation, 1e-9);
  EXPECT_EQ(r.identities[1].status, Status::Fail);
}

TEST(Corpus, DuplicateIdAndBadLhs) {
  EXPECT_THROW(corpus_from_json(corpus({pfaff("x", "c-b"), pfaff("x", "c-b")})), Error);
  json j = pfaff("x", "c-b");
  j["lhs"] = json::object({{"what", 1}});
  try {
    identity_from_json(j);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadDocument);
  }
}

TEST(Corpus, UnknownFunctionIsUnregistered) {
  json j = pfaff("u", "c-b");
  j["rhs"][0]["call"][0] = "Qx";
  auto r = check_identity(identity_from_json(j), NamedRegistry::builtin());
  EXPECT_EQ(r.status, Status::Unregistered);
}

TEST(Corpus, FilterAndShellCap) {
  json lit = pfaff("lit", "c-b");
  lit["tier"] = "literature";
  lit["maxShells"] = 400;
  auto c = corpus_from_json(corpus({pfaff("e", "c-b"), lit}));
  EXPECT_EQ(c[1].max_shells, 400);
  EXPECT_EQ(c[1].tier, Tier::Literature);
  CorpusFilter f;
  f.tier = Tier::Literature;
  EXPECT_EQ(run_corpus(c, NamedRegistry::builtin(), f).identities.size(), 1u);
  f = {};
  f.ids = {"nope"};
  EXPECT_TRUE(run_corpus(c, NamedRegistry::builtin(), f).identities.empty());
}

TEST(Corpus, ShippedFileParses) {
  auto c = corpus_from_json(read("identity-corpus.v1.json"));
  int explicit_count = 0;
  for (auto& i : c) {
    explicit_count += i.tier == Tier::Explicit;
    EXPECT_GE(i.points.size(), 3u) << i.id;
  }
  EXPECT_GE(explicit_count, 20);
}

TEST(Fixture, ShippedDisplayMatchesAndEditIsCaught) {
  json j = read("fixtures/F1-F2-representation.json");
  EXPECT_TRUE(check_fixture(fixture_from_json(j)).pass());
  j["gammaRatios"] = "G(c)/G(a)G(b)";
  auto r = check_fixture(fixture_from_json(j));
  EXPECT_FALSE(r.ratios);
  EXPECT_TRUE(r.kernels);
}

TEST(Transform, EulerPathKeepsValue) {
  QuadOptions qo;
  qo.auto_h = true;
  auto r = check_transform_equivalence("F_1-2aE", {{"a", 0.61}, {"b", 0.83}, {"b'", 0.97}, {"c", 2.37}},
                                       {{"x", cplx(-0.3, 0.3)}, {"y", cplx(-0.1, 0.2)}}, qo);
  EXPECT_TRUE(r.pass) << r.deviation;
}

TEST(DecayMargin, GaussAndAppellF4) {
  auto g = find_seed("2F1").integral;
  Bindings p = {{"a", 0.5}, {"b", 0.5}, {"c", 2.0}};
  EXPECT_NEAR(decay_margin(g, p, {{"z", -0.3}}), M_PI, 1e-9);
  EXPECT_NEAR(decay_margin(g, p, {{"z", cplx(0.3, 1e-9)}}), 0.0, 1e-6);
  auto f4 = find_seed("F4").integral;
  Bindings q = {{"a", 0.5}, {"b", 0.5}, {"c", 2.0}, {"c'", 2.0}};
  // no exponential decay along z1 = -z2, so only a common argument keeps it bounded
  EXPECT_NEAR(decay_margin(f4, q, {{"x", -0.1}, {"y", -0.2}}), 0.0, 1e-9);
  EXPECT_LT(decay_margin(f4, q, {{"x", cplx(-0.1, 0.1)}, {"y", -0.2}}), -0.1);
}
