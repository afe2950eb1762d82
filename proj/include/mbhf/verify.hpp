#pragma once
#include <algorithm>
#include <atomic>
#include <exception>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "notation.hpp"
#include "series.hpp"

namespace mbhf {

enum class Tier { Explicit, Literature };

inline std::string tier_name(Tier t) { return t == Tier::Explicit ? "explicit" : "literature"; }

inline Tier tier_from_string(const std::string& s) {
  if (s == "explicit") return Tier::Explicit;
  if (s == "literature") return Tier::Literature;
  throw Error(ErrorKind::BadDocument, "unknown tier '" + s + "'");
}

// A series block whose named call is resolved against the registry only when checked.
struct BlockSpec {
  Prefactor prefactor;
  std::optional<HornSeries> series;
  std::optional<NamedCall> call;
};

struct SamplePoint {
  Bindings params, point;
};

struct Identity {
  std::string id, label, note;
  Tier tier = Tier::Explicit;
  enum class LhsKind { Blocks, Mb, Path } lhs_kind = LhsKind::Blocks;
  std::vector<BlockSpec> lhs_blocks;
  std::optional<MBIntegral> lhs_mb;
  std::string lhs_path;
  std::vector<BlockSpec> rhs;
  std::vector<SamplePoint> points;
  double tolerance = 1e-7;
  int max_shells = 0;  // >0 raises the series shell cap for slowly convergent samples
};

struct PointReport {
  cplx lhs, rhs;
  double deviation = 0.0;
  bool lhs_converged = true, rhs_converged = true, pass = false;
};

enum class Status { Pass, Fail, NonConvergent, Unregistered, Error };

inline std::string status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::NonConvergent: return "nonconvergent";
    case Status::Unregistered: return "unregistered";
    case Status::Error: return "error";
  }
  return "?";
}

struct IdentityReport {
  std::string id;
  Tier tier = Tier::Explicit;
  double tolerance = 0.0;
  Status status = Status::Pass;
  std::string message;
  std::vector<PointReport> points;
};

struct VerifyConfig {
  SeriesOptions series;
  QuadOptions quad;
  double tolerance_override = 0.0;  // >0 replaces every identity tolerance
  int threads = 0;
};

// ---------------------------------------------------------------- parsing

inline BlockSpec blockspec_from_json(const json& j) {
  BlockSpec b;
  if (j.contains("prefactor")) b.prefactor = prefactor_from_json(j["prefactor"]);
  if (j.contains("series")) b.series = horn_from_json(j["series"]);
  else if (j.contains("call")) b.call = call_from_json(j["call"]);
  else throw Error(ErrorKind::BadDocument, "block needs 'series' or 'call'");
  return b;
}

inline Identity identity_from_json(const json& j) {
  try {
    Identity i;
    i.id = j.at("id").get<std::string>();
    i.label = j.value("label", "");
    i.note = j.value("note", "");
    i.tier = tier_from_string(j.value("tier", "explicit"));
    const json& l = j.at("lhs");
    if (l.contains("blocks")) {
      for (auto& b : l["blocks"]) i.lhs_blocks.push_back(blockspec_from_json(b));
    } else if (l.contains("call") || l.contains("series")) {
      i.lhs_blocks.push_back(blockspec_from_json(l));
    } else if (l.contains("mb")) {
      i.lhs_kind = Identity::LhsKind::Mb;
      i.lhs_mb = integral_from_json(l["mb"]);
    } else if (l.contains("path")) {
      i.lhs_kind = Identity::LhsKind::Path;
      i.lhs_path = l["path"].get<std::string>();
      parse_path(i.lhs_path);
    } else {
      throw Error(ErrorKind::BadDocument, "lhs needs blocks, call, series, mb or path");
    }
    for (auto& b : j.at("rhs")) i.rhs.push_back(blockspec_from_json(b));
    for (auto& p : j.at("points"))
      i.points.push_back({bindings_from_json(p.at("params")), bindings_from_json(p.at("point"))});
    i.tolerance = j.value("tolerance", 1e-7);
    i.max_shells = j.value("maxShells", 0);
    return i;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadDocument, std::string("identity: ") + e.what());
  }
}

inline std::vector<Identity> corpus_from_json(const json& doc) {
  expect_schema(doc, "identity-corpus.v1");
  std::vector<Identity> out;
  std::set<std::string> seen;
  for (auto& e : doc.at("identities")) {
    out.push_back(identity_from_json(e));
    if (!seen.insert(out.back().id).second) throw Error(ErrorKind::DuplicateName, "identity id " + out.back().id);
  }
  return out;
}

// ---------------------------------------------------------------- checking

inline SeriesBlock resolve(const BlockSpec& b, const NamedRegistry& reg) {
  SeriesBlock s;
  s.prefactor = b.prefactor;
  if (b.series) {
    s.series = *b.series;
  } else {
    if (!reg.contains(b.call->name))
      throw Error(ErrorKind::UnregisteredDefinition, "no registry definition for " + b.call->name);
    s.series = instantiate(reg, *b.call);
  }
  return s;
}

inline std::vector<std::string> missing_definitions(const Identity& i, const NamedRegistry& reg) {
  std::vector<std::string> out;
  auto scan = [&](const std::vector<BlockSpec>& v) {
    for (auto& b : v)
      if (b.call && !reg.contains(b.call->name) &&
          std::find(out.begin(), out.end(), b.call->name) == out.end())
        out.push_back(b.call->name);
  };
  scan(i.lhs_blocks);
  scan(i.rhs);
  return out;
}

inline HornResult sum_blocks(const std::vector<SeriesBlock>& bs, const SamplePoint& sp, const SeriesOptions& o) {
  HornResult total;
  total.value = 0.0;
  total.converged = true;
  for (auto& b : bs) {
    HornResult r = block_eval(b, sp.params, sp.point, o);
    total.value += r.value;
    total.converged = total.converged && r.converged;
    total.tail_estimate += r.tail_estimate;
    total.shells = std::max(total.shells, r.shells);
  }
  return total;
}

inline IdentityReport check_identity(const Identity& i, const NamedRegistry& reg, const VerifyConfig& cfg = {}) {
  IdentityReport rep;
  rep.id = i.id;
  rep.tier = i.tier;
  rep.tolerance = cfg.tolerance_override > 0 ? cfg.tolerance_override : i.tolerance;
  auto missing = missing_definitions(i, reg);
  if (!missing.empty()) {
    rep.status = Status::Unregistered;
    rep.message = "UnregisteredDefinition:";
    for (auto& m : missing) rep.message += " " + m;
    return rep;
  }
  try {
    std::vector<SeriesBlock> lhs, rhs;
    for (auto& b : i.lhs_blocks) lhs.push_back(resolve(b, reg));
    for (auto& b : i.rhs) rhs.push_back(resolve(b, reg));
    std::optional<MBIntegral> mb = i.lhs_mb;
    if (i.lhs_kind == Identity::LhsKind::Path) mb = apply_path(i.lhs_path);
    QuadOptions qo = cfg.quad;
    qo.auto_h = true;
    SeriesOptions so = cfg.series;
    if (i.max_shells > 0) so.maxN = std::max(so.maxN, i.max_shells);
    bool all_pass = true, all_conv = true;
    for (auto& sp : i.points) {
      PointReport pr;
      if (mb) {
        pr.lhs = quad_auto(*mb, sp.params, sp.point, qo).value;
      } else {
        HornResult l = sum_blocks(lhs, sp, so);
        pr.lhs = l.value;
        pr.lhs_converged = l.converged;
      }
      HornResult r = sum_blocks(rhs, sp, so);
      pr.rhs = r.value;
      pr.rhs_converged = r.converged;
      double scale = std::max(std::abs(pr.lhs), 1e-300);
      pr.deviation = std::abs(pr.lhs - pr.rhs) / scale;
      pr.pass = pr.lhs_converged && pr.rhs_converged && pr.deviation <= rep.tolerance;
      all_pass = all_pass && pr.pass;
      all_conv = all_conv && pr.lhs_converged && pr.rhs_converged;
      rep.points.push_back(pr);
    }
    rep.status = all_pass ? Status::Pass : (all_conv ? Status::Fail : Status::NonConvergent);
  } catch (const Error& e) {
    rep.status = e.kind() == ErrorKind::UnregisteredDefinition ? Status::Unregistered : Status::Error;
    rep.message = e.what();
  }
  return rep;
}

struct CorpusFilter {
  std::optional<Tier> tier;
  std::vector<std::string> ids;
  bool matches(const Identity& i) const {
    if (tier && i.tier != *tier) return false;
    return ids.empty() || std::find(ids.begin(), ids.end(), i.id) != ids.end();
  }
};

struct CorpusReport {
  std::vector<IdentityReport> identities;
  int count(Status s) const {
    return (int)std::count_if(identities.begin(), identities.end(),
                              [&](const IdentityReport& r) { return r.status == s; });
  }
  bool all_pass() const { return count(Status::Pass) == (int)identities.size(); }
};

// Identities run concurrently; the report keeps corpus order.
inline CorpusReport run_corpus(const std::vector<Identity>& corpus, const NamedRegistry& reg,
                               const CorpusFilter& filter = {}, VerifyConfig cfg = {}) {
  std::vector<const Identity*> sel;
  for (auto& i : corpus)
    if (filter.matches(i)) sel.push_back(&i);
  CorpusReport out;
  out.identities.resize(sel.size());
  int nthreads = std::max(1, std::min<int>(resolve_threads(cfg.threads), (int)sel.size()));
  if (nthreads > 1) cfg.quad.threads = 1;
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t k; (k = next++) < sel.size();) out.identities[k] = check_identity(*sel[k], reg, cfg);
  };
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nthreads; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return out;
}

struct TransformReport {
  std::string path;
  cplx original, transformed;
  double deviation = 0.0, tolerance = 0.0, error_estimate = 0.0;
  bool pass = false;
};

// Quadrature of the seed against quadrature of the transformed integral at one point.
inline TransformReport check_transform_equivalence(const std::string& path, const Bindings& params,
                                                   const Bindings& point, const QuadOptions& qo = {}) {
  TransformPath tp = parse_path(path);
  MBIntegral seed = apply_path(TransformPath{tp.seed, {}});
  MBIntegral out = apply_path(tp);
  TransformReport r;
  r.path = path;
  QuadResult a = quad_auto(seed, params, point, qo), b = quad_auto(out, params, point, qo);
  r.original = a.value;
  r.transformed = b.value;
  r.error_estimate = a.error_estimate + b.error_estimate;
  r.tolerance = seed.nvars >= 3 ? 1e-3 : 1e-4;
  r.deviation = std::abs(a.value - b.value) / std::max(std::abs(a.value), 1e-300);
  r.pass = r.deviation <= r.tolerance;
  return r;
}

// ---------------------------------------------------------------- display fixtures

struct DisplayFixture {
  std::string name, path;
  MBIntegral integral;
};

inline DisplayFixture fixture_from_json(const json& j) {
  expect_schema(j, "display-fixture.v1");
  try {
    DisplayFixture f;
    f.name = j.at("name").get<std::string>();
    f.path = j.at("path").get<std::string>();
    std::vector<std::pair<std::string, std::string>> powers;
    for (auto& p : j.value("powers", json::array())) powers.push_back({p.at(0), p.at(1)});
    f.integral = make_integral(j.at("kernels").get<std::vector<std::string>>(), j.at("gammas").get<std::string>(),
                               j.value("gammaRatios", ""), powers);
    return f;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadDocument, std::string("fixture: ") + e.what());
  }
}

struct FixtureReport {
  std::string name, path;
  bool gammas = false, ratios = false, kernels = false, powers = false;
  bool pass() const { return gammas && ratios && kernels && powers; }
  std::string got, want;
};

// Gamma lists, Gamma ratios and constants must match byte for byte in canonical JSON; kernels and
// power bases may be written differently and are compared as expressions.
inline FixtureReport check_fixture(const DisplayFixture& f) {
  FixtureReport r;
  r.name = f.name;
  r.path = f.path;
  MBIntegral got = canonicalize(apply_path(f.path)), want = canonicalize(f.integral);
  json jg = to_json(got), jw = to_json(want);
  r.gammas = jg["nvars"] == jw["nvars"] && jg["gammas"].dump() == jw["gammas"].dump();
  r.ratios = jg["prefactor"]["gammaRatios"].dump() == jw["prefactor"]["gammaRatios"].dump() &&
             jg["prefactor"]["constant"] == jw["prefactor"]["constant"];
  r.kernels = got.nvars == want.nvars;
  for (int i = 0; r.kernels && i < got.nvars; ++i) r.kernels = expr_equal(got.kernels[i], want.kernels[i]);
  r.powers = same_power_product(got.prefactor.powers, want.prefactor.powers);
  r.got = integral_string(got);
  r.want = integral_string(want);
  return r;
}

// ---------------------------------------------------------------- reports

inline json cplx_json(cplx v) { return json::array({v.real(), v.imag()}); }

inline json to_json(const CorpusReport& r) {
  json j;
  j["schema"] = "verify-report.v1";
  j["summary"] = {{"total", r.identities.size()},
                  {"pass", r.count(Status::Pass)},
                  {"fail", r.count(Status::Fail)},
                  {"nonconvergent", r.count(Status::NonConvergent)},
                  {"unregistered", r.count(Status::Unregistered)},
                  {"error", r.count(Status::Error)}};
  j["identities"] = json::array();
  for (auto& i : r.identities) {
    json e;
    e["id"] = i.id;
    e["tier"] = tier_name(i.tier);
    e["status"] = status_name(i.status);
    e["tolerance"] = i.tolerance;
    if (!i.message.empty()) e["message"] = i.message;
    e["points"] = json::array();
    for (auto& p : i.points)
      e["points"].push_back({{"lhs", cplx_json(p.lhs)},
                             {"rhs", cplx_json(p.rhs)},
                             {"deviation", p.deviation},
                             {"lhsConverged", p.lhs_converged},
                             {"rhsConverged", p.rhs_converged},
                             {"pass", p.pass}});
    j["identities"].push_back(e);
  }
  return j;
}

}  // namespace mbhf
