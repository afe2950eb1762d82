#pragma once
#include <json.hpp>
#include <string>

#include "mb_model.hpp"

namespace mbhf {

using json = nlohmann::ordered_json;

inline void expect_schema(const json& j, const std::string& schema) {
  if (j.contains("schema") && j["schema"] != schema)
    throw Error(ErrorKind::BadDocument, "expected schema " + schema + ", got " + j["schema"].dump());
}

inline ParamLin paramlin_from_json(const json& j) {
  if (j.is_string()) return parse_paramlin(j.get<std::string>());
  if (j.is_number_integer()) return ParamLin(Rational(j.get<int64_t>()));
  if (!j.is_object()) throw Error(ErrorKind::BadDocument, "bad parameter combination: " + j.dump());
  ParamLin p;
  for (auto& [k, v] : j.items()) {
    Rational c = v.is_string() ? Rational::parse(v.get<std::string>()) : Rational(v.get<int64_t>());
    if (k == "1") p.constant = c;
    else if (!c.is_zero()) p.coeffs[k] = c;
  }
  return p;
}

inline Rational rational_from_json(const json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<int64_t>());
  throw Error(ErrorKind::BadDocument, "bad rational: " + j.dump());
}

inline Side side_from_json(const json& j) {
  std::string s = j.get<std::string>();
  if (s == "num") return Side::Num;
  if (s == "den") return Side::Den;
  throw Error(ErrorKind::BadDocument, "side must be num or den, got " + s);
}

inline json to_json(const MBIntegral& m) {
  json j;
  j["schema"] = "mb-integral.v1";
  j["nvars"] = m.nvars;
  j["kernels"] = json::array();
  for (auto& k : m.kernels) j["kernels"].push_back(k.str());
  j["gammas"] = json::array();
  for (auto& g : m.gammas) {
    json z = json::object();
    for (auto& [i, c] : g.arg.z) z[std::to_string(i)] = c;
    j["gammas"].push_back({{"shift", g.arg.shift.str()}, {"zcoeffs", z}, {"side", side_name(g.side)}});
  }
  json pf;
  pf["powers"] = json::array();
  for (auto& p : m.prefactor.powers) pf["powers"].push_back({{"base", p.base.str()}, {"exponent", p.exponent.str()}});
  pf["gammaRatios"] = json::array();
  for (auto& r : m.prefactor.gamma_ratios) pf["gammaRatios"].push_back({{"arg", r.arg.str()}, {"side", side_name(r.side)}});
  pf["constant"] = m.prefactor.constant.str();
  j["prefactor"] = pf;
  return j;
}

inline MBIntegral integral_from_json(const json& j) {
  try {
    expect_schema(j, "mb-integral.v1");
    MBIntegral m;
    m.nvars = j.at("nvars").get<int>();
    if (m.nvars < 0 || m.nvars > 9) throw Error(ErrorKind::BadDocument, "nvars out of range");
    for (auto& k : j.at("kernels")) m.kernels.push_back(parse_expr(k.get<std::string>()));
    if ((int)m.kernels.size() != m.nvars) throw Error(ErrorKind::BadDocument, "kernel count differs from nvars");
    for (auto& g : j.at("gammas")) {
      GammaFactor f;
      f.arg.shift = paramlin_from_json(g.at("shift"));
      for (auto& [k, v] : g.at("zcoeffs").items()) {
        int idx = std::stoi(k), c = v.get<int>();
        if (idx < 1 || idx > m.nvars) throw Error(ErrorKind::BadDocument, "zcoeff index " + k + " out of range");
        if (c != 0) f.arg.z[idx] = c;
      }
      f.side = side_from_json(g.at("side"));
      m.gammas.push_back(f);
    }
    if (j.contains("prefactor")) {
      const json& pf = j["prefactor"];
      if (pf.contains("powers"))
        for (auto& p : pf["powers"])
          m.prefactor.powers.push_back({parse_expr(p.at("base").get<std::string>()), paramlin_from_json(p.at("exponent"))});
      if (pf.contains("gammaRatios"))
        for (auto& r : pf["gammaRatios"])
          m.prefactor.gamma_ratios.push_back({paramlin_from_json(r.at("arg")), side_from_json(r.at("side"))});
      if (pf.contains("constant")) m.prefactor.constant = rational_from_json(pf["constant"]);
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadDocument, std::string("mb-integral.v1: ") + e.what());
  }
}

}  // namespace mbhf
