#pragma once
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mb_json.hpp"
#include "rules.hpp"

namespace mbhf {

struct TransformPath {
  std::string seed;  // as written, e.g. "F_1"
  std::vector<TransformStep> steps;
  friend bool operator==(const TransformPath& a, const TransformPath& b) {
    return a.seed == b.seed && a.steps == b.steps;
  }
};

// ---------------------------------------------------------------- seeds

// One element of a seed's symmetry group: z_k -> z_{zperm[k-1]}, parameters and point
// variables renamed along.
struct Symmetry {
  std::vector<int> zperm;
  std::map<std::string, std::string> params, vars;
};

struct Seed {
  std::string name;
  MBIntegral integral;  // factors in the printed order of the representation
  std::vector<Symmetry> symmetries;  // includes the identity
};

inline std::string seed_key(const std::string& name) {
  std::string k;
  for (char c : name)
    if (c != '_') k += (char)std::toupper((unsigned char)c);
  return k;
}

inline Symmetry identity_symmetry(int n) {
  Symmetry s;
  for (int i = 1; i <= n; ++i) s.zperm.push_back(i);
  return s;
}

inline std::vector<Symmetry> swap_group(std::map<std::string, std::string> params, bool swap_z) {
  Symmetry id = identity_symmetry(swap_z ? 2 : 1), sw = id;
  if (swap_z) {
    sw.zperm = {2, 1};
    sw.vars = {{"x", "y"}, {"y", "x"}};
  }
  for (auto [a, b] : std::map<std::string, std::string>(params)) params[b] = a;
  sw.params = params;
  return {id, sw};
}

// S3 acting on H_C: permute z indices; a, b, c follow the index pairs {1,2}, {2,3}, {3,1}.
inline std::vector<Symmetry> hc_group() {
  std::vector<Symmetry> g;
  std::vector<int> p = {1, 2, 3};
  const char* var = "xyz";
  auto pair_param = [](int i, int j) {
    std::set<int> s = {i, j};
    if (s == std::set<int>{1, 2}) return std::string("a");
    if (s == std::set<int>{2, 3}) return std::string("b");
    return std::string("c");
  };
  do {
    Symmetry s;
    s.zperm = p;
    for (int k = 0; k < 3; ++k) s.vars[std::string(1, var[k])] = std::string(1, var[p[k] - 1]);
    for (auto [i, j] : std::vector<std::pair<int, int>>{{1, 2}, {2, 3}, {3, 1}})
      s.params[pair_param(i, j)] = pair_param(p[i - 1], p[j - 1]);
    g.push_back(s);
  } while (std::next_permutation(p.begin(), p.end()));
  return g;
}

inline const std::map<std::string, Seed>& seed_registry() {
  static const std::map<std::string, Seed> reg = [] {
    std::map<std::string, Seed> r;
    auto add = [&](const std::string& name, MBIntegral m, std::vector<Symmetry> sym) {
      r[seed_key(name)] = Seed{name, std::move(m), std::move(sym)};
    };
    add("2F1", make_integral({"-z"}, "G(-z1)G(a+z1)G(b+z1)/G(c+z1)", "G(c)/G(a)G(b)"),
        swap_group({{"a", "b"}}, false));
    add("F1",
        make_integral({"-x", "-y"}, "G(-z1)G(-z2)G(a+z1+z2)G(b+z1)G(b'+z2)/G(c+z1+z2)", "G(c)/G(a)G(b)G(b')"),
        swap_group({{"b", "b'"}}, true));
    add("F2",
        make_integral({"-x", "-y"}, "G(-z1)G(-z2)G(a+z1+z2)G(b+z1)G(b'+z2)/G(c+z1)G(c'+z2)",
                      "G(c)G(c')/G(a)G(b)G(b')"),
        swap_group({{"b", "b'"}, {"c", "c'"}}, true));
    add("F3",
        make_integral({"-x", "-y"}, "G(-z1)G(-z2)G(a+z1)G(a'+z2)G(b+z1)G(b'+z2)/G(c+z1+z2)",
                      "G(c)/G(a)G(a')G(b)G(b')"),
        swap_group({{"a", "a'"}, {"b", "b'"}}, true));
    add("F4",
        make_integral({"-x", "-y"}, "G(-z1)G(-z2)G(a+z1+z2)G(b+z1+z2)/G(c+z1)G(c'+z2)", "G(c)G(c')/G(a)G(b)"),
        swap_group({{"c", "c'"}}, true));
    add("H_C",
        make_integral({"-x", "-y", "-z"}, "G(-z1)G(-z2)G(-z3)G(a+z1+z2)G(b+z2+z3)G(c+z3+z1)/G(d+z1+z2+z3)",
                      "G(d)/G(a)G(b)G(c)"),
        hc_group());
    return r;
  }();
  return reg;
}

inline const Seed& find_seed(const std::string& name) {
  auto& reg = seed_registry();
  auto it = reg.find(seed_key(name));
  if (it == reg.end()) throw Error(ErrorKind::UnknownSeed, "unknown seed '" + name + "'");
  return it->second;
}

// ---------------------------------------------------------------- path grammar

inline TransformPath parse_path(const std::string& s) {
  auto fail = [&](size_t pos, const std::string& msg) {
    throw Error(ErrorKind::SyntaxError, "at position " + std::to_string(pos) + ": " + msg + " in '" + s + "'");
  };
  TransformPath p;
  size_t i = 0;
  while (i < s.size() && (std::isalnum((unsigned char)s[i]) || s[i] == '_')) ++i;
  if (i == 0) fail(0, "expected seed name");
  p.seed = s.substr(0, i);
  if (i == s.size()) {
    find_seed(p.seed);
    return p;
  }
  if (s[i] != '-') fail(i, "expected '-'");
  ++i;
  if (i == s.size()) fail(i, "expected at least one step");
  while (i < s.size()) {
    size_t st = i;
    TransformStep step;
    while (i < s.size() && std::isdigit((unsigned char)s[i])) step.vars.push_back(s[i++] - '0');
    if (step.vars.empty()) fail(i, "expected variable digit");
    if (step.vars.size() > 2) fail(st, "at most two variable digits per step");
    for (int v : step.vars)
      if (v == 0) fail(st, "variable labels start at 1");
    if (i >= s.size() || !std::islower((unsigned char)s[i])) fail(i, "expected source letter");
    step.source = s[i++];
    if (i >= s.size() || !std::isupper((unsigned char)s[i])) fail(i, "expected target letter");
    step.target = s[i++];
    bool known = (is_single_letter(step.source) || is_pair_letter(step.source)) &&
                 (is_single_letter((char)std::tolower((unsigned char)step.target)) ||
                  is_pair_letter((char)std::tolower((unsigned char)step.target)));
    if (!known) fail(st, "unknown form letter");
    try {
      check_step_class(step);
    } catch (const Error&) {
      throw Error(ErrorKind::ClassMismatch, "step '" + step.str() + "' at position " + std::to_string(st) +
                                                " mixes letter classes or variable counts");
    }
    p.steps.push_back(step);
  }
  find_seed(p.seed);
  return p;
}

inline std::string print_path(const TransformPath& p) {
  if (p.steps.empty()) return p.seed;
  std::string s = p.seed + "-";
  for (auto& st : p.steps) s += st.str();
  return s;
}

inline MBIntegral apply_steps(MBIntegral m, const std::vector<TransformStep>& steps) {
  for (size_t k = 0; k < steps.size(); ++k) {
    try {
      m = apply_step(m, steps[k]);
    } catch (const Error& e) {
      throw Error(ErrorKind::PathStepFailed,
                  "step " + std::to_string(k + 1) + " (" + steps[k].str() + ") failed: " + e.what());
    }
  }
  return m;
}

inline MBIntegral apply_path(const TransformPath& p) {
  const Seed& sd = find_seed(p.seed);
  if (p.steps.empty()) return canonicalize(sd.integral);
  return apply_steps(sd.integral, p.steps);
}

inline MBIntegral apply_path(const std::string& s) { return apply_path(parse_path(s)); }

// Figure labels read the two pair letters k and l the other way round from the shapes
// matched here; this maps a label as printed in the figures to the engine's label.
inline std::string engine_label_for_figure(const std::string& label) {
  TransformPath p = parse_path(label);
  for (auto& st : p.steps) {
    if (st.vars.size() != 2) continue;
    auto sw = [](char c) {
      switch (c) {
        case 'k': return 'l';
        case 'l': return 'k';
        case 'K': return 'L';
        case 'L': return 'K';
        default: return c;
      }
    };
    st.source = sw(st.source);
    st.target = sw(st.target);
  }
  return print_path(p);
}

// ---------------------------------------------------------------- symmetry and maps

inline MBIntegral apply_symmetry(const MBIntegral& m, const Symmetry& s) {
  std::map<std::string, Expr> sub;
  for (auto& [a, b] : s.vars) sub[a] = Expr::var(b);
  auto perm = [&](const LinArg& a) {
    LinArg r(a.shift.renamed(s.params));
    for (auto& [k, c] : a.z) r.z[k <= (int)s.zperm.size() ? s.zperm[k - 1] : k] = c;
    return r;
  };
  MBIntegral r = m;
  for (int k = 0; k < m.nvars; ++k) {
    int t = k < (int)s.zperm.size() ? s.zperm[k] : k + 1;
    r.kernels[t - 1] = normalize_rational(substitute(m.kernels[k], sub));
  }
  for (auto& g : r.gammas) g.arg = perm(g.arg);
  for (auto& g : r.prefactor.gamma_ratios) g.arg = g.arg.renamed(s.params);
  for (auto& p : r.prefactor.powers) {
    p.base = normalize_rational(substitute(p.base, sub));
    p.exponent = p.exponent.renamed(s.params);
  }
  return canonicalize(r);
}

inline std::string integral_key(const MBIntegral& m) {
  MBIntegral c = canonicalize(m);
  for (auto& k : c.kernels) k = normalize_rational(k);
  for (auto& p : c.prefactor.powers) p.base = normalize_rational(p.base);
  c = canonicalize(c);
  return integral_string(c, false);
}

// Dedup key: least key over the symmetry orbit.
inline std::string orbit_key(const MBIntegral& m, const std::vector<Symmetry>& group) {
  std::string best;
  for (auto& s : group) {
    std::string k = integral_key(apply_symmetry(m, s));
    if (best.empty() || k < best) best = k;
  }
  return best.empty() ? integral_key(m) : best;
}

struct MapNode {
  int id = 0;
  std::string path;
  int depth = 0;
  std::string key;
  MBIntegral integral;
};

struct MapEdge {
  int from = 0, to = 0;
  std::string step;
};

struct TransformMap {
  std::string seed;
  int depth = 0;
  std::vector<MapNode> nodes;
  std::vector<MapEdge> edges;
  std::map<std::string, int> by_key;

  const MapNode* find_equivalent(const MBIntegral& m, const std::vector<Symmetry>& group) const {
    auto it = by_key.find(orbit_key(m, group));
    return it == by_key.end() ? nullptr : &nodes[it->second];
  }
};

inline TransformMap build_map(const std::string& seed, int depth = 4, bool use_symmetry = true) {
  const Seed& sd = find_seed(seed);
  std::vector<Symmetry> group = use_symmetry ? sd.symmetries : std::vector<Symmetry>{};
  TransformMap map;
  map.seed = sd.name;
  map.depth = depth;
  MapNode root{0, sd.name, 0, orbit_key(sd.integral, group), canonicalize(sd.integral)};
  map.nodes.push_back(root);
  map.by_key[root.key] = 0;
  // the seed keeps its printed order so the first generation matches by stored slots
  std::vector<MBIntegral> working = {sd.integral};
  std::deque<int> frontier = {0};
  while (!frontier.empty()) {
    int id = frontier.front();
    frontier.pop_front();
    if (map.nodes[id].depth >= depth) continue;
    MBIntegral src = working[id];
    for (const auto& st : enumerate_steps(src)) {
      MBIntegral out;
      try {
        out = apply_step(src, st);
      } catch (const Error&) {
        continue;
      }
      std::string key = orbit_key(out, group);
      auto it = map.by_key.find(key);
      std::string path = map.nodes[id].path + (map.nodes[id].depth == 0 ? "-" : "") + st.str();
      if (it == map.by_key.end()) {
        int nid = (int)map.nodes.size();
        map.nodes.push_back({nid, path, map.nodes[id].depth + 1, key, out});
        working.push_back(out);
        map.by_key[key] = nid;
        map.edges.push_back({id, nid, st.str()});
        frontier.push_back(nid);
      } else if (map.nodes[it->second].depth == map.nodes[id].depth + 1) {
        map.edges.push_back({id, it->second, st.str()});
      }
    }
  }
  return map;
}

inline json to_json(const TransformMap& m) {
  json j;
  j["schema"] = "mb-map.v1";
  j["seed"] = m.seed;
  j["depth"] = m.depth;
  j["nodes"] = json::array();
  for (auto& n : m.nodes)
    j["nodes"].push_back({{"id", n.id}, {"path", n.path}, {"depth", n.depth}, {"integral", to_json(n.integral)}});
  j["edges"] = json::array();
  for (auto& e : m.edges) j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"step", e.step}});
  return j;
}

// Graphviz export
inline std::string to_dot(const TransformMap& m) {
  std::string s = "digraph map {\n";
  for (auto& n : m.nodes) s += "  n" + std::to_string(n.id) + " [label=\"" + n.path + "\"];\n";
  for (auto& e : m.edges)
    s += "  n" + std::to_string(e.from) + " -> n" + std::to_string(e.to) + " [label=\"" + e.step + "\"];\n";
  return s + "}\n";
}

}  // namespace mbhf
