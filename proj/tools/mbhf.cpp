// mbhf command-line front end
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mbhf/mbhf.hpp"

using namespace mbhf;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kNonConvergent = 3 };

using Assignments = std::vector<std::pair<std::string, cplx>>;

// "0.3", "-0.3+0.2i", "0.2i", "-i"; the whole text must be consumed
cplx parse_value(const std::string& t) {
  std::size_t n = 0;
  if (!t.empty() && t.back() == 'i') {
    std::string body = t.substr(0, t.size() - 1);
    std::size_t cut = body.find_last_of("+-");
    while (cut != std::string::npos && cut > 0 && (body[cut - 1] == 'e' || body[cut - 1] == 'E'))
      cut = body.find_last_of("+-", cut - 1);
    std::string re = cut == std::string::npos ? "" : body.substr(0, cut);
    std::string im = cut == std::string::npos ? body : body.substr(cut);
    if (im.empty() || im == "+" || im == "-") im += "1";
    double r = re.empty() ? 0.0 : std::stod(re, &n);
    if (!re.empty() && n != re.size()) throw std::invalid_argument(t);
    double i = std::stod(im, &n);
    if (n != im.size()) throw std::invalid_argument(t);
    return {r, i};
  }
  double r = std::stod(t, &n);
  if (n != t.size()) throw std::invalid_argument(t);
  return r;
}

// "a=1,b'=0.5" in the order written
Assignments parse_assignments(const std::string& s) {
  Assignments out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::ParseError, "expected name=value, got '" + item + "'");
    try {
      out.emplace_back(item.substr(0, eq), parse_value(item.substr(eq + 1)));
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::ParseError, "bad number in '" + item + "'");
    }
  }
  return out;
}

Bindings to_bindings(const Assignments& a) {
  Bindings b;
  for (auto& [k, v] : a) b[k] = v;
  return b;
}

json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::BadDocument, "cannot open " + path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadDocument, path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::BadDocument, "cannot write " + path);
  f << text;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string fmt(cplx v) {
  if (v.imag() == 0.0) return fmt(v.real());
  return fmt(v.real()) + (v.imag() < 0 ? " - " : " + ") + fmt(std::abs(v.imag())) + "i";
}

int exit_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::NonConvergent: return kNonConvergent;
    case ErrorKind::ValidationFailure: return kFail;
    default: return kUsage;
  }
}

struct Common {
  int threads = 0;
  bool deterministic = false;
  std::uint64_t rng_seed = 0;
  int resolved() const { return deterministic ? 1 : threads; }
};

MBIntegral integral_input(const std::string& file, const std::string& seed, const std::string& path) {
  if (!file.empty()) return integral_from_json(read_json(file));
  if (!path.empty()) return apply_path(path);
  if (!seed.empty()) return apply_path(seed);
  throw Error(ErrorKind::SyntaxError, "give --in, --seed or --path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mellin-Barnes transformations of multivariable hypergeometric functions"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--threads", common.threads, "worker threads (default: MBHF_THREADS, then all cores)");
  app.add_flag("--deterministic", common.deterministic, "single worker, fixed reduction order");
  app.add_option("--rng-seed", common.rng_seed, "seed for randomized expression equality");

  // transform
  auto* tr = app.add_subcommand("transform", "apply a transformation path to an MB integral");
  std::string tr_seed, tr_in, tr_path, tr_out;
  bool tr_unicode = false;
  tr->add_option("--seed", tr_seed, "seed name, e.g. F_1 or H_C");
  tr->add_option("--in", tr_in, "mb-integral.v1 file (steps taken from --path)");
  tr->add_option("--path", tr_path, "path, e.g. F_1-2aE")->required();
  tr->add_option("-o,--out", tr_out, "output file (default stdout)");
  tr->add_flag("--unicode", tr_unicode, "print Γ instead of G");

  // eval
  auto* ev = app.add_subcommand("eval", "sum a named or file-defined series");
  std::string ev_fn, ev_file, ev_params, ev_point;
  SeriesOptions sopt;
  ev->add_option("--fn", ev_fn, "registered name, e.g. F1 or KdF[1:1;1/1:0;0]");
  ev->add_option("--series", ev_file, "horn-series.v1 or series-block.v1 file");
  ev->add_option("--params", ev_params, "a=..,b=..");
  ev->add_option("--point", ev_point, "x=..,y=..");
  ev->add_option("--tol", sopt.tol, "relative shell tolerance")->capture_default_str();
  ev->add_option("--maxN", sopt.maxN, "maximum shell (0: 240 double, 120 triple)");

  // quad
  auto* qd = app.add_subcommand("quad", "evaluate an MB integral by contour quadrature");
  std::string qd_in, qd_seed, qd_path, qd_params, qd_point;
  QuadOptions qopt;
  qd->add_option("--in", qd_in, "mb-integral.v1 file");
  qd->add_option("--seed", qd_seed, "seed name");
  qd->add_option("--path", qd_path, "transformation path");
  qd->add_option("--params", qd_params, "a=..,b=..");
  qd->add_option("--point", qd_point, "x=..,y=..");
  qd->add_option("--T", qopt.T, "truncation half-width");
  qd->add_option("--step", qopt.h, "grid step h");
  qd->add_option("--delta", qopt.delta, "contour margin")->capture_default_str();
  qd->add_flag("--auto-h", qopt.auto_h, "shrink h to the contour margin");

  // map
  auto* mp = app.add_subcommand("map", "enumerate transformed MB integrals of a seed");
  std::string mp_seed, mp_out, mp_dot;
  int mp_depth = 2;
  bool mp_nosym = false;
  mp->add_option("--seed", mp_seed, "seed name")->required();
  mp->add_option("--depth", mp_depth, "search depth")->capture_default_str();
  mp->add_flag("--no-symmetry", mp_nosym, "keep symmetric images as separate nodes");
  mp->add_option("-o,--out", mp_out, "mb-map.v1 output file");
  mp->add_option("--dot", mp_dot, "Graphviz output file");

  // verify
  auto* vf = app.add_subcommand("verify", "check the identity corpus");
  std::string vf_corpus = std::string(MBHF_DATA_DIR) + "/identity-corpus.v1.json", vf_tier, vf_out;
  std::vector<std::string> vf_ids, vf_registry;
  VerifyConfig vcfg;
  vf->add_option("--corpus", vf_corpus, "identity-corpus.v1 file")->capture_default_str();
  vf->add_option("--tier", vf_tier, "explicit or literature");
  vf->add_option("--id", vf_ids, "identity id (repeatable)");
  vf->add_option("--registry", vf_registry, "extra named-series.v1 files");
  vf->add_option("--tol", vcfg.tolerance_override, "override every identity tolerance");
  vf->add_option("--series-tol", vcfg.series.tol, "series shell tolerance");
  vf->add_option("-o,--out", vf_out, "verify-report.v1 output file");

  // corpus-list
  auto* cl = app.add_subcommand("corpus-list", "list identities in a corpus file");
  std::string cl_corpus = std::string(MBHF_DATA_DIR) + "/identity-corpus.v1.json";
  cl->add_option("--corpus", cl_corpus, "identity-corpus.v1 file")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }
  if (common.rng_seed) default_equality_seed() = common.rng_seed;

  try {
    if (*tr) {
      TransformPath p = parse_path(tr_path);
      MBIntegral m = tr_in.empty() ? find_seed(tr_seed.empty() ? p.seed : tr_seed).integral
                                   : integral_from_json(read_json(tr_in));
      if (!tr_seed.empty() && seed_key(tr_seed) != seed_key(p.seed))
        throw Error(ErrorKind::SyntaxError, "path seed " + p.seed + " differs from --seed " + tr_seed);
      std::cout << "0  " << p.seed << "  " << integral_string(canonicalize(m), tr_unicode) << "\n";
      for (size_t k = 0; k < p.steps.size(); ++k) {
        try {
          m = apply_step(m, p.steps[k]);
        } catch (const Error& e) {
          throw Error(ErrorKind::PathStepFailed,
                      "step " + std::to_string(k + 1) + " (" + p.steps[k].str() + ") failed: " + e.what());
        }
        std::cout << k + 1 << "  " << p.steps[k].str() << "  " << prefactor_string(m.prefactor, tr_unicode)
                  << "\n";
      }
      if (p.steps.empty()) m = canonicalize(m);
      std::cout << "=  " << integral_string(m, tr_unicode) << "\n";
      if (!tr_out.empty()) write_text(tr_out, to_json(m).dump(2) + "\n");
      return kPass;
    }

    if (*ev) {
      NamedRegistry reg = NamedRegistry::builtin();
      Assignments pa = parse_assignments(ev_params), pt = parse_assignments(ev_point);
      HornResult r;
      if (!ev_fn.empty()) {
        const NamedSeries& ns = reg.get(ev_fn);
        Bindings params = to_bindings(pa);
        for (auto& s : ns.slots)
          if (!params.count(s)) throw Error(ErrorKind::MissingBinding, ev_fn + " needs parameter " + s);
        if ((int)pt.size() != ns.tmpl.nindices)
          throw Error(ErrorKind::MissingBinding, ev_fn + " takes " + std::to_string(ns.tmpl.nindices) + " arguments");
        // arguments by template name when all names match, else in the order given
        std::set<std::string> names;
        for (auto& a : ns.tmpl.args) names.insert(a.str());
        bool by_name = std::all_of(pt.begin(), pt.end(), [&](auto& kv) { return names.count(kv.first) > 0; });
        Bindings point;
        for (int k = 0; k < ns.tmpl.nindices; ++k)
          point[by_name ? pt[k].first : ns.tmpl.args[k].str()] = pt[k].second;
        r = horn_eval(ns.tmpl, params, point, sopt);
      } else if (!ev_file.empty()) {
        json j = read_json(ev_file);
        SeriesBlock b;
        if (j.value("schema", "") == "series-block.v1") b = block_from_json(j, reg);
        else b.series = horn_from_json(j);
        r = block_eval(b, to_bindings(pa), to_bindings(pt), sopt);
      } else {
        throw Error(ErrorKind::SyntaxError, "give --fn or --series");
      }
      std::cout << "value      " << fmt(r.value) << "\n"
                << "tail       " << fmt(r.tail_estimate) << "\n"
                << "shells     " << r.shells << "\n"
                << "converged  " << (r.converged ? "yes" : "no") << "\n";
      return r.converged ? kPass : kNonConvergent;
    }

    if (*qd) {
      MBIntegral m = integral_input(qd_in, qd_seed, qd_path);
      qopt.threads = common.resolved();
      QuadResult q = quad_auto(m, to_bindings(parse_assignments(qd_params)), to_bindings(parse_assignments(qd_point)),
                               qopt);
      std::cout << "value      " << fmt(q.value) << "\n"
                << "error      " << fmt(q.error_estimate) << "\n"
                << "T, h       " << fmt(q.T) << ", " << fmt(q.h) << "\n"
                << "contour   ";
      for (double r : q.contour.real_parts) std::cout << " " << fmt(r);
      std::cout << "  (margin " << fmt(q.contour.margin) << ")\n";
      return kPass;
    }

    if (*mp) {
      TransformMap m = build_map(mp_seed, mp_depth, !mp_nosym);
      for (auto& n : m.nodes) std::cout << n.depth << "  " << n.path << "\n";
      std::cout << m.nodes.size() << " nodes, " << m.edges.size() << " edges\n";
      if (!mp_out.empty()) write_text(mp_out, to_json(m).dump(2) + "\n");
      if (!mp_dot.empty()) write_text(mp_dot, to_dot(m));
      return kPass;
    }

    if (*vf) {
      NamedRegistry reg = NamedRegistry::builtin();
      vcfg.quad.threads = common.resolved();
      for (auto& f : vf_registry) load_named_series(reg, read_json(f), vcfg.quad);
      auto corpus = corpus_from_json(read_json(vf_corpus));
      CorpusFilter filter;
      if (!vf_tier.empty()) filter.tier = tier_from_string(vf_tier);
      filter.ids = vf_ids;
      vcfg.threads = common.resolved();
      CorpusReport rep = run_corpus(corpus, reg, filter, vcfg);
      for (auto& i : rep.identities) {
        double worst = 0.0;
        for (auto& p : i.points) worst = std::max(worst, p.deviation);
        std::printf("%-14s %-28s %-11s %.2e  %s\n", status_name(i.status).c_str(), i.id.c_str(),
                    tier_name(i.tier).c_str(), worst, i.message.c_str());
      }
      std::printf("%d identities: %d pass, %d fail, %d nonconvergent, %d unregistered, %d error\n",
                  (int)rep.identities.size(), rep.count(Status::Pass), rep.count(Status::Fail),
                  rep.count(Status::NonConvergent), rep.count(Status::Unregistered), rep.count(Status::Error));
      if (!vf_out.empty()) write_text(vf_out, to_json(rep).dump(2) + "\n");
      if (rep.all_pass()) return kPass;
      bool only_nc = rep.count(Status::NonConvergent) > 0 &&
                     rep.count(Status::NonConvergent) + rep.count(Status::Pass) == (int)rep.identities.size();
      return only_nc ? kNonConvergent : kFail;
    }

    if (*cl) {
      auto corpus = corpus_from_json(read_json(cl_corpus));
      for (auto& i : corpus)
        std::printf("%-28s %-11s %zu pts  %s\n", i.id.c_str(), tier_name(i.tier).c_str(), i.points.size(),
                    i.label.c_str());
      return kPass;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_for(e);
  }
  return kUsage;
}
