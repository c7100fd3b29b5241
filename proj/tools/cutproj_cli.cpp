#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cutproj/builtins.hpp"
#include "cutproj/classify.hpp"
#include "cutproj/complexity.hpp"
#include "cutproj/decompose.hpp"
#include "cutproj/diophantine.hpp"
#include "cutproj/geometry.hpp"
#include "cutproj/pattern.hpp"
#include "cutproj/schemefile.hpp"
#include "cutproj/util.hpp"
#include "json.hpp"

using namespace cutproj;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitError = 1, kExitInvalid = 2, kExitDimension = 3;

int fail(const std::string& code, const std::string& msg, int exit_code) {
  std::cerr << Json{{"error", code}, {"message", msg}}.dump() << "\n";
  return exit_code;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

std::vector<long> parse_list(const std::string& s) {
  std::vector<long> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stol(tok));
  return out;
}

// Enumeration box for the empirical subcommands when --eta is not given.
long auto_eta(const Scheme& s, long rmax) {
  if (s.sys.k <= 2) return std::max(2000L, 40 * rmax);
  return std::max(40L, 4 * rmax);
}

int cmd_validate(const std::string& src) {
  auto s = validate(load_scheme(src));
  std::cout << "valid: " << s.name() << " (k=" << s.sys.k << ", d=" << s.sys.d() << ", n=" << s.sys.n << ")\n";
  std::cout << "field: " << s.sys.field->describe() << "\n";
  std::cout << "halfspaces: " << s.sys.halfspaces.size() << ", classes: " << s.sys.num_classes()
            << ", vertices: " << s.sys.vertices.size() << "\n";
  return 0;
}

int cmd_analyze(const std::string& src, bool json) {
  auto s = validate(load_scheme(src));
  auto r = complexity_report(s.sys);
  auto wh = weakly_homogeneous(s.sys);
  if (json) {
    Json j{{"scheme", s.name()}, {"alpha", r.alpha}, {"property_C", r.property_C},
           {"hyperplane_spanning", r.hyperplane_spanning}, {"weakly_homogeneous", wh.yes}};
    Json cls = Json::array();
    for (auto& c : r.per_class)
      cls.push_back({{"class", c.cls}, {"rank", c.rank}, {"beta", c.beta}, {"stabiliser", c.subgroup.str()}});
    j["classes"] = cls;
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "scheme: " << s.name() << "\n";
  for (auto& c : r.per_class)
    std::cout << "class " << c.cls << ": rank " << c.rank << ", beta " << c.beta << ", stabiliser " << c.subgroup.str()
              << "\n";
  std::cout << "alpha: " << r.alpha << " (d = " << s.sys.d() << ")\n";
  std::cout << "property C: " << (r.property_C ? "yes" : "no") << "\n";
  std::cout << "hyperplane spanning: " << (r.hyperplane_spanning ? "yes" : "no") << "\n";
  std::cout << "weakly homogeneous: " << (wh.yes ? "yes, N = " + std::to_string(wh.N) : "no") << "\n";
  for (auto& e : r.errors) std::cout << "inconsistency: " << e << "\n";
  return 0;
}

int cmd_decompose(const std::string& src) {
  auto s = validate(load_scheme(src));
  auto dec = decompose(s.sys);
  std::cout << "factors: " << dec.parts.size() << (dec.indecomposable ? " (indecomposable)" : "") << "\n";
  for (size_t i = 0; i < dec.parts.size(); ++i) {
    auto& f = dec.parts[i];
    std::cout << "factor " << i << ": classes {";
    for (size_t c = 0; c < f.classes.size(); ++c) std::cout << (c ? "," : "") << f.classes[c];
    std::cout << "}, k=" << f.k << ", n=" << f.n << ", d=" << f.d << ", delta=" << rat_str(f.delta)
              << ", lattice " << f.lattice.str();
    if (f.constant_rank) std::cout << ", constant rank " << f.rank;
    else std::cout << ", non-constant rank";
    std::cout << "\n";
  }
  std::cout << "index N: " << index_str(dec.index_N) << "\n";
  std::cout << "Minkowski vertices match: " << (minkowski_vertices_match(s.sys, dec) ? "yes" : "no") << "\n";
  return 0;
}

int cmd_dioscan(const std::string& src, long rmax, const std::string& rlist) {
  auto s = validate(load_scheme(src));
  auto dec = decompose(s.sys);
  std::cout << "subsystem,delta,R,c_lower,c_upper,argmin\n";
  std::vector<std::string> verdicts;
  for (size_t i = 0; i < dec.parts.size(); ++i) {
    auto sub = subsystem(s.sys, dec, static_cast<int>(i));
    auto R = rlist.empty() ? default_R_list(sub.sys, rmax) : parse_list(rlist);
    auto rep = scan(sub.sys, R);
    if (auto c = certify(sub.sys)) {
      rep.verdict = DVerdict::CERTIFIED_D;
      rep.note = "generator expansion " + c->str();
    } else if (auto why = certify_norm(sub.sys)) {
      rep.verdict = DVerdict::CERTIFIED_D;
      rep.note = *why;
    }
    for (auto& x : rep.samples) {
      std::cout << i << "," << rat_str(rep.delta) << "," << x.R << "," << fmt_double(x.c_lower, 10) << ","
                << fmt_double(x.c_upper, 10) << ",";
      for (size_t j = 0; j < x.argmin.size(); ++j) std::cout << (j ? " " : "") << x.argmin[j];
      std::cout << "\n";
    }
    verdicts.push_back("# subsystem " + std::to_string(i) + ": " + dverdict_name(rep.verdict) +
                       (rep.note.empty() ? "" : " [" + rep.note + "]"));
  }
  for (auto& v : verdicts) std::cout << v << "\n";
  return 0;
}

Json report_json(const LRReport& r) {
  Json j{{"scheme", r.name}, {"k", r.k}, {"d", r.d}, {"n", r.n}, {"weakly_homogeneous", r.weakly_homogeneous},
         {"alpha", r.complexity.alpha}, {"property_C", r.complexity.property_C}};
  if (r.decomposition) {
    j["factors"] = r.decomposition->parts.size();
    j["index_N"] = index_str(r.decomposition->index_N);
  }
  if (r.property_D) {
    Json parts = Json::array();
    for (auto& p : r.property_D->parts) {
      Json pj{{"subsystem", p.subsystem}, {"delta", rat_str(p.delta)}, {"verdict", dverdict_name(p.verdict)}};
      Json samples = Json::array();
      for (auto& x : p.samples) samples.push_back({{"R", x.R}, {"c_lower", x.c_lower}, {"c_upper", x.c_upper}});
      pj["samples"] = samples;
      if (!p.note.empty()) pj["note"] = p.note;
      parts.push_back(pj);
    }
    j["property_D"] = {{"verdict", dverdict_name(r.property_D->verdict)}, {"parts", parts}};
  }
  j["verdict"] = lr_verdict_name(r.verdict);
  j["evidence"] = r.evidence;
  j["notes"] = r.notes;
  if (r.error) j["error"] = *r.error;
  return j;
}

int cmd_classify(const std::string& src, long scan_rmax, bool json, bool shortcut) {
  auto s = validate(load_scheme(src));
  ClassifyOptions opt;
  opt.scan_rmax = scan_rmax;
  auto r = classify(s, opt);
  if (json) std::cout << report_json(r).dump(2) << "\n";
  else std::cout << format_report(r);
  if (shortcut) std::cout << "canonical shortcut:\n" << format_report(canonical_shortcut(s, opt));
  return 0;
}

int cmd_points(const std::string& src, long eta, std::uint64_t seed, const std::string& csv, const std::string& svg) {
  auto s = validate(load_scheme(src));
  auto ps = generate(s, eta, seed);
  std::cout << "points: " << ps.points.size() << "\n";
  std::cout << "shift:";
  for (auto& x : ps.shift) std::cout << " " << x.str();
  std::cout << "\n";
  if (!csv.empty()) {
    auto f = open_out(csv);
    write_points_csv(f, ps);
  }
  if (!svg.empty()) {
    auto f = open_out(svg);
    write_points_svg(f, ps);
  }
  return 0;
}

int cmd_regions(const std::string& src, long r, const std::string& svg) {
  auto s = validate(load_scheme(src));
  auto cx = cut_regions(s.sys, r);
  auto doms = acceptance_domains(s.sys, cx);
  FE total(s.sys.field, Rat(0));
  for (auto& c : cx.cells) total += c.measure;
  std::cout << "cells: " << cx.cells.size() << "\n";
  std::cout << "total measure: " << total.str() << (total == window_measure(s.sys) ? " (= |W|)" : " (MISMATCH)") << "\n";
  std::cout << "min inradius: " << fmt_double(min_inradius(cx), 10) << "\n";
  std::cout << "acceptance domains: " << doms.size() << "\n";
  if (!svg.empty()) {
    auto f = open_out(svg);
    write_cells_svg(f, cx, &doms);
  }
  return 0;
}

int cmd_complexity(const std::string& src, long rmax, long eta, const std::string& metric) {
  auto s = validate(load_scheme(src));
  auto m = patch_metric_from_name(metric);
  if (eta <= 0) eta = auto_eta(s, rmax);
  auto ps = generate(s, eta, 1);
  std::cout << "r,p_hat,centers\n";
  std::vector<std::pair<double, double>> pts;
  for (long r = 1; r <= rmax; ++r) {
    auto c = patch_census(ps, r, m);
    std::cout << r << "," << c.p_hat() << "," << c.centers << "\n";
    if (r >= 2) pts.push_back({static_cast<double>(r), static_cast<double>(c.p_hat())});
  }
  if (pts.size() >= 2) std::cout << "# log-log slope: " << fmt_double(loglog_slope(pts), 4) << "\n";
  std::cout << "# alpha: " << complexity_report(s.sys).alpha << "\n";
  return 0;
}

int cmd_repetitivity(const std::string& src, long rmax, long eta, const std::string& metric) {
  auto s = validate(load_scheme(src));
  auto m = patch_metric_from_name(metric);
  if (eta <= 0) eta = auto_eta(s, rmax);
  auto ps = generate(s, eta, 1);
  std::cout << "r,rho_hat,rho_over_r,probes\n";
  for (long r = 1; r <= rmax; ++r) {
    auto rep = repetitivity(ps, r, m);
    std::cout << r << "," << fmt_double(rep.rho_hat, 8) << "," << fmt_double(rep.rho_hat / r, 6) << "," << rep.probes
              << "\n";
  }
  return 0;
}

int cmd_examples(const std::string& action, const std::string& name, const std::string& path) {
  if (action == "list") {
    for (auto& n : builtin_names()) std::cout << n << "  " << builtin_summary(n) << "\n";
    return 0;
  }
  if (name.empty()) throw std::invalid_argument("examples " + action + " needs a NAME");
  if (action == "show") {
    std::cout << scheme_to_json(builtin_spec(name));
    return 0;
  }
  if (action == "export") {
    if (path.empty()) throw std::invalid_argument("examples export needs a PATH");
    write_scheme_file(path, builtin_spec(name));
    std::cout << "wrote " << path << "\n";
    return 0;
  }
  throw std::invalid_argument("unknown examples action: " + action);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cut and project schemes: validation, complexity, decomposition, Diophantine scans, LR classification"};
  app.require_subcommand(1);
  std::string src, metric = "physical", csv, svg, rlist, action, name, path;
  long rmax = 0, eta = 0, r = 0;
  std::uint64_t seed = 1;
  bool json = false, shortcut = false;

  auto* v = app.add_subcommand("validate", "check a scheme file");
  v->add_option("FILE", src, "scheme file or builtin name")->required();
  auto* an = app.add_subcommand("analyze", "stabilisers, complexity exponent, property C");
  an->add_option("FILE", src)->required();
  an->add_flag("--json", json);
  auto* de = app.add_subcommand("decompose", "flag-graph decomposition");
  de->add_option("FILE", src)->required();
  auto* di = app.add_subcommand("dioscan", "Diophantine scan per factor (CSV)");
  di->add_option("FILE", src)->required();
  di->add_option("--rmax", rmax, "largest R (default: by free dimension)");
  di->add_option("--rlist", rlist, "comma-separated R values");
  auto* cl = app.add_subcommand("classify", "LR verdict with evidence");
  cl->add_option("FILE", src)->required();
  cl->add_option("--scan-rmax", rmax);
  cl->add_flag("--json", json);
  cl->add_flag("--canonical", shortcut, "also run the canonical-window shortcut");
  auto* pt = app.add_subcommand("points", "generate a point set");
  pt->add_option("FILE", src)->required();
  pt->add_option("--eta", eta)->required();
  pt->add_option("--seed", seed);
  pt->add_option("--csv", csv);
  pt->add_option("--svg", svg);
  auto* rg = app.add_subcommand("regions", "cut regions and acceptance domains (n <= 2)");
  rg->add_option("FILE", src)->required();
  rg->add_option("--r", r)->required();
  rg->add_option("--svg", svg);
  auto* cx = app.add_subcommand("complexity", "empirical patch counts (CSV)");
  cx->add_option("FILE", src)->required();
  cx->add_option("--rmax", rmax)->required();
  cx->add_option("--eta", eta, "enumeration box (default: automatic)");
  cx->add_option("--metric", metric, "physical or lattice");
  auto* rp = app.add_subcommand("repetitivity", "empirical repetitivity (CSV)");
  rp->add_option("FILE", src)->required();
  rp->add_option("--rmax", rmax)->required();
  rp->add_option("--eta", eta);
  rp->add_option("--metric", metric);
  auto* ex = app.add_subcommand("examples", "builtin catalog: list | show NAME | export NAME PATH");
  ex->add_option("ACTION", action)->required();
  ex->add_option("NAME", name);
  ex->add_option("PATH", path);

  CLI11_PARSE(app, argc, argv);
  try {
    if (v->parsed()) return cmd_validate(src);
    if (an->parsed()) return cmd_analyze(src, json);
    if (de->parsed()) return cmd_decompose(src);
    if (di->parsed()) return cmd_dioscan(src, rmax, rlist);
    if (cl->parsed()) return cmd_classify(src, rmax, json, shortcut);
    if (pt->parsed()) return cmd_points(src, eta, seed, csv, svg);
    if (rg->parsed()) return cmd_regions(src, r, svg);
    if (cx->parsed()) return cmd_complexity(src, rmax, eta, metric);
    if (rp->parsed()) return cmd_repetitivity(src, rmax, eta, metric);
    if (ex->parsed()) return cmd_examples(action, name, path);
  } catch (const ValidationFailure& e) {
    return fail(code_name(e.code()), e.what(), kExitInvalid);
  } catch (const std::exception& e) {
    std::string msg = e.what();
    if (msg.rfind("DIMENSION_UNSUPPORTED", 0) == 0 || msg.rfind("UNSUPPORTED_DIMENSION", 0) == 0)
      return fail("DIMENSION_UNSUPPORTED", msg, kExitDimension);
    auto colon = msg.find(':');
    std::string code = colon != std::string::npos && colon > 0 &&
                               msg.find_first_not_of("ABCDEFGHIJKLMNOPQRSTUVWXYZ_") == colon
                           ? msg.substr(0, colon)
                           : "ERROR";
    return fail(code, msg, kExitError);
  }
  return kExitError;
}
