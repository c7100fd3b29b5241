#include "cutproj/classify.hpp"

#include <sstream>
#include <stdexcept>

#include "cutproj/builtins.hpp"
#include "cutproj/linalg.hpp"
#include "cutproj/util.hpp"

namespace cutproj {

std::string lr_verdict_name(LRVerdict v) {
  switch (v) {
    case LRVerdict::LR: return "LR";
    case LRVerdict::LR_LIKELY: return "LR_LIKELY";
    case LRVerdict::INCONCLUSIVE: return "INCONCLUSIVE";
    case LRVerdict::NOT_LR_LIKELY: return "NOT_LR_LIKELY";
    case LRVerdict::NOT_LR: return "NOT_LR";
    case LRVerdict::OUT_OF_THEOREM_SCOPE: return "OUT_OF_THEOREM_SCOPE";
  }
  return "?";
}

LRReport classify(const Scheme& s, const ClassifyOptions& opt) {
  LRReport r;
  r.name = s.name();
  r.k = s.sys.k;
  r.d = s.sys.d();
  r.n = s.sys.n;
  const char* stage = "weak homogeneity";
  try {
    auto wh = weakly_homogeneous(s.sys);
    r.weakly_homogeneous = wh.yes;
    r.homogeneity_N = wh.N;
    stage = "complexity";
    r.complexity = complexity_report(s.sys);
    if (!r.complexity.property_C) {
      r.verdict = LRVerdict::NOT_LR;
      r.evidence = "exact";
      r.notes.push_back("property C fails: alpha = " + std::to_string(r.complexity.alpha) + " > d = " +
                        std::to_string(r.d) + "; C is necessary for LR");
      return r;
    }
    stage = "decomposition";
    r.decomposition = decompose(s.sys);
    stage = "Diophantine scan";
    r.property_D = scheme_D(s.sys, opt.scan_rmax, opt.scan);
  } catch (const std::exception& e) {
    r.error = std::string(stage) + ": " + e.what();
    r.verdict = LRVerdict::INCONCLUSIVE;
    return r;
  }
  for (auto& w : r.property_D->warnings) r.notes.push_back(w);
  DVerdict dv = r.property_D->verdict;
  bool d_ok = dv == DVerdict::CERTIFIED_D || dv == DVerdict::LIKELY_D;
  r.evidence = dv == DVerdict::CERTIFIED_D ? "certified" : "scan";
  if (dv == DVerdict::LIKELY_NOT_D) {
    r.verdict = LRVerdict::NOT_LR_LIKELY;
  } else if (dv == DVerdict::INCONCLUSIVE) {
    r.verdict = LRVerdict::INCONCLUSIVE;
  } else if (!r.weakly_homogeneous) {
    r.verdict = LRVerdict::OUT_OF_THEOREM_SCOPE;
    r.notes.push_back("C and D hold but the window is not weakly homogeneous; LR does not follow");
  } else {
    r.verdict = dv == DVerdict::CERTIFIED_D ? LRVerdict::LR : LRVerdict::LR_LIKELY;
  }
  if (r.weakly_homogeneous && d_ok)
    r.notes.push_back("weakly homogeneous polytopal scheme: LR <=> PW <=> (C and D)");
  return r;
}

CanonicalReport canonical_shortcut(const Scheme& s, const ClassifyOptions& opt) {
  const auto& sys = s.sys;
  if (!is_canonical(sys)) throw std::invalid_argument("NOT_CANONICAL: window is not the projected unit cube");
  int k = sys.k, n = sys.n;
  FieldMat cols = transpose(sys.proj, k);
  for_each_subset(k, n, [&](const std::vector<int>& sub) {
    FieldMat a;
    for (int j : sub) a.push_back(cols[j]);
    if (rank(a) != n) {
      std::string ids;
      for (int j : sub) ids += (ids.empty() ? "" : ",") + std::to_string(j);
      throw std::invalid_argument("DEGENERATE: projected basis vectors {" + ids + "} are dependent");
    }
  });
  CanonicalReport out;
  out.ranks_equal_k_over_n = true;
  FE zero(sys.field, Rat(0)), one(sys.field, Rat(1));
  for (int i = 0; i < k; ++i) {
    LineGroup lg;
    lg.index = i;
    const FieldVec& v = cols[i];
    // gamma_< lies on the line iff every annihilator of v kills it.
    auto ann = nullspace(FieldMat{v}, n);
    if (ann.empty()) {
      lg.group = Subgroup::full(k);
    } else {
      FieldMat m;
      for (auto& w : ann) {
        FieldVec row;
        for (int j = 0; j < k; ++j) row.push_back(dot(w, cols[j]));
        m.push_back(row);
      }
      lg.group = integer_kernel(m, k);
    }
    lg.rank = lg.group.rank();
    if (lg.rank * n != k) out.ranks_equal_k_over_n = false;
    if (lg.rank >= 2) {
      int p = 0;
      while (v[p].is_zero()) ++p;
      FieldVec t;
      for (auto& b : lg.group.hnf_basis()) {
        FE y(sys.field, Rat(0));
        for (int j = 0; j < k; ++j)
          if (b[j] != 0) y += sys.proj[p][j].scaled(Rat(b[j]));
        t.push_back(y / v[p]);
      }
      auto line = make_internal(sys.field, lg.rank, 1, FieldMat{t}, {{{one}, one}, {{-one}, zero}});
      lg.scan = scan(line, default_R_list(line, opt.scan_rmax), opt.scan);
      if (auto c = certify(line)) {
        lg.scan.verdict = DVerdict::CERTIFIED_D;
        lg.scan.certificate = *c;
        lg.scan.note = "quadratic reduction, generator expansion " + c->str();
      } else if (auto why = certify_norm(line)) {
        lg.scan.verdict = DVerdict::CERTIFIED_D;
        lg.scan.note = *why;
      }
    } else {
      lg.scan.note = "rank below 2: not dense in its line";
    }
    switch (lg.scan.verdict) {
      case DVerdict::CERTIFIED_D: ++out.certified; break;
      case DVerdict::LIKELY_D: ++out.likely; break;
      case DVerdict::LIKELY_NOT_D: ++out.likely_not; break;
      default: break;
    }
    out.lines.push_back(std::move(lg));
  }
  if (!out.ranks_equal_k_over_n) out.verdict = LRVerdict::NOT_LR;
  else if (out.certified >= n) out.verdict = LRVerdict::LR;
  else if (out.certified + out.likely >= n) out.verdict = LRVerdict::LR_LIKELY;
  else if (k - out.likely_not < n) out.verdict = LRVerdict::NOT_LR_LIKELY;
  else out.verdict = LRVerdict::INCONCLUSIVE;
  return out;
}

std::string format_report(const LRReport& r) {
  std::ostringstream os;
  os << "scheme: " << r.name << " (k=" << r.k << ", d=" << r.d << ", n=" << r.n << ")\n";
  os << "weakly homogeneous: " << (r.weakly_homogeneous ? "yes, N = " + std::to_string(r.homogeneity_N) : "no")
     << "\n";
  os << "complexity: alpha = " << r.complexity.alpha << ", property C: " << (r.complexity.property_C ? "yes" : "no")
     << "\n";
  if (r.decomposition) {
    os << "decomposition: " << r.decomposition->parts.size() << " factor(s)"
       << (r.decomposition->indecomposable ? ", indecomposable" : "")
       << ", index N = " << index_str(r.decomposition->index_N) << "\n";
  }
  if (r.property_D) {
    os << "property D: " << dverdict_name(r.property_D->verdict) << "\n";
    for (auto& p : r.property_D->parts) {
      os << "  factor " << p.subsystem << ": delta = " << rat_str(p.delta) << ", " << dverdict_name(p.verdict);
      if (!p.samples.empty()) os << ", c_lower(" << p.samples.back().R << ") = " << fmt_double(p.samples.back().c_lower);
      if (!p.note.empty()) os << " [" << p.note << "]";
      os << "\n";
    }
  }
  os << "verdict: " << lr_verdict_name(r.verdict);
  if (!r.evidence.empty()) os << " (evidence: " << r.evidence << ")";
  os << "\n";
  for (auto& n : r.notes) os << "note: " << n << "\n";
  if (r.error) os << "error: " << *r.error << "\n";
  return os.str();
}

std::string format_report(const CanonicalReport& r) {
  std::ostringstream os;
  for (auto& l : r.lines) {
    os << "line " << l.index << ": rank " << l.rank << ", " << dverdict_name(l.scan.verdict);
    if (!l.scan.note.empty()) os << " [" << l.scan.note << "]";
    os << "\n";
  }
  os << "ranks equal k/n: " << (r.ranks_equal_k_over_n ? "yes" : "no") << "\n";
  os << "verdict: " << lr_verdict_name(r.verdict) << "\n";
  return os.str();
}

}  // namespace cutproj
