#include "l1/analysis.hpp"

#include <numeric>
#include <sstream>

#include "l1/global.hpp"
#include "l1/linear.hpp"

namespace l1 {

bool protects_type(const OpType& lin, const OpType& glo) {
  if (lin.kind != glo.kind || lin.inputs.size() != glo.inputs.size()) return false;
  for (size_t i = 0; i < lin.inputs.size(); ++i)
    if (!pretype_skel_eq(lin.inputs[i].p, glo.inputs[i].p)) return false;
  if (!pretype_skel_eq(lin.output.p, glo.output.p)) return false;
  const Qual& g = glo.output.q;
  if (g.kind != QualKind::Var) return true;
  if (lin.output.q.kind != QualKind::Li) return false;
  bool some_input_is_target = false;
  for (size_t i = 0; i < glo.inputs.size(); ++i) {
    if (glo.inputs[i].q.kind == QualKind::Var && glo.inputs[i].q.var == g.var) {
      some_input_is_target = true;
      if (lin.inputs[i].q.kind != QualKind::Li) return false;
    }
  }
  return some_input_is_target;
}

ProtectReport protects_sig(const QualificationList& lin, const QualificationList& glo) {
  if (lin.occ_types.size() != glo.occ_types.size())
    throw Error("align", "signature lists have different lengths");
  ProtectReport rep;
  for (size_t i = 0; i < lin.occ_types.size(); ++i) {
    if (lin.occ_names[i] != glo.occ_names[i])
      throw Error("align", "signature lists disagree at position " + std::to_string(i) + ": " +
                               lin.occ_names[i] + " vs " + glo.occ_names[i]);
    if (!protects_type(lin.occ_types[i], glo.occ_types[i])) {
      rep.ok = false;
      rep.failing.push_back((int)i);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Curves

static long long gcd_ll(long long a, long long b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) {
    long long t = a % b;
    a = b;
    b = t;
  }
  return a == 0 ? 1 : a;
}

CostCurve fit_curve(const std::vector<std::pair<long long, long long>>& samples) {
  if (samples.size() < 3) throw Error("analysis", "need at least 3 samples");
  CostCurve c;
  c.samples = samples;
  bool constant = true;
  for (auto& [n, v] : samples) constant = constant && v == samples[0].second;
  if (constant) {
    c.fit = CostCurve::Constant;
    c.c = samples[0].second;
    return c;
  }
  // exact affine test on every consecutive pair of increments
  long long n0 = samples[0].first, v0 = samples[0].second;
  long long dn = samples[1].first - n0;
  long long dv = samples[1].second - v0;
  bool affine = dn != 0;
  for (size_t i = 1; affine && i + 1 < samples.size(); ++i) {
    long long ddn = samples[i + 1].first - samples[i].first;
    long long ddv = samples[i + 1].second - samples[i].second;
    // slope equality: dv/dn == ddv/ddn
    if (dv * ddn != ddv * dn) affine = false;
  }
  if (affine) {
    c.fit = CostCurve::Affine;
    long long g = gcd_ll(dv, dn);
    c.a_num = dv / g;
    c.a_den = dn / g;
    if (c.a_den < 0) {
      c.a_den = -c.a_den;
      c.a_num = -c.a_num;
    }
    // b = v0 - a*n0 (kept only when integral; reporting uses a)
    c.b = v0 - (c.a_num * n0) / c.a_den;
    return c;
  }
  c.fit = CostCurve::Superlinear;
  return c;
}

std::string Ratio::str() const {
  switch (kind) {
    case Value: return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    case Zero: return "0";
    case Infinite: return "inf";
    case Undefined: return "undefined";
  }
  return "undefined";
}

Ratio ratio(const CostCurve& over, const CostCurve& under) {
  Ratio r;
  auto value = [&](long long num, long long den) {
    Ratio v;
    if (num == 0) {
      v.kind = Ratio::Zero;
      return v;
    }
    long long g = gcd_ll(num, den);
    v.kind = Ratio::Value;
    v.num = num / g;
    v.den = den / g;
    if (v.den < 0) {
      v.den = -v.den;
      v.num = -v.num;
    }
    return v;
  };
  if (over.fit == CostCurve::Constant) {
    if (under.fit == CostCurve::Constant) {
      if (under.c == 0) return r;
      return value(over.c, under.c);
    }
    r.kind = Ratio::Zero;  // constant over growing
    return r;
  }
  if (over.fit == CostCurve::Affine) {
    if (under.fit == CostCurve::Constant) {
      r.kind = Ratio::Infinite;
      return r;
    }
    if (under.fit == CostCurve::Affine)
      return value(over.a_num * under.a_den, over.a_den * under.a_num);
    r.kind = Ratio::Zero;  // affine over superlinear
    return r;
  }
  // superlinear numerator
  if (under.fit == CostCurve::Superlinear) {
    r.kind = Ratio::Undefined;  // degrees beyond the corpus; not compared
    return r;
  }
  r.kind = Ratio::Infinite;
  return r;
}

long long cost_of_run(const Program& elaborated, Mode mode,
                      const std::map<std::string, long long>& params, long long fuel) {
  auto res = run_program(elaborated, mode, params, fuel);
  return res.cfg.counters.cost();
}

// ---------------------------------------------------------------------------
// Classification

Classification classify(const Program& prog, const QualificationList& lin,
                        const QualificationList& glo, const std::vector<long long>& samples,
                        bool list_adjust, long long fuel) {
  if (samples.size() < 3) throw Error("analysis", "classification needs at least 3 samples");
  Classification out;
  out.list_adjusted = list_adjust;

  auto prot = protects_sig(lin, glo);
  out.protected_ = prot.ok;
  out.unprotected_occs = prot.failing;
  out.first_unprotected_occ = prot.first_failing();

  auto trivial = trivialize(prog, System::Linear);
  auto un_elab = check_program(prog, trivial).elab;
  auto li_elab = check_program(prog, lin).elab;
  auto gl_elab = check_program_global(prog, glo).elab;

  std::vector<std::pair<long long, long long>> un_s, li_s, gl_s, res_s;
  bool gl_ok = true;
  std::string gl_err;
  for (long long n : samples) {
    std::map<std::string, long long> params;
    for (auto& p : prog.params) params[p] = n;
    long long adj = list_adjust ? 2 * n : 0;
    long long cu = cost_of_run(un_elab, Mode::Un, params, fuel) - adj;
    long long cl = cost_of_run(li_elab, Mode::Li, params, fuel) - adj;
    un_s.emplace_back(n, cu);
    li_s.emplace_back(n, cl);
    if (gl_ok) {
      try {
        long long cg = cost_of_run(gl_elab, Mode::Gl, params, fuel) - adj;
        gl_s.emplace_back(n, cg);
        res_s.emplace_back(n, cg - cl);
      } catch (const Error& e) {
        gl_ok = false;
        gl_err = e.what();
      }
    }
  }
  out.un_curve = fit_curve(un_s);
  out.li_curve = fit_curve(li_s);
  out.linear_ratio = ratio(out.li_curve, out.un_curve);
  out.linear_improvement = out.linear_ratio.kind == Ratio::Zero;
  out.full_linear = out.li_curve.fit == CostCurve::Constant;
  out.gl_runs = gl_ok;
  out.gl_error = gl_err;
  if (gl_ok) {
    out.gl_curve = fit_curve(gl_s);
    out.residue_curve = fit_curve(res_s);
    out.global_ratio = ratio(out.gl_curve, out.un_curve);
    out.imperative_improvement = out.global_ratio.kind == Ratio::Zero;
    out.full_imperative = out.gl_curve.fit == CostCurve::Constant;
    out.li_match = out.residue_curve.fit == CostCurve::Constant;
  } else {
    out.global_ratio.kind = Ratio::Undefined;
    out.imperative_improvement = false;
    out.full_imperative = false;
    out.li_match = false;
  }
  return out;
}

std::string classification_json(const std::string& name, const Classification& c) {
  std::ostringstream os;
  auto arr = [&](const CostCurve& cur) {
    std::string s = "[";
    for (size_t i = 0; i < cur.samples.size(); ++i) {
      if (i) s += ", ";
      s += "[" + std::to_string(cur.samples[i].first) + ", " +
           std::to_string(cur.samples[i].second) + "]";
    }
    return s + "]";
  };
  os << "{\n";
  os << "  \"program\": \"" << name << "\",\n";
  os << "  \"protected\": " << (c.protected_ ? "true" : "false") << ",\n";
  os << "  \"first_unprotected_occ\": " << c.first_unprotected_occ << ",\n";
  os << "  \"c_un\": " << arr(c.un_curve) << ",\n";
  os << "  \"c_li\": " << arr(c.li_curve) << ",\n";
  os << "  \"c_gl\": " << (c.gl_runs ? arr(c.gl_curve) : std::string("null")) << ",\n";
  if (!c.gl_runs) os << "  \"gl_error\": \"" << c.gl_error << "\",\n";
  os << "  \"linear_ratio\": \"" << c.linear_ratio.str() << "\",\n";
  os << "  \"global_ratio\": \"" << c.global_ratio.str() << "\",\n";
  os << "  \"residue_constant\": "
     << (c.gl_runs && c.residue_curve.fit == CostCurve::Constant ? "true" : "false") << ",\n";
  os << "  \"list_adjusted\": " << (c.list_adjusted ? "true" : "false") << ",\n";
  os << "  \"flags\": {\n";
  os << "    \"protected\": " << (c.protected_ ? "true" : "false") << ",\n";
  os << "    \"linear_improvement\": " << (c.linear_improvement ? "true" : "false") << ",\n";
  os << "    \"imperative_improvement\": " << (c.imperative_improvement ? "true" : "false") << ",\n";
  os << "    \"full_linear\": " << (c.full_linear ? "true" : "false") << ",\n";
  os << "    \"full_imperative\": " << (c.full_imperative ? "true" : "false") << ",\n";
  os << "    \"li_match\": " << (c.li_match ? "true" : "false") << "\n";
  os << "  }\n";
  os << "}\n";
  return os.str();
}

}  // namespace l1
