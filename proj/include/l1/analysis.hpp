#pragma once

// Protection relation, cost metrics, ratio/residue estimation and the
// category flags of the case-study classification.

#include "l1/machine.hpp"

namespace l1 {

// alpha |> beta : a global output spot must be backed by a linear input that
// is destroyed in its place.
bool protects_type(const OpType& lin, const OpType& glo);

struct ProtectReport {
  bool ok = true;
  std::vector<int> failing;  // every failing position, in order
  int first_failing() const { return failing.empty() ? -1 : failing.front(); }
};
ProtectReport protects_sig(const QualificationList& lin, const QualificationList& glo);

// ---------------------------------------------------------------------------
// Cost curves

struct CostCurve {
  enum Fit { Constant, Affine, Superlinear } fit = Constant;
  std::vector<std::pair<long long, long long>> samples;  // (n, cost)
  // affine a*n + b with exact rational a
  long long a_num = 0, a_den = 1;
  long long b = 0;
  long long c = 0;  // constant value
};
CostCurve fit_curve(const std::vector<std::pair<long long, long long>>& samples);

struct Ratio {
  enum Kind { Value, Zero, Infinite, Undefined } kind = Undefined;
  long long num = 0, den = 1;
  std::string str() const;
};
Ratio ratio(const CostCurve& over, const CostCurve& under);

long long cost_of_run(const Program& elaborated, Mode mode,
                      const std::map<std::string, long long>& params, long long fuel);

struct Classification {
  bool protected_ = false;
  bool linear_improvement = false;
  bool imperative_improvement = false;
  bool full_linear = false;
  bool full_imperative = false;
  bool li_match = false;
  Ratio linear_ratio, global_ratio;
  CostCurve un_curve, li_curve, gl_curve, residue_curve;
  bool gl_runs = true;  // the global version may be incorrect and crash
  std::string gl_error;
  bool list_adjusted = false;
  int first_unprotected_occ = -1;
  std::vector<int> unprotected_occs;
};

Classification classify(const Program& prog, const QualificationList& lin,
                        const QualificationList& glo, const std::vector<long long>& samples,
                        bool list_adjust, long long fuel = 10'000'000);

std::string classification_json(const std::string& name, const Classification& c);

}  // namespace l1
