#pragma once

// Structural operations on the shared syntax: free variables, pattern
// substitution, pattern flattening, occurrence bookkeeping and qualification
// application.

#include <map>

#include "l1/syntax.hpp"

namespace l1 {

std::set<std::string> free_vars(const ExprPtr& e);

// Simultaneous variable-for-variable substitution built from two patterns of
// matching shape. A unit pattern on the left matches anything and contributes
// nothing. Variable names occurring inside global-qualifier annotation slots
// are renamed as well, so an in-place output keeps pointing at the caller's
// cell after application.
using Subst = std::map<std::string, PatternPtr>;
Subst build_subst(const PatternPtr& p, const PatternPtr& to);
ExprPtr apply_subst(const Subst& s, const ExprPtr& e);
ExprPtr subst(const PatternPtr& p, const PatternPtr& to, const ExprPtr& e);

// Flattening [p : T] -> ordered (name, type) fragment. A unit pattern yields
// nothing against any type; other shapes must agree.
std::vector<std::pair<std::string, TypePtr>> flatten(const PatternPtr& p, const TypePtr& t);

// Occurrence bookkeeping: deterministic pre-order walk, store bindings in
// binding order (node before children, arguments left to right), then main.
struct OccInfo {
  int occ;
  Expr::Kind kind;
  std::string name;  // operator name; "nil"/"cons"/"consd" for constructors
  int arity;
};
std::vector<OccInfo> occurrences(const Program& prog);

// Assigns occurrence ids in the canonical order (parser calls this once).
Program number_occurrences(Program prog);

// Fills every operator/constructor annotation slot from an aligned list.
// Case qualifier slots are set to `lo` for global qualifications and are left
// for the linear checker to elaborate otherwise (the scrutinee type decides).
Program apply_qualification(const Program& prog, const QualificationList& quals);

// Strips annotations back to the bare skeleton.
Program strip_annotations(const Program& prog);

// Whole-program trivial qualification: all un (linear) or all lo (global)
// over the inferred base skeleton.
enum class System { Linear, Global };
QualificationList trivialize(const Program& prog, System sys);

// Base (qualifier-free) inference of each occurrence's pretype skeleton and
// each store binding's type; foundation of trivialize and the search stages.
struct Skeleton {
  std::vector<OpType> occ_types;           // qualifiers all un
  std::vector<std::string> occ_names;
  std::vector<std::pair<std::string, TypePtr>> ctx;  // all-un store context
  TypePtr main_type;
};
Skeleton infer_skeleton(const Program& prog);

}  // namespace l1
