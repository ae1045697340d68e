#pragma once

// The global system: Pat poset, store-information synthesis p^Gamma(e), the
// ";" context operator, deterministic checking, and the context-globalization
// helpers used by the search.
//
// Nondeterministic (loc)/(<=) are realized only through the deterministic
// variants: arguments of operators, constructors and applications are checked
// at the store information computed by pinfo, and a variable may be promoted
// to its own name there. Everything else is synthesized unpromoted, which is
// deliberately stricter than the declarative rules.

#include "l1/core.hpp"

namespace l1 {

// ---------------------------------------------------------------------------
// Pat poset

struct PatElem {
  enum Kind { Lo, Var, Tup } kind = Lo;
  std::string name;
  std::vector<PatElem> comps;

  static PatElem lo() { return {}; }
  static PatElem var(std::string x) { return {Var, std::move(x), {}}; }
  static PatElem tup(std::vector<PatElem> cs) { return {Tup, {}, std::move(cs)}; }
  static PatElem unit() { return tup({}); }
};

bool patelem_eq(const PatElem& a, const PatElem& b);
// lo is the least element; variables form a flat order; tuples compare
// componentwise at equal arity; other shapes are incomparable.
bool pat_leq(const PatElem& a, const PatElem& b);
PatElem embed_pattern(const PatternPtr& p);
std::string to_string(const PatElem& p);

PatElem qual_to_patelem(const Qual& q);  // lo -> Lo, x -> Var x
PatElem rho(const TypePtr& t);
inline bool type_leq(const TypePtr& a, const TypePtr& b) { return pat_leq(rho(a), rho(b)); }

// p . T : promote T by the store information p. Partial; throws on shape
// mismatch or a variable over a Pi.
TypePtr pat_dot(const PatElem& p, const TypePtr& t);

// p|_A : variables of p outside A become lo.
PatElem pat_restrict(const PatternPtr& p, const std::set<std::string>& a);

// [p -> q]T : substitute pattern variables by PatElem components inside the
// qualifier positions of T.
TypePtr subst_pat_in_type(const PatternPtr& p, const PatElem& q, const TypePtr& t);

// ---------------------------------------------------------------------------
// Contexts

struct GEntry {
  std::string name;
  TypePtr ty;  // Stor (lo / x) or Pi
};

struct GCtx {
  std::vector<GEntry> entries;
  std::set<std::string> shadowed;  // globals dropped by a local rebinding
};

bool lo_pred(const TypePtr& v);  // lo(V): Pi yes, lo P yes, x P no
inline bool gl_pred(const TypePtr& v) { return !lo_pred(v); }

// Gamma1;Gamma2 folded one entry at a time: fresh names append, global-over-
// global keeps the original, a local is replaced, and a local shadowing a
// global drops the name entirely.
GCtx seq_extend(GCtx g, const std::vector<std::pair<std::string, TypePtr>>& frag);

const GEntry* g_lookup(const GCtx& g, const std::string& x);

std::set<std::string> type_fvs(const TypePtr& t);
std::set<std::string> globals(const GCtx& g);                         // Gl
std::set<std::string> globals_at(const GCtx& g, const PreType& p);    // Gl^P

// Pi well-formedness: rho(dom) <= pattern.
bool pi_well_formed(const TypePtr& pi);
void require_ctx_well_formed(const GCtx& g);

// ---------------------------------------------------------------------------
// Store information and checking

PatElem pinfo(const GCtx& g, const ExprPtr& e);  // p^Gamma(e)

TypePtr g_synth(const GCtx& g, const ExprPtr& e);                 // T_Gamma(e)
void g_check(const GCtx& g, const ExprPtr& e, const TypePtr& t);  // Gamma |- e : T

struct GStoreCheck {
  GCtx ctx;
};
GStoreCheck check_store_global(const Program& prog, const QualificationList& quals);

struct GProgramCheck {
  GCtx ctx;
  TypePtr main_ty;
  Program elab;
};
GProgramCheck check_program_global(const Program& prog, const QualificationList& quals);

// Gamma^X : globalize the variables of X; Pi domains are promoted through
// the pattern restricted to X and the codomain's free variables.
GCtx ctx_globalize(const GCtx& g, const std::set<std::string>& x);

}  // namespace l1
