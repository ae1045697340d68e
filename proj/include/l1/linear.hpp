#pragma once

// The weak-linear system: un predicate, context split and pseudosplit, and
// deterministic checking of expressions, stores and whole programs. Splits
// are driven by the free variables of the subphrases, which makes the
// otherwise nondeterministic rules syntax-directed.

#include "l1/core.hpp"

namespace l1 {

struct LEntry {
  std::string name;
  TypePtr ty;  // Stor (li/un/hi) or Arrow
};
using LCtx = std::vector<LEntry>;

// un(V): arrows are unrestricted; a storable pseudotype is unrestricted
// unless its qualifier is li.
bool un_pred(const TypePtr& v);
bool un_ctx(const LCtx& g);

// Gamma^un: largest subcontext whose entries all satisfy un.
LCtx ctx_un(const LCtx& g);

// Context split: non-linear entries are copied everywhere; a li entry goes to
// the last context whose free-variable set mentions it (to the first when no
// set does). The pseudosplit additionally deposits hi copies to the left of
// the li occurrence.
std::vector<LCtx> spl(size_t n, const std::vector<std::set<std::string>>& fvs, const LCtx& g);
std::vector<LCtx> pspl(size_t n, const std::vector<std::set<std::string>>& fvs, const LCtx& g);

struct LinResult {
  TypePtr ty;
  ExprPtr elab;  // case qualifier slots filled from the scrutinee type
};

// Checks a fully annotated expression. `pseudo` admits the hidden-variable
// typing used for basic-operator arguments.
LinResult check_expr(const LCtx& g, const ExprPtr& e, bool pseudo = false);

struct StoreCheck {
  LCtx ctx;
  std::vector<std::pair<std::string, StoreInit>> store;  // closure bodies elaborated
};
StoreCheck check_store(const Program& prog, const QualificationList& quals);

struct ProgramCheck {
  LCtx ctx;
  TypePtr main_ty;
  Program elab;  // fully annotated, case slots filled
};
ProgramCheck check_program(const Program& prog, const QualificationList& quals);

}  // namespace l1
