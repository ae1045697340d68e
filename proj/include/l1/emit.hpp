#pragma once

// Transformation P: a globally-typed program in explicit imperative form.
// Globally-qualified outputs become assignments; binding patterns lose the
// variables of Gl(Gamma); everything else maps homomorphically. The emitted
// program is also produced in executable form (same machine, glcmd mode), so
// the printed text never needs a second semantics.

#include "l1/global.hpp"

namespace l1 {

struct ImpExpr;
using ImpPtr = std::shared_ptr<const ImpExpr>;

struct ImpExpr {
  enum Kind { Var, Call, NilI, ConsI, Assign, Tup, App, Let, If, Case } kind = Var;
  std::string name;            // Var, Call, App(function), Assign(target)
  std::vector<ImpPtr> args;    // Call, ConsI(2), Tup
  ImpPtr rhs;                  // Assign
  PatternPtr pat;              // Let
  ImpPtr a, b, c;              // Let(bound, body), If, Case(scrut, nil, cons), App(arg)=a
  std::string z1, z2;          // Case binders
};

// The emitted pieces: printable form plus the machine-executable program
// (annotations kept, binding patterns replaced by p-bar).
struct Emission {
  ImpPtr main;
  std::vector<std::pair<std::string, ImpPtr>> store_bodies;  // closures only
  Program exec;                 // run under glcmd with gset
  std::set<std::string> gset;   // Gl(Gamma^g)
};

ImpPtr emit_expr(const std::set<std::string>& gl, const ExprPtr& e);
Emission emit_program(const Program& prog, const QualificationList& quals);

std::string print_imperative(const Emission& em, const Program& prog);
// Whitespace-insensitive comparison used by the golden tests.
bool same_modulo_ws(const std::string& a, const std::string& b);

}  // namespace l1
