#pragma once

// Core vocabulary: qualifiers, types, patterns, expressions, programs and
// qualification lists shared by every other component.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace l1 {

struct Error : std::runtime_error {
  std::string kind;  // "parse", "type", "machine", "align", ...
  int occ = -1;      // occurrence id, when one is to blame
  Error(std::string k, std::string msg, int occurrence = -1)
      : std::runtime_error(msg), kind(std::move(k)), occ(occurrence) {}
};

// ---------------------------------------------------------------------------
// Qualifiers
//
// One representation covers the linear qualifiers (li, un), the pseudo
// qualifier hi, the search marker fixed-un, and the global qualifiers
// (lo, variable).

enum class QualKind { Li, Un, Hi, FixedUn, Lo, Var };

struct Qual {
  QualKind kind = QualKind::Un;
  std::string var;  // set iff kind == Var

  static Qual li() { return {QualKind::Li, {}}; }
  static Qual un() { return {QualKind::Un, {}}; }
  static Qual hi() { return {QualKind::Hi, {}}; }
  static Qual fixed_un() { return {QualKind::FixedUn, {}}; }
  static Qual lo() { return {QualKind::Lo, {}}; }
  static Qual gvar(std::string x) { return {QualKind::Var, std::move(x)}; }

  bool is_linear_side() const {
    return kind == QualKind::Li || kind == QualKind::Un ||
           kind == QualKind::Hi || kind == QualKind::FixedUn;
  }
  bool is_global_side() const {
    return kind == QualKind::Lo || kind == QualKind::Var;
  }
};

inline bool operator==(const Qual& a, const Qual& b) {
  return a.kind == b.kind && a.var == b.var;
}
inline bool operator!=(const Qual& a, const Qual& b) { return !(a == b); }

// li <= un, li <= li, un <= un (the linearization poset of section order)
inline bool qual_leq_linear(const Qual& a, const Qual& b) {
  if (a.kind == QualKind::Li) return b.kind == QualKind::Li || b.kind == QualKind::Un;
  if (a.kind == QualKind::Un) return b.kind == QualKind::Un;
  return false;
}

std::string to_string(const Qual& q);

// ---------------------------------------------------------------------------
// Pretypes and storable types

struct SType;

struct PreType {
  enum Kind { Int, Bool, Array, List } kind = Int;
  std::shared_ptr<SType> elem;  // List element storable type

  static PreType intp() { return {Int, nullptr}; }
  static PreType boolp() { return {Bool, nullptr}; }
  static PreType arrayp() { return {Array, nullptr}; }
  static PreType list(SType elem);
};

// Storable type E: qualifier + pretype.
struct SType {
  Qual q;
  PreType p;
};

inline PreType PreType::list(SType e) {
  return {List, std::make_shared<SType>(std::move(e))};
}

bool pretype_eq(const PreType& a, const PreType& b);
inline bool stype_eq(const SType& a, const SType& b) {
  return a.q == b.q && pretype_eq(a.p, b.p);
}
// Equality of the pretype skeleton, ignoring every qualifier.
bool pretype_skel_eq(const PreType& a, const PreType& b);

std::string to_string(const PreType& p);
std::string to_string(const SType& e);

// ---------------------------------------------------------------------------
// Patterns

struct Pattern;
using PatternPtr = std::shared_ptr<const Pattern>;

struct Pattern {
  enum Kind { Var, Tuple } kind = Var;  // the unit pattern <> is Tuple with no comps
  std::string name;
  std::vector<PatternPtr> comps;

  static PatternPtr var(std::string n);
  static PatternPtr tuple(std::vector<PatternPtr> cs);
  static PatternPtr unit() { return tuple({}); }
  bool is_unit() const { return kind == Tuple && comps.empty(); }
};

std::set<std::string> pattern_vars(const PatternPtr& p);
bool pattern_vars_distinct(const PatternPtr& p);
bool pattern_eq(const PatternPtr& a, const PatternPtr& b);
std::string to_string(const PatternPtr& p);

// ---------------------------------------------------------------------------
// Value / expression types
//
// One Type covers both systems: the linear T (storable, arrow, tuple) and the
// global T (storable, Pi, tuple). Checkers reject constructors foreign to
// their system.

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  enum Kind { Stor, Arrow, Pi, Tup } kind = Stor;
  SType stor;             // Stor
  TypePtr dom, cod;       // Arrow, Pi
  PatternPtr pat;         // Pi
  std::vector<TypePtr> comps;  // Tup

  static TypePtr stor_t(SType e);
  static TypePtr arrow(TypePtr d, TypePtr c);
  static TypePtr pi(PatternPtr p, TypePtr d, TypePtr c);
  static TypePtr tup(std::vector<TypePtr> cs);
};

bool type_eq(const TypePtr& a, const TypePtr& b);
std::string to_string(const TypePtr& t);

// ---------------------------------------------------------------------------
// Operator / constructor types (tau, sigma, theta, rho)

enum class OpKind { Operator, NilCtor, ConsCtor, ForcedCons };

struct OpType {
  OpKind kind = OpKind::Operator;
  std::vector<SType> inputs;  // ConsCtor: (elem, list); ForcedCons: (destroyed list, elem, list)
  SType output;
};

bool optype_eq(const OpType& a, const OpType& b);
std::string to_string(const OpType& t);

// ---------------------------------------------------------------------------
// Expressions

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum Kind {
    Var,         // name
    Op,          // name, occ, args, ann
    Nil,         // occ, ann
    Cons,        // occ, args[0]:head args[1]:tail, ann
    ForcedConsE, // occ, args[0]:destroyed list, args[1]:head, args[2]:tail, ann
    Tup,         // args
    App,         // name (function variable), a (argument)
    Let,         // pat, a (bound), b (body)
    If,          // a, b, c
    Case         // a (scrutinee), b (nil branch), z1/z2, c (cons branch), caseq
  } kind = Var;

  int occ = -1;
  std::string name;
  std::optional<OpType> ann;  // annotation slot of occurrence nodes
  std::vector<ExprPtr> args;
  PatternPtr pat;
  ExprPtr a, b, c;
  std::string z1, z2;
  std::optional<Qual> caseq;  // case qualifier slot

  static ExprPtr var(std::string n);
  static ExprPtr op(std::string n, std::vector<ExprPtr> as);
  static ExprPtr nil();
  static ExprPtr cons(ExprPtr h, ExprPtr t);
  static ExprPtr forced_cons(ExprPtr destroyed, ExprPtr h, ExprPtr t);
  static ExprPtr tup(std::vector<ExprPtr> as);
  static ExprPtr app(std::string f, ExprPtr arg);
  static ExprPtr let(PatternPtr p, ExprPtr bound, ExprPtr body);
  static ExprPtr ifx(ExprPtr c0, ExprPtr t, ExprPtr e);
  static ExprPtr casex(ExprPtr scrut, ExprPtr nilb, std::string z1, std::string z2,
                       ExprPtr consb);
};

bool is_occurrence(const Expr& e);

// ---------------------------------------------------------------------------
// Store values and programs
//
// A source-level store value may reference a run parameter; it is
// instantiated by the machine at load time.

struct StoreInit {
  enum Kind { IntLit, BoolLit, ParamRef, Iota, NilV, ConsV, Clo } kind = IntLit;
  long long i = 0;
  bool b = false;
  std::string param;       // ParamRef / Iota
  std::string head, tail;  // ConsV
  PatternPtr pat;          // Clo
  ExprPtr body;            // Clo
};

struct Program {
  std::vector<std::string> params;
  std::vector<std::pair<std::string, StoreInit>> store;
  ExprPtr main;
};

// ---------------------------------------------------------------------------
// Qualification lists

struct QualificationList {
  bool global = false;
  std::vector<std::string> occ_names;  // operator name per occurrence, for alignment checks
  std::vector<OpType> occ_types;
  std::vector<std::pair<std::string, TypePtr>> ctx;  // store context (Gamma^q or Gamma^g)
};

// ---------------------------------------------------------------------------
// Builtin operator table

struct Builtin {
  std::string name;
  OpKind kind = OpKind::Operator;
  int arity = 0;
  // Base pretype skeleton. Projections and id are pretype-polymorphic; their
  // entries use `poly` slots resolved by inference.
  std::vector<PreType> in;
  PreType out;
  std::vector<bool> in_poly;  // slot may take any pretype
  bool out_poly = false;
  int out_from_input = -1;  // polymorphic output copies this input's pretype
};

// Lookup (literals and run parameters are handled by the caller).
const Builtin* find_builtin(const std::string& name);
bool is_int_literal(const std::string& s);

}  // namespace l1
