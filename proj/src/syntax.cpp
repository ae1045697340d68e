#include "l1/syntax.hpp"

#include <algorithm>
#include <cctype>

namespace l1 {

std::string to_string(const Qual& q) {
  switch (q.kind) {
    case QualKind::Li: return "li";
    case QualKind::Un: return "un";
    case QualKind::Hi: return "hi";
    case QualKind::FixedUn: return "un!";
    case QualKind::Lo: return "lo";
    case QualKind::Var: return q.var;
  }
  return "?";
}

bool pretype_eq(const PreType& a, const PreType& b) {
  if (a.kind != b.kind) return false;
  if (a.kind != PreType::List) return true;
  return stype_eq(*a.elem, *b.elem);
}

bool pretype_skel_eq(const PreType& a, const PreType& b) {
  if (a.kind != b.kind) return false;
  if (a.kind != PreType::List) return true;
  return pretype_skel_eq(a.elem->p, b.elem->p);
}

std::string to_string(const PreType& p) {
  switch (p.kind) {
    case PreType::Int: return "int";
    case PreType::Bool: return "bool";
    case PreType::Array: return "array";
    case PreType::List: return "[" + to_string(*p.elem) + "]";
  }
  return "?";
}

std::string to_string(const SType& e) { return to_string(e.q) + " " + to_string(e.p); }

PatternPtr Pattern::var(std::string n) {
  auto p = std::make_shared<Pattern>();
  p->kind = Var;
  p->name = std::move(n);
  return p;
}

PatternPtr Pattern::tuple(std::vector<PatternPtr> cs) {
  auto p = std::make_shared<Pattern>();
  p->kind = Tuple;
  p->comps = std::move(cs);
  return p;
}

static void collect_pattern_vars(const PatternPtr& p, std::set<std::string>& out) {
  if (p->kind == Pattern::Var) {
    out.insert(p->name);
  } else {
    for (auto& c : p->comps) collect_pattern_vars(c, out);
  }
}

std::set<std::string> pattern_vars(const PatternPtr& p) {
  std::set<std::string> out;
  collect_pattern_vars(p, out);
  return out;
}

static bool count_pattern_vars(const PatternPtr& p, std::set<std::string>& seen) {
  if (p->kind == Pattern::Var) return seen.insert(p->name).second;
  for (auto& c : p->comps)
    if (!count_pattern_vars(c, seen)) return false;
  return true;
}

bool pattern_vars_distinct(const PatternPtr& p) {
  std::set<std::string> seen;
  return count_pattern_vars(p, seen);
}

bool pattern_eq(const PatternPtr& a, const PatternPtr& b) {
  if (a->kind != b->kind) return false;
  if (a->kind == Pattern::Var) return a->name == b->name;
  if (a->comps.size() != b->comps.size()) return false;
  for (size_t i = 0; i < a->comps.size(); ++i)
    if (!pattern_eq(a->comps[i], b->comps[i])) return false;
  return true;
}

std::string to_string(const PatternPtr& p) {
  if (p->kind == Pattern::Var) return p->name;
  std::string s = "<";
  for (size_t i = 0; i < p->comps.size(); ++i) {
    if (i) s += ", ";
    s += to_string(p->comps[i]);
  }
  return s + ">";
}

TypePtr Type::stor_t(SType e) {
  auto t = std::make_shared<Type>();
  t->kind = Stor;
  t->stor = std::move(e);
  return t;
}

TypePtr Type::arrow(TypePtr d, TypePtr c) {
  auto t = std::make_shared<Type>();
  t->kind = Arrow;
  t->dom = std::move(d);
  t->cod = std::move(c);
  return t;
}

TypePtr Type::pi(PatternPtr p, TypePtr d, TypePtr c) {
  auto t = std::make_shared<Type>();
  t->kind = Pi;
  t->pat = std::move(p);
  t->dom = std::move(d);
  t->cod = std::move(c);
  return t;
}

TypePtr Type::tup(std::vector<TypePtr> cs) {
  auto t = std::make_shared<Type>();
  t->kind = Tup;
  t->comps = std::move(cs);
  return t;
}

bool type_eq(const TypePtr& a, const TypePtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Type::Stor: return stype_eq(a->stor, b->stor);
    case Type::Arrow: return type_eq(a->dom, b->dom) && type_eq(a->cod, b->cod);
    case Type::Pi:
      return pattern_eq(a->pat, b->pat) && type_eq(a->dom, b->dom) &&
             type_eq(a->cod, b->cod);
    case Type::Tup: {
      if (a->comps.size() != b->comps.size()) return false;
      for (size_t i = 0; i < a->comps.size(); ++i)
        if (!type_eq(a->comps[i], b->comps[i])) return false;
      return true;
    }
  }
  return false;
}

std::string to_string(const TypePtr& t) {
  switch (t->kind) {
    case Type::Stor: return to_string(t->stor);
    case Type::Arrow: {
      std::string d = to_string(t->dom);
      if (t->dom->kind == Type::Arrow) d = "(" + d + ")";
      return d + " -> " + to_string(t->cod);
    }
    case Type::Pi:
      return "Pi " + to_string(t->pat) + " : " + to_string(t->dom) + " . " +
             to_string(t->cod);
    case Type::Tup: {
      std::string s = "<";
      for (size_t i = 0; i < t->comps.size(); ++i) {
        if (i) s += ", ";
        s += to_string(t->comps[i]);
      }
      return s + ">";
    }
  }
  return "?";
}

bool optype_eq(const OpType& a, const OpType& b) {
  if (a.kind != b.kind || a.inputs.size() != b.inputs.size()) return false;
  for (size_t i = 0; i < a.inputs.size(); ++i)
    if (!stype_eq(a.inputs[i], b.inputs[i])) return false;
  return stype_eq(a.output, b.output);
}

std::string to_string(const OpType& t) {
  if (t.inputs.empty()) return to_string(t.output);
  std::string s = "(";
  for (size_t i = 0; i < t.inputs.size(); ++i) {
    if (i) s += ", ";
    s += to_string(t.inputs[i]);
  }
  return s + ") -> " + to_string(t.output);
}

ExprPtr Expr::var(std::string n) {
  auto e = std::make_shared<Expr>();
  e->kind = Var;
  e->name = std::move(n);
  return e;
}

ExprPtr Expr::op(std::string n, std::vector<ExprPtr> as) {
  auto e = std::make_shared<Expr>();
  e->kind = Op;
  e->name = std::move(n);
  e->args = std::move(as);
  return e;
}

ExprPtr Expr::nil() {
  auto e = std::make_shared<Expr>();
  e->kind = Nil;
  return e;
}

ExprPtr Expr::cons(ExprPtr h, ExprPtr t) {
  auto e = std::make_shared<Expr>();
  e->kind = Cons;
  e->args = {std::move(h), std::move(t)};
  return e;
}

ExprPtr Expr::forced_cons(ExprPtr d, ExprPtr h, ExprPtr t) {
  auto e = std::make_shared<Expr>();
  e->kind = ForcedConsE;
  e->args = {std::move(d), std::move(h), std::move(t)};
  return e;
}

ExprPtr Expr::tup(std::vector<ExprPtr> as) {
  auto e = std::make_shared<Expr>();
  e->kind = Tup;
  e->args = std::move(as);
  return e;
}

ExprPtr Expr::app(std::string f, ExprPtr arg) {
  auto e = std::make_shared<Expr>();
  e->kind = App;
  e->name = std::move(f);
  e->a = std::move(arg);
  return e;
}

ExprPtr Expr::let(PatternPtr p, ExprPtr bound, ExprPtr body) {
  auto e = std::make_shared<Expr>();
  e->kind = Let;
  e->pat = std::move(p);
  e->a = std::move(bound);
  e->b = std::move(body);
  return e;
}

ExprPtr Expr::ifx(ExprPtr c0, ExprPtr t, ExprPtr e0) {
  auto e = std::make_shared<Expr>();
  e->kind = If;
  e->a = std::move(c0);
  e->b = std::move(t);
  e->c = std::move(e0);
  return e;
}

ExprPtr Expr::casex(ExprPtr scrut, ExprPtr nilb, std::string z1, std::string z2,
                    ExprPtr consb) {
  auto e = std::make_shared<Expr>();
  e->kind = Case;
  e->a = std::move(scrut);
  e->b = std::move(nilb);
  e->z1 = std::move(z1);
  e->z2 = std::move(z2);
  e->c = std::move(consb);
  return e;
}

bool is_occurrence(const Expr& e) {
  return e.kind == Expr::Op || e.kind == Expr::Nil || e.kind == Expr::Cons ||
         e.kind == Expr::ForcedConsE;
}

// ---------------------------------------------------------------------------
// Builtins

bool is_int_literal(const std::string& s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + i, s.end(), [](char c) { return std::isdigit((unsigned char)c); });
}

static std::vector<Builtin> make_builtins() {
  const PreType I = PreType::intp();
  const PreType B = PreType::boolp();
  const PreType A = PreType::arrayp();
  std::vector<Builtin> t;
  auto add = [&](std::string n, std::vector<PreType> in, PreType out) {
    Builtin b;
    b.name = std::move(n);
    b.arity = (int)in.size();
    b.in = std::move(in);
    b.out = out;
    b.in_poly.assign(b.in.size(), false);
    t.push_back(std::move(b));
  };
  add("eqz", {I}, B);
  add("sub1", {I}, I);
  add("add1", {I}, I);
  add("dbl", {I}, I);
  add("add", {I, I}, I);
  add("mul", {I, I}, I);
  add("eq", {I, I}, B);
  add("leq", {I, I}, B);
  add("get", {A, I}, I);
  add("set", {A, I, I}, A);
  // getd: forced read, the third input exists only to be destroyed/overwritten
  add("getd", {A, I, I}, I);
  // id and the projections are pretype-polymorphic
  {
    Builtin b;
    b.name = "id";
    b.arity = 1;
    b.in = {I};
    b.in_poly = {true};
    b.out = I;
    b.out_poly = true;
    b.out_from_input = 0;
    t.push_back(b);
  }
  for (int k = 0; k < 2; ++k) {
    Builtin b;
    b.name = k == 0 ? "pi1" : "pi2";
    b.arity = 2;
    b.in = {I, I};
    b.in_poly = {true, true};
    b.out = I;
    b.out_poly = true;
    b.out_from_input = k;
    t.push_back(b);
  }
  return t;
}

const Builtin* find_builtin(const std::string& name) {
  static const std::vector<Builtin> table = make_builtins();
  for (auto& b : table)
    if (b.name == name) return &b;
  return nullptr;
}

}  // namespace l1
