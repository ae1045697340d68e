#include "l1/core.hpp"

#include <functional>

namespace l1 {

// ---------------------------------------------------------------------------
// Free variables

static void fv(const ExprPtr& e, std::set<std::string>& out) {
  switch (e->kind) {
    case Expr::Var: out.insert(e->name); break;
    case Expr::Op:
    case Expr::Cons:
    case Expr::ForcedConsE:
    case Expr::Tup:
      for (auto& a : e->args) fv(a, out);
      break;
    case Expr::Nil: break;
    case Expr::App:
      out.insert(e->name);
      fv(e->a, out);
      break;
    case Expr::Let: {
      fv(e->a, out);
      std::set<std::string> body;
      fv(e->b, body);
      for (auto& v : pattern_vars(e->pat)) body.erase(v);
      out.insert(body.begin(), body.end());
      break;
    }
    case Expr::If:
      fv(e->a, out);
      fv(e->b, out);
      fv(e->c, out);
      break;
    case Expr::Case: {
      fv(e->a, out);
      fv(e->b, out);
      std::set<std::string> consb;
      fv(e->c, consb);
      consb.erase(e->z1);
      consb.erase(e->z2);
      out.insert(consb.begin(), consb.end());
      break;
    }
  }
}

std::set<std::string> free_vars(const ExprPtr& e) {
  std::set<std::string> out;
  fv(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Substitution

static void build_subst_rec(const PatternPtr& p, const PatternPtr& to, Subst& s) {
  if (p->is_unit()) return;  // trivial substitution
  if (p->kind == Pattern::Var) {
    s[p->name] = to;
    return;
  }
  if (to->kind != Pattern::Tuple || to->comps.size() != p->comps.size())
    throw Error("subst", "pattern shape mismatch: " + to_string(p) + " vs " + to_string(to));
  for (size_t i = 0; i < p->comps.size(); ++i) build_subst_rec(p->comps[i], to->comps[i], s);
}

Subst build_subst(const PatternPtr& p, const PatternPtr& to) {
  Subst s;
  build_subst_rec(p, to, s);
  return s;
}

static std::string subst_name(const Subst& s, const std::string& n, bool must_be_var) {
  auto it = s.find(n);
  if (it == s.end()) return n;
  if (it->second->kind != Pattern::Var) {
    if (must_be_var)
      throw Error("subst", "cannot substitute pattern " + to_string(it->second) +
                               " for variable-position name " + n);
    return n;
  }
  return it->second->name;
}

static Qual subst_qual(const Subst& s, const Qual& q) {
  if (q.kind != QualKind::Var) return q;
  Qual r = q;
  r.var = subst_name(s, q.var, true);
  return r;
}

static SType subst_stype(const Subst& s, const SType& e);

static PreType subst_pretype(const Subst& s, const PreType& p) {
  if (p.kind != PreType::List) return p;
  PreType r = p;
  r.elem = std::make_shared<SType>(subst_stype(s, *p.elem));
  return r;
}

static SType subst_stype(const Subst& s, const SType& e) {
  return {subst_qual(s, e.q), subst_pretype(s, e.p)};
}

static OpType subst_ann(const Subst& s, const OpType& t) {
  OpType r = t;
  for (auto& in : r.inputs) in = subst_stype(s, in);
  r.output = subst_stype(s, r.output);
  return r;
}

static ExprPtr pattern_to_expr(const PatternPtr& p) {
  if (p->kind == Pattern::Var) return Expr::var(p->name);
  std::vector<ExprPtr> comps;
  comps.reserve(p->comps.size());
  for (auto& c : p->comps) comps.push_back(pattern_to_expr(c));
  return Expr::tup(std::move(comps));
}

ExprPtr apply_subst(const Subst& s, const ExprPtr& e) {
  if (s.empty()) return e;
  auto with_ann = [&](std::shared_ptr<Expr> n) {
    if (n->ann) n->ann = subst_ann(s, *n->ann);
    return n;
  };
  switch (e->kind) {
    case Expr::Var: {
      auto it = s.find(e->name);
      if (it == s.end()) return e;
      return pattern_to_expr(it->second);
    }
    case Expr::Op: {
      auto n = std::make_shared<Expr>(*e);
      for (auto& a : n->args) a = apply_subst(s, a);
      return with_ann(n);
    }
    case Expr::Nil: {
      auto n = std::make_shared<Expr>(*e);
      return with_ann(n);
    }
    case Expr::Cons:
    case Expr::ForcedConsE:
    case Expr::Tup: {
      auto n = std::make_shared<Expr>(*e);
      for (auto& a : n->args) a = apply_subst(s, a);
      return with_ann(n);
    }
    case Expr::App: {
      auto n = std::make_shared<Expr>(*e);
      n->name = subst_name(s, e->name, true);
      n->a = apply_subst(s, e->a);
      return n;
    }
    case Expr::Let: {
      auto n = std::make_shared<Expr>(*e);
      n->a = apply_subst(s, e->a);
      Subst inner = s;
      for (auto& v : pattern_vars(e->pat)) inner.erase(v);
      n->b = apply_subst(inner, e->b);
      return n;
    }
    case Expr::If: {
      auto n = std::make_shared<Expr>(*e);
      n->a = apply_subst(s, e->a);
      n->b = apply_subst(s, e->b);
      n->c = apply_subst(s, e->c);
      return n;
    }
    case Expr::Case: {
      auto n = std::make_shared<Expr>(*e);
      n->a = apply_subst(s, e->a);
      n->b = apply_subst(s, e->b);
      Subst inner = s;
      inner.erase(e->z1);
      inner.erase(e->z2);
      n->c = apply_subst(inner, e->c);
      return n;
    }
  }
  return e;
}

ExprPtr subst(const PatternPtr& p, const PatternPtr& to, const ExprPtr& e) {
  return apply_subst(build_subst(p, to), e);
}

// ---------------------------------------------------------------------------
// Flattening

static void flatten_rec(const PatternPtr& p, const TypePtr& t,
                        std::vector<std::pair<std::string, TypePtr>>& out) {
  if (p->is_unit()) return;  // matches anything, binds nothing
  if (p->kind == Pattern::Var) {
    if (t->kind == Type::Tup)
      throw Error("flatten", "variable " + p->name + " cannot carry tuple type " + to_string(t));
    out.emplace_back(p->name, t);
    return;
  }
  if (t->kind != Type::Tup || t->comps.size() != p->comps.size())
    throw Error("flatten", "shape mismatch: " + to_string(p) + " vs " + to_string(t));
  for (size_t i = 0; i < p->comps.size(); ++i) flatten_rec(p->comps[i], t->comps[i], out);
}

std::vector<std::pair<std::string, TypePtr>> flatten(const PatternPtr& p, const TypePtr& t) {
  std::vector<std::pair<std::string, TypePtr>> out;
  flatten_rec(p, t, out);
  return out;
}

// ---------------------------------------------------------------------------
// Occurrences

static void walk_occ(const ExprPtr& e, const std::function<void(const ExprPtr&)>& f) {
  if (is_occurrence(*e)) f(e);
  switch (e->kind) {
    case Expr::Var:
    case Expr::Nil: break;
    case Expr::Op:
    case Expr::Cons:
    case Expr::ForcedConsE:
    case Expr::Tup:
      for (auto& a : e->args) walk_occ(a, f);
      break;
    case Expr::App: walk_occ(e->a, f); break;
    case Expr::Let:
      walk_occ(e->a, f);
      walk_occ(e->b, f);
      break;
    case Expr::If:
      walk_occ(e->a, f);
      walk_occ(e->b, f);
      walk_occ(e->c, f);
      break;
    case Expr::Case:
      walk_occ(e->a, f);
      walk_occ(e->b, f);
      walk_occ(e->c, f);
      break;
  }
}

static void walk_program_occ(const Program& prog, const std::function<void(const ExprPtr&)>& f) {
  for (auto& [name, v] : prog.store)
    if (v.kind == StoreInit::Clo) walk_occ(v.body, f);
  walk_occ(prog.main, f);
}

static std::string occ_display_name(const Expr& e) {
  switch (e.kind) {
    case Expr::Op: return e.name;
    case Expr::Nil: return "nil";
    case Expr::Cons: return "cons";
    case Expr::ForcedConsE: return "consd";
    default: return "?";
  }
}

std::vector<OccInfo> occurrences(const Program& prog) {
  std::vector<OccInfo> out;
  walk_program_occ(prog, [&](const ExprPtr& e) {
    out.push_back({e->occ, e->kind, occ_display_name(*e), (int)e->args.size()});
  });
  return out;
}

// Rebuild with occurrence ids assigned in the canonical order.
static ExprPtr renumber(const ExprPtr& e, int& next) {
  auto n = std::make_shared<Expr>(*e);
  if (is_occurrence(*e)) n->occ = next++;
  switch (e->kind) {
    case Expr::Var:
    case Expr::Nil: break;
    case Expr::Op:
    case Expr::Cons:
    case Expr::ForcedConsE:
    case Expr::Tup:
      for (auto& a : n->args) a = renumber(a, next);
      break;
    case Expr::App: n->a = renumber(e->a, next); break;
    case Expr::Let:
      n->a = renumber(e->a, next);
      n->b = renumber(e->b, next);
      break;
    case Expr::If:
      n->a = renumber(e->a, next);
      n->b = renumber(e->b, next);
      n->c = renumber(e->c, next);
      break;
    case Expr::Case:
      n->a = renumber(e->a, next);
      n->b = renumber(e->b, next);
      n->c = renumber(e->c, next);
      break;
  }
  return n;
}

Program number_occurrences(Program prog) {
  int next = 0;
  for (auto& [name, v] : prog.store)
    if (v.kind == StoreInit::Clo) v.body = renumber(v.body, next);
  prog.main = renumber(prog.main, next);
  return prog;
}

// ---------------------------------------------------------------------------
// Qualification application

static Expr::Kind kind_of_optype(const OpType& t) {
  switch (t.kind) {
    case OpKind::Operator: return Expr::Op;
    case OpKind::NilCtor: return Expr::Nil;
    case OpKind::ConsCtor: return Expr::Cons;
    case OpKind::ForcedCons: return Expr::ForcedConsE;
  }
  return Expr::Op;
}

static ExprPtr apply_quals_expr(const ExprPtr& e, const QualificationList& q) {
  auto n = std::make_shared<Expr>(*e);
  if (is_occurrence(*e)) {
    int i = e->occ;
    if (i < 0 || i >= (int)q.occ_types.size())
      throw Error("align", "occurrence id " + std::to_string(i) + " out of range", i);
    const OpType& t = q.occ_types[i];
    if (kind_of_optype(t) != e->kind)
      throw Error("align", "occurrence kind mismatch at " + std::to_string(i), i);
    if (q.occ_names[i] != occ_display_name(*e))
      throw Error("align", "occurrence name mismatch at " + std::to_string(i) + ": program has " +
                               occ_display_name(*e) + ", list has " + q.occ_names[i], i);
    if (t.inputs.size() != e->args.size())
      throw Error("align", "arity mismatch at occurrence " + std::to_string(i), i);
    n->ann = t;
  }
  switch (e->kind) {
    case Expr::Var:
    case Expr::Nil: break;
    case Expr::Op:
    case Expr::Cons:
    case Expr::ForcedConsE:
    case Expr::Tup:
      for (auto& a : n->args) a = apply_quals_expr(a, q);
      break;
    case Expr::App: n->a = apply_quals_expr(e->a, q); break;
    case Expr::Let:
      n->a = apply_quals_expr(e->a, q);
      n->b = apply_quals_expr(e->b, q);
      break;
    case Expr::If:
      n->a = apply_quals_expr(e->a, q);
      n->b = apply_quals_expr(e->b, q);
      n->c = apply_quals_expr(e->c, q);
      break;
    case Expr::Case:
      n->a = apply_quals_expr(e->a, q);
      n->b = apply_quals_expr(e->b, q);
      n->c = apply_quals_expr(e->c, q);
      // global case phrases are always case^lo; linear ones are elaborated by
      // the checker from the scrutinee type
      if (q.global) n->caseq = Qual::lo();
      break;
  }
  return n;
}

Program apply_qualification(const Program& prog, const QualificationList& quals) {
  auto occs = occurrences(prog);
  if (occs.size() != quals.occ_types.size())
    throw Error("align", "qualification has " + std::to_string(quals.occ_types.size()) +
                             " entries, program has " + std::to_string(occs.size()) +
                             " occurrences");
  Program out = prog;
  for (auto& [name, v] : out.store)
    if (v.kind == StoreInit::Clo) v.body = apply_quals_expr(v.body, quals);
  out.main = apply_quals_expr(out.main, quals);
  return out;
}

static ExprPtr strip_expr(const ExprPtr& e) {
  auto n = std::make_shared<Expr>(*e);
  n->ann.reset();
  n->caseq.reset();
  switch (e->kind) {
    case Expr::Var:
    case Expr::Nil: break;
    case Expr::Op:
    case Expr::Cons:
    case Expr::ForcedConsE:
    case Expr::Tup:
      for (auto& a : n->args) a = strip_expr(a);
      break;
    case Expr::App: n->a = strip_expr(e->a); break;
    case Expr::Let:
      n->a = strip_expr(e->a);
      n->b = strip_expr(e->b);
      break;
    case Expr::If:
      n->a = strip_expr(e->a);
      n->b = strip_expr(e->b);
      n->c = strip_expr(e->c);
      break;
    case Expr::Case:
      n->a = strip_expr(e->a);
      n->b = strip_expr(e->b);
      n->c = strip_expr(e->c);
      break;
  }
  return n;
}

Program strip_annotations(const Program& prog) {
  Program out = prog;
  for (auto& [name, v] : out.store)
    if (v.kind == StoreInit::Clo) v.body = strip_expr(v.body);
  out.main = strip_expr(out.main);
  return out;
}

// ---------------------------------------------------------------------------
// Base skeleton inference (qualifier-free, unification)

namespace {

struct ITy;
using IPtr = std::shared_ptr<ITy>;

struct ITy {
  enum K { IVar, IInt, IBool, IArray, IList, IArrow, ITup } k = IVar;
  IPtr link;  // IVar: union-find forwarding
  IPtr elem, dom, cod;
  std::vector<IPtr> comps;
  int id = 0;
};

struct Infer {
  int next_var = 0;
  std::vector<std::pair<int, std::vector<IPtr>>> occ_sigs;  // occ -> input..output I-types
  const Program& prog;

  explicit Infer(const Program& p) : prog(p) {}

  IPtr fresh() {
    auto t = std::make_shared<ITy>();
    t->k = ITy::IVar;
    t->id = next_var++;
    return t;
  }
  static IPtr mk(ITy::K k) {
    auto t = std::make_shared<ITy>();
    t->k = k;
    return t;
  }
  static IPtr list_of(IPtr e) {
    auto t = mk(ITy::IList);
    t->elem = std::move(e);
    return t;
  }
  static IPtr arrow_of(IPtr d, IPtr c) {
    auto t = mk(ITy::IArrow);
    t->dom = std::move(d);
    t->cod = std::move(c);
    return t;
  }

  static IPtr find(IPtr t) {
    while (t->k == ITy::IVar && t->link) t = t->link;
    return t;
  }

  static bool occurs(const IPtr& v, IPtr t) {
    t = find(t);
    if (t == v) return true;
    switch (t->k) {
      case ITy::IList: return occurs(v, t->elem);
      case ITy::IArrow: return occurs(v, t->dom) || occurs(v, t->cod);
      case ITy::ITup:
        for (auto& c : t->comps)
          if (occurs(v, c)) return true;
        return false;
      default: return false;
    }
  }

  void unify(IPtr a, IPtr b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a->k == ITy::IVar) {
      if (occurs(a, b)) throw Error("type", "recursive base type");
      a->link = b;
      return;
    }
    if (b->k == ITy::IVar) {
      unify(b, a);
      return;
    }
    if (a->k != b->k) throw Error("type", "base type mismatch");
    switch (a->k) {
      case ITy::IList: unify(a->elem, b->elem); break;
      case ITy::IArrow:
        unify(a->dom, b->dom);
        unify(a->cod, b->cod);
        break;
      case ITy::ITup: {
        if (a->comps.size() != b->comps.size()) throw Error("type", "tuple arity mismatch");
        for (size_t i = 0; i < a->comps.size(); ++i) unify(a->comps[i], b->comps[i]);
        break;
      }
      default: break;
    }
  }

  IPtr base(PreType::Kind k) {
    switch (k) {
      case PreType::Int: return mk(ITy::IInt);
      case PreType::Bool: return mk(ITy::IBool);
      case PreType::Array: return mk(ITy::IArray);
      default: throw Error("type", "unexpected base");
    }
  }

  void bind_pattern(const PatternPtr& p, IPtr t, std::map<std::string, IPtr>& env) {
    if (p->is_unit()) return;
    if (p->kind == Pattern::Var) {
      env[p->name] = std::move(t);
      return;
    }
    auto tup = mk(ITy::ITup);
    for (size_t i = 0; i < p->comps.size(); ++i) tup->comps.push_back(fresh());
    unify(t, tup);
    for (size_t i = 0; i < p->comps.size(); ++i) bind_pattern(p->comps[i], tup->comps[i], env);
  }

  IPtr infer(const ExprPtr& e, std::map<std::string, IPtr> env) {
    switch (e->kind) {
      case Expr::Var: {
        auto it = env.find(e->name);
        if (it == env.end()) throw Error("type", "unbound variable " + e->name);
        return it->second;
      }
      case Expr::Op: {
        std::vector<IPtr> sig;
        IPtr out;
        if (is_int_literal(e->name) ||
            std::find(prog.params.begin(), prog.params.end(), e->name) != prog.params.end()) {
          if (!e->args.empty()) throw Error("type", "constant " + e->name + " takes no arguments");
          out = mk(ITy::IInt);
        } else {
          const Builtin* b = find_builtin(e->name);
          if (!b) throw Error("type", "unknown operator " + e->name);
          if ((int)e->args.size() != b->arity)
            throw Error("type", "operator " + e->name + " arity mismatch", e->occ);
          for (int i = 0; i < b->arity; ++i) {
            IPtr in = b->in_poly[i] ? fresh() : base(b->in[i].kind);
            sig.push_back(in);
            unify(infer(e->args[i], env), in);
          }
          out = b->out_poly ? sig[b->out_from_input] : base(b->out.kind);
        }
        sig.push_back(out);
        occ_sigs.emplace_back(e->occ, sig);
        return out;
      }
      case Expr::Nil: {
        auto t = list_of(fresh());
        occ_sigs.emplace_back(e->occ, std::vector<IPtr>{t});
        return t;
      }
      case Expr::Cons: {
        auto h = infer(e->args[0], env);
        auto t = infer(e->args[1], env);
        unify(t, list_of(h));
        occ_sigs.emplace_back(e->occ, std::vector<IPtr>{h, t, t});
        return t;
      }
      case Expr::ForcedConsE: {
        auto d = infer(e->args[0], env);
        auto h = infer(e->args[1], env);
        auto t = infer(e->args[2], env);
        unify(t, list_of(h));
        unify(d, t);
        occ_sigs.emplace_back(e->occ, std::vector<IPtr>{d, h, t, t});
        return t;
      }
      case Expr::Tup: {
        auto t = mk(ITy::ITup);
        for (auto& a : e->args) t->comps.push_back(infer(a, env));
        return t;
      }
      case Expr::App: {
        auto it = env.find(e->name);
        if (it == env.end()) throw Error("type", "unbound function " + e->name);
        auto d = fresh();
        auto c = fresh();
        unify(it->second, arrow_of(d, c));
        unify(infer(e->a, env), d);
        return c;
      }
      case Expr::Let: {
        auto t = infer(e->a, env);
        bind_pattern(e->pat, t, env);
        return infer(e->b, env);
      }
      case Expr::If: {
        unify(infer(e->a, env), mk(ITy::IBool));
        auto t = infer(e->b, env);
        unify(t, infer(e->c, env));
        return t;
      }
      case Expr::Case: {
        auto elem = fresh();
        unify(infer(e->a, env), list_of(elem));
        auto t = infer(e->b, env);
        env[e->z1] = elem;
        env[e->z2] = list_of(elem);
        unify(t, infer(e->c, env));
        return t;
      }
    }
    throw Error("type", "unreachable");
  }
};

// Materialization: unresolved variables default to int.
SType materialize_stype(const IPtr& t);

PreType materialize_pre(IPtr t) {
  t = Infer::find(t);
  switch (t->k) {
    case ITy::IVar:
    case ITy::IInt: return PreType::intp();
    case ITy::IBool: return PreType::boolp();
    case ITy::IArray: return PreType::arrayp();
    case ITy::IList: return PreType::list(materialize_stype(t->elem));
    default: throw Error("type", "storable position holds a non-storable type");
  }
}

SType materialize_stype(const IPtr& t) { return {Qual::un(), materialize_pre(t)}; }

TypePtr materialize_type(IPtr t) {
  t = Infer::find(t);
  switch (t->k) {
    case ITy::IArrow:
      return Type::arrow(materialize_type(t->dom), materialize_type(t->cod));
    case ITy::ITup: {
      std::vector<TypePtr> cs;
      for (auto& c : t->comps) cs.push_back(materialize_type(c));
      return Type::tup(cs);
    }
    default: return Type::stor_t(materialize_stype(t));
  }
}

}  // namespace

Skeleton infer_skeleton(const Program& prog) {
  Infer inf(prog);
  std::map<std::string, IPtr> store_env;
  for (auto& [name, v] : prog.store) {
    IPtr t;
    switch (v.kind) {
      case StoreInit::IntLit:
      case StoreInit::ParamRef: t = Infer::mk(ITy::IInt); break;
      case StoreInit::BoolLit: t = Infer::mk(ITy::IBool); break;
      case StoreInit::Iota: t = Infer::mk(ITy::IArray); break;
      case StoreInit::NilV: t = Infer::list_of(inf.fresh()); break;
      case StoreInit::ConsV: {
        auto hit = store_env.find(v.head);
        auto tit = store_env.find(v.tail);
        if (hit == store_env.end() || tit == store_env.end())
          throw Error("type", "cons cell references unbound store name");
        inf.unify(tit->second, Infer::list_of(hit->second));
        t = tit->second;
        break;
      }
      case StoreInit::Clo: {
        auto dom = inf.fresh();
        auto cod = inf.fresh();
        t = Infer::arrow_of(dom, cod);
        auto env = store_env;
        env[name] = t;  // recursive binding
        inf.bind_pattern(v.pat, dom, env);
        inf.unify(inf.infer(v.body, env), cod);
        break;
      }
    }
    store_env[name] = t;
  }
  auto main_ty = inf.infer(prog.main, store_env);

  Skeleton sk;
  auto occs = occurrences(prog);
  sk.occ_types.resize(occs.size());
  sk.occ_names.resize(occs.size());
  std::vector<bool> filled(occs.size(), false);
  for (auto& [occ, sig] : inf.occ_sigs) {
    if (occ < 0 || occ >= (int)occs.size()) throw Error("type", "occurrence out of range");
    OpType t;
    switch (occs[occ].kind) {
      case Expr::Op: t.kind = OpKind::Operator; break;
      case Expr::Nil: t.kind = OpKind::NilCtor; break;
      case Expr::Cons: t.kind = OpKind::ConsCtor; break;
      case Expr::ForcedConsE: t.kind = OpKind::ForcedCons; break;
      default: break;
    }
    for (size_t i = 0; i + 1 < sig.size(); ++i)
      t.inputs.push_back({Qual::un(), materialize_pre(sig[i])});
    t.output = {Qual::un(), materialize_pre(sig.back())};
    sk.occ_types[occ] = std::move(t);
    sk.occ_names[occ] = occs[occ].name;
    filled[occ] = true;
  }
  for (size_t i = 0; i < filled.size(); ++i)
    if (!filled[i]) throw Error("type", "occurrence " + std::to_string(i) + " never inferred");
  for (auto& [name, v] : prog.store) sk.ctx.emplace_back(name, materialize_type(store_env[name]));
  sk.main_type = materialize_type(main_ty);
  return sk;
}

// ---------------------------------------------------------------------------
// Trivialization

static SType requalify_stype(const SType& e, const Qual& q);

static PreType requalify_pre(const PreType& p, const Qual& q) {
  if (p.kind != PreType::List) return p;
  PreType r = p;
  r.elem = std::make_shared<SType>(requalify_stype(*p.elem, q));
  return r;
}

static SType requalify_stype(const SType& e, const Qual& q) {
  return {q, requalify_pre(e.p, q)};
}

static TypePtr requalify_type(const TypePtr& t, const Qual& q, const PatternPtr& pi_pat) {
  switch (t->kind) {
    case Type::Stor: return Type::stor_t(requalify_stype(t->stor, q));
    case Type::Arrow:
      if (pi_pat)  // global system replaces arrows by Pi over the lambda's pattern
        return Type::pi(pi_pat, requalify_type(t->dom, q, nullptr),
                        requalify_type(t->cod, q, nullptr));
      return Type::arrow(requalify_type(t->dom, q, nullptr), requalify_type(t->cod, q, nullptr));
    case Type::Pi:
      return Type::pi(t->pat, requalify_type(t->dom, q, nullptr),
                      requalify_type(t->cod, q, nullptr));
    case Type::Tup: {
      std::vector<TypePtr> cs;
      for (auto& c : t->comps) cs.push_back(requalify_type(c, q, nullptr));
      return Type::tup(cs);
    }
  }
  return t;
}

QualificationList trivialize(const Program& prog, System sys) {
  Skeleton sk = infer_skeleton(prog);
  Qual q = sys == System::Linear ? Qual::un() : Qual::lo();
  QualificationList out;
  out.global = sys == System::Global;
  out.occ_names = sk.occ_names;
  for (auto& t : sk.occ_types) {
    OpType r = t;
    for (auto& in : r.inputs) in = requalify_stype(in, q);
    r.output = requalify_stype(r.output, q);
    out.occ_types.push_back(std::move(r));
  }
  std::map<std::string, PatternPtr> pats;
  for (auto& [name, v] : prog.store)
    if (v.kind == StoreInit::Clo) pats[name] = v.pat;
  for (auto& [name, t] : sk.ctx) {
    PatternPtr p = nullptr;
    if (out.global) {
      auto it = pats.find(name);
      if (it != pats.end()) p = it->second;
    }
    out.ctx.emplace_back(name, requalify_type(t, q, p));
  }
  return out;
}

}  // namespace l1
