#include "l1/global.hpp"

#include <algorithm>
#include <functional>

namespace l1 {

// ---------------------------------------------------------------------------
// Pat poset

bool patelem_eq(const PatElem& a, const PatElem& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == PatElem::Var) return a.name == b.name;
  if (a.kind == PatElem::Tup) {
    if (a.comps.size() != b.comps.size()) return false;
    for (size_t i = 0; i < a.comps.size(); ++i)
      if (!patelem_eq(a.comps[i], b.comps[i])) return false;
  }
  return true;
}

bool pat_leq(const PatElem& a, const PatElem& b) {
  if (a.kind == PatElem::Lo) return true;
  if (a.kind == PatElem::Var) return b.kind == PatElem::Var && a.name == b.name;
  if (b.kind != PatElem::Tup || a.comps.size() != b.comps.size()) return false;
  for (size_t i = 0; i < a.comps.size(); ++i)
    if (!pat_leq(a.comps[i], b.comps[i])) return false;
  return true;
}

PatElem embed_pattern(const PatternPtr& p) {
  if (p->kind == Pattern::Var) return PatElem::var(p->name);
  std::vector<PatElem> cs;
  cs.reserve(p->comps.size());
  for (auto& c : p->comps) cs.push_back(embed_pattern(c));
  return PatElem::tup(std::move(cs));
}

std::string to_string(const PatElem& p) {
  switch (p.kind) {
    case PatElem::Lo: return "lo";
    case PatElem::Var: return p.name;
    case PatElem::Tup: {
      std::string s = "<";
      for (size_t i = 0; i < p.comps.size(); ++i) {
        if (i) s += ", ";
        s += to_string(p.comps[i]);
      }
      return s + ">";
    }
  }
  return "?";
}

PatElem qual_to_patelem(const Qual& q) {
  if (q.kind == QualKind::Lo) return PatElem::lo();
  if (q.kind == QualKind::Var) return PatElem::var(q.var);
  throw Error("type", "qualifier " + to_string(q) + " is not a global qualifier");
}

PatElem rho(const TypePtr& t) {
  switch (t->kind) {
    case Type::Stor: return qual_to_patelem(t->stor.q);
    case Type::Pi: return PatElem::lo();
    case Type::Tup: {
      std::vector<PatElem> cs;
      for (auto& c : t->comps) cs.push_back(rho(c));
      return PatElem::tup(std::move(cs));
    }
    case Type::Arrow: throw Error("type", "arrow type in the global system");
  }
  return PatElem::lo();
}

TypePtr pat_dot(const PatElem& p, const TypePtr& t) {
  if (p.kind == PatElem::Lo) return t;
  if (p.kind == PatElem::Tup && p.comps.empty()) return t;  // unit carries nothing
  if (p.kind == PatElem::Var) {
    if (t->kind != Type::Stor)
      throw Error("patdot", "variable " + p.name + " over non-storable " + to_string(t));
    SType s = t->stor;
    s.q = Qual::gvar(p.name);
    return Type::stor_t(s);
  }
  if (t->kind != Type::Tup || t->comps.size() != p.comps.size())
    throw Error("patdot", "shape mismatch: " + to_string(p) + " over " + to_string(t));
  std::vector<TypePtr> cs;
  for (size_t i = 0; i < p.comps.size(); ++i) cs.push_back(pat_dot(p.comps[i], t->comps[i]));
  return Type::tup(cs);
}

PatElem pat_restrict(const PatternPtr& p, const std::set<std::string>& a) {
  if (p->kind == Pattern::Var)
    return a.count(p->name) ? PatElem::var(p->name) : PatElem::lo();
  std::vector<PatElem> cs;
  cs.reserve(p->comps.size());
  for (auto& c : p->comps) cs.push_back(pat_restrict(c, a));
  return PatElem::tup(std::move(cs));
}

namespace {

// Pattern variable -> scalar PatElem bindings. Lo expands over any shape.
void bind_patelem(const PatternPtr& p, const PatElem& q, std::map<std::string, PatElem>& out) {
  if (p->is_unit()) return;
  if (p->kind == Pattern::Var) {
    out[p->name] = q;
    return;
  }
  if (q.kind == PatElem::Lo) {
    for (auto& c : p->comps) bind_patelem(c, PatElem::lo(), out);
    return;
  }
  if (q.kind != PatElem::Tup || q.comps.size() != p->comps.size())
    throw Error("type", "store information " + to_string(q) + " does not fit pattern " +
                            to_string(p));
  for (size_t i = 0; i < p->comps.size(); ++i) bind_patelem(p->comps[i], q.comps[i], out);
}

Qual subst_qual_map(const std::map<std::string, PatElem>& m, const Qual& q) {
  if (q.kind != QualKind::Var) return q;
  auto it = m.find(q.var);
  if (it == m.end()) return q;
  const PatElem& pe = it->second;
  if (pe.kind == PatElem::Lo) return Qual::lo();
  if (pe.kind == PatElem::Var) return Qual::gvar(pe.name);
  throw Error("type", "tuple store information in a qualifier position");
}

SType subst_stype_map(const std::map<std::string, PatElem>& m, const SType& s) {
  SType r = s;
  r.q = subst_qual_map(m, s.q);
  if (r.p.kind == PreType::List)
    r.p.elem = std::make_shared<SType>(subst_stype_map(m, *s.p.elem));
  return r;
}

TypePtr subst_type_map(std::map<std::string, PatElem> m, const TypePtr& t) {
  if (m.empty()) return t;
  switch (t->kind) {
    case Type::Stor: return Type::stor_t(subst_stype_map(m, t->stor));
    case Type::Pi: {
      auto inner = m;
      for (auto& v : pattern_vars(t->pat)) inner.erase(v);
      return Type::pi(t->pat, subst_type_map(m, t->dom), subst_type_map(inner, t->cod));
    }
    case Type::Tup: {
      std::vector<TypePtr> cs;
      for (auto& c : t->comps) cs.push_back(subst_type_map(m, c));
      return Type::tup(cs);
    }
    case Type::Arrow: throw Error("type", "arrow type in the global system");
  }
  return t;
}

}  // namespace

TypePtr subst_pat_in_type(const PatternPtr& p, const PatElem& q, const TypePtr& t) {
  std::map<std::string, PatElem> m;
  bind_patelem(p, q, m);
  return subst_type_map(std::move(m), t);
}

// ---------------------------------------------------------------------------
// Contexts

bool lo_pred(const TypePtr& v) {
  if (v->kind == Type::Pi || v->kind == Type::Arrow) return true;
  if (v->kind == Type::Stor) return v->stor.q.kind != QualKind::Var;
  return true;
}

const GEntry* g_lookup(const GCtx& g, const std::string& x) {
  for (auto& e : g.entries)
    if (e.name == x) return &e;
  return nullptr;
}

GCtx seq_extend(GCtx g, const std::vector<std::pair<std::string, TypePtr>>& frag) {
  for (auto& [name, ty] : frag) {
    auto it = std::find_if(g.entries.begin(), g.entries.end(),
                           [&](const GEntry& e) { return e.name == name; });
    if (it == g.entries.end()) {
      g.entries.push_back({name, ty});
      g.shadowed.erase(name);
      continue;
    }
    if (gl_pred(it->ty) && gl_pred(ty)) continue;  // cannot be redefined; keep original
    if (lo_pred(it->ty)) {
      g.entries.erase(it);
      g.entries.push_back({name, ty});
      continue;
    }
    // global shadowed by a local: the name disappears
    g.entries.erase(it);
    g.shadowed.insert(name);
  }
  return g;
}

std::set<std::string> type_fvs(const TypePtr& t) {
  std::set<std::string> out;
  std::function<void(const SType&, std::set<std::string>&)> walk_s =
      [&](const SType& s, std::set<std::string>& acc) {
        if (s.q.kind == QualKind::Var) acc.insert(s.q.var);
        if (s.p.kind == PreType::List) walk_s(*s.p.elem, acc);
      };
  std::function<void(const TypePtr&, std::set<std::string>&)> walk =
      [&](const TypePtr& ty, std::set<std::string>& acc) {
        switch (ty->kind) {
          case Type::Stor: walk_s(ty->stor, acc); break;
          case Type::Pi: {
            walk(ty->dom, acc);
            std::set<std::string> cod;
            walk(ty->cod, cod);
            for (auto& v : pattern_vars(ty->pat)) cod.erase(v);
            acc.insert(cod.begin(), cod.end());
            break;
          }
          case Type::Tup:
            for (auto& c : ty->comps) walk(c, acc);
            break;
          case Type::Arrow:
            walk(ty->dom, acc);
            walk(ty->cod, acc);
            break;
        }
      };
  walk(t, out);
  return out;
}

std::set<std::string> globals(const GCtx& g) {
  std::set<std::string> out;
  for (auto& e : g.entries) {
    auto fv = type_fvs(e.ty);
    out.insert(fv.begin(), fv.end());
  }
  return out;
}

std::set<std::string> globals_at(const GCtx& g, const PreType& p) {
  std::set<std::string> out;
  for (auto& e : g.entries)
    if (e.ty->kind == Type::Stor && e.ty->stor.q.kind == QualKind::Var &&
        e.ty->stor.q.var == e.name && pretype_eq(e.ty->stor.p, p))
      out.insert(e.name);
  return out;
}

bool pi_well_formed(const TypePtr& pi) {
  if (pi->kind != Type::Pi) return false;
  return pat_leq(rho(pi->dom), embed_pattern(pi->pat));
}

static void require_type_well_formed(const std::string& who, const TypePtr& t) {
  switch (t->kind) {
    case Type::Pi:
      if (!pi_well_formed(t))
        throw Error("type", "ill-formed Pi type for " + who + ": " + to_string(t) +
                                " (pattern cannot carry the domain's store information)");
      require_type_well_formed(who, t->dom);
      require_type_well_formed(who, t->cod);
      break;
    case Type::Tup:
      for (auto& c : t->comps) require_type_well_formed(who, c);
      break;
    default: break;
  }
}

void require_ctx_well_formed(const GCtx& g) {
  for (auto& e : g.entries) require_type_well_formed(e.name, e.ty);
}

// ---------------------------------------------------------------------------
// Store information

PatElem pinfo(const GCtx& g, const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Var: return PatElem::var(e->name);
    case Expr::Op:
    case Expr::Nil:
    case Expr::Cons:
    case Expr::ForcedConsE: {
      if (!e->ann) throw Error("type", "missing annotation", e->occ);
      return qual_to_patelem(e->ann->output.q);
    }
    case Expr::If: return pinfo(g, e->b);
    case Expr::Case: return pinfo(g, e->b);
    case Expr::Tup: {
      std::vector<PatElem> cs;
      for (auto& a : e->args) cs.push_back(pinfo(g, a));
      return PatElem::tup(std::move(cs));
    }
    case Expr::Let: {
      PatElem bound = pinfo(g, e->a);
      PatElem body = pinfo(g, e->b);
      std::map<std::string, PatElem> m;
      bind_patelem(e->pat, bound, m);
      std::function<PatElem(const PatElem&)> go = [&](const PatElem& pe) -> PatElem {
        if (pe.kind == PatElem::Var) {
          auto it = m.find(pe.name);
          return it == m.end() ? pe : it->second;
        }
        if (pe.kind == PatElem::Tup) {
          std::vector<PatElem> cs;
          for (auto& c : pe.comps) cs.push_back(go(c));
          return PatElem::tup(std::move(cs));
        }
        return pe;
      };
      return go(body);
    }
    case Expr::App: {
      const GEntry* f = g_lookup(g, e->name);
      if (!f || f->ty->kind != Type::Pi)
        throw Error("type", "application of " + e->name + " without a Pi type");
      return rho(subst_pat_in_type(f->ty->pat, pinfo(g, e->a), f->ty->cod));
    }
  }
  throw Error("type", "unreachable");
}

// ---------------------------------------------------------------------------
// Checking / synthesis

namespace {

void require_global_side(const OpType& t, int occ) {
  std::function<void(const SType&)> walk = [&](const SType& s) {
    if (!s.q.is_global_side())
      throw Error("type", "qualifier " + to_string(s.q) + " is not a global qualifier", occ);
    if (s.p.kind == PreType::List) walk(*s.p.elem);
  };
  for (auto& in : t.inputs) walk(in);
  walk(t.output);
}

// Argument target under the modified rules: the declared input promoted to
// the argument's own store information.
TypePtr lift_arg(const PatElem& gi, const TypePtr& declared) {
  if (declared->kind == Type::Pi) return declared;  // functions carry no store info
  if (gi.kind == PatElem::Lo) return declared;
  if (gi.kind == PatElem::Tup && gi.comps.empty()) return declared;
  if (gi.kind == PatElem::Var) {
    if (declared->kind != Type::Stor)
      throw Error("type", "store information " + to_string(gi) + " over " + to_string(declared));
    SType s = declared->stor;
    s.q = Qual::gvar(gi.name);
    return Type::stor_t(s);
  }
  if (declared->kind != Type::Tup || declared->comps.size() != gi.comps.size())
    throw Error("type", "store information " + to_string(gi) + " over " + to_string(declared));
  std::vector<TypePtr> cs;
  for (size_t i = 0; i < gi.comps.size(); ++i)
    cs.push_back(lift_arg(gi.comps[i], declared->comps[i]));
  return Type::tup(cs);
}

void check_occurrence_args(const GCtx& g, const Expr& e) {
  const OpType& t = *e.ann;
  for (size_t i = 0; i < e.args.size(); ++i) {
    PatElem gi = pinfo(g, e.args[i]);
    PatElem declared = qual_to_patelem(t.inputs[i].q);
    if (!pat_leq(declared, gi))
      throw Error("type", "argument " + std::to_string(i + 1) + " of " + e.name +
                              " carries information " + to_string(gi) + ", declared " +
                              to_string(declared),
                  e.occ);
    g_check(g, e.args[i], lift_arg(gi, Type::stor_t(t.inputs[i])));
  }
}

TypePtr synth_occurrence(const GCtx& g, const ExprPtr& e) {
  if (!e->ann) throw Error("type", "missing annotation", e->occ);
  const OpType& t = *e->ann;
  require_global_side(t, e->occ);
  if (t.inputs.size() != e->args.size()) throw Error("type", "arity mismatch", e->occ);
  if (e->kind == Expr::Cons || e->kind == Expr::ForcedConsE) {
    size_t elem_at = e->kind == Expr::Cons ? 0 : 1;
    size_t list_at = e->kind == Expr::Cons ? 1 : 2;
    if (t.output.p.kind != PreType::List || !stype_eq(*t.output.p.elem, t.inputs[elem_at]))
      throw Error("type", "cons element type mismatch", e->occ);
    if (!pretype_eq(t.inputs[list_at].p, t.output.p))
      throw Error("type", "cons list input shape mismatch", e->occ);
    if (e->kind == Expr::ForcedConsE && !pretype_eq(t.inputs[0].p, t.output.p))
      throw Error("type", "forced cons target shape mismatch", e->occ);
  }
  check_occurrence_args(g, *e);
  return Type::stor_t(t.output);
}

TypePtr synth_app(const GCtx& g, const ExprPtr& e) {
  const GEntry* f = g_lookup(g, e->name);
  if (!f) {
    if (g.shadowed.count(e->name))
      throw Error("type", "global " + e->name + " was shadowed by a local binding");
    throw Error("type", "unbound function " + e->name);
  }
  if (f->ty->kind != Type::Pi) throw Error("type", e->name + " is not a function");
  PatElem gi = pinfo(g, e->a);
  if (!pat_leq(rho(f->ty->dom), gi))
    throw Error("type", "argument of " + e->name + " carries information " + to_string(gi) +
                            ", the domain requires " + to_string(rho(f->ty->dom)));
  g_check(g, e->a, lift_arg(gi, f->ty->dom));
  return subst_pat_in_type(f->ty->pat, gi, f->ty->cod);
}

TypePtr synth_let(const GCtx& g, const ExprPtr& e) {
  TypePtr bound = g_synth(g, e->a);
  auto frag = flatten(e->pat, bound);
  GCtx g2 = seq_extend(g, frag);
  TypePtr body = g_synth(g2, e->b);
  return subst_pat_in_type(e->pat, pinfo(g, e->a), body);
}

struct CaseParts {
  SType elem;
  GCtx branch_ctx;
};

CaseParts check_case_header(const GCtx& g, const ExprPtr& e) {
  if (e->caseq && !(e->caseq->kind == QualKind::Lo))
    throw Error("type", "global case phrases must be case^lo");
  TypePtr st = g_synth(g, e->a);
  if (st->kind != Type::Stor || st->stor.p.kind != PreType::List ||
      st->stor.q.kind != QualKind::Lo || st->stor.p.elem->q.kind != QualKind::Lo)
    throw Error("type", "case scrutinee must have type lo [lo P], got " + to_string(st));
  // parameters of the case phrase are forced to be uninformative; a binder
  // that would shadow a global is the incorrect globalization the paper bars
  for (const std::string& z : {e->z1, e->z2}) {
    const GEntry* prev = g_lookup(g, z);
    if (prev && gl_pred(prev->ty))
      throw Error("type", "case binder " + z + " would globalize a case parameter (shadows global " +
                              z + ")");
  }
  SType elem = *st->stor.p.elem;
  GCtx g2 = seq_extend(g, {{e->z1, Type::stor_t(elem)},
                           {e->z2, st}});
  return {elem, g2};
}

}  // namespace

TypePtr g_synth(const GCtx& g, const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Var: {
      const GEntry* ent = g_lookup(g, e->name);
      if (!ent) {
        if (g.shadowed.count(e->name))
          throw Error("type", "global " + e->name + " was shadowed by a local binding");
        throw Error("type", "unbound variable " + e->name);
      }
      return ent->ty;
    }
    case Expr::Op:
    case Expr::Nil:
    case Expr::Cons:
    case Expr::ForcedConsE: return synth_occurrence(g, e);
    case Expr::Tup: {
      std::vector<TypePtr> cs;
      for (auto& a : e->args) cs.push_back(g_synth(g, a));
      return Type::tup(cs);
    }
    case Expr::App: return synth_app(g, e);
    case Expr::Let: return synth_let(g, e);
    case Expr::If: {
      TypePtr c = g_synth(g, e->a);
      if (c->kind != Type::Stor || c->stor.p.kind != PreType::Bool)
        throw Error("type", "if condition is not boolean");
      TypePtr t = g_synth(g, e->b);
      TypePtr f = g_synth(g, e->c);
      if (!type_eq(t, f))
        throw Error("type", "if branches disagree: " + to_string(t) + " vs " + to_string(f));
      return t;
    }
    case Expr::Case: {
      auto parts = check_case_header(g, e);
      TypePtr tn = g_synth(g, e->b);
      TypePtr tc = g_synth(parts.branch_ctx, e->c);
      if (!type_eq(tn, tc))
        throw Error("type", "case branches disagree: " + to_string(tn) + " vs " + to_string(tc));
      return tn;
    }
  }
  throw Error("type", "unreachable");
}

void g_check(const GCtx& g, const ExprPtr& e, const TypePtr& expected) {
  switch (e->kind) {
    case Expr::Var: {
      const GEntry* ent = g_lookup(g, e->name);
      if (!ent) {
        if (g.shadowed.count(e->name))
          throw Error("type", "global " + e->name + " was shadowed by a local binding");
        throw Error("type", "unbound variable " + e->name);
      }
      if (type_eq(ent->ty, expected)) return;
      // (loc): a variable of type lo P may be read as a memory location x P
      if (expected->kind == Type::Stor && expected->stor.q.kind == QualKind::Var &&
          expected->stor.q.var == e->name && ent->ty->kind == Type::Stor &&
          ent->ty->stor.q.kind == QualKind::Lo && pretype_eq(ent->ty->stor.p, expected->stor.p))
        return;
      throw Error("type", "variable " + e->name + " has type " + to_string(ent->ty) +
                              ", expected " + to_string(expected));
    }
    case Expr::Op:
    case Expr::Nil:
    case Expr::Cons:
    case Expr::ForcedConsE: {
      TypePtr t = synth_occurrence(g, e);
      if (!type_eq(t, expected))
        throw Error("type", e->name + " yields " + to_string(t) + ", expected " +
                                to_string(expected),
                    e->occ);
      return;
    }
    case Expr::Tup: {
      if (expected->kind != Type::Tup || expected->comps.size() != e->args.size())
        throw Error("type", "tuple against " + to_string(expected));
      for (size_t i = 0; i < e->args.size(); ++i) g_check(g, e->args[i], expected->comps[i]);
      return;
    }
    case Expr::If: {
      TypePtr c = g_synth(g, e->a);
      if (c->kind != Type::Stor || c->stor.p.kind != PreType::Bool)
        throw Error("type", "if condition is not boolean");
      g_check(g, e->b, expected);
      g_check(g, e->c, expected);
      return;
    }
    case Expr::Case: {
      auto parts = check_case_header(g, e);
      g_check(g, e->b, expected);
      g_check(parts.branch_ctx, e->c, expected);
      return;
    }
    case Expr::App: {
      TypePtr t = synth_app(g, e);
      if (!type_eq(t, expected))
        throw Error("type", "application of " + e->name + " yields " + to_string(t) +
                                ", expected " + to_string(expected));
      return;
    }
    case Expr::Let: {
      TypePtr t = synth_let(g, e);
      if (!type_eq(t, expected))
        throw Error("type", "let yields " + to_string(t) + ", expected " + to_string(expected));
      return;
    }
  }
}

// ---------------------------------------------------------------------------
// Store / program checking

static PreType g_payload_pretype(const StoreInit& v) {
  switch (v.kind) {
    case StoreInit::IntLit:
    case StoreInit::ParamRef: return PreType::intp();
    case StoreInit::BoolLit: return PreType::boolp();
    case StoreInit::Iota: return PreType::arrayp();
    default: throw Error("type", "not a base value");
  }
}

GStoreCheck check_store_global(const Program& prog, const QualificationList& quals) {
  std::map<std::string, TypePtr> claimed;
  for (auto& [name, t] : quals.ctx) claimed[name] = t;

  GStoreCheck out;
  for (auto& [name, v] : prog.store) {
    auto it = claimed.find(name);
    if (it == claimed.end())
      throw Error("type", "store context is missing an entry for " + name);
    TypePtr ty = it->second;
    require_type_well_formed(name, ty);
    switch (v.kind) {
      case StoreInit::IntLit:
      case StoreInit::BoolLit:
      case StoreInit::ParamRef:
      case StoreInit::Iota:
        if (ty->kind != Type::Stor || !pretype_eq(ty->stor.p, g_payload_pretype(v)))
          throw Error("type", "store binding " + name + " does not match claimed type " +
                                  to_string(ty));
        break;
      case StoreInit::NilV:
        if (ty->kind != Type::Stor || ty->stor.p.kind != PreType::List)
          throw Error("type", "store nil " + name + " claimed as non-list " + to_string(ty));
        break;
      case StoreInit::ConsV: {
        if (ty->kind != Type::Stor || ty->stor.p.kind != PreType::List)
          throw Error("type", "store cons " + name + " claimed as non-list " + to_string(ty));
        const GEntry* h = g_lookup(out.ctx, v.head);
        const GEntry* t2 = g_lookup(out.ctx, v.tail);
        if (!h || !t2)
          throw Error("type", "store cons " + name + " references an unbound cell");
        if (h->ty->kind != Type::Stor || !pretype_eq(h->ty->stor.p, ty->stor.p.elem->p) ||
            t2->ty->kind != Type::Stor || !pretype_eq(t2->ty->stor.p, ty->stor.p))
          throw Error("type", "store cons " + name + " cell types do not fit " + to_string(ty));
        break;
      }
      case StoreInit::Clo: {
        if (ty->kind != Type::Pi)
          throw Error("type", "store function " + name + " claimed as " + to_string(ty));
        auto frag = flatten(v.pat, ty->dom);
        GCtx body_ctx = seq_extend(out.ctx, {{name, ty}});
        body_ctx = seq_extend(body_ctx, frag);
        g_check(body_ctx, v.body, ty->cod);
        break;
      }
    }
    out.ctx = seq_extend(out.ctx, {{name, ty}});
  }
  return out;
}

GProgramCheck check_program_global(const Program& prog, const QualificationList& quals) {
  if (!quals.global) throw Error("type", "global checker given a linear qualification");
  Program annotated = apply_qualification(prog, quals);
  auto sc = check_store_global(annotated, quals);
  GProgramCheck out;
  out.ctx = sc.ctx;
  out.main_ty = g_synth(sc.ctx, annotated.main);
  out.elab = annotated;
  return out;
}

GCtx ctx_globalize(const GCtx& g, const std::set<std::string>& x) {
  GCtx out;
  out.shadowed = g.shadowed;
  for (auto& e : g.entries) {
    if (e.ty->kind == Type::Pi) {
      auto fv = type_fvs(e.ty->cod);
      std::set<std::string> keep;
      for (auto& v : fv)
        if (x.count(v)) keep.insert(v);
      PatElem pb = pat_restrict(e.ty->pat, keep);
      out.entries.push_back(
          {e.name, Type::pi(e.ty->pat, pat_dot(pb, e.ty->dom), e.ty->cod)});
    } else if (e.ty->kind == Type::Stor && x.count(e.name)) {
      SType s = e.ty->stor;
      s.q = Qual::gvar(e.name);
      out.entries.push_back({e.name, Type::stor_t(s)});
    } else {
      out.entries.push_back(e);
    }
  }
  return out;
}

}  // namespace l1
