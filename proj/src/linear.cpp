#include "l1/linear.hpp"

#include <functional>

namespace l1 {

bool un_pred(const TypePtr& v) {
  if (v->kind == Type::Arrow) return true;
  if (v->kind == Type::Stor) return v->stor.q.kind != QualKind::Li;
  return false;  // tuples and Pi never live in a linear context entry
}

bool un_ctx(const LCtx& g) {
  for (auto& e : g)
    if (!un_pred(e.ty)) return false;
  return true;
}

LCtx ctx_un(const LCtx& g) {
  LCtx out;
  for (auto& e : g)
    if (un_pred(e.ty)) out.push_back(e);
  return out;
}

static TypePtr with_qual(const TypePtr& t, Qual q) {
  SType s = t->stor;
  s.q = std::move(q);
  return Type::stor_t(s);
}

static std::vector<LCtx> split_impl(size_t n, const std::vector<std::set<std::string>>& fvs,
                                    const LCtx& g, bool pseudo) {
  if (fvs.size() != n) throw Error("split", "free-variable set count mismatch");
  std::vector<LCtx> out(n);
  for (auto& e : g) {
    if (un_pred(e.ty)) {
      for (auto& c : out) c.push_back(e);
      continue;
    }
    // linear entry: the last set mentioning it wins; an unmentioned entry is
    // parked in the first context, where a leaf rule will flag it
    size_t target = 0;
    bool used = false;
    for (size_t k = n; k-- > 0;) {
      if (fvs[k].count(e.name)) {
        target = k;
        used = true;
        break;
      }
    }
    if (!used) target = 0;
    for (size_t k = 0; k < n; ++k) {
      if (k == target)
        out[k].push_back(e);
      else if (pseudo && used && k < target)
        out[k].push_back({e.name, with_qual(e.ty, Qual::hi())});
    }
  }
  return out;
}

std::vector<LCtx> spl(size_t n, const std::vector<std::set<std::string>>& fvs, const LCtx& g) {
  return split_impl(n, fvs, g, false);
}

std::vector<LCtx> pspl(size_t n, const std::vector<std::set<std::string>>& fvs, const LCtx& g) {
  return split_impl(n, fvs, g, true);
}

// ---------------------------------------------------------------------------
// Expression checking

namespace {

const LEntry* lookup(const LCtx& g, const std::string& x) {
  for (auto& e : g)
    if (e.name == x) return &e;
  return nullptr;
}

void require_un_rest(const LCtx& g, const std::string& except, int occ, const char* rule) {
  for (auto& e : g) {
    if (e.name == except) continue;
    if (!un_pred(e.ty))
      throw Error("type",
                  std::string(rule) + ": linear variable " + e.name + " left unconsumed", occ);
  }
}

void check_linear_side(const OpType& t, int occ) {
  auto lin_q = [&](const Qual& q, bool allow_hi) {
    if (q.kind == QualKind::Li || q.kind == QualKind::Un) return;
    if (allow_hi && q.kind == QualKind::Hi) return;
    throw Error("type", "qualifier " + to_string(q) + " is not a linear-side qualifier", occ);
  };
  std::function<void(const SType&, bool)> walk = [&](const SType& s, bool allow_hi) {
    lin_q(s.q, allow_hi);
    if (s.p.kind == PreType::List) walk(*s.p.elem, false);
  };
  bool op_inputs = t.kind == OpKind::Operator;
  for (auto& in : t.inputs) walk(in, op_inputs);
  walk(t.output, false);
}

LCtx extend_shadowing(LCtx g, const std::vector<std::pair<std::string, TypePtr>>& frag) {
  for (auto& [name, ty] : frag) {
    bool replaced = false;
    for (auto& e : g)
      if (e.name == name) {
        e.ty = ty;
        replaced = true;
        break;
      }
    if (!replaced) g.push_back({name, ty});
  }
  return g;
}

}  // namespace

LinResult check_expr(const LCtx& g, const ExprPtr& e, bool pseudo) {
  switch (e->kind) {
    case Expr::Var: {
      const LEntry* ent = lookup(g, e->name);
      if (!ent) throw Error("type", "unbound variable " + e->name);
      if (ent->ty->kind == Type::Stor && ent->ty->stor.q.kind == QualKind::Hi && !pseudo)
        throw Error("type", "hidden variable " + e->name + " used outside an operator argument");
      require_un_rest(g, e->name, -1, "var");
      return {ent->ty, e};
    }

    case Expr::Op: {
      if (!e->ann) throw Error("type", "missing annotation", e->occ);
      const OpType& t = *e->ann;
      check_linear_side(t, e->occ);
      if (t.inputs.size() != e->args.size()) throw Error("type", "operator arity", e->occ);
      if (e->args.empty()) {
        if (!un_ctx(g))
          throw Error("type", "constant " + e->name + " cannot discard a linear context", e->occ);
        return {Type::stor_t(t.output), e};
      }
      std::vector<std::set<std::string>> fvs;
      for (auto& a : e->args) fvs.push_back(free_vars(a));
      auto parts = spl(e->args.size(), fvs, g);
      auto n = std::make_shared<Expr>(*e);
      for (size_t i = 0; i < e->args.size(); ++i) {
        auto r = check_expr(parts[i], e->args[i], /*pseudo=*/true);
        n->args[i] = r.elab;
        if (!type_eq(r.ty, Type::stor_t(t.inputs[i])))
          throw Error("type", "argument " + std::to_string(i + 1) + " of " + e->name + " has type " +
                                  to_string(r.ty) + ", expected " + to_string(t.inputs[i]),
                      e->occ);
      }
      return {Type::stor_t(t.output), n};
    }

    case Expr::Nil: {
      if (!e->ann) throw Error("type", "missing annotation", e->occ);
      check_linear_side(*e->ann, e->occ);
      if (!un_ctx(g))
        throw Error("type", "nil cannot discard a linear context", e->occ);
      return {Type::stor_t(e->ann->output), e};
    }

    case Expr::Cons: {
      if (!e->ann) throw Error("type", "missing annotation", e->occ);
      const OpType& t = *e->ann;
      check_linear_side(t, e->occ);
      if (t.inputs.size() != 2 || !stype_eq(t.inputs[1], t.output))
        throw Error("type", "cons type must be (E, q [E]) -> q [E]", e->occ);
      if (t.output.p.kind != PreType::List || !stype_eq(*t.output.p.elem, t.inputs[0]))
        throw Error("type", "cons element type mismatch", e->occ);
      // q(E1): an unrestricted list may not hold linear elements
      if (t.output.q.kind == QualKind::Un && t.inputs[0].q.kind == QualKind::Li)
        throw Error("type", "unrestricted list holding a linear element", e->occ);
      auto parts = pspl(2, {free_vars(e->args[0]), free_vars(e->args[1])}, g);
      auto n = std::make_shared<Expr>(*e);
      for (int i = 0; i < 2; ++i) {
        auto r = check_expr(parts[i], e->args[i]);
        n->args[i] = r.elab;
        if (!type_eq(r.ty, Type::stor_t(t.inputs[i])))
          throw Error("type", "cons argument type " + to_string(r.ty) + ", expected " +
                                  to_string(t.inputs[i]),
                      e->occ);
      }
      return {Type::stor_t(t.output), n};
    }

    case Expr::ForcedConsE: {
      if (!e->ann) throw Error("type", "missing annotation", e->occ);
      const OpType& t = *e->ann;
      check_linear_side(t, e->occ);
      if (t.inputs.size() != 3 || !stype_eq(t.inputs[2], t.output))
        throw Error("type", "forced cons type must be (q0 [E], E, q [E]) -> q [E]", e->occ);
      if (t.output.p.kind != PreType::List || !stype_eq(*t.output.p.elem, t.inputs[1]))
        throw Error("type", "forced cons element type mismatch", e->occ);
      if (!pretype_eq(t.inputs[0].p, t.output.p))
        throw Error("type", "forced cons destroyed input must be a list of the same shape", e->occ);
      if (t.output.q.kind == QualKind::Un && t.inputs[1].q.kind == QualKind::Li)
        throw Error("type", "unrestricted list holding a linear element", e->occ);
      std::vector<std::set<std::string>> fvs;
      for (auto& a : e->args) fvs.push_back(free_vars(a));
      auto parts = pspl(3, fvs, g);
      auto n = std::make_shared<Expr>(*e);
      for (int i = 0; i < 3; ++i) {
        auto r = check_expr(parts[i], e->args[i]);
        n->args[i] = r.elab;
        if (!type_eq(r.ty, Type::stor_t(t.inputs[i])))
          throw Error("type", "forced cons argument type " + to_string(r.ty) + ", expected " +
                                  to_string(t.inputs[i]),
                      e->occ);
      }
      return {Type::stor_t(t.output), n};
    }

    case Expr::Tup: {
      std::vector<std::set<std::string>> fvs;
      for (auto& a : e->args) fvs.push_back(free_vars(a));
      auto parts = pspl(e->args.size(), fvs, g);
      auto n = std::make_shared<Expr>(*e);
      std::vector<TypePtr> tys;
      for (size_t i = 0; i < e->args.size(); ++i) {
        auto r = check_expr(parts[i], e->args[i]);
        n->args[i] = r.elab;
        tys.push_back(r.ty);
      }
      return {Type::tup(tys), n};
    }

    case Expr::App: {
      const LEntry* f = lookup(g, e->name);
      if (!f) throw Error("type", "unbound function " + e->name);
      if (f->ty->kind != Type::Arrow)
        throw Error("type", e->name + " is not a function");
      auto r = check_expr(g, e->a);
      if (!type_eq(r.ty, f->ty->dom))
        throw Error("type", "application of " + e->name + ": argument has type " +
                                to_string(r.ty) + ", expected " + to_string(f->ty->dom));
      auto n = std::make_shared<Expr>(*e);
      n->a = r.elab;
      return {f->ty->cod, n};
    }

    case Expr::Let: {
      auto body_fv = free_vars(e->b);
      for (auto& v : pattern_vars(e->pat)) body_fv.erase(v);
      auto parts = pspl(2, {free_vars(e->a), body_fv}, g);
      auto rb = check_expr(parts[0], e->a);
      auto frag = flatten(e->pat, rb.ty);
      auto r = check_expr(extend_shadowing(parts[1], frag), e->b);
      auto n = std::make_shared<Expr>(*e);
      n->a = rb.elab;
      n->b = r.elab;
      return {r.ty, n};
    }

    case Expr::If: {
      auto branch_fv = free_vars(e->b);
      for (auto& v : free_vars(e->c)) branch_fv.insert(v);
      auto parts = pspl(2, {free_vars(e->a), branch_fv}, g);
      auto rc = check_expr(parts[0], e->a);
      if (rc.ty->kind != Type::Stor || rc.ty->stor.p.kind != PreType::Bool)
        throw Error("type", "if condition is not boolean");
      auto rt = check_expr(parts[1], e->b);
      auto re = check_expr(parts[1], e->c);
      if (!type_eq(rt.ty, re.ty))
        throw Error("type", "if branches disagree: " + to_string(rt.ty) + " vs " + to_string(re.ty));
      auto n = std::make_shared<Expr>(*e);
      n->a = rc.elab;
      n->b = rt.elab;
      n->c = re.elab;
      return {rt.ty, n};
    }

    case Expr::Case: {
      auto rest_fv = free_vars(e->b);
      auto cons_fv = free_vars(e->c);
      cons_fv.erase(e->z1);
      cons_fv.erase(e->z2);
      rest_fv.insert(cons_fv.begin(), cons_fv.end());
      auto parts = pspl(2, {free_vars(e->a), rest_fv}, g);
      auto rs = check_expr(parts[0], e->a);
      if (rs.ty->kind != Type::Stor || rs.ty->stor.p.kind != PreType::List)
        throw Error("type", "case scrutinee is not a list");
      Qual q = rs.ty->stor.q;
      SType elem = *rs.ty->stor.p.elem;
      auto rn = check_expr(parts[1], e->b);
      LCtx gc = extend_shadowing(
          parts[1], {{e->z1, Type::stor_t(elem)}, {e->z2, rs.ty}});
      auto rc = check_expr(gc, e->c);
      if (!type_eq(rn.ty, rc.ty))
        throw Error("type", "case branches disagree: " + to_string(rn.ty) + " vs " + to_string(rc.ty));
      auto n = std::make_shared<Expr>(*e);
      n->a = rs.elab;
      n->b = rn.elab;
      n->c = rc.elab;
      n->caseq = q;  // elaborate the case slot from the scrutinee
      return {rn.ty, n};
    }
  }
  throw Error("type", "unreachable expression kind");
}

// ---------------------------------------------------------------------------
// Store and program checking

static PreType payload_pretype(const StoreInit& v) {
  switch (v.kind) {
    case StoreInit::IntLit:
    case StoreInit::ParamRef: return PreType::intp();
    case StoreInit::BoolLit: return PreType::boolp();
    case StoreInit::Iota: return PreType::arrayp();
    default: throw Error("type", "not a base value");
  }
}

StoreCheck check_store(const Program& prog, const QualificationList& quals) {
  std::map<std::string, TypePtr> claimed;
  for (auto& [name, t] : quals.ctx) claimed[name] = t;

  StoreCheck out;
  for (auto& [name, v] : prog.store) {
    auto it = claimed.find(name);
    if (it == claimed.end())
      throw Error("type", "store context is missing an entry for " + name);
    TypePtr ty = it->second;
    switch (v.kind) {
      case StoreInit::IntLit:
      case StoreInit::BoolLit:
      case StoreInit::ParamRef:
      case StoreInit::Iota: {
        if (ty->kind != Type::Stor || !pretype_eq(ty->stor.p, payload_pretype(v)))
          throw Error("type", "store binding " + name + " does not match claimed type " +
                                  to_string(ty));
        out.ctx.push_back({name, ty});
        out.store.emplace_back(name, v);
        break;
      }
      case StoreInit::NilV: {
        if (ty->kind != Type::Stor || ty->stor.p.kind != PreType::List)
          throw Error("type", "store nil " + name + " claimed as non-list " + to_string(ty));
        out.ctx.push_back({name, ty});
        out.store.emplace_back(name, v);
        break;
      }
      case StoreInit::ConsV: {
        // (sco): the cell consumes the claimed element/tail entries when linear
        if (ty->kind != Type::Stor || ty->stor.p.kind != PreType::List)
          throw Error("type", "store cons " + name + " claimed as non-list " + to_string(ty));
        SType elem = *ty->stor.p.elem;
        auto check_piece = [&](const std::string& piece, const TypePtr& want) {
          const LEntry* ent = lookup(out.ctx, piece);
          if (!ent)
            throw Error("type", "store cons " + name + " references unavailable cell " + piece);
          if (!type_eq(ent->ty, want))
            throw Error("type", "store cons " + name + ": cell " + piece + " has type " +
                                    to_string(ent->ty) + ", expected " + to_string(want));
          if (!un_pred(ent->ty)) {
            LCtx next;
            for (auto& c : out.ctx)
              if (c.name != piece) next.push_back(c);
            out.ctx = next;
          }
        };
        if (ty->stor.q.kind == QualKind::Un && elem.q.kind == QualKind::Li)
          throw Error("type", "unrestricted store list holding a linear element");
        check_piece(v.head, Type::stor_t(elem));
        check_piece(v.tail, ty);
        out.ctx.push_back({name, ty});
        out.store.emplace_back(name, v);
        break;
      }
      case StoreInit::Clo: {
        if (ty->kind != Type::Arrow)
          throw Error("type", "store function " + name + " claimed as " + to_string(ty));
        auto frag = flatten(v.pat, ty->dom);
        LCtx body_ctx = ctx_un(out.ctx);
        body_ctx = extend_shadowing(body_ctx, {{name, ty}});
        std::vector<std::pair<std::string, TypePtr>> frag2(frag.begin(), frag.end());
        body_ctx = extend_shadowing(body_ctx, frag2);
        auto r = check_expr(body_ctx, v.body);
        if (!type_eq(r.ty, ty->cod))
          throw Error("type", "body of " + name + " has type " + to_string(r.ty) +
                                  ", claimed " + to_string(ty->cod));
        StoreInit v2 = v;
        v2.body = r.elab;
        out.ctx.push_back({name, ty});
        out.store.emplace_back(name, v2);
        break;
      }
    }
  }
  return out;
}

ProgramCheck check_program(const Program& prog, const QualificationList& quals) {
  if (quals.global) throw Error("type", "linear checker given a global qualification");
  Program annotated = apply_qualification(prog, quals);
  auto sc = check_store(annotated, quals);
  auto r = check_expr(sc.ctx, annotated.main);
  ProgramCheck out;
  out.ctx = sc.ctx;
  out.main_ty = r.ty;
  out.elab = annotated;
  out.elab.store = sc.store;
  out.elab.main = r.elab;
  return out;
}

}  // namespace l1
