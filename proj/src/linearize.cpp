#include "l1/linearize.hpp"

#include <algorithm>
#include <functional>

#include "l1/analysis.hpp"

namespace l1 {

namespace {

const std::vector<QualKind> kDown = {QualKind::Un, QualKind::Li};  // q <= un, downward

// All {un,li} decorations of the qualifier slots of a storable type.
void decorate_stype(const SType& skel, std::vector<SType>& out) {
  if (skel.p.kind != PreType::List) {
    for (auto q : kDown) out.push_back({Qual{q, {}}, skel.p});
    return;
  }
  std::vector<SType> elems;
  decorate_stype(*skel.p.elem, elems);
  for (auto q : kDown)
    for (auto& e : elems) out.push_back({Qual{q, {}}, PreType::list(e)});
}

std::vector<SType> decorate_stype(const SType& skel) {
  std::vector<SType> out;
  decorate_stype(skel, out);
  return out;
}

std::vector<TypePtr> decorate_type(const TypePtr& skel) {
  switch (skel->kind) {
    case Type::Stor: {
      std::vector<TypePtr> out;
      for (auto& s : decorate_stype(skel->stor)) out.push_back(Type::stor_t(s));
      return out;
    }
    case Type::Arrow: {
      std::vector<TypePtr> out;
      for (auto& d : decorate_type(skel->dom))
        for (auto& c : decorate_type(skel->cod)) out.push_back(Type::arrow(d, c));
      return out;
    }
    case Type::Tup: {
      std::vector<std::vector<TypePtr>> per;
      for (auto& c : skel->comps) per.push_back(decorate_type(c));
      std::vector<TypePtr> out;
      std::vector<TypePtr> acc(skel->comps.size());
      std::function<void(size_t)> go = [&](size_t i) {
        if (i == per.size()) {
          out.push_back(Type::tup(acc));
          return;
        }
        for (auto& t : per[i]) {
          acc[i] = t;
          go(i + 1);
        }
      };
      go(0);
      return out;
    }
    case Type::Pi: throw Error("search", "Pi type in a linear skeleton");
  }
  return {};
}

bool is_stor(const TypePtr& t) { return t->kind == Type::Stor; }

ExprPtr with_ann(const ExprPtr& e, OpType t) {
  auto n = std::make_shared<Expr>(*e);
  n->ann = std::move(t);
  return n;
}

}  // namespace

// ---------------------------------------------------------------------------
// Expression enumeration (section-4 equations, spl for operator arguments,
// pspl everywhere a pseudosplit appears in the typing rules)

std::vector<LinPair> lin_expr(const LCtx& g, const ExprPtr& e, const PinMap* pins, bool pseudo) {
  auto pinned = [&](int occ) -> const OpType* {
    if (!pins) return nullptr;
    auto it = pins->find(occ);
    return it == pins->end() ? nullptr : &it->second;
  };

  switch (e->kind) {
    case Expr::Var: {
      const LEntry* ent = nullptr;
      for (auto& le : g)
        if (le.name == e->name) ent = &le;
      if (!ent) return {};
      if (ent->ty->kind == Type::Stor && ent->ty->stor.q.kind == QualKind::Hi && !pseudo)
        return {};
      for (auto& le : g)
        if (le.name != e->name && !un_pred(le.ty)) return {};
      return {{e, ent->ty}};
    }

    case Expr::Op: {
      if (!e->ann) throw Error("search", "occurrence without a skeleton annotation", e->occ);
      const OpType& skel = *e->ann;
      if (e->args.empty()) {
        if (!un_ctx(g)) return {};
        std::vector<LinPair> out;
        if (const OpType* p = pinned(e->occ)) {
          out.push_back({with_ann(e, *p), Type::stor_t(p->output)});
          return out;
        }
        for (auto& outq : decorate_stype(skel.output)) {
          OpType t = skel;
          t.output = outq;
          out.push_back({with_ann(e, t), Type::stor_t(outq)});
        }
        return out;
      }
      std::vector<std::set<std::string>> fvs;
      for (auto& a : e->args) fvs.push_back(free_vars(a));
      auto parts = spl(e->args.size(), fvs, g);
      std::vector<std::vector<LinPair>> per;
      for (size_t i = 0; i < e->args.size(); ++i) {
        auto v = lin_expr(parts[i], e->args[i], pins, /*pseudo=*/true);
        // operator inputs are storable pseudotypes
        v.erase(std::remove_if(v.begin(), v.end(),
                               [](const LinPair& p) { return !is_stor(p.ty); }),
                v.end());
        if (v.empty()) return {};
        per.push_back(std::move(v));
      }
      std::vector<LinPair> out;
      const OpType* pin = pinned(e->occ);
      std::vector<SType> outs =
          pin ? std::vector<SType>{pin->output} : decorate_stype(skel.output);
      std::vector<size_t> idx(e->args.size(), 0);
      // q is the outer loop in the paper's comprehension, J the inner one
      for (auto& o : outs) {
        std::function<void(size_t)> go = [&](size_t i) {
          if (i == per.size()) {
            OpType t = skel;
            for (size_t k = 0; k < per.size(); ++k) t.inputs[k] = per[k][idx[k]].ty->stor;
            if (pin) {
              for (size_t k = 0; k < t.inputs.size(); ++k)
                if (!stype_eq(t.inputs[k], pin->inputs[k])) return;
            }
            t.output = o;
            auto n = std::make_shared<Expr>(*e);
            for (size_t k = 0; k < per.size(); ++k) n->args[k] = per[k][idx[k]].e;
            n->ann = t;
            out.push_back({n, Type::stor_t(o)});
            return;
          }
          for (idx[i] = 0; idx[i] < per[i].size(); ++idx[i]) go(i + 1);
        };
        go(0);
      }
      return out;
    }

    case Expr::Nil: {
      if (!e->ann) throw Error("search", "occurrence without a skeleton annotation", e->occ);
      if (!un_ctx(g)) return {};
      std::vector<LinPair> out;
      if (const OpType* p = pinned(e->occ)) {
        out.push_back({with_ann(e, *p), Type::stor_t(p->output)});
        return out;
      }
      for (auto& s : decorate_stype(e->ann->output)) {
        OpType t = *e->ann;
        t.output = s;
        out.push_back({with_ann(e, t), Type::stor_t(s)});
      }
      return out;
    }

    case Expr::Cons:
    case Expr::ForcedConsE: {
      if (!e->ann) throw Error("search", "occurrence without a skeleton annotation", e->occ);
      size_t n_args = e->args.size();
      std::vector<std::set<std::string>> fvs;
      for (auto& a : e->args) fvs.push_back(free_vars(a));
      auto parts = pspl(n_args, fvs, g);
      std::vector<std::vector<LinPair>> per;
      for (size_t i = 0; i < n_args; ++i) {
        auto v = lin_expr(parts[i], e->args[i], pins);
        v.erase(std::remove_if(v.begin(), v.end(),
                               [](const LinPair& p) { return !is_stor(p.ty); }),
                v.end());
        if (v.empty()) return {};
        per.push_back(std::move(v));
      }
      bool forced = e->kind == Expr::ForcedConsE;
      size_t elem_at = forced ? 1 : 0;
      size_t list_at = forced ? 2 : 1;
      const OpType* pin = pinned(e->occ);
      std::vector<LinPair> out;
      std::vector<size_t> idx(n_args, 0);
      std::function<void(size_t)> go = [&](size_t i) {
        if (i == n_args) {
          const SType& elem = per[elem_at][idx[elem_at]].ty->stor;
          const SType& lst = per[list_at][idx[list_at]].ty->stor;
          if (lst.p.kind != PreType::List || !stype_eq(*lst.p.elem, elem)) return;
          // q(E1): an unrestricted list may not hold a linear element
          if (lst.q.kind == QualKind::Un && elem.q.kind == QualKind::Li) return;
          if (forced) {
            const SType& destroyed = per[0][idx[0]].ty->stor;
            if (destroyed.p.kind != PreType::List || !pretype_eq(destroyed.p, lst.p)) return;
          }
          OpType t = *e->ann;
          for (size_t k = 0; k < n_args; ++k) t.inputs[k] = per[k][idx[k]].ty->stor;
          t.output = lst;
          if (pin && !optype_eq(t, *pin)) return;
          auto n = std::make_shared<Expr>(*e);
          for (size_t k = 0; k < n_args; ++k) n->args[k] = per[k][idx[k]].e;
          n->ann = t;
          out.push_back({n, Type::stor_t(lst)});
          return;
        }
        for (idx[i] = 0; idx[i] < per[i].size(); ++idx[i]) go(i + 1);
      };
      go(0);
      return out;
    }

    case Expr::Tup: {
      std::vector<std::set<std::string>> fvs;
      for (auto& a : e->args) fvs.push_back(free_vars(a));
      auto parts = pspl(e->args.size(), fvs, g);
      std::vector<std::vector<LinPair>> per;
      for (size_t i = 0; i < e->args.size(); ++i) {
        auto v = lin_expr(parts[i], e->args[i], pins);
        if (v.empty()) return {};
        per.push_back(std::move(v));
      }
      std::vector<LinPair> out;
      std::vector<size_t> idx(e->args.size(), 0);
      std::function<void(size_t)> go = [&](size_t i) {
        if (i == per.size()) {
          auto n = std::make_shared<Expr>(*e);
          std::vector<TypePtr> tys;
          for (size_t k = 0; k < per.size(); ++k) {
            n->args[k] = per[k][idx[k]].e;
            tys.push_back(per[k][idx[k]].ty);
          }
          out.push_back({n, Type::tup(tys)});
          return;
        }
        for (idx[i] = 0; idx[i] < per[i].size(); ++idx[i]) go(i + 1);
      };
      go(0);
      return out;
    }

    case Expr::App: {
      const LEntry* f = nullptr;
      for (auto& le : g)
        if (le.name == e->name) f = &le;
      if (!f || f->ty->kind != Type::Arrow) return {};
      std::vector<LinPair> out;
      for (auto& arg : lin_expr(g, e->a, pins)) {
        if (!type_eq(arg.ty, f->ty->dom)) continue;
        auto n = std::make_shared<Expr>(*e);
        n->a = arg.e;
        out.push_back({n, f->ty->cod});
      }
      return out;
    }

    case Expr::Let: {
      auto body_fv = free_vars(e->b);
      for (auto& v : pattern_vars(e->pat)) body_fv.erase(v);
      auto parts = pspl(2, {free_vars(e->a), body_fv}, g);
      std::vector<LinPair> out;
      for (auto& bound : lin_expr(parts[0], e->a, pins)) {
        std::vector<std::pair<std::string, TypePtr>> frag;
        try {
          frag = flatten(e->pat, bound.ty);
        } catch (const Error&) {
          continue;
        }
        LCtx g2 = parts[1];
        for (auto& [name, ty] : frag) {
          bool replaced = false;
          for (auto& le : g2)
            if (le.name == name) {
              le.ty = ty;
              replaced = true;
            }
          if (!replaced) g2.push_back({name, ty});
        }
        for (auto& body : lin_expr(g2, e->b, pins)) {
          auto n = std::make_shared<Expr>(*e);
          n->a = bound.e;
          n->b = body.e;
          out.push_back({n, body.ty});
        }
      }
      return out;
    }

    case Expr::If: {
      auto branch_fv = free_vars(e->b);
      for (auto& v : free_vars(e->c)) branch_fv.insert(v);
      auto parts = pspl(2, {free_vars(e->a), branch_fv}, g);
      std::vector<LinPair> out;
      for (auto& cond : lin_expr(parts[0], e->a, pins)) {
        if (cond.ty->kind != Type::Stor || cond.ty->stor.p.kind != PreType::Bool) continue;
        auto thens = lin_expr(parts[1], e->b, pins);
        auto elses = lin_expr(parts[1], e->c, pins);
        for (auto& t : thens)
          for (auto& el : elses) {
            if (!type_eq(t.ty, el.ty)) continue;
            auto n = std::make_shared<Expr>(*e);
            n->a = cond.e;
            n->b = t.e;
            n->c = el.e;
            out.push_back({n, t.ty});
          }
      }
      return out;
    }

    case Expr::Case: {
      auto rest_fv = free_vars(e->b);
      auto cons_fv = free_vars(e->c);
      cons_fv.erase(e->z1);
      cons_fv.erase(e->z2);
      rest_fv.insert(cons_fv.begin(), cons_fv.end());
      auto parts = pspl(2, {free_vars(e->a), rest_fv}, g);
      std::vector<LinPair> out;
      for (auto& scrut : lin_expr(parts[0], e->a, pins)) {
        if (scrut.ty->kind != Type::Stor || scrut.ty->stor.p.kind != PreType::List) continue;
        SType elem = *scrut.ty->stor.p.elem;
        auto nils = lin_expr(parts[1], e->b, pins);
        LCtx g2 = parts[1];
        auto put = [&](const std::string& name, TypePtr ty) {
          for (auto& le : g2)
            if (le.name == name) {
              le.ty = ty;
              return;
            }
          g2.push_back({name, ty});
        };
        put(e->z1, Type::stor_t(elem));
        put(e->z2, scrut.ty);
        auto conses = lin_expr(g2, e->c, pins);
        for (auto& nb : nils)
          for (auto& cb : conses) {
            if (!type_eq(nb.ty, cb.ty)) continue;
            auto n = std::make_shared<Expr>(*e);
            n->a = scrut.e;
            n->b = nb.e;
            n->c = cb.e;
            n->caseq = scrut.ty->stor.q;
            out.push_back({n, nb.ty});
          }
      }
      return out;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Counting (grouped by result type)

using CountMap = std::vector<std::pair<TypePtr, unsigned long long>>;

static void bump(CountMap& m, const TypePtr& t, unsigned long long k) {
  for (auto& [ty, c] : m)
    if (type_eq(ty, t)) {
      c += k;
      return;
    }
  m.emplace_back(t, k);
}

CountMap lin_expr_count(const LCtx& g, const ExprPtr& e, const PinMap* pins, bool pseudo) {
  // Tuples, which multiply component results structurally, and lets, which
  // depend only on the bound type, keep this polynomial where the full
  // enumeration would materialize an exponential list.
  switch (e->kind) {
    case Expr::Var:
    case Expr::Op:
    case Expr::Nil:
    case Expr::Cons:
    case Expr::ForcedConsE: {
      // leaf-ish: delegate to the enumerator (these are cheap: the explosion
      // comes from products of subresults, counted below)
      break;
    }
    default: break;
  }
  switch (e->kind) {
    case Expr::Tup: {
      std::vector<std::set<std::string>> fvs;
      for (auto& a : e->args) fvs.push_back(free_vars(a));
      auto parts = pspl(e->args.size(), fvs, g);
      std::vector<CountMap> per;
      for (size_t i = 0; i < e->args.size(); ++i) {
        auto m = lin_expr_count(parts[i], e->args[i], pins, false);
        if (m.empty()) return {};
        per.push_back(std::move(m));
      }
      CountMap out;
      std::vector<size_t> idx(per.size(), 0);
      std::function<void(size_t, TypePtr*, unsigned long long)> go =
          [&](size_t i, TypePtr* comps, unsigned long long mult) {
            if (i == per.size()) {
              std::vector<TypePtr> tys(comps, comps + per.size());
              bump(out, Type::tup(tys), mult);
              return;
            }
            for (auto& [ty, c] : per[i]) {
              comps[i] = ty;
              go(i + 1, comps, mult * c);
            }
          };
      std::vector<TypePtr> comps(per.size());
      go(0, comps.data(), 1);
      return out;
    }
    case Expr::Let: {
      auto body_fv = free_vars(e->b);
      for (auto& v : pattern_vars(e->pat)) body_fv.erase(v);
      auto parts = pspl(2, {free_vars(e->a), body_fv}, g);
      CountMap bound = lin_expr_count(parts[0], e->a, pins, false);
      CountMap out;
      for (auto& [bty, bc] : bound) {
        std::vector<std::pair<std::string, TypePtr>> frag;
        try {
          frag = flatten(e->pat, bty);
        } catch (const Error&) {
          continue;
        }
        LCtx g2 = parts[1];
        for (auto& [name, ty] : frag) {
          bool replaced = false;
          for (auto& le : g2)
            if (le.name == name) {
              le.ty = ty;
              replaced = true;
            }
          if (!replaced) g2.push_back({name, ty});
        }
        for (auto& [ty, c] : lin_expr_count(g2, e->b, pins, false)) bump(out, ty, bc * c);
      }
      return out;
    }
    case Expr::If: {
      auto branch_fv = free_vars(e->b);
      for (auto& v : free_vars(e->c)) branch_fv.insert(v);
      auto parts = pspl(2, {free_vars(e->a), branch_fv}, g);
      CountMap conds = lin_expr_count(parts[0], e->a, pins, false);
      unsigned long long nconds = 0;
      for (auto& [ty, c] : conds)
        if (ty->kind == Type::Stor && ty->stor.p.kind == PreType::Bool) nconds += c;
      if (nconds == 0) return {};
      CountMap thens = lin_expr_count(parts[1], e->b, pins, false);
      CountMap elses = lin_expr_count(parts[1], e->c, pins, false);
      CountMap out;
      for (auto& [t1, c1] : thens)
        for (auto& [t2, c2] : elses)
          if (type_eq(t1, t2)) bump(out, t1, nconds * c1 * c2);
      return out;
    }
    case Expr::Case: {
      auto rest_fv = free_vars(e->b);
      auto cons_fv = free_vars(e->c);
      cons_fv.erase(e->z1);
      cons_fv.erase(e->z2);
      rest_fv.insert(cons_fv.begin(), cons_fv.end());
      auto parts = pspl(2, {free_vars(e->a), rest_fv}, g);
      CountMap scruts = lin_expr_count(parts[0], e->a, pins, false);
      CountMap out;
      for (auto& [sty, sc] : scruts) {
        if (sty->kind != Type::Stor || sty->stor.p.kind != PreType::List) continue;
        SType elem = *sty->stor.p.elem;
        CountMap nils = lin_expr_count(parts[1], e->b, pins, false);
        LCtx g2 = parts[1];
        auto put = [&](const std::string& name, TypePtr ty) {
          for (auto& le : g2)
            if (le.name == name) {
              le.ty = ty;
              return;
            }
          g2.push_back({name, ty});
        };
        put(e->z1, Type::stor_t(elem));
        put(e->z2, sty);
        CountMap conses = lin_expr_count(g2, e->c, pins, false);
        for (auto& [t1, c1] : nils)
          for (auto& [t2, c2] : conses)
            if (type_eq(t1, t2)) bump(out, t1, sc * c1 * c2);
      }
      return out;
    }
    case Expr::Op: {
      if (!e->args.empty()) {
        std::vector<std::set<std::string>> fvs;
        for (auto& a : e->args) fvs.push_back(free_vars(a));
        auto parts = spl(e->args.size(), fvs, g);
        unsigned long long combos = 1;
        for (size_t i = 0; i < e->args.size(); ++i) {
          unsigned long long n = 0;
          for (auto& [ty, c] : lin_expr_count(parts[i], e->args[i], pins, true))
            if (ty->kind == Type::Stor) n += c;
          if (n == 0) return {};
          combos *= n;
        }
        CountMap out;
        const OpType* pin = nullptr;
        if (pins) {
          auto it = pins->find(e->occ);
          if (it != pins->end()) pin = &it->second;
        }
        if (pin) {
          // conservative: pins are rare in counting mode; fall back
          auto full = lin_expr(g, e, pins, false);
          CountMap m;
          for (auto& p : full) bump(m, p.ty, 1);
          return m;
        }
        for (auto& o : decorate_stype(e->ann->output)) bump(out, Type::stor_t(o), combos);
        return out;
      }
      break;
    }
    default: break;
  }
  // precise small cases: enumerate directly
  auto full = lin_expr(g, e, pins, pseudo);
  CountMap m;
  for (auto& p : full) bump(m, p.ty, 1);
  return m;
}

// ---------------------------------------------------------------------------
// Program-level staging

PinMap pins_from_constraints(const Program& prog, const std::vector<Constraint>& constraints) {
  Skeleton sk = infer_skeleton(prog);
  PinMap pins;
  for (auto& c : constraints) {
    if (c.occ < 0 || c.occ >= (int)sk.occ_types.size())
      throw Error("search", "constraint for unknown occurrence " + std::to_string(c.occ));
    if (c.fixed_trivial) {
      pins[c.occ] = sk.occ_types[c.occ];  // freeze the all-un type
    } else {
      OpType t = *c.ty;
      t.kind = sk.occ_types[c.occ].kind;
      if (t.inputs.size() != sk.occ_types[c.occ].inputs.size())
        throw Error("search", "constraint arity mismatch at occurrence " + std::to_string(c.occ));
      pins[c.occ] = t;
    }
  }
  return pins;
}

namespace {

struct StoreCand {
  LCtx ctx;
  std::vector<std::pair<std::string, StoreInit>> store;
};

std::vector<OpType> extract_occ_types(const Program& annotated) {
  std::vector<OpType> out;
  std::function<void(const ExprPtr&)> walk = [&](const ExprPtr& e) {
    if (is_occurrence(*e)) {
      if (!e->ann) throw Error("search", "unannotated occurrence after search", e->occ);
      if ((int)out.size() != e->occ) throw Error("search", "occurrence order broken", e->occ);
      out.push_back(*e->ann);
    }
    switch (e->kind) {
      case Expr::Var:
      case Expr::Nil: break;
      case Expr::Op:
      case Expr::Cons:
      case Expr::ForcedConsE:
      case Expr::Tup:
        for (auto& a : e->args) walk(a);
        break;
      case Expr::App: walk(e->a); break;
      case Expr::Let:
        walk(e->a);
        walk(e->b);
        break;
      case Expr::If:
      case Expr::Case:
        walk(e->a);
        walk(e->b);
        walk(e->c);
        break;
    }
  };
  for (auto& [name, v] : annotated.store)
    if (v.kind == StoreInit::Clo) walk(v.body);
  walk(annotated.main);
  return out;
}

}  // namespace

LinProgramResult lin_program(const Program& prog, const std::vector<Constraint>& constraints,
                             size_t cap) {
  Skeleton sk = infer_skeleton(prog);
  PinMap pins = pins_from_constraints(prog, constraints);
  Program trivial_prog = apply_qualification(prog, trivialize(prog, System::Linear));

  std::map<std::string, TypePtr> skel_ctx(sk.ctx.begin(), sk.ctx.end());
  LinProgramResult result;

  std::vector<StoreCand> cands;
  cands.push_back({});
  for (auto& [name, v] : trivial_prog.store) {
    std::vector<StoreCand> next;
    for (auto& base : cands) {
      if (v.kind == StoreInit::Clo) {
        for (auto& ty : decorate_type(skel_ctx.at(name))) {
          // (sfu): the body sees only the unrestricted part of the store
          LCtx body_ctx = ctx_un(base.ctx);
          body_ctx.push_back({name, ty});
          std::vector<std::pair<std::string, TypePtr>> frag;
          try {
            frag = flatten(v.pat, ty->dom);
          } catch (const Error&) {
            continue;
          }
          for (auto& [pn, pt] : frag) {
            bool rep = false;
            for (auto& le : body_ctx)
              if (le.name == pn) {
                le.ty = pt;
                rep = true;
              }
            if (!rep) body_ctx.push_back({pn, pt});
          }
          for (auto& body : lin_expr(body_ctx, v.body, &pins)) {
            if (!type_eq(body.ty, ty->cod)) continue;
            StoreCand sc = base;
            sc.ctx.push_back({name, ty});
            StoreInit v2 = v;
            v2.body = body.e;
            sc.store.emplace_back(name, v2);
            next.push_back(std::move(sc));
            if (next.size() > cap) break;
          }
        }
      } else {
        for (auto& ty : decorate_type(skel_ctx.at(name))) {
          StoreCand sc = base;
          sc.ctx.push_back({name, ty});
          sc.store.emplace_back(name, v);
          next.push_back(std::move(sc));
        }
      }
      if (next.size() > cap) break;
    }
    if (next.size() > cap) {
      next.resize(cap);
      result.truncated = true;
    }
    cands = std::move(next);
  }

  for (auto& sc : cands) {
    for (auto& main : lin_expr(sc.ctx, trivial_prog.main, &pins)) {
      Program annotated = trivial_prog;
      annotated.store = sc.store;
      annotated.main = main.e;
      QualificationList q;
      q.global = false;
      q.occ_types = extract_occ_types(annotated);
      q.occ_names = sk.occ_names;
      for (auto& le : sc.ctx) q.ctx.emplace_back(le.name, le.ty);
      // cross-validate; store cons cells and similar corners are filtered here
      try {
        check_program(prog, q);
      } catch (const Error&) {
        continue;
      }
      result.candidates.push_back(std::move(q));
      if (result.candidates.size() >= cap) {
        result.truncated = true;
        return result;
      }
    }
  }
  return result;
}

unsigned long long lin_program_count(const Program& prog,
                                     const std::vector<Constraint>& constraints) {
  Skeleton sk = infer_skeleton(prog);
  PinMap pins = pins_from_constraints(prog, constraints);
  Program trivial_prog = apply_qualification(prog, trivialize(prog, System::Linear));
  std::map<std::string, TypePtr> skel_ctx(sk.ctx.begin(), sk.ctx.end());

  struct CtxCount {
    LCtx ctx;
    unsigned long long count;
  };
  std::vector<CtxCount> cands{{LCtx{}, 1}};
  for (auto& [name, v] : trivial_prog.store) {
    std::vector<CtxCount> next;
    for (auto& base : cands) {
      for (auto& ty : decorate_type(skel_ctx.at(name))) {
        unsigned long long ways = 1;
        if (v.kind == StoreInit::Clo) {
          LCtx body_ctx = ctx_un(base.ctx);
          body_ctx.push_back({name, ty});
          std::vector<std::pair<std::string, TypePtr>> frag;
          try {
            frag = flatten(v.pat, ty->dom);
          } catch (const Error&) {
            continue;
          }
          for (auto& [pn, pt] : frag) {
            bool rep = false;
            for (auto& le : body_ctx)
              if (le.name == pn) {
                le.ty = pt;
                rep = true;
              }
            if (!rep) body_ctx.push_back({pn, pt});
          }
          ways = 0;
          for (auto& [bty, c] : lin_expr_count(body_ctx, v.body, &pins))
            if (type_eq(bty, ty->cod)) ways += c;
          if (ways == 0) continue;
        }
        CtxCount cc = base;
        cc.ctx.push_back({name, ty});
        cc.count = base.count * ways;
        next.push_back(std::move(cc));
      }
    }
    cands = std::move(next);
  }
  unsigned long long total = 0;
  for (auto& cc : cands) {
    unsigned long long mains = 0;
    for (auto& [ty, c] : lin_expr_count(cc.ctx, trivial_prog.main, &pins)) mains += c;
    total += cc.count * mains;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Ranking

static int count_un(const QualificationList& q) {
  int n = 0;
  std::function<void(const SType&)> walk = [&](const SType& s) {
    if (s.q.kind == QualKind::Un) n++;
    if (s.p.kind == PreType::List) walk(*s.p.elem);
  };
  for (auto& t : q.occ_types) {
    for (auto& in : t.inputs) walk(in);
    walk(t.output);
  }
  return n;
}

std::vector<Ranked> rank(const std::vector<QualificationList>& candidates, const Program& prog,
                         long long sample_n, long long fuel) {
  std::vector<Ranked> out;
  for (auto& q : candidates) {
    Ranked r;
    r.quals = q;
    r.un_count = count_un(q);
    auto elab = check_program(prog, q).elab;
    std::map<std::string, long long> params;
    for (auto& p : prog.params) params[p] = sample_n;
    r.cost = cost_of_run(elab, Mode::Li, params, fuel);
    out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(), [](const Ranked& a, const Ranked& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    return a.un_count < b.un_count;
  });
  return out;
}

}  // namespace l1
