#include "l1/globalize.hpp"

#include <algorithm>
#include <functional>

namespace l1 {

namespace {

SType lo_stype(const SType& s);

PreType lo_pretype(const PreType& p) {
  if (p.kind != PreType::List) return p;
  PreType r = p;
  r.elem = std::make_shared<SType>(lo_stype(*p.elem));
  return r;
}

SType lo_stype(const SType& s) { return {Qual::lo(), lo_pretype(s.p)}; }

ExprPtr with_ann(const ExprPtr& e, OpType t) {
  auto n = std::make_shared<Expr>(*e);
  n->ann = std::move(t);
  return n;
}

// C_i = {g_i} union Gl^{g_i B_i} Gamma
std::vector<Qual> candidate_inputs(const GCtx& g, const TypePtr& synth) {
  if (synth->kind != Type::Stor) return {};
  const SType& s = synth->stor;
  std::vector<Qual> out;
  if (s.q.kind == QualKind::Var) {
    out.push_back(s.q);  // if g_i = x then C_i = {x}
    return out;
  }
  out.push_back(Qual::lo());
  for (auto& x : globals_at(g, s.p)) out.push_back(Qual::gvar(x));
  return out;
}

}  // namespace

std::vector<ExprPtr> glob_expr(const GCtx& g, const ExprPtr& e, const TypePtr& target,
                               size_t cap) {
  switch (e->kind) {
    case Expr::Var: {
      // G Gamma x E = [x] when Gamma |- x : E is derivable (exactly, or via loc)
      try {
        g_check(g, e, target);
      } catch (const Error&) {
        return {};
      }
      return {e};
    }

    case Expr::Op: {
      if (!e->ann) throw Error("search", "occurrence without a trivial annotation", e->occ);
      if (target->kind != Type::Stor) return {};
      if (!pretype_eq(lo_pretype(e->ann->output.p), lo_pretype(target->stor.p))) return {};
      std::vector<std::vector<Qual>> cis;
      for (auto& a : e->args) {
        TypePtr ti;
        try {
          ti = g_synth(g, a);
        } catch (const Error&) {
          return {};
        }
        auto ci = candidate_inputs(g, ti);
        if (ci.empty()) return {};
        cis.push_back(std::move(ci));
      }
      std::vector<ExprPtr> out;
      std::vector<size_t> idx(e->args.size(), 0);
      std::function<void(size_t, std::vector<std::vector<ExprPtr>>&)> noop;
      std::function<void(size_t)> go = [&](size_t i) {
        if (out.size() >= cap) return;
        if (i == e->args.size()) {
          OpType t = *e->ann;
          std::vector<std::vector<ExprPtr>> per;
          for (size_t k = 0; k < e->args.size(); ++k) {
            t.inputs[k] = {cis[k][idx[k]], t.inputs[k].p};
            auto sub = glob_expr(g, e->args[k], Type::stor_t(t.inputs[k]), cap);
            if (sub.empty()) return;
            per.push_back(std::move(sub));
          }
          t.output = target->stor;
          std::vector<size_t> jdx(e->args.size(), 0);
          std::function<void(size_t)> emit = [&](size_t k) {
            if (out.size() >= cap) return;
            if (k == per.size()) {
              auto n = std::make_shared<Expr>(*e);
              for (size_t m = 0; m < per.size(); ++m) n->args[m] = per[m][jdx[m]];
              n->ann = t;
              out.push_back(n);
              return;
            }
            for (jdx[k] = 0; jdx[k] < per[k].size(); ++jdx[k]) emit(k + 1);
          };
          emit(0);
          return;
        }
        for (idx[i] = 0; idx[i] < cis[i].size(); ++idx[i]) go(i + 1);
      };
      go(0);
      return out;
    }

    case Expr::Nil: {
      if (!e->ann) throw Error("search", "occurrence without a trivial annotation", e->occ);
      if (target->kind != Type::Stor || target->stor.p.kind != PreType::List) return {};
      OpType t = *e->ann;
      t.output = target->stor;
      return {with_ann(e, t)};
    }

    case Expr::Cons: {
      if (!e->ann) throw Error("search", "occurrence without a trivial annotation", e->occ);
      if (target->kind != Type::Stor || target->stor.p.kind != PreType::List) return {};
      // rho^g : inputs stay local, the output takes the target's qualifier
      SType elem = lo_stype(*target->stor.p.elem);
      SType lst = {Qual::lo(), PreType::list(elem)};
      auto heads = glob_expr(g, e->args[0], Type::stor_t(elem), cap);
      if (heads.empty()) return {};
      auto tails = glob_expr(g, e->args[1], Type::stor_t(lst), cap);
      if (tails.empty()) return {};
      OpType t = *e->ann;
      t.inputs[0] = elem;
      t.inputs[1] = lst;
      t.output = target->stor;
      std::vector<ExprPtr> out;
      for (auto& h : heads)
        for (auto& tl : tails) {
          if (out.size() >= cap) return out;
          auto n = std::make_shared<Expr>(*e);
          n->args = {h, tl};
          n->ann = t;
          out.push_back(n);
        }
      return out;
    }

    case Expr::ForcedConsE: {
      if (!e->ann) throw Error("search", "occurrence without a trivial annotation", e->occ);
      if (target->kind != Type::Stor || target->stor.p.kind != PreType::List) return {};
      SType elem = lo_stype(*target->stor.p.elem);
      SType lst = {Qual::lo(), PreType::list(elem)};
      // the destroyed input names the overwrite target
      SType destroyed = {target->stor.q, PreType::list(elem)};
      auto ds = glob_expr(g, e->args[0], Type::stor_t(destroyed), cap);
      auto hs = glob_expr(g, e->args[1], Type::stor_t(elem), cap);
      auto ts = glob_expr(g, e->args[2], Type::stor_t(lst), cap);
      if (ds.empty() || hs.empty() || ts.empty()) return {};
      OpType t = *e->ann;
      t.inputs[0] = destroyed;
      t.inputs[1] = elem;
      t.inputs[2] = lst;
      t.output = target->stor;
      std::vector<ExprPtr> out;
      for (auto& d : ds)
        for (auto& h : hs)
          for (auto& tl : ts) {
            if (out.size() >= cap) return out;
            auto n = std::make_shared<Expr>(*e);
            n->args = {d, h, tl};
            n->ann = t;
            out.push_back(n);
          }
      return out;
    }

    case Expr::Tup: {
      if (target->kind != Type::Tup || target->comps.size() != e->args.size()) return {};
      std::vector<std::vector<ExprPtr>> per;
      for (size_t i = 0; i < e->args.size(); ++i) {
        auto v = glob_expr(g, e->args[i], target->comps[i], cap);
        if (v.empty()) return {};
        per.push_back(std::move(v));
      }
      std::vector<ExprPtr> out;
      std::vector<size_t> idx(per.size(), 0);
      std::function<void(size_t)> go = [&](size_t i) {
        if (out.size() >= cap) return;
        if (i == per.size()) {
          auto n = std::make_shared<Expr>(*e);
          for (size_t k = 0; k < per.size(); ++k) n->args[k] = per[k][idx[k]];
          out.push_back(n);
          return;
        }
        for (idx[i] = 0; idx[i] < per[i].size(); ++idx[i]) go(i + 1);
      };
      go(0);
      return out;
    }

    case Expr::If: {
      auto conds = glob_expr(g, e->a, Type::stor_t({Qual::lo(), PreType::boolp()}), cap);
      if (conds.empty()) return {};
      auto thens = glob_expr(g, e->b, target, cap);
      if (thens.empty()) return {};
      auto elses = glob_expr(g, e->c, target, cap);
      if (elses.empty()) return {};
      std::vector<ExprPtr> out;
      for (auto& c : conds)
        for (auto& t : thens)
          for (auto& el : elses) {
            if (out.size() >= cap) return out;
            auto n = std::make_shared<Expr>(*e);
            n->a = c;
            n->b = t;
            n->c = el;
            out.push_back(n);
          }
      return out;
    }

    case Expr::App: {
      const GEntry* f = g_lookup(g, e->name);
      if (!f || f->ty->kind != Type::Pi) return {};
      PatElem pb = pat_restrict(f->ty->pat, globals(g));
      TypePtr arg_target;
      try {
        arg_target = pat_dot(pb, f->ty->dom);
      } catch (const Error&) {
        return {};
      }
      std::vector<ExprPtr> out;
      for (auto& arg : glob_expr(g, e->a, arg_target, cap)) {
        TypePtr res;
        try {
          res = subst_pat_in_type(f->ty->pat, pinfo(g, arg), f->ty->cod);
        } catch (const Error&) {
          continue;
        }
        if (!type_eq(res, target)) continue;
        if (out.size() >= cap) return out;
        auto n = std::make_shared<Expr>(*e);
        n->a = arg;
        out.push_back(n);
      }
      return out;
    }

    case Expr::Let: {
      TypePtr bound_ty;
      try {
        bound_ty = g_synth(g, e->a);
      } catch (const Error&) {
        return {};
      }
      PatElem pb = pat_restrict(e->pat, globals(g));
      TypePtr bound_target;
      try {
        bound_target = pat_dot(pb, bound_ty);
      } catch (const Error&) {
        return {};
      }
      std::vector<std::pair<std::string, TypePtr>> frag;
      try {
        frag = flatten(e->pat, bound_target);
      } catch (const Error&) {
        return {};
      }
      GCtx g2 = seq_extend(g, frag);
      auto bounds = glob_expr(g, e->a, bound_target, cap);
      if (bounds.empty()) return {};
      auto bodies = glob_expr(g2, e->b, target, cap);
      if (bodies.empty()) return {};
      std::vector<ExprPtr> out;
      for (auto& b : bounds)
        for (auto& body : bodies) {
          if (out.size() >= cap) return out;
          auto n = std::make_shared<Expr>(*e);
          n->a = b;
          n->b = body;
          out.push_back(n);
        }
      return out;
    }

    case Expr::Case: {
      // parameters of the case phrase are forced local
      for (const std::string& z : {e->z1, e->z2}) {
        const GEntry* prev = g_lookup(g, z);
        if (prev && gl_pred(prev->ty)) return {};
      }
      TypePtr sty;
      try {
        sty = g_synth(g, e->a);
      } catch (const Error&) {
        return {};
      }
      if (sty->kind != Type::Stor || sty->stor.p.kind != PreType::List) return {};
      SType elem = lo_stype(*sty->stor.p.elem);
      TypePtr scrut_target = Type::stor_t({Qual::lo(), PreType::list(elem)});
      auto scruts = glob_expr(g, e->a, scrut_target, cap);
      if (scruts.empty()) return {};
      auto nils = glob_expr(g, e->b, target, cap);
      if (nils.empty()) return {};
      GCtx g2 = seq_extend(g, {{e->z1, Type::stor_t(elem)}, {e->z2, scrut_target}});
      auto conses = glob_expr(g2, e->c, target, cap);
      if (conses.empty()) return {};
      std::vector<ExprPtr> out;
      for (auto& s : scruts)
        for (auto& nb : nils)
          for (auto& cb : conses) {
            if (out.size() >= cap) return out;
            auto n = std::make_shared<Expr>(*e);
            n->a = s;
            n->b = nb;
            n->c = cb;
            n->caseq = Qual::lo();
            out.push_back(n);
          }
      return out;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Store and program

GCtx seed_context(const Program& prog, const Seed& seed) {
  std::map<std::string, TypePtr> env(seed.env.begin(), seed.env.end());
  QualificationList trivial = trivialize(prog, System::Global);
  std::map<std::string, TypePtr> fallback(trivial.ctx.begin(), trivial.ctx.end());
  GCtx g;
  for (auto& [name, v] : prog.store) {
    auto it = env.find(name);
    g.entries.push_back({name, it != env.end() ? it->second : fallback.at(name)});
  }
  // seed entries beyond the store (added globals) come first in lookup order
  for (auto& [name, ty] : seed.env)
    if (!g_lookup(g, name)) g.entries.push_back({name, ty});
  require_ctx_well_formed(g);
  return g;
}

std::vector<std::vector<std::pair<std::string, StoreInit>>> glob_store(
    const GCtx& g, const Program& trivial_prog, size_t cap) {
  std::vector<std::vector<std::pair<std::string, StoreInit>>> cands{{}};
  for (auto& [name, v] : trivial_prog.store) {
    std::vector<std::vector<std::pair<std::string, StoreInit>>> next;
    if (v.kind != StoreInit::Clo) {
      for (auto& base : cands) {
        auto sc = base;
        sc.emplace_back(name, v);
        next.push_back(std::move(sc));
      }
      cands = std::move(next);
      continue;
    }
    const GEntry* ent = g_lookup(g, name);
    if (!ent || ent->ty->kind != Type::Pi)
      throw Error("search", "store function " + name + " lacks a Pi type in the seed");
    GCtx body_ctx = seq_extend(g, flatten(v.pat, ent->ty->dom));
    body_ctx = ctx_globalize(body_ctx, type_fvs(ent->ty->cod));
    auto bodies = glob_expr(body_ctx, v.body, ent->ty->cod, cap);
    for (auto& base : cands) {
      for (auto& b : bodies) {
        auto sc = base;
        StoreInit v2 = v;
        v2.body = b;
        sc.emplace_back(name, v2);
        next.push_back(std::move(sc));
        if (next.size() >= cap) break;
      }
      if (next.size() >= cap) break;
    }
    cands = std::move(next);
    if (cands.empty()) return {};
  }
  return cands;
}

GlobProgramResult glob_program(const Program& prog, const Seed& seed, size_t cap) {
  Program trivial_prog = apply_qualification(prog, trivialize(prog, System::Global));
  GCtx g = seed_context(prog, seed);

  TypePtr target = seed.target;
  if (!target) {
    // fall back to the type the trivial program synthesizes
    auto trivial_check = check_program_global(prog, trivialize(prog, System::Global));
    target = trivial_check.main_ty;
  }

  GlobProgramResult result;
  auto stores = glob_store(g, trivial_prog, cap);
  if (stores.empty()) return result;
  auto mains = glob_expr(g, trivial_prog.main, target, cap);

  Skeleton sk = infer_skeleton(prog);
  for (auto& sc : stores) {
    for (auto& m : mains) {
      Program annotated = trivial_prog;
      annotated.store = sc;
      annotated.main = m;
      QualificationList q;
      q.global = true;
      q.occ_names = sk.occ_names;
      std::function<void(const ExprPtr&)> walk = [&](const ExprPtr& e) {
        if (is_occurrence(*e)) q.occ_types.push_back(*e->ann);
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
      for (auto& ent : g.entries) q.ctx.emplace_back(ent.name, ent.ty);
      try {
        check_program_global(prog, q);
      } catch (const Error&) {
        continue;  // accepted declaratively but not by the deterministic checker
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

}  // namespace l1
