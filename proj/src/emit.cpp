#include "l1/emit.hpp"

#include <sstream>

namespace l1 {

namespace {

std::shared_ptr<ImpExpr> mk(ImpExpr::Kind k) {
  auto n = std::make_shared<ImpExpr>();
  n->kind = k;
  return n;
}

PatternPtr bar_pattern(const std::set<std::string>& gl, const PatternPtr& p) {
  if (p->kind == Pattern::Var) return gl.count(p->name) ? Pattern::unit() : p;
  std::vector<PatternPtr> cs;
  cs.reserve(p->comps.size());
  for (auto& c : p->comps) cs.push_back(bar_pattern(gl, c));
  return Pattern::tuple(std::move(cs));
}

ImpPtr assign_or(const ExprPtr& e, ImpPtr plain) {
  const Qual& g = e->ann->output.q;
  if (g.kind == QualKind::Var) {
    auto n = mk(ImpExpr::Assign);
    n->name = g.var;
    n->rhs = std::move(plain);
    return n;
  }
  return plain;
}

}  // namespace

ImpPtr emit_expr(const std::set<std::string>& gl, const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Var: {
      auto n = mk(ImpExpr::Var);
      n->name = e->name;
      return n;
    }
    case Expr::Op: {
      if (!e->ann) throw Error("emit", "unannotated operator", e->occ);
      auto call = mk(ImpExpr::Call);
      call->name = e->name;
      for (auto& a : e->args) call->args.push_back(emit_expr(gl, a));
      return assign_or(e, call);
    }
    case Expr::Nil: {
      if (!e->ann) throw Error("emit", "unannotated nil", e->occ);
      return assign_or(e, mk(ImpExpr::NilI));
    }
    case Expr::Cons: {
      if (!e->ann) throw Error("emit", "unannotated cons", e->occ);
      auto c = mk(ImpExpr::ConsI);
      c->args = {emit_expr(gl, e->args[0]), emit_expr(gl, e->args[1])};
      return assign_or(e, c);
    }
    case Expr::ForcedConsE: {
      if (!e->ann) throw Error("emit", "unannotated consd", e->occ);
      if (e->ann->output.q.kind == QualKind::Var) {
        // the destroyed input is exactly the overwrite target; it vanishes
        auto c = mk(ImpExpr::ConsI);
        c->args = {emit_expr(gl, e->args[1]), emit_expr(gl, e->args[2])};
        return assign_or(e, c);
      }
      auto call = mk(ImpExpr::Call);
      call->name = "consd";
      for (auto& a : e->args) call->args.push_back(emit_expr(gl, a));
      return call;
    }
    case Expr::Tup: {
      auto n = mk(ImpExpr::Tup);
      for (auto& a : e->args) n->args.push_back(emit_expr(gl, a));
      return n;
    }
    case Expr::App: {
      auto n = mk(ImpExpr::App);
      n->name = e->name;
      n->a = emit_expr(gl, e->a);
      return n;
    }
    case Expr::Let: {
      auto n = mk(ImpExpr::Let);
      n->pat = bar_pattern(gl, e->pat);
      n->a = emit_expr(gl, e->a);
      n->b = emit_expr(gl, e->b);
      return n;
    }
    case Expr::If: {
      auto n = mk(ImpExpr::If);
      n->a = emit_expr(gl, e->a);
      n->b = emit_expr(gl, e->b);
      n->c = emit_expr(gl, e->c);
      return n;
    }
    case Expr::Case: {
      auto n = mk(ImpExpr::Case);
      n->a = emit_expr(gl, e->a);
      n->b = emit_expr(gl, e->b);
      n->z1 = e->z1;
      n->z2 = e->z2;
      n->c = emit_expr(gl, e->c);
      return n;
    }
  }
  throw Error("emit", "unreachable");
}

static ExprPtr bar_exec(const std::set<std::string>& gl, const ExprPtr& e) {
  auto n = std::make_shared<Expr>(*e);
  switch (e->kind) {
    case Expr::Var:
    case Expr::Nil: break;
    case Expr::Op:
    case Expr::Cons:
    case Expr::ForcedConsE:
    case Expr::Tup:
      for (auto& a : n->args) a = bar_exec(gl, a);
      break;
    case Expr::App: n->a = bar_exec(gl, e->a); break;
    case Expr::Let:
      n->pat = bar_pattern(gl, e->pat);
      n->a = bar_exec(gl, e->a);
      n->b = bar_exec(gl, e->b);
      break;
    case Expr::If:
      n->a = bar_exec(gl, e->a);
      n->b = bar_exec(gl, e->b);
      n->c = bar_exec(gl, e->c);
      break;
    case Expr::Case:
      n->a = bar_exec(gl, e->a);
      n->b = bar_exec(gl, e->b);
      n->c = bar_exec(gl, e->c);
      break;
  }
  return n;
}

Emission emit_program(const Program& prog, const QualificationList& quals) {
  auto checked = check_program_global(prog, quals);
  std::set<std::string> gl = globals(checked.ctx);

  Emission em;
  em.gset = gl;
  em.exec = checked.elab;
  for (auto& [name, v] : em.exec.store) {
    if (v.kind != StoreInit::Clo) continue;
    em.store_bodies.emplace_back(name, emit_expr(gl, v.body));
    StoreInit v2 = v;
    v2.pat = bar_pattern(gl, v.pat);
    v2.body = bar_exec(gl, v.body);
    v = v2;
  }
  em.main = emit_expr(gl, em.exec.main);
  em.exec.main = bar_exec(gl, em.exec.main);
  return em;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void print_imp(const ImpPtr& e, std::string& out);

void print_imp_arg(const ImpPtr& e, std::string& out) {
  bool wrap = e->kind == ImpExpr::Assign || e->kind == ImpExpr::App ||
              e->kind == ImpExpr::Let || e->kind == ImpExpr::If ||
              e->kind == ImpExpr::Case || e->kind == ImpExpr::Call;
  if (wrap) out += "(";
  print_imp(e, out);
  if (wrap) out += ")";
}

void print_imp(const ImpPtr& e, std::string& out) {
  switch (e->kind) {
    case ImpExpr::Var: out += e->name; break;
    case ImpExpr::Call: {
      out += e->name + "(";
      for (size_t i = 0; i < e->args.size(); ++i) {
        if (i) out += ", ";
        print_imp(e->args[i], out);
      }
      out += ")";
      break;
    }
    case ImpExpr::NilI: out += "nil"; break;
    case ImpExpr::ConsI:
      out += "(";
      print_imp(e->args[0], out);
      out += " : ";
      print_imp(e->args[1], out);
      out += ")";
      break;
    case ImpExpr::Assign:
      out += e->name + " := ";
      print_imp(e->rhs, out);
      break;
    case ImpExpr::Tup: {
      out += "<";
      for (size_t i = 0; i < e->args.size(); ++i) {
        if (i) out += ", ";
        print_imp(e->args[i], out);
      }
      out += ">";
      break;
    }
    case ImpExpr::App:
      out += e->name + " ";
      print_imp_arg(e->a, out);
      break;
    case ImpExpr::Let: {
      if (pattern_vars(e->pat).empty()) {
        // (let p = e in e') with FV p = {} prints with the ; sugar
        bool wrap = e->a->kind == ImpExpr::Let || e->a->kind == ImpExpr::If ||
                    e->a->kind == ImpExpr::Case;
        if (wrap) out += "(";
        print_imp(e->a, out);
        if (wrap) out += ")";
        out += "; ";
        print_imp(e->b, out);
      } else {
        out += "let " + to_string(e->pat) + " = ";
        print_imp(e->a, out);
        out += " in ";
        print_imp(e->b, out);
      }
      break;
    }
    case ImpExpr::If:
      out += "if ";
      print_imp(e->a, out);
      out += " then ";
      print_imp(e->b, out);
      out += " else ";
      print_imp(e->c, out);
      break;
    case ImpExpr::Case:
      out += "case ";
      print_imp(e->a, out);
      out += " of { nil -> ";
      print_imp(e->b, out);
      out += " ; (" + e->z1 + " : " + e->z2 + ") -> ";
      print_imp(e->c, out);
      out += " }";
      break;
  }
}

}  // namespace

std::string print_imperative(const Emission& em, const Program& prog) {
  std::string out;
  std::map<std::string, ImpPtr> bodies(em.store_bodies.begin(), em.store_bodies.end());
  std::map<std::string, PatternPtr> pats;
  for (auto& [name, v] : em.exec.store)
    if (v.kind == StoreInit::Clo) pats[name] = v.pat;
  for (auto& [name, v] : prog.store) {
    out += name + " = ";
    switch (v.kind) {
      case StoreInit::IntLit: out += std::to_string(v.i); break;
      case StoreInit::BoolLit: out += v.b ? "true" : "false"; break;
      case StoreInit::ParamRef: out += v.param; break;
      case StoreInit::Iota: out += "iota(" + v.param + ")"; break;
      case StoreInit::NilV: out += "nil"; break;
      case StoreInit::ConsV: out += "(" + v.head + " : " + v.tail + ")"; break;
      case StoreInit::Clo: {
        out += "\\" + to_string(pats.at(name)) + ". ";
        print_imp(bodies.at(name), out);
        break;
      }
    }
    out += ",\n";
  }
  print_imp(em.main, out);
  out += "\n";
  return out;
}

bool same_modulo_ws(const std::string& a, const std::string& b) {
  auto norm = [](const std::string& s) {
    std::string out;
    bool in_ws = true;
    for (char c : s) {
      if (std::isspace((unsigned char)c)) {
        if (!in_ws) out += ' ';
        in_ws = true;
      } else {
        out += c;
        in_ws = false;
      }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
  };
  return norm(a) == norm(b);
}

}  // namespace l1
