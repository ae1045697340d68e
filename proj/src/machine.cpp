#include "l1/machine.hpp"

namespace l1 {

long long value_size(const Value& v) {
  switch (v.kind) {
    case Value::IntV: return 1;
    case Value::BoolV: return 0;  // booleans are not counted
    case Value::ArrayV: return (long long)v.arr.size();
    case Value::NilV:
    case Value::ConsV: return 1;
    case Value::CloV: return 0;
  }
  return 0;
}

const Value& StoreRT::at(const std::string& x) const {
  auto it = index.find(x);
  if (it == index.end()) throw Error("machine", "unbound store cell " + x);
  return *slots[it->second].second;
}

void StoreRT::insert(const std::string& x, Value v) {
  if (index.count(x)) throw Error("machine", "store name reused: " + x);
  index[x] = slots.size();
  slots.emplace_back(x, std::move(v));
}

void StoreRT::update(const std::string& x, Value v) {
  auto it = index.find(x);
  if (it == index.end())
    throw Error("machine", "in-place update target " + x + " is not in the store");
  slots[it->second].second = std::move(v);
}

void StoreRT::erase(const std::string& x) {
  auto it = index.find(x);
  if (it == index.end()) throw Error("machine", "double free of " + x);
  slots[it->second].second.reset();
  index.erase(it);
}

std::vector<std::pair<std::string, Value>> StoreRT::live() const {
  std::vector<std::pair<std::string, Value>> out;
  for (auto& [name, v] : slots)
    if (v) out.emplace_back(name, *v);
  return out;
}

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Eva: return "eva";
    case Rule::Eop: return "eop";
    case Rule::Eol: return "eol";
    case Rule::Eog: return "eog";
    case Rule::Eif: return "eif";
    case Rule::Ele: return "ele";
    case Rule::Eap: return "eap";
    case Rule::Eem: return "eem";
    case Rule::Eel: return "eel";
    case Rule::Eeg: return "eeg";
    case Rule::Eco: return "eco";
    case Rule::Ecl: return "ecl";
    case Rule::Ecg: return "ecg";
    case Rule::Eca: return "eca";
  }
  return "?";
}

long long dealloc(StoreRT& s, const std::vector<Qual>& quals,
                  const std::vector<std::string>& names) {
  if (quals.size() != names.size()) throw Error("machine", "dealloc arity mismatch");
  long long freed = 0;
  for (size_t i = 0; i < names.size(); ++i) {
    if (quals[i].kind != QualKind::Li) continue;
    auto it = s.index.find(names[i]);
    if (it == s.index.end()) throw Error("machine", "double free of " + names[i]);
    freed += value_size(*s.slots[it->second].second);
    s.erase(names[i]);
  }
  return freed;
}

bool is_pattern_expr(const ExprPtr& e) {
  if (e->kind == Expr::Var) return true;
  if (e->kind != Expr::Tup) return false;
  for (auto& a : e->args)
    if (!is_pattern_expr(a)) return false;
  return true;
}

PatternPtr expr_to_pattern(const ExprPtr& e) {
  if (e->kind == Expr::Var) return Pattern::var(e->name);
  if (e->kind != Expr::Tup) throw Error("machine", "terminal control is not a pattern");
  std::vector<PatternPtr> cs;
  for (auto& a : e->args) cs.push_back(expr_to_pattern(a));
  return Pattern::tuple(std::move(cs));
}

// ---------------------------------------------------------------------------
// Loading

static Value instantiate(const StoreInit& v, const std::map<std::string, long long>& params) {
  switch (v.kind) {
    case StoreInit::IntLit: return Value::intv(v.i);
    case StoreInit::BoolLit: return Value::boolv(v.b);
    case StoreInit::ParamRef: {
      auto it = params.find(v.param);
      if (it == params.end()) throw Error("machine", "missing run parameter " + v.param);
      return Value::intv(it->second);
    }
    case StoreInit::Iota: {
      auto it = params.find(v.param);
      if (it == params.end()) throw Error("machine", "missing run parameter " + v.param);
      std::vector<long long> a;
      for (long long k = 0; k <= it->second; ++k) a.push_back(k);
      return Value::arrayv(std::move(a));
    }
    case StoreInit::NilV: return Value::nilv();
    case StoreInit::ConsV: return Value::consv(v.head, v.tail);
    case StoreInit::Clo: return Value::clov(v.pat, v.body);
  }
  throw Error("machine", "bad store value");
}

Config load(const Program& prog, Mode mode, const std::map<std::string, long long>& params,
            const std::set<std::string>& gset) {
  Config cfg;
  cfg.mode = mode;
  cfg.gset = gset;
  cfg.params = params;
  for (auto& [name, v] : prog.store) cfg.store.insert(name, instantiate(v, params));
  cfg.control = prog.main;
  return cfg;
}

// ---------------------------------------------------------------------------
// Delta: operator semantics on values

static long long as_int(const Value& v, const std::string& who) {
  if (v.kind != Value::IntV) throw Error("machine", who + ": integer expected");
  return v.i;
}

static Value delta(const std::string& name, const std::vector<Value>& args,
                   const std::map<std::string, long long>& params) {
  if (is_int_literal(name)) return Value::intv(std::stoll(name));
  if (auto it = params.find(name); it != params.end()) return Value::intv(it->second);
  auto arr_at = [&](const Value& a, long long i) -> long long {
    if (a.kind != Value::ArrayV) throw Error("machine", name + ": array expected");
    if (i < 0 || i >= (long long)a.arr.size())
      throw Error("machine", name + ": index " + std::to_string(i) + " out of range");
    return a.arr[i];
  };
  if (name == "eqz") return Value::boolv(as_int(args[0], name) == 0);
  if (name == "sub1") return Value::intv(as_int(args[0], name) - 1);
  if (name == "add1") return Value::intv(as_int(args[0], name) + 1);
  if (name == "dbl") return Value::intv(2 * as_int(args[0], name));
  if (name == "add") return Value::intv(as_int(args[0], name) + as_int(args[1], name));
  if (name == "mul") return Value::intv(as_int(args[0], name) * as_int(args[1], name));
  if (name == "eq") return Value::boolv(as_int(args[0], name) == as_int(args[1], name));
  if (name == "leq") return Value::boolv(as_int(args[0], name) <= as_int(args[1], name));
  if (name == "id") return args[0];
  if (name == "pi1") return args[0];
  if (name == "pi2") return args[1];
  if (name == "get") return Value::intv(arr_at(args[0], as_int(args[1], name)));
  if (name == "getd") return Value::intv(arr_at(args[0], as_int(args[1], name)));
  if (name == "set") {
    Value a = args[0];
    long long i = as_int(args[1], name);
    (void)arr_at(args[0], i);
    a.arr[i] = as_int(args[2], name);
    return a;
  }
  throw Error("machine", "unknown operator " + name);
}

// ---------------------------------------------------------------------------
// Stepping

namespace {

struct Stepper {
  Config& cfg;
  bool fired = false;
  Rule rule = Rule::Eva;
  int occ = -1;

  explicit Stepper(Config& c) : cfg(c) {}

  bool global_mode() const { return cfg.mode == Mode::Gl || cfg.mode == Mode::GlCmd; }

  std::string fresh_name() { return "%" + std::to_string(cfg.fresh++); }

  std::string alloc(Value v) {
    std::string x = fresh_name();
    cfg.counters.alloc_units += value_size(v);
    cfg.store.insert(x, std::move(v));
    return x;
  }

  PatternPtr cmd_pattern(const PatternPtr& p) {
    if (cfg.mode != Mode::GlCmd) return p;
    std::function<PatternPtr(const PatternPtr&)> go = [&](const PatternPtr& q) -> PatternPtr {
      if (q->kind == Pattern::Var)
        return cfg.gset.count(q->name) ? Pattern::unit() : q;
      std::vector<PatternPtr> cs;
      for (auto& c : q->comps) cs.push_back(go(c));
      return Pattern::tuple(std::move(cs));
    };
    return go(p);
  }

  const OpType& ann_of(const ExprPtr& e) {
    if (!e->ann) throw Error("machine", "unannotated occurrence", e->occ);
    return *e->ann;
  }

  ExprPtr fire_op(const ExprPtr& e) {
    const OpType& t = ann_of(e);
    std::vector<std::string> names;
    std::vector<Value> vals;
    for (auto& a : e->args) {
      if (a->kind != Expr::Var) throw Error("machine", "operator argument is not a cell", e->occ);
      names.push_back(a->name);
      vals.push_back(cfg.store.at(a->name));
    }
    Value v = delta(e->name, vals, cfg.params);
    occ = e->occ;
    if (global_mode()) {
      const Qual& g = t.output.q;
      if (g.kind == QualKind::Lo) {
        rule = Rule::Eol;
        return Expr::var(alloc(std::move(v)));
      }
      if (g.kind != QualKind::Var)
        throw Error("machine", "non-global output qualifier in global mode", e->occ);
      rule = Rule::Eog;
      cfg.store.update(g.var, std::move(v));
      return Expr::var(g.var);
    }
    std::vector<Qual> qs;
    for (auto& in : t.inputs) qs.push_back(in.q);
    cfg.counters.dealloc_units += dealloc(cfg.store, qs, names);
    rule = Rule::Eop;
    return Expr::var(alloc(std::move(v)));
  }

  ExprPtr fire_nil(const ExprPtr& e) {
    const OpType& t = ann_of(e);
    occ = e->occ;
    if (global_mode() && t.output.q.kind == QualKind::Var) {
      rule = Rule::Eeg;
      cfg.store.update(t.output.q.var, Value::nilv());
      return Expr::var(t.output.q.var);
    }
    rule = global_mode() ? Rule::Eel : Rule::Eem;
    return Expr::var(alloc(Value::nilv()));
  }

  ExprPtr fire_cons(const ExprPtr& e, bool forced) {
    const OpType& t = ann_of(e);
    size_t base = forced ? 1 : 0;
    for (size_t i = 0; i < e->args.size(); ++i)
      if (e->args[i]->kind != Expr::Var)
        throw Error("machine", "constructor argument is not a cell", e->occ);
    std::string h = e->args[base]->name;
    std::string tl = e->args[base + 1]->name;
    if (!cfg.store.contains(h) || !cfg.store.contains(tl))
      throw Error("machine", "constructor references a missing cell", e->occ);
    occ = e->occ;
    if (forced && !global_mode()) {
      // the extra input exists to be destroyed by the linear evaluation
      cfg.counters.dealloc_units +=
          dealloc(cfg.store, {t.inputs[0].q}, {e->args[0]->name});
    }
    if (global_mode() && t.output.q.kind == QualKind::Var) {
      rule = Rule::Ecg;
      cfg.store.update(t.output.q.var, Value::consv(h, tl));
      return Expr::var(t.output.q.var);
    }
    rule = global_mode() ? Rule::Ecl : Rule::Eco;
    return Expr::var(alloc(Value::consv(h, tl)));
  }

  // Reduces the leftmost redex inside e; returns the rewritten expression.
  ExprPtr go(const ExprPtr& e) {
    if (fired) return e;
    switch (e->kind) {
      case Expr::Var: return e;

      case Expr::Op: {
        for (size_t i = 0; i < e->args.size(); ++i) {
          if (e->args[i]->kind != Expr::Var) {
            auto n = std::make_shared<Expr>(*e);
            n->args[i] = go(e->args[i]);
            return n;
          }
        }
        fired = true;
        return fire_op(e);
      }

      case Expr::Nil:
        fired = true;
        return fire_nil(e);

      case Expr::Cons:
      case Expr::ForcedConsE: {
        for (size_t i = 0; i < e->args.size(); ++i) {
          if (e->args[i]->kind != Expr::Var) {
            auto n = std::make_shared<Expr>(*e);
            n->args[i] = go(e->args[i]);
            return n;
          }
        }
        fired = true;
        return fire_cons(e, e->kind == Expr::ForcedConsE);
      }

      case Expr::Tup: {
        for (size_t i = 0; i < e->args.size(); ++i) {
          if (!is_pattern_expr(e->args[i])) {
            auto n = std::make_shared<Expr>(*e);
            n->args[i] = go(e->args[i]);
            return n;
          }
        }
        return e;  // a tuple of patterns is terminal here
      }

      case Expr::App: {
        if (!is_pattern_expr(e->a)) {
          auto n = std::make_shared<Expr>(*e);
          n->a = go(e->a);
          return n;
        }
        fired = true;
        rule = Rule::Eap;
        const Value& f = cfg.store.at(e->name);
        if (f.kind != Value::CloV) throw Error("machine", e->name + " is not a closure");
        PatternPtr p = cmd_pattern(f.pat);
        return subst(p, expr_to_pattern(e->a), f.body);
      }

      case Expr::Let: {
        if (!is_pattern_expr(e->a)) {
          auto n = std::make_shared<Expr>(*e);
          n->a = go(e->a);
          return n;
        }
        fired = true;
        rule = Rule::Ele;
        return subst(cmd_pattern(e->pat), expr_to_pattern(e->a), e->b);
      }

      case Expr::If: {
        if (e->a->kind != Expr::Var) {
          auto n = std::make_shared<Expr>(*e);
          n->a = go(e->a);
          return n;
        }
        fired = true;
        rule = Rule::Eif;
        const Value& c = cfg.store.at(e->a->name);
        if (c.kind != Value::BoolV) throw Error("machine", "if condition is not a boolean cell");
        return c.b ? e->b : e->c;  // the boolean cell stays in the store
      }

      case Expr::Case: {
        if (e->a->kind != Expr::Var) {
          auto n = std::make_shared<Expr>(*e);
          n->a = go(e->a);
          return n;
        }
        fired = true;
        rule = Rule::Eca;
        if (!e->caseq) throw Error("machine", "case phrase lacks its qualifier");
        const Value v = cfg.store.at(e->a->name);  // copy before a possible free
        cfg.counters.dealloc_units += dealloc(cfg.store, {*e->caseq}, {e->a->name});
        if (v.kind == Value::NilV) return e->b;
        if (v.kind != Value::ConsV) throw Error("machine", "case scrutinee is not a list cell");
        auto to = Pattern::tuple({Pattern::var(v.head), Pattern::var(v.tail)});
        auto p = Pattern::tuple({Pattern::var(e->z1), Pattern::var(e->z2)});
        return subst(p, to, e->c);
      }
    }
    throw Error("machine", "unreachable");
  }
};

}  // namespace

Rule step(Config& cfg) {
  if (is_pattern_expr(cfg.control)) throw Error("machine", "configuration is terminal");
  Stepper st(cfg);
  ExprPtr next = st.go(cfg.control);
  if (!st.fired) throw Error("machine", "stuck configuration");
  cfg.control = next;
  cfg.counters.steps += 1;
  return st.rule;
}

RunResult run(Config cfg, long long fuel, bool trace) {
  RunResult out;
  while (!is_pattern_expr(cfg.control)) {
    if (fuel-- <= 0) throw Error("machine", "fuel exhausted");
    Stepper st(cfg);
    ExprPtr next = st.go(cfg.control);
    if (!st.fired) throw Error("machine", "stuck configuration");
    cfg.control = next;
    cfg.counters.steps += 1;
    if (trace)
      out.trace.push_back({st.rule, st.occ, cfg.store.live_size(), cfg.counters});
  }
  out.result = expr_to_pattern(cfg.control);
  out.cfg = std::move(cfg);
  return out;
}

RunResult run_program(const Program& elaborated, Mode mode,
                      const std::map<std::string, long long>& params, long long fuel,
                      const std::set<std::string>& gset, bool trace) {
  return run(load(elaborated, mode, params, gset), fuel, trace);
}

// ---------------------------------------------------------------------------
// Readback

bool rval_eq(const RVal& a, const RVal& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case RVal::RInt: return a.i == b.i;
    case RVal::RBool: return a.b == b.b;
    case RVal::RArr: return a.arr == b.arr;
    case RVal::RClo: return true;  // closures render opaquely
    case RVal::RList:
    case RVal::RTup: {
      if (a.items.size() != b.items.size()) return false;
      for (size_t i = 0; i < a.items.size(); ++i)
        if (!rval_eq(a.items[i], b.items[i])) return false;
      return true;
    }
  }
  return false;
}

std::string to_string(const RVal& v) {
  switch (v.kind) {
    case RVal::RInt: return std::to_string(v.i);
    case RVal::RBool: return v.b ? "true" : "false";
    case RVal::RArr: {
      std::string s = "{";
      for (size_t i = 0; i < v.arr.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(v.arr[i]);
      }
      return s + "}";
    }
    case RVal::RClo: return "<closure>";
    case RVal::RList: {
      std::string s = "[";
      for (size_t i = 0; i < v.items.size(); ++i) {
        if (i) s += ", ";
        s += to_string(v.items[i]);
      }
      return s + "]";
    }
    case RVal::RTup: {
      std::string s = "<";
      for (size_t i = 0; i < v.items.size(); ++i) {
        if (i) s += ", ";
        s += to_string(v.items[i]);
      }
      return s + ">";
    }
  }
  return "?";
}

static RVal readback_cell(const StoreRT& s, const std::string& x) {
  if (!s.contains(x))
    throw Error("machine", "readback hit a dangling cell " + x +
                               " (destroyed by a linear step; the program is unprotected)");
  const Value& v = s.at(x);
  RVal out;
  switch (v.kind) {
    case Value::IntV: out.kind = RVal::RInt; out.i = v.i; return out;
    case Value::BoolV: out.kind = RVal::RBool; out.b = v.b; return out;
    case Value::ArrayV: out.kind = RVal::RArr; out.arr = v.arr; return out;
    case Value::CloV: out.kind = RVal::RClo; return out;
    case Value::NilV: out.kind = RVal::RList; return out;
    case Value::ConsV: {
      RVal head = readback_cell(s, v.head);
      RVal tail = readback_cell(s, v.tail);
      if (tail.kind != RVal::RList) throw Error("machine", "list tail is not a list");
      out.kind = RVal::RList;
      out.items.push_back(std::move(head));
      for (auto& it : tail.items) out.items.push_back(std::move(it));
      return out;
    }
  }
  return out;
}

RVal readback(const StoreRT& s, const PatternPtr& p) {
  if (p->kind == Pattern::Var) return readback_cell(s, p->name);
  RVal out;
  out.kind = RVal::RTup;
  for (auto& c : p->comps) out.items.push_back(readback(s, c));
  return out;
}

}  // namespace l1
