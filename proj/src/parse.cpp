#include "l1/parse.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace l1 {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot write " + path);
  out << text;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

struct Tok {
  enum Kind { Ident, Int, Sym, End } kind = End;
  std::string text;
  int line = 0, col = 0;
};

struct Lexer {
  std::vector<Tok> toks;
  size_t pos = 0;

  explicit Lexer(const std::string& src) {
    int line = 1, col = 1;
    size_t i = 0;
    auto bump = [&](char c) {
      if (c == '\n') {
        line++;
        col = 1;
      } else {
        col++;
      }
    };
    while (i < src.size()) {
      char c = src[i];
      if (c == '#') {  // comment to end of line
        while (i < src.size() && src[i] != '\n') bump(src[i++]);
        continue;
      }
      if (std::isspace((unsigned char)c)) {
        bump(c);
        i++;
        continue;
      }
      int tl = line, tc = col;
      if (std::isalpha((unsigned char)c) || c == '_' || c == '%') {
        std::string s;
        while (i < src.size() &&
               (std::isalnum((unsigned char)src[i]) || src[i] == '_' || src[i] == '%')) {
          s += src[i];
          bump(src[i++]);
        }
        toks.push_back({Tok::Ident, s, tl, tc});
        continue;
      }
      if (std::isdigit((unsigned char)c)) {
        std::string s;
        while (i < src.size() && std::isdigit((unsigned char)src[i])) {
          s += src[i];
          bump(src[i++]);
        }
        toks.push_back({Tok::Int, s, tl, tc});
        continue;
      }
      if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
        toks.push_back({Tok::Sym, "->", tl, tc});
        bump(src[i++]);
        bump(src[i++]);
        continue;
      }
      if (c == '-' && i + 1 < src.size() && std::isdigit((unsigned char)src[i + 1])) {
        std::string s = "-";
        bump(src[i++]);
        while (i < src.size() && std::isdigit((unsigned char)src[i])) {
          s += src[i];
          bump(src[i++]);
        }
        toks.push_back({Tok::Int, s, tl, tc});
        continue;
      }
      if (c == ':' && i + 1 < src.size() && src[i + 1] == '=') {
        toks.push_back({Tok::Sym, ":=", tl, tc});
        bump(src[i++]);
        bump(src[i++]);
        continue;
      }
      static const std::string singles = "()<>,:=.\\;{}[]";
      if (singles.find(c) != std::string::npos) {
        toks.push_back({Tok::Sym, std::string(1, c), tl, tc});
        bump(src[i++]);
        continue;
      }
      throw Error("parse", "unexpected character '" + std::string(1, c) + "' at line " +
                               std::to_string(line) + ":" + std::to_string(col));
    }
    toks.push_back({Tok::End, "", line, col});
  }

  const Tok& peek(size_t k = 0) const { return toks[std::min(pos + k, toks.size() - 1)]; }
  Tok next() { return toks[std::min(pos++, toks.size() - 1)]; }
  bool at(const std::string& s) const { return peek().text == s && peek().kind != Tok::End; }
  bool at_ident(const std::string& s) const { return peek().kind == Tok::Ident && peek().text == s; }
  Tok expect(const std::string& s) {
    if (!at(s))
      throw Error("parse", "expected '" + s + "' but found '" + peek().text + "' at line " +
                               std::to_string(peek().line) + ":" + std::to_string(peek().col));
    return next();
  }
  Tok expect_ident() {
    if (peek().kind != Tok::Ident)
      throw Error("parse", "expected identifier, found '" + peek().text + "' at line " +
                               std::to_string(peek().line) + ":" + std::to_string(peek().col));
    return next();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error("parse", msg + " at line " + std::to_string(peek().line) + ":" +
                             std::to_string(peek().col));
  }
};

const std::set<std::string> kKeywords = {"let",  "in",   "if",  "then", "else", "case",
                                         "of",   "nil",  "consd", "iota", "param", "store",
                                         "main", "true", "false", "Pi"};

// ---------------------------------------------------------------------------
// Expression parser

struct ExprParser {
  Lexer& lx;
  const std::vector<std::string>& params;
  std::set<std::string> bound;

  ExprParser(Lexer& l, const std::vector<std::string>& ps, std::set<std::string> b)
      : lx(l), params(ps), bound(std::move(b)) {}

  PatternPtr pattern() {
    if (lx.at("<")) {
      lx.next();
      std::vector<PatternPtr> cs;
      if (lx.at(">")) {
        lx.next();
        return Pattern::unit();
      }
      cs.push_back(pattern());
      while (lx.at(",")) {
        lx.next();
        cs.push_back(pattern());
      }
      lx.expect(">");
      return Pattern::tuple(std::move(cs));
    }
    Tok t = lx.expect_ident();
    if (kKeywords.count(t.text)) lx.fail("keyword '" + t.text + "' cannot be a pattern variable");
    return Pattern::var(t.text);
  }

  ExprPtr leaf_ident(const std::string& name) {
    if (bound.count(name)) return Expr::var(name);
    if (std::find(params.begin(), params.end(), name) != params.end())
      return Expr::op(name, {});
    return Expr::var(name);  // a free variable; the checkers will flag it
  }

  bool starts_atom() const {
    const Tok& t = lx.peek();
    if (t.kind == Tok::Int) return true;
    if (t.kind == Tok::Sym) return t.text == "(" || t.text == "<";
    if (t.kind == Tok::Ident)
      return t.text == "nil" || t.text == "consd" || !kKeywords.count(t.text);
    return false;
  }

  ExprPtr atom() {
    const Tok& t = lx.peek();
    if (t.kind == Tok::Int) return Expr::op(lx.next().text, {});
    if (lx.at("(")) {
      lx.next();
      ExprPtr e = expr();
      if (lx.at(":")) {
        lx.next();
        ExprPtr tl = expr();
        lx.expect(")");
        return Expr::cons(e, tl);
      }
      lx.expect(")");
      return e;
    }
    if (lx.at("<")) {
      lx.next();
      std::vector<ExprPtr> cs;
      if (lx.at(">")) lx.fail("empty tuple expression");
      cs.push_back(expr());
      while (lx.at(",")) {
        lx.next();
        cs.push_back(expr());
      }
      lx.expect(">");
      return Expr::tup(std::move(cs));
    }
    if (lx.at_ident("nil")) {
      lx.next();
      return Expr::nil();
    }
    if (lx.at_ident("consd")) {
      lx.next();
      lx.expect("(");
      ExprPtr d = expr();
      lx.expect(",");
      ExprPtr h = expr();
      lx.expect(",");
      ExprPtr tl = expr();
      lx.expect(")");
      return Expr::forced_cons(d, h, tl);
    }
    Tok id = lx.expect_ident();
    if (kKeywords.count(id.text)) lx.fail("unexpected keyword '" + id.text + "'");
    if (find_builtin(id.text)) {
      lx.expect("(");
      std::vector<ExprPtr> args;
      if (!lx.at(")")) {
        args.push_back(expr());
        while (lx.at(",")) {
          lx.next();
          args.push_back(expr());
        }
      }
      lx.expect(")");
      return Expr::op(id.text, std::move(args));
    }
    if (starts_atom()) return Expr::app(id.text, atom());
    return leaf_ident(id.text);
  }

  ExprPtr expr() {
    if (lx.at_ident("let")) {
      lx.next();
      PatternPtr p = pattern();
      if (!pattern_vars_distinct(p)) lx.fail("repeated variable in pattern");
      lx.expect("=");
      ExprPtr b = expr();
      lx.expect("in");
      auto saved = bound;
      for (auto& v : pattern_vars(p)) bound.insert(v);
      ExprPtr body = expr();
      bound = saved;
      return Expr::let(p, b, body);
    }
    if (lx.at_ident("if")) {
      lx.next();
      ExprPtr c = expr();
      lx.expect("then");
      ExprPtr t = expr();
      lx.expect("else");
      ExprPtr e = expr();
      return Expr::ifx(c, t, e);
    }
    if (lx.at_ident("case")) {
      lx.next();
      ExprPtr scrut = expr();
      lx.expect("of");
      lx.expect("{");
      lx.expect("nil");
      lx.expect("->");
      ExprPtr nb = expr();
      lx.expect(";");
      lx.expect("(");
      Tok z1 = lx.expect_ident();
      lx.expect(":");
      Tok z2 = lx.expect_ident();
      lx.expect(")");
      lx.expect("->");
      auto saved = bound;
      bound.insert(z1.text);
      bound.insert(z2.text);
      ExprPtr cb = expr();
      bound = saved;
      lx.expect("}");
      return Expr::casex(scrut, nb, z1.text, z2.text, cb);
    }
    return atom();
  }
};

// ---------------------------------------------------------------------------
// Type parser (shared by qualification and seed files)

struct TypeParser {
  Lexer& lx;
  bool global;

  Qual qual() {
    Tok t = lx.expect_ident();
    if (t.text == "li") return Qual::li();
    if (t.text == "un") return Qual::un();
    if (t.text == "hi") return Qual::hi();
    if (t.text == "lo") return Qual::lo();
    if (global) return Qual::gvar(t.text);
    lx.fail("unknown qualifier '" + t.text + "'");
  }

  PreType pretype() {
    if (lx.at("[")) {
      lx.next();
      SType e = stype();
      lx.expect("]");
      return PreType::list(e);
    }
    Tok t = lx.expect_ident();
    if (t.text == "int") return PreType::intp();
    if (t.text == "bool") return PreType::boolp();
    if (t.text == "array") return PreType::arrayp();
    lx.fail("unknown pretype '" + t.text + "'");
  }

  SType stype() {
    Qual q = qual();
    return {q, pretype()};
  }

  TypePtr type_atom() {
    if (lx.at("(")) {
      lx.next();
      TypePtr t = type();
      lx.expect(")");
      return t;
    }
    if (lx.at("<")) {
      lx.next();
      std::vector<TypePtr> cs;
      if (!lx.at(">")) {
        cs.push_back(type());
        while (lx.at(",")) {
          lx.next();
          cs.push_back(type());
        }
      }
      lx.expect(">");
      return Type::tup(std::move(cs));
    }
    return Type::stor_t(stype());
  }

  PatternPtr pattern() {
    if (lx.at("<")) {
      lx.next();
      std::vector<PatternPtr> cs;
      if (lx.at(">")) {
        lx.next();
        return Pattern::unit();
      }
      cs.push_back(pattern());
      while (lx.at(",")) {
        lx.next();
        cs.push_back(pattern());
      }
      lx.expect(">");
      return Pattern::tuple(std::move(cs));
    }
    return Pattern::var(lx.expect_ident().text);
  }

  TypePtr type() {
    if (lx.at_ident("Pi")) {
      lx.next();
      PatternPtr p = pattern();
      lx.expect(":");
      TypePtr d = type_atom();
      lx.expect(".");
      TypePtr c = type();
      return Type::pi(p, d, c);
    }
    TypePtr t = type_atom();
    if (lx.at("->")) {
      lx.next();
      return Type::arrow(t, type());
    }
    return t;
  }

  // Operator entry: "(stype, ...) -> stype" or a bare output stype.
  OpType optype(const std::string& name) {
    OpType t;
    if (lx.at("(")) {
      lx.next();
      if (!lx.at(")")) {
        t.inputs.push_back(stype());
        while (lx.at(",")) {
          lx.next();
          t.inputs.push_back(stype());
        }
      }
      lx.expect(")");
      lx.expect("->");
    }
    t.output = stype();
    if (name == "nil")
      t.kind = OpKind::NilCtor;
    else if (name == "cons")
      t.kind = OpKind::ConsCtor;
    else if (name == "consd")
      t.kind = OpKind::ForcedCons;
    else
      t.kind = OpKind::Operator;
    return t;
  }
};

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trimmed(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool blank_or_comment(const std::string& s) {
  auto t = trimmed(s);
  return t.empty() || t[0] == '#';
}

}  // namespace

// ---------------------------------------------------------------------------
// Program files

Program parse_program(const std::string& text) {
  Lexer lx(text);
  lx.expect("l1");
  lx.expect_ident();  // version tag, e.g. v1

  Program prog;
  if (lx.at_ident("param")) {
    lx.next();
    while (lx.peek().kind == Tok::Ident && !kKeywords.count(lx.peek().text))
      prog.params.push_back(lx.next().text);
  }
  std::set<std::string> store_names;
  if (lx.at_ident("store")) {
    lx.next();
    while (!lx.at_ident("main")) {
      Tok name = lx.expect_ident();
      if (kKeywords.count(name.text)) lx.fail("keyword '" + name.text + "' cannot name a binding");
      lx.expect("=");
      StoreInit v;
      if (lx.peek().kind == Tok::Int) {
        v.kind = StoreInit::IntLit;
        v.i = std::stoll(lx.next().text);
      } else if (lx.at_ident("true") || lx.at_ident("false")) {
        v.kind = StoreInit::BoolLit;
        v.b = lx.next().text == "true";
      } else if (lx.at_ident("nil")) {
        lx.next();
        v.kind = StoreInit::NilV;
      } else if (lx.at_ident("iota")) {
        lx.next();
        lx.expect("(");
        v.kind = StoreInit::Iota;
        v.param = lx.expect_ident().text;
        lx.expect(")");
      } else if (lx.at("(")) {
        lx.next();
        v.kind = StoreInit::ConsV;
        v.head = lx.expect_ident().text;
        lx.expect(":");
        v.tail = lx.expect_ident().text;
        lx.expect(")");
      } else if (lx.at("\\")) {
        lx.next();
        ExprParser ep(lx, prog.params, store_names);
        v.kind = StoreInit::Clo;
        v.pat = ep.pattern();
        if (!pattern_vars_distinct(v.pat)) lx.fail("repeated variable in pattern");
        lx.expect(".");
        ep.bound.insert(name.text);  // recursive reference
        for (auto& pv : pattern_vars(v.pat)) ep.bound.insert(pv);
        v.body = ep.expr();
      } else if (lx.peek().kind == Tok::Ident) {
        v.kind = StoreInit::ParamRef;
        v.param = lx.next().text;
        if (std::find(prog.params.begin(), prog.params.end(), v.param) == prog.params.end())
          lx.fail("store value '" + v.param + "' is not a run parameter");
      } else {
        lx.fail("bad store value");
      }
      if (store_names.count(name.text)) lx.fail("duplicate store name " + name.text);
      store_names.insert(name.text);
      prog.store.emplace_back(name.text, std::move(v));
    }
  }
  lx.expect("main");
  ExprParser ep(lx, prog.params, store_names);
  prog.main = ep.expr();
  if (lx.peek().kind != Tok::End) lx.fail("trailing input after main expression");
  return number_occurrences(std::move(prog));
}

ExprPtr parse_expr_text(const std::string& text, const std::vector<std::string>& params,
                        const std::set<std::string>& bound) {
  Lexer lx(text);
  ExprParser ep(lx, params, bound);
  ExprPtr e = ep.expr();
  if (lx.peek().kind != Tok::End) lx.fail("trailing input after expression");
  int next = 0;
  Program tmp;
  tmp.main = e;
  tmp = number_occurrences(std::move(tmp));
  (void)next;
  return tmp.main;
}

// ---------------------------------------------------------------------------
// Printers

namespace {

void print_pattern(const PatternPtr& p, std::string& out) { out += to_string(p); }

void print_expr(const ExprPtr& e, std::string& out) {
  switch (e->kind) {
    case Expr::Var: out += e->name; break;
    case Expr::Op:
      out += e->name;
      if (!e->args.empty() || find_builtin(e->name)) {
        out += "(";
        for (size_t i = 0; i < e->args.size(); ++i) {
          if (i) out += ", ";
          print_expr(e->args[i], out);
        }
        out += ")";
      }
      break;
    case Expr::Nil: out += "nil"; break;
    case Expr::Cons:
      out += "(";
      print_expr(e->args[0], out);
      out += " : ";
      print_expr(e->args[1], out);
      out += ")";
      break;
    case Expr::ForcedConsE:
      out += "consd(";
      print_expr(e->args[0], out);
      out += ", ";
      print_expr(e->args[1], out);
      out += ", ";
      print_expr(e->args[2], out);
      out += ")";
      break;
    case Expr::Tup:
      out += "<";
      for (size_t i = 0; i < e->args.size(); ++i) {
        if (i) out += ", ";
        print_expr(e->args[i], out);
      }
      out += ">";
      break;
    case Expr::App: {
      out += e->name + " ";
      bool wrap = !(e->a->kind == Expr::Var || e->a->kind == Expr::Tup ||
                    (e->a->kind == Expr::Op && e->a->args.empty() && !find_builtin(e->a->name)));
      if (e->a->kind == Expr::Op) wrap = true;
      if (wrap) out += "(";
      print_expr(e->a, out);
      if (wrap) out += ")";
      break;
    }
    case Expr::Let:
      out += "let ";
      print_pattern(e->pat, out);
      out += " = ";
      print_expr(e->a, out);
      out += " in ";
      print_expr(e->b, out);
      break;
    case Expr::If:
      out += "if ";
      print_expr(e->a, out);
      out += " then ";
      print_expr(e->b, out);
      out += " else ";
      print_expr(e->c, out);
      break;
    case Expr::Case:
      out += "case ";
      print_expr(e->a, out);
      out += " of { nil -> ";
      print_expr(e->b, out);
      out += " ; (" + e->z1 + " : " + e->z2 + ") -> ";
      print_expr(e->c, out);
      out += " }";
      break;
  }
}

}  // namespace

std::string print_program(const Program& prog) {
  std::string out = "l1 v1\n";
  if (!prog.params.empty()) {
    out += "param";
    for (auto& p : prog.params) out += " " + p;
    out += "\n";
  }
  if (!prog.store.empty()) {
    out += "store\n";
    for (auto& [name, v] : prog.store) {
      out += "  " + name + " = ";
      switch (v.kind) {
        case StoreInit::IntLit: out += std::to_string(v.i); break;
        case StoreInit::BoolLit: out += v.b ? "true" : "false"; break;
        case StoreInit::ParamRef: out += v.param; break;
        case StoreInit::Iota: out += "iota(" + v.param + ")"; break;
        case StoreInit::NilV: out += "nil"; break;
        case StoreInit::ConsV: out += "(" + v.head + " : " + v.tail + ")"; break;
        case StoreInit::Clo: {
          out += "\\";
          print_pattern(v.pat, out);
          out += ". ";
          print_expr(v.body, out);
          break;
        }
      }
      out += "\n";
    }
  }
  out += "main\n  ";
  print_expr(prog.main, out);
  out += "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Qualification files

QualificationList parse_quals(const std::string& text) {
  auto lines = split_lines(text);
  size_t i = 0;
  while (i < lines.size() && blank_or_comment(lines[i])) i++;
  if (i == lines.size()) throw Error("parse", "empty qualification file");
  {
    Lexer hd(lines[i]);
    hd.expect("l1q");
    hd.expect_ident();
    Tok sys = hd.expect_ident();
    if (sys.text != "linear" && sys.text != "global")
      hd.fail("expected 'linear' or 'global'");
    QualificationList q;
    q.global = sys.text == "global";
    i++;
    enum { None, Sig, Ctx } section = None;
    for (; i < lines.size(); ++i) {
      if (blank_or_comment(lines[i])) continue;
      auto t = trimmed(lines[i]);
      if (t == "sig") {
        section = Sig;
        continue;
      }
      if (t == "ctx") {
        section = Ctx;
        continue;
      }
      Lexer ln(t);
      if (section == Sig) {
        std::string name = ln.next().text;
        ln.expect(":");
        TypeParser tp{ln, q.global};
        OpType ot = tp.optype(name);
        if (ln.peek().kind != Tok::End) ln.fail("trailing input in sig entry");
        q.occ_names.push_back(name);
        q.occ_types.push_back(std::move(ot));
      } else if (section == Ctx) {
        std::string name = ln.expect_ident().text;
        ln.expect(":");
        TypeParser tp{ln, q.global};
        TypePtr ty = tp.type();
        if (ln.peek().kind != Tok::End) ln.fail("trailing input in ctx entry");
        q.ctx.emplace_back(name, ty);
      } else {
        ln.fail("entry outside of a sig/ctx section");
      }
    }
    return q;
  }
}

std::string print_quals(const QualificationList& q) {
  std::string out = std::string("l1q v1 ") + (q.global ? "global" : "linear") + "\n";
  out += "sig\n";
  for (size_t i = 0; i < q.occ_types.size(); ++i)
    out += "  " + q.occ_names[i] + " : " + to_string(q.occ_types[i]) + "\n";
  if (!q.ctx.empty()) {
    out += "ctx\n";
    for (auto& [name, ty] : q.ctx) out += "  " + name + " : " + to_string(ty) + "\n";
  }
  return out;
}

TypePtr parse_type_text(const std::string& text, bool global) {
  Lexer lx(text);
  TypeParser tp{lx, global};
  TypePtr t = tp.type();
  if (lx.peek().kind != Tok::End) lx.fail("trailing input after type");
  return t;
}

Seed parse_seed(const std::string& text) {
  auto lines = split_lines(text);
  size_t i = 0;
  while (i < lines.size() && blank_or_comment(lines[i])) i++;
  if (i == lines.size()) throw Error("parse", "empty seed file");
  Lexer hd(lines[i]);
  hd.expect("l1s");
  hd.expect_ident();
  i++;
  Seed s;
  bool in_env = false;
  for (; i < lines.size(); ++i) {
    if (blank_or_comment(lines[i])) continue;
    auto t = trimmed(lines[i]);
    if (t == "env") {
      in_env = true;
      continue;
    }
    Lexer ln(t);
    if (!in_env && ln.at_ident("target")) {
      ln.next();
      TypeParser tp{ln, true};
      s.target = tp.type();
      continue;
    }
    if (!in_env) ln.fail("expected 'target' or 'env'");
    std::string name = ln.expect_ident().text;
    ln.expect(":");
    TypeParser tp{ln, true};
    s.env.emplace_back(name, tp.type());
  }
  return s;
}

std::vector<Constraint> parse_constraints(const std::string& text) {
  std::vector<Constraint> out;
  for (auto& raw : split_lines(text)) {
    if (blank_or_comment(raw)) continue;
    Lexer ln(trimmed(raw));
    ln.expect("occ");
    if (ln.peek().kind != Tok::Int) ln.fail("expected occurrence id");
    Constraint c;
    c.occ = std::stoi(ln.next().text);
    if (ln.at_ident("fixed")) {
      ln.next();
      c.fixed_trivial = true;
    } else {
      c.fixed_trivial = false;
      std::string name = ln.peek().text;
      TypeParser tp{ln, false};
      c.ty = tp.optype(name == "(" ? "" : name);
      // kind is refined against the program at application time
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace l1
