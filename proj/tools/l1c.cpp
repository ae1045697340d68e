// Command-line front end: checking, evaluation, search, protection,
// classification and emission over .l1 / .qlin / .qglo / .seed files.

#include <iostream>

#include <CLI11.hpp>

#include "l1/analysis.hpp"
#include "l1/emit.hpp"
#include "l1/global.hpp"
#include "l1/globalize.hpp"
#include "l1/linear.hpp"
#include "l1/linearize.hpp"
#include "l1/machine.hpp"
#include "l1/parse.hpp"

using namespace l1;

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

Program load_program(const std::string& path) { return parse_program(read_file(path)); }
QualificationList load_quals(const std::string& path) { return parse_quals(read_file(path)); }

std::map<std::string, long long> parse_params(const std::vector<std::string>& kvs) {
  std::map<std::string, long long> out;
  for (auto& kv : kvs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error("usage", "--param expects name=value");
    out[kv.substr(0, eq)] = std::stoll(kv.substr(eq + 1));
  }
  return out;
}

std::vector<long long> parse_samples(const std::string& s) {
  std::vector<long long> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(std::stoll(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

int cmd_check_linear(const std::string& p, const std::string& q, bool json) {
  auto prog = load_program(p);
  auto quals = load_quals(q);
  try {
    auto res = check_program(prog, quals);
    if (json)
      std::cout << "{\"ok\": true, \"main_type\": \"" << to_string(res.main_ty) << "\"}\n";
    else
      std::cout << "linearly typed; main : " << to_string(res.main_ty) << "\n";
    return kOk;
  } catch (const Error& e) {
    if (json)
      std::cout << "{\"ok\": false, \"error\": \"" << e.what() << "\", \"occ\": " << e.occ
                << "}\n";
    else
      std::cout << "rejected: " << e.what() << (e.occ >= 0 ? " (occurrence " + std::to_string(e.occ) + ")" : "")
                << "\n";
    return kFail;
  }
}

int cmd_check_global(const std::string& p, const std::string& q, bool json) {
  auto prog = load_program(p);
  auto quals = load_quals(q);
  try {
    auto res = check_program_global(prog, quals);
    if (json)
      std::cout << "{\"ok\": true, \"main_type\": \"" << to_string(res.main_ty) << "\"}\n";
    else
      std::cout << "globally typed; main : " << to_string(res.main_ty) << "\n";
    return kOk;
  } catch (const Error& e) {
    if (json)
      std::cout << "{\"ok\": false, \"error\": \"" << e.what() << "\", \"occ\": " << e.occ
                << "}\n";
    else
      std::cout << "rejected: " << e.what() << (e.occ >= 0 ? " (occurrence " + std::to_string(e.occ) + ")" : "")
                << "\n";
    return kFail;
  }
}

int cmd_eval(const std::string& p, const std::string& qpath, const std::string& mode_s,
             const std::vector<std::string>& params_kv, long long fuel, bool trace, bool json) {
  auto prog = load_program(p);
  auto params = parse_params(params_kv);

  Mode mode;
  if (mode_s == "un")
    mode = Mode::Un;
  else if (mode_s == "li")
    mode = Mode::Li;
  else if (mode_s == "gl")
    mode = Mode::Gl;
  else if (mode_s == "glcmd")
    mode = Mode::GlCmd;
  else
    throw Error("usage", "unknown mode " + mode_s);

  Program elab;
  std::set<std::string> gset;
  if (mode == Mode::Un) {
    elab = check_program(prog, trivialize(prog, System::Linear)).elab;
  } else if (mode == Mode::Li) {
    if (qpath.empty()) throw Error("usage", "--mode li requires --quals");
    elab = check_program(prog, load_quals(qpath)).elab;
  } else {
    if (qpath.empty()) throw Error("usage", "global modes require --quals");
    auto res = check_program_global(prog, load_quals(qpath));
    elab = res.elab;
    if (mode == Mode::GlCmd) gset = globals(res.ctx);
  }

  auto res = run_program(elab, mode, params, fuel, gset, trace);
  if (trace)
    for (auto& t : res.trace)
      std::cerr << rule_name(t.rule) << " occ=" << t.occ << " store=" << t.store_size
                << " alloc=" << t.counters.alloc_units << " dealloc=" << t.counters.dealloc_units
                << " steps=" << t.counters.steps << "\n";
  RVal v = readback(res.cfg.store, res.result);
  auto& c = res.cfg.counters;
  if (json) {
    std::cout << "{\"result\": \"" << to_string(v) << "\", \"alloc\": " << c.alloc_units
              << ", \"dealloc\": " << c.dealloc_units << ", \"cost\": " << c.cost()
              << ", \"steps\": " << c.steps << "}\n";
  } else {
    std::cout << "result  " << to_string(v) << "\n";
    std::cout << "cost    " << c.cost() << " (alloc " << c.alloc_units << ", dealloc "
              << c.dealloc_units << ", steps " << c.steps << ")\n";
  }
  return kOk;
}

int cmd_linearize(const std::string& p, size_t cap, const std::string& constraints_path,
                  bool count_only, long long sample_n, bool json, const std::string& out_path) {
  auto prog = load_program(p);
  std::vector<Constraint> cons;
  if (!constraints_path.empty()) cons = parse_constraints(read_file(constraints_path));
  if (count_only) {
    auto n = lin_program_count(prog, cons);
    if (json)
      std::cout << "{\"count\": " << n << "}\n";
    else
      std::cout << "candidates: " << n << "\n";
    return kOk;
  }
  auto res = lin_program(prog, cons, cap);
  auto ranked = rank(res.candidates, prog, sample_n);
  if (json) {
    std::cout << "{\"count\": " << ranked.size() << ", \"truncated\": "
              << (res.truncated ? "true" : "false");
    if (!ranked.empty()) std::cout << ", \"best_cost\": " << ranked.front().cost;
    std::cout << "}\n";
  } else {
    std::cout << "candidates: " << ranked.size() << (res.truncated ? " (truncated)" : "") << "\n";
    for (size_t i = 0; i < ranked.size() && i < 5; ++i)
      std::cout << "# rank " << i << ", cost " << ranked[i].cost << " at n=" << sample_n << "\n";
  }
  if (!out_path.empty() && !ranked.empty()) write_file(out_path, print_quals(ranked.front().quals));
  if (!ranked.empty() && !json) std::cout << print_quals(ranked.front().quals);
  return kOk;
}

int cmd_globalize(const std::string& p, const std::string& target_s, const std::string& env_path,
                  size_t cap, bool json, const std::string& out_path) {
  auto prog = load_program(p);
  Seed seed;
  if (!env_path.empty()) seed = parse_seed(read_file(env_path));
  if (!target_s.empty()) seed.target = parse_type_text(target_s, /*global=*/true);
  auto res = glob_program(prog, seed, cap);
  if (json) {
    std::cout << "{\"count\": " << res.candidates.size() << ", \"truncated\": "
              << (res.truncated ? "true" : "false") << "}\n";
  } else {
    std::cout << "candidates: " << res.candidates.size()
              << (res.truncated ? " (truncated)" : "") << "\n";
    if (!res.candidates.empty()) std::cout << print_quals(res.candidates.front());
  }
  if (!out_path.empty() && !res.candidates.empty())
    write_file(out_path, print_quals(res.candidates.front()));
  return res.candidates.empty() ? kFail : kOk;
}

int cmd_protect(const std::string& qlin_path, const std::string& qglo_path, bool json) {
  auto lin = load_quals(qlin_path);
  auto glo = load_quals(qglo_path);
  if (lin.global || !glo.global)
    throw Error("usage", "protect expects a linear list then a global list");
  auto rep = protects_sig(lin, glo);
  if (json) {
    std::cout << "{\"protected\": " << (rep.ok ? "true" : "false") << ", \"failing\": [";
    for (size_t i = 0; i < rep.failing.size(); ++i)
      std::cout << (i ? ", " : "") << rep.failing[i];
    std::cout << "]}\n";
  } else if (rep.ok) {
    std::cout << "protected\n";
  } else {
    std::cout << "not protected; failing entries:\n";
    for (int i : rep.failing)
      std::cout << "  occ " << i << "  " << lin.occ_names[i] << " : " << to_string(lin.occ_types[i])
                << "  |>  " << to_string(glo.occ_types[i]) << "\n";
  }
  return rep.ok ? kOk : kFail;
}

int cmd_classify(const std::string& p, const std::string& qlin_path, const std::string& qglo_path,
                 const std::string& samples_s, bool list_adjust, bool json) {
  auto prog = load_program(p);
  auto lin = load_quals(qlin_path);
  auto glo = load_quals(qglo_path);
  auto samples = parse_samples(samples_s);
  auto c = classify(prog, lin, glo, samples, list_adjust);
  std::string name = p;
  auto slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  if (json) {
    std::cout << classification_json(name, c);
  } else {
    std::cout << "protected            " << (c.protected_ ? "yes" : "no") << "\n";
    std::cout << "linear improvement   " << (c.linear_improvement ? "yes" : "no") << "\n";
    std::cout << "imperative improv.   " << (c.imperative_improvement ? "yes" : "no") << "\n";
    std::cout << "full linear          " << (c.full_linear ? "yes" : "no") << "\n";
    std::cout << "full imperative      " << (c.full_imperative ? "yes" : "no") << "\n";
    std::cout << "LI-match             " << (c.li_match ? "yes" : "no") << "\n";
    std::cout << "linear ratio         " << c.linear_ratio.str() << "\n";
    std::cout << "global ratio         " << c.global_ratio.str() << "\n";
    if (!c.gl_runs) std::cout << "global run failed: " << c.gl_error << "\n";
  }
  return kOk;
}

int cmd_emit(const std::string& p, const std::string& qglo_path, const std::string& golden_path,
             bool json) {
  auto prog = load_program(p);
  auto glo = load_quals(qglo_path);
  auto em = emit_program(prog, glo);
  std::string text = print_imperative(em, prog);
  if (!golden_path.empty()) {
    std::string want = read_file(golden_path);
    bool ok = same_modulo_ws(text, want);
    if (json)
      std::cout << "{\"golden\": " << (ok ? "true" : "false") << "}\n";
    else
      std::cout << (ok ? "golden match\n" : "golden MISMATCH\n" + text);
    return ok ? kOk : kFail;
  }
  std::cout << text;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"l1c: weak-linear / global qualification workbench"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "machine-readable output");

  std::string prog_path, quals_path, qlin_path, qglo_path, mode = "un";
  std::vector<std::string> params_kv;
  long long fuel = 10'000'000;
  bool trace = false;
  size_t cap = 1 << 16;
  std::string constraints_path, target_s, env_path, samples_s = "8,16,32";
  bool count_only = false, list_adjust = false;
  long long sample_n = 6;
  std::string out_path, golden_path;

  auto* cl = app.add_subcommand("check-linear", "check a program against a linear qualification");
  cl->add_option("program", prog_path)->required();
  cl->add_option("quals", qlin_path)->required();

  auto* cg = app.add_subcommand("check-global", "check a program against a global qualification");
  cg->add_option("program", prog_path)->required();
  cg->add_option("quals", qglo_path)->required();

  auto* ev = app.add_subcommand("eval", "run a program in one of the four modes");
  ev->add_option("program", prog_path)->required();
  ev->add_option("--quals", quals_path);
  ev->add_option("--mode", mode, "un|li|gl|glcmd");
  ev->add_option("--param", params_kv, "name=value, repeatable");
  ev->add_option("--fuel", fuel);
  ev->add_flag("--trace", trace);

  auto* ln = app.add_subcommand("linearize", "enumerate linear qualifications");
  ln->add_option("program", prog_path)->required();
  ln->add_option("--cap", cap);
  ln->add_option("--constraints", constraints_path);
  ln->add_flag("--count-only", count_only);
  ln->add_option("--sample-n", sample_n);
  ln->add_option("--out", out_path, "write the best candidate here");

  auto* gl = app.add_subcommand("globalize", "enumerate global qualifications");
  gl->add_option("program", prog_path)->required();
  gl->add_option("--target", target_s, "target type for main");
  gl->add_option("--env", env_path, "seed file");
  gl->add_option("--cap", cap);
  gl->add_option("--out", out_path, "write the first candidate here");

  auto* pr = app.add_subcommand("protect", "check the protection relation between two lists");
  pr->add_option("qlin", qlin_path)->required();
  pr->add_option("qglo", qglo_path)->required();

  auto* cf = app.add_subcommand("classify", "cost curves, ratios, residue and category flags");
  cf->add_option("program", prog_path)->required();
  cf->add_option("qlin", qlin_path)->required();
  cf->add_option("qglo", qglo_path)->required();
  cf->add_option("--samples", samples_s);
  cf->add_flag("--list-adjust", list_adjust);

  auto* em = app.add_subcommand("emit", "imperative form of a globally typed program");
  em->add_option("program", prog_path)->required();
  em->add_option("quals", qglo_path)->required();
  em->add_option("--golden", golden_path, "compare against a stored rendering");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (cl->parsed()) return cmd_check_linear(prog_path, qlin_path, json);
    if (cg->parsed()) return cmd_check_global(prog_path, qglo_path, json);
    if (ev->parsed()) return cmd_eval(prog_path, quals_path, mode, params_kv, fuel, trace, json);
    if (ln->parsed())
      return cmd_linearize(prog_path, cap, constraints_path, count_only, sample_n, json, out_path);
    if (gl->parsed()) return cmd_globalize(prog_path, target_s, env_path, cap, json, out_path);
    if (pr->parsed()) return cmd_protect(qlin_path, qglo_path, json);
    if (cf->parsed())
      return cmd_classify(prog_path, qlin_path, qglo_path, samples_s, list_adjust, json);
    if (em->parsed()) return cmd_emit(prog_path, qglo_path, golden_path, json);
  } catch (const Error& e) {
    std::cerr << "error (" << e.kind << "): " << e.what() << "\n";
    return e.kind == "usage" || e.kind == "io" || e.kind == "parse" ? kUsage : kFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
