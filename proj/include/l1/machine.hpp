#pragma once

// Small-step machine over an explicit store, with the four evaluation modes
// and memory-cost accounting. Fresh names come from a monotone counter so a
// deallocation never changes the name supply; the un and li runs of one
// skeleton therefore fire identical rule sequences.

#include <functional>
#include <unordered_map>

#include "l1/core.hpp"

namespace l1 {

struct Value {
  enum Kind { IntV, BoolV, ArrayV, NilV, ConsV, CloV } kind = IntV;
  long long i = 0;
  bool b = false;
  std::vector<long long> arr;
  std::string head, tail;
  PatternPtr pat;
  ExprPtr body;

  static Value intv(long long v) { Value x; x.kind = IntV; x.i = v; return x; }
  static Value boolv(bool v) { Value x; x.kind = BoolV; x.b = v; return x; }
  static Value arrayv(std::vector<long long> v) { Value x; x.kind = ArrayV; x.arr = std::move(v); return x; }
  static Value nilv() { Value x; x.kind = NilV; return x; }
  static Value consv(std::string h, std::string t) { Value x; x.kind = ConsV; x.head = std::move(h); x.tail = std::move(t); return x; }
  static Value clov(PatternPtr p, ExprPtr b) { Value x; x.kind = CloV; x.pat = std::move(p); x.body = std::move(b); return x; }
};

long long value_size(const Value& v);

// Ordered store with tombstoning removal; names are never reused.
struct StoreRT {
  std::vector<std::pair<std::string, std::optional<Value>>> slots;
  std::unordered_map<std::string, size_t> index;

  bool contains(const std::string& x) const { return index.count(x) != 0; }
  const Value& at(const std::string& x) const;
  void insert(const std::string& x, Value v);
  void update(const std::string& x, Value v);  // in-place, cell must exist
  void erase(const std::string& x);
  size_t live_size() const { return index.size(); }
  std::vector<std::pair<std::string, Value>> live() const;
};

struct CostReport {
  long long alloc_units = 0;
  long long dealloc_units = 0;
  long long steps = 0;
  long long cost() const { return alloc_units - dealloc_units; }
};

enum class Mode { Un, Li, Gl, GlCmd };

enum class Rule { Eva, Eop, Eol, Eog, Eif, Ele, Eap, Eem, Eel, Eeg, Eco, Ecl, Ecg, Eca };
const char* rule_name(Rule r);

struct TraceEntry {
  Rule rule;
  int occ;  // redex occurrence id, -1 when the redex is not an occurrence
  size_t store_size;
  CostReport counters;
};

struct Config {
  StoreRT store;
  ExprPtr control;
  long long fresh = 0;
  Mode mode = Mode::Un;
  std::set<std::string> gset;  // GlCmd only
  CostReport counters;
  std::map<std::string, long long> params;
};

// S ~(quals) names : removes exactly the li-tagged cells, returning the freed
// units; removing an absent cell is a double free.
long long dealloc(StoreRT& s, const std::vector<Qual>& quals, const std::vector<std::string>& names);

bool is_pattern_expr(const ExprPtr& e);
PatternPtr expr_to_pattern(const ExprPtr& e);

Config load(const Program& prog, Mode mode, const std::map<std::string, long long>& params,
            const std::set<std::string>& gset = {});

// One small step; returns the fired rule. Errors on stuck configurations.
Rule step(Config& cfg);

struct RunResult {
  Config cfg;
  PatternPtr result;
  std::vector<TraceEntry> trace;  // filled when tracing
};
RunResult run(Config cfg, long long fuel, bool trace = false);

// Convenience: annotate (the caller supplies checked/elaborated programs).
RunResult run_program(const Program& elaborated, Mode mode,
                      const std::map<std::string, long long>& params, long long fuel,
                      const std::set<std::string>& gset = {}, bool trace = false);

// ---------------------------------------------------------------------------
// Readback

struct RVal {
  enum Kind { RInt, RBool, RArr, RList, RTup, RClo } kind = RInt;
  long long i = 0;
  bool b = false;
  std::vector<long long> arr;
  std::vector<RVal> items;  // RList elements / RTup components
};
bool rval_eq(const RVal& a, const RVal& b);
std::string to_string(const RVal& v);

RVal readback(const StoreRT& s, const PatternPtr& p);

}  // namespace l1
