#pragma once

// Enumeration of the non-trivial linear qualifications of an expression and
// of a whole program, with fixed-qualifier pruning, candidate counting and
// cost ranking.

#include "l1/linear.hpp"
#include "l1/parse.hpp"

namespace l1 {

struct LinPair {
  ExprPtr e;   // annotated (case slots filled)
  TypePtr ty;
};

// Exact per-occurrence pins: `occ N fixed` pins the trivial type, `occ N T`
// pins T. Enumeration never alters a pinned occurrence.
using PinMap = std::map<int, OpType>;

std::vector<LinPair> lin_expr(const LCtx& g, const ExprPtr& e, const PinMap* pins = nullptr,
                              bool pseudo = false);

// Counting variant: number of qualifications per result type, without
// materializing the expressions.
std::vector<std::pair<TypePtr, unsigned long long>> lin_expr_count(const LCtx& g, const ExprPtr& e,
                                                                   const PinMap* pins = nullptr,
                                                                   bool pseudo = false);

struct LinProgramResult {
  std::vector<QualificationList> candidates;
  bool truncated = false;
};
LinProgramResult lin_program(const Program& prog, const std::vector<Constraint>& constraints,
                             size_t cap);
unsigned long long lin_program_count(const Program& prog,
                                     const std::vector<Constraint>& constraints);

// Ranks by machine cost at the sample size (li mode), ties broken by fewer
// un qualifiers, then input order.
struct Ranked {
  QualificationList quals;
  long long cost = 0;
  int un_count = 0;
};
std::vector<Ranked> rank(const std::vector<QualificationList>& candidates, const Program& prog,
                         long long sample_n, long long fuel = 10'000'000);

PinMap pins_from_constraints(const Program& prog, const std::vector<Constraint>& constraints);

}  // namespace l1
