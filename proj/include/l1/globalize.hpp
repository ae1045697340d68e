#pragma once

// Enumeration of global qualifications against a seed context and target
// type, store globalization included.

#include "l1/global.hpp"
#include "l1/parse.hpp"

namespace l1 {

// All global annotations of a trivially annotated expression against the
// target type. Every returned expression is meant to satisfy the checker;
// glob_program re-validates and drops strays.
std::vector<ExprPtr> glob_expr(const GCtx& g, const ExprPtr& e, const TypePtr& target,
                               size_t cap = 1 << 14);

// Store globalization: every function body is globalized under its context
// promoted by the free variables of the codomain.
std::vector<std::vector<std::pair<std::string, StoreInit>>> glob_store(
    const GCtx& g, const Program& trivial_prog, size_t cap = 1 << 14);

struct GlobProgramResult {
  std::vector<QualificationList> candidates;
  bool truncated = false;
};
GlobProgramResult glob_program(const Program& prog, const Seed& seed, size_t cap);

// The seed context aligned with the program's store (missing entries fall
// back to the trivial type of the skeleton).
GCtx seed_context(const Program& prog, const Seed& seed);

}  // namespace l1
