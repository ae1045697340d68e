#pragma once

// Concrete syntax: .l1 programs, .qlin/.qglo qualification files, .seed files
// and constraint files, plus the printers that keep parse/print a round trip.

#include "l1/core.hpp"

namespace l1 {

Program parse_program(const std::string& text);
std::string print_program(const Program& prog);

ExprPtr parse_expr_text(const std::string& text, const std::vector<std::string>& params,
                        const std::set<std::string>& bound);

QualificationList parse_quals(const std::string& text);
std::string print_quals(const QualificationList& q);

TypePtr parse_type_text(const std::string& text, bool global);

struct Seed {
  TypePtr target;  // may be null: derive from the trivial skeleton
  std::vector<std::pair<std::string, TypePtr>> env;
};
Seed parse_seed(const std::string& text);

struct Constraint {
  int occ;
  bool fixed_trivial;        // occ N fixed : freeze the all-un type
  std::optional<OpType> ty;  // occ N <type> : pin an exact type
};
std::vector<Constraint> parse_constraints(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace l1
