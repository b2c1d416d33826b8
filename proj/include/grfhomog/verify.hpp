#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grfhomog/catalog.hpp"

namespace grfhomog {

struct CheckResult {
  std::string name;
  double computed;
  double expected;
  double tolerance;
  bool pass;
};

// Reproduces the printed component tables, Hodge star, closedness and
// harmonicity conditions, polynomial zeros, the rank-4 differential
// (p = q = 1), and the flow fixed point for M_{p,q}.
std::vector<CheckResult> verify_mpq(int p, int q, std::uint64_t seed = 7);

// Flat bi-invariant model checks for SU(2).
std::vector<CheckResult> verify_group_su2();

// Everything-vanishes baseline.
std::vector<CheckResult> verify_torus(int n);

bool all_pass(const std::vector<CheckResult>& results);

// Human-readable per-check lines plus the Ric / H^2 / Bismut-Ricci tables at
// the BRF point (and both |H|^2 normalizations).
std::string verify_text_report(const std::vector<CheckResult>& results);
std::string mpq_table_report(const MpqSpace& space);

}  // namespace grfhomog
