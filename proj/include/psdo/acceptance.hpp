#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace psdo {

/// One measured contract inside an acceptance criterion.
struct AcceptanceCheck {
  std::string name;
  double measured = 0;
  std::string target;  // human-readable bound, e.g. "<=1e-12"
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0;
  std::vector<AcceptanceCheck> checks;
};

/// Criterion ids covered by a named suite; throws contract_error on an unknown
/// name. "all" runs every criterion including the determinism re-run.
std::vector<int> acceptance_suite(const std::string& suite);

/// Run the given criteria (ids 1..11). The seed drives every randomized probe;
/// a fixed seed makes the report byte-identical.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids,
                                            std::uint64_t seed);

/// Deterministic CSV rendering (no timings — those go to the console).
std::string acceptance_csv(const std::vector<CriterionResult>& results,
                           const std::string& suite, std::uint64_t seed);

}  // namespace psdo
