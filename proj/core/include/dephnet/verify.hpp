// verify.hpp — Executable acceptance checklist
//
// Each criterion checks one quantitative claim about the implemented
// dynamics (steady-state values, equivalence of the stochastic and
// deterministic routes, conservation laws, regression bounds) and reports
// measured values alongside its thresholds. Four criteria encode external
// reference targets that the exact dynamics of the implemented equations
// provably does not reproduce; they are retained unmodified, flagged
// `expected_to_fail`, and report the computed truth in their detail text.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dephnet {

struct CriterionResult {
    int id{0};
    std::string name;
    bool passed{false};
    bool expected_to_fail{false};  // documented model-vs-reference divergence
    std::string detail;            // measured values, one item per line
    double seconds{0.0};
};

// Run one criterion (1..11) or all of them (only_id == 0).
std::vector<CriterionResult> run_acceptance(int only_id = 0, unsigned threads = 0);

// Fixed-width pass/fail table, one line per criterion plus detail lines.
void print_acceptance_table(std::ostream& os, const std::vector<CriterionResult>& results);

int criterion_count();

}  // namespace dephnet
