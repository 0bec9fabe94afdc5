#pragma once

#include <string>
#include <vector>

#include "diracres/potential.hpp"

namespace diracres {
namespace verify {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double margin = 0.0;  // distance to the tolerance, positive = headroom
    std::string details;
    double seconds = 0.0;
};

/// Standard fixtures used by the acceptance suite.
Potential fixture_free();
Potential fixture_q1();
Potential fixture_deep_well();
Potential fixture_bump();
Potential fixture_gauge();
std::vector<Potential> fixtures_piecewise_constant();

/// Runs every acceptance criterion; `threads` parallelizes the embarrassingly
/// parallel grids inside the heavier criteria.
std::vector<CriterionResult> run_acceptance(int threads = 1);

/// Single criterion by id (1-based), for selective runs.
CriterionResult run_criterion(int id, int threads = 1);

std::string report_text(const std::vector<CriterionResult>& rs);
std::string report_json(const std::vector<CriterionResult>& rs);

}  // namespace verify
}  // namespace diracres
