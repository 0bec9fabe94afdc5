#pragma once

#include <functional>
#include <string>
#include <vector>

#include "diracres/fredholm.hpp"
#include "diracres/scattering.hpp"
#include "diracres/states.hpp"

namespace diracres {

/// Round-trip-safe decimal formatting (17 significant digits).
std::string g17(double x);

/// Deterministic index-parallel map: results are produced in index order
/// regardless of the thread count.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

void write_text_file(const std::string& path, const std::string& content);

std::string states_csv(const std::vector<StateRecord>& states);
std::string phase_trace_csv(const PhaseTrace& tr);
std::string det_grid_csv(const std::vector<DetEvaluation>& evs);
std::string counting_csv(const CountingReport& rep);

}  // namespace diracres
