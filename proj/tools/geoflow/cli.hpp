#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace geoflow::cli {

/// Entry point of the `geoflow` tool. Returns 0 on success, 2 on invalid
/// input and 1 when an integration produces a non-finite state.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "start:stop:step", endpoint included when within 1e-12 of the last step.
std::vector<double> parse_scan(const std::string& spec);

/// Comma-separated list of numbers; `expected` < 0 accepts any length.
std::vector<double> parse_list(const std::string& text, int expected = -1);

/// Worker count for parameter scans: hardware concurrency capped by GEOFLOW_THREADS.
unsigned thread_count();

}  // namespace geoflow::cli
