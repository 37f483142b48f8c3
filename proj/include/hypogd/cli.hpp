#pragma once

#include <ostream>

#include "hypogd/config.hpp"

namespace hypogd::cli {

/// Execute one configured run and write the trace CSV to the stream.
void run_experiment(const ExperimentConfig& config, std::ostream& os);

/// Full CLI: subcommands run | verify | generate. Returns the process exit
/// code; errors are reported on err.
int main_impl(int argc, const char* const* argv, std::ostream& out,
              std::ostream& err);

} // namespace hypogd::cli
