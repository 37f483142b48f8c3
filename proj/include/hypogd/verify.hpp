#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hypogd {

struct PropertyResult {
  std::string name;
  bool pass = false;
  double slack = 0.0; // margin to the tolerance; negative means violated
  std::string detail;
};

/// Run one invariant suite: potentials | projections | spectral | regret |
/// equivalence | all. Throws std::invalid_argument for unknown names.
std::vector<PropertyResult> verify_suite(const std::string& suite,
                                         std::uint64_t seed = 1);

} // namespace hypogd
