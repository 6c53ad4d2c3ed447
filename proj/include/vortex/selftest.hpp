#pragma once

#include <string>
#include <vector>

#include "vortex/hypergeom.hpp"

namespace vortex {

// Named groups of residual checks, one per module.
const std::vector<std::string>& selftest_suites();

// Runs one suite ("all" runs every suite); each check carries its own tolerance.
std::vector<IdentityCheck> run_selftest(const std::string& suite);

}  // namespace vortex
