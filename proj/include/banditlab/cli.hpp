#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace banditlab {

/// Exit codes: 0 ok, 1 violations, 2 usage/schema, 3 numerical failure,
/// 4 precondition (regularity) failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace banditlab
