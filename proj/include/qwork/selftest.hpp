#pragma once

#include <ostream>

namespace qwork {

/// Quick invariant checks on small random instances. Prints one line per
/// check and returns the number of failures.
int run_selftest(std::ostream& os);

}  // namespace qwork
