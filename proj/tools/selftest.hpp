#ifndef GSO_SELFTEST_HPP
#define GSO_SELFTEST_HPP

#include <iosfwd>

namespace gso {

// Gradient finite-difference checks and small brute-force comparisons.
// Prints one line per check and returns true when all pass.
bool run_selftest(std::ostream& log);

}  // namespace gso

#endif  // GSO_SELFTEST_HPP
