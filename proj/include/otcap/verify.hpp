#ifndef OTCAP_VERIFY_HPP
#define OTCAP_VERIFY_HPP

#include <string>
#include <vector>

namespace otcap {

struct CheckResult {
  std::string name;
  double max_dev = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string detail;  // where the worst deviation occurred
};

/// Cross-checks every quantity that admits two independent computation
/// routes: closed forms against enumerations, recursions against direct
/// sums, channel decompositions against profile statistics. `tol` is the
/// agreement tolerance for exact identities; the small-q slope check keeps
/// its own, coarser tolerance.
std::vector<CheckResult> run_consistency_battery(int s_max = 4, double tol = 1e-9);

}  // namespace otcap

#endif
