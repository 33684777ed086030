#ifndef OTCAP_REPORT_HPP
#define OTCAP_REPORT_HPP

#include <string>
#include <vector>

#include "otcap/bounds.hpp"
#include "otcap/protocol.hpp"

namespace otcap {

/// Shortest round-trip-ish formatting used for every number that leaves the
/// program ("%.12g"). Keeping one formatter makes outputs reproducible.
std::string format_g12(double v);

/// CSV table of a rate sweep: header "q,method,params,rate", one row per
/// grid point per method, LF line ends.
std::string render_bounds_csv(const std::vector<MethodSpec>& methods,
                              const std::vector<SweepRow>& rows);

/// Standalone SVG plot of the same sweep (one polyline per method).
std::string render_bounds_svg(const std::vector<MethodSpec>& methods,
                              const std::vector<SweepRow>& rows);

/// JSON summaries with a fixed key order and no timestamps, so identical
/// inputs render byte-identical reports.
std::string render_sim_json(const SimReport& rep);
std::string render_cascade_json(const CascadeReport& rep);

}  // namespace otcap

#endif
