#pragma once

#include <string>

#include "mgd/config.hpp"
#include "mgd/report.hpp"

namespace mgd {

/// load -> generate -> reduce -> optimize -> evaluate -> report. Writes the
/// run directory (D-shaped layout: dispatch/voltage/losses/summary/trace/
/// manifest CSVs plus histograms/ and the reduced scenarios for replay) and
/// returns the in-memory report. Overrides of 0 / empty keep config values.
RunReport run_pipeline(const RunConfig& cfg, const std::string& out_dir_override = "",
                       int threads_override = 0);

}  // namespace mgd
