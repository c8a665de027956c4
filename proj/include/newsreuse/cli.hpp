#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "newsreuse/config.hpp"

namespace newsreuse::cli {

/// Exit statuses: 0 success, 2 missing input, 3 parse error, 4 provider
/// error, 5 internal invariant violation.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_ingest(const Config& config, std::ostream& out);
int cmd_run(const Config& config, std::ostream& out);
int cmd_calibrate(const Config& config, std::ostream& out, std::ostream& err);
int cmd_report(const Config& config, std::ostream& out);

/// Names of the files cmd_run writes into the output directory.
const std::vector<std::string>& run_artifacts();

}  // namespace newsreuse::cli
