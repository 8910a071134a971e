#pragma once

#include <string>

namespace qpolar {

struct RunResult {
    std::string csv;
    std::string json;
};

// Executes one command ("construct", "prep-rate", "ler", "selftest") with a
// JSON configuration; throws UsageError, ResourceBoundError, or SelftestError.
RunResult run_command(const std::string& command, const std::string& config_json);

const char* version_string();

}
