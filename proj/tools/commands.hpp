#pragma once

#include <filesystem>
#include <string>

#include "config.hpp"

namespace qaept::cli {

int cmd_classical(const RunConfig& cfg);
int cmd_eigenstates(const RunConfig& cfg);
int cmd_map(const RunConfig& cfg, const std::filesystem::path& input,
            const std::string& direction);
int cmd_invariant(const RunConfig& cfg);
int cmd_propagate(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);

}  // namespace qaept::cli
