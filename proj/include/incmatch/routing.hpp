#pragma once

#include <optional>
#include <string>
#include <vector>

#include "incmatch/model.hpp"

namespace incmatch {

struct SolveRequest {
    std::string algorithm = "auto";
    std::vector<AgentId> outliers;  // for "outliers"
    std::optional<long> limit;      // caps enumeration sizes; unset keeps each solver's default
};

struct SolveResult {
    Outcome outcome;
    std::string algorithm;  // the solver that ran
};

const std::vector<std::string>& algorithm_names();

// Solver chosen by "auto" for this instance; throws std::invalid_argument
// with "no applicable algorithm" when nothing fits.
std::string route(const Instance& inst, std::optional<long> limit = std::nullopt);

SolveResult solve(const Instance& inst, const SolveRequest& req);

}  // namespace incmatch
