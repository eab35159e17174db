#pragma once

#include <string>

#include "config.hpp"

namespace falpha::cli {

struct RunOptions {
    std::string out_dir = ".";
    unsigned long long seed = 0;
    int depth = 48;  // staircase evaluation depth
};

int cmd_staircase(const RunConfig& cfg, const RunOptions& opt);
int cmd_mass(const RunConfig& cfg, const RunOptions& opt);
int cmd_dimension(const RunConfig& cfg, const RunOptions& opt);
int cmd_solve(const RunConfig& cfg, const RunOptions& opt);
int cmd_verify(const RunConfig& cfg, const RunOptions& opt);

}  // namespace falpha::cli
