#pragma once

#include <optional>
#include <string>
#include <vector>

#include "falpha/linsolve.hpp"

namespace falpha::cli {

struct OutputSpec {
    enum class Kind { Csv, Svg };
    Kind kind = Kind::Csv;
    std::string path;
};

// One config file fully determines a run; no interactive input.
struct RunConfig {
    IfsSpec fractal = IfsSpec::middle_third_cantor();
    std::optional<double> alpha;  // nullopt: "auto" = similarity dimension
    std::optional<Mat> matrix;
    std::pair<double, double> t_range = {0.0, 1.0};
    double t0 = 0.0;
    std::optional<Vec> x0;
    std::vector<Vec> constants;          // zero or more coefficient vectors
    std::optional<std::vector<Mode>> modes;  // externally supplied solution family
    std::optional<std::vector<double>> alphas;  // mass sweep
    double dimension_tol = 1e-4;
    int samples = 1000;
    std::vector<OutputSpec> outputs;

    double resolved_alpha() const {
        return alpha ? *alpha : fractal.similarity_dimension();
    }
};

RunConfig load_config(const std::string& path);

}  // namespace falpha::cli
