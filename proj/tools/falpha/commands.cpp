#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "csv.hpp"
#include "svg.hpp"

namespace falpha::cli {
namespace {

namespace fs = std::filesystem;

std::string resolve(const RunOptions& opt, const std::string& path) {
    fs::path full = fs::path(opt.out_dir) / path;
    if (full.has_parent_path()) fs::create_directories(full.parent_path());
    return full.string();
}

// "plot.svg" -> "plot_x2.svg" etc.
std::string with_suffix(const std::string& path, const std::string& suffix) {
    fs::path p(path);
    fs::path stem = p.stem();
    fs::path ext = p.extension();
    fs::path dir = p.parent_path();
    return (dir / (stem.string() + suffix + ext.string())).string();
}

Staircase make_stair(const RunConfig& cfg, const RunOptions& opt) {
    return make_staircase(cfg.fractal, cfg.resolved_alpha(), cfg.t0, opt.depth);
}

std::vector<double> uniform_samples(const RunConfig& cfg) {
    std::vector<double> t(std::size_t(cfg.samples));
    double lo = cfg.t_range.first, hi = cfg.t_range.second;
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = lo + (hi - lo) * double(i) / double(t.size() - 1);
    }
    return t;
}

ModeBasis basis_for(const RunConfig& cfg, const Staircase& stair) {
    if (cfg.modes) return ModeBasis::unvalidated(*cfg.modes, stair);
    if (!cfg.matrix) {
        throw ArgumentError("config: matrix: required for this command");
    }
    return build_mode_basis(*cfg.matrix, stair);
}

std::vector<Vec> constant_sets(const RunConfig& cfg, const ModeBasis& basis) {
    if (!cfg.constants.empty()) {
        for (const auto& c : cfg.constants) {
            if (c.size() != basis.dimension()) {
                throw ArgumentError("config: constants: dimension disagrees with the basis");
            }
        }
        return cfg.constants;
    }
    if (cfg.x0) {
        return {fit_initial_conditions(basis, cfg.t0, *cfg.x0)};
    }
    throw ArgumentError("config: solve needs constants or x0");
}

// Verification samples: construction endpoints within t_range; subsampled by
// seed when one is supplied.
std::vector<double> verify_samples(const RunConfig& cfg, const RunOptions& opt,
                                   std::size_t count) {
    auto pts = construction_points(cfg.fractal, 10, 4 * count);
    std::vector<double> in_range;
    for (double p : pts) {
        if (p >= cfg.t_range.first && p <= cfg.t_range.second) in_range.push_back(p);
    }
    if (in_range.size() > count) {
        if (opt.seed != 0) {
            std::mt19937_64 rng(opt.seed);
            std::shuffle(in_range.begin(), in_range.end(), rng);
            in_range.resize(count);
            std::sort(in_range.begin(), in_range.end());
        } else {
            std::vector<double> picked;
            for (std::size_t i = 0; i < count; ++i) {
                picked.push_back(in_range[i * (in_range.size() - 1) / (count - 1)]);
            }
            picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
            in_range = std::move(picked);
        }
    }
    return in_range;
}

}  // namespace

int cmd_staircase(const RunConfig& cfg, const RunOptions& opt) {
    Staircase stair = make_stair(cfg, opt);
    auto t = uniform_samples(cfg);
    std::vector<double> s(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) s[i] = staircase_eval(stair, t[i]);

    for (const auto& output : cfg.outputs) {
        if (output.kind == OutputSpec::Kind::Csv) {
            CsvWriter csv(resolve(opt, output.path));
            csv.header({"x", "S"});
            for (std::size_t i = 0; i < t.size(); ++i) csv.row({t[i], s[i]});
        } else {
            SvgPlot plot("x", "S");
            plot.add_series({t, s, SvgPlot::palette(0), "S(x)"});
            plot.write(resolve(opt, output.path));
        }
    }
    std::printf("staircase: alpha = %.17g, total mass = %.17g, %d samples\n",
                stair.alpha(), stair.total_mass(), cfg.samples);
    return 0;
}

int cmd_mass(const RunConfig& cfg, const RunOptions& opt) {
    std::vector<double> alphas =
        cfg.alphas ? *cfg.alphas : std::vector<double>{cfg.resolved_alpha()};
    struct Row {
        double alpha, value;
        int depth;
        bool converged;
    };
    std::vector<Row> rows;
    for (double alpha : alphas) {
        auto est = mass(cfg.fractal, alpha, cfg.t_range.first, cfg.t_range.second, 1e-9);
        rows.push_back({alpha, est.value, est.depth_used, est.converged});
        std::printf("mass: alpha = %.17g -> %.17g (depth %d, %s)\n", alpha, est.value,
                    est.depth_used, est.converged ? "converged" : "not converged");
    }
    for (const auto& output : cfg.outputs) {
        if (output.kind != OutputSpec::Kind::Csv) continue;
        CsvWriter csv(resolve(opt, output.path));
        csv.header({"alpha", "mass", "depth", "converged"});
        for (const auto& r : rows) {
            csv.row({r.alpha, r.value, double(r.depth), r.converged ? 1.0 : 0.0});
        }
    }
    return 0;
}

int cmd_dimension(const RunConfig& cfg, const RunOptions& opt) {
    auto est = gamma_dimension(cfg.fractal, cfg.t_range.first, cfg.t_range.second,
                               cfg.dimension_tol);
    std::printf("dimension: alpha_hat = %.17g\n", est.alpha_hat);
    std::printf("dimension: bracket = [%.17g, %.17g]\n", est.bracket.first,
                est.bracket.second);
    std::printf("dimension: iterations = %d\n", est.iterations);
    std::printf("dimension: analytic similarity dimension = %.17g\n",
                cfg.fractal.similarity_dimension());

    // Optional mass sweep alongside the estimate.
    if (cfg.alphas) {
        for (const auto& output : cfg.outputs) {
            if (output.kind != OutputSpec::Kind::Csv) continue;
            CsvWriter csv(resolve(opt, output.path));
            csv.header({"alpha", "mass", "depth", "converged"});
            for (double alpha : *cfg.alphas) {
                auto m = mass(cfg.fractal, alpha, cfg.t_range.first, cfg.t_range.second,
                              1e-9);
                csv.row({alpha, m.value, double(m.depth_used), m.converged ? 1.0 : 0.0});
            }
        }
    }
    return 0;
}

int cmd_solve(const RunConfig& cfg, const RunOptions& opt) {
    Staircase stair = make_stair(cfg, opt);
    ModeBasis basis = basis_for(cfg, stair);
    std::vector<Vec> sets = constant_sets(cfg, basis);
    auto t = uniform_samples(cfg);
    const std::size_t n = basis.dimension();

    // One table per constants set: t, S, x1..xn.
    std::vector<std::vector<std::vector<double>>> tables;  // [set][row][col]
    for (const auto& c : sets) {
        GeneralSolution solution{basis, c};
        std::vector<std::vector<double>> table;
        table.reserve(t.size());
        for (double ti : t) {
            std::vector<double> row = {ti, staircase_eval(stair, ti)};
            Vec x = evaluate(solution, ti);
            row.insert(row.end(), x.begin(), x.end());
            table.push_back(std::move(row));
        }
        tables.push_back(std::move(table));
    }

    std::vector<std::string> header = {"t", "S"};
    for (std::size_t j = 0; j < n; ++j) header.push_back("x" + std::to_string(j + 1));

    for (const auto& output : cfg.outputs) {
        if (output.kind == OutputSpec::Kind::Csv) {
            for (std::size_t set = 0; set < tables.size(); ++set) {
                std::string path = tables.size() == 1
                                       ? output.path
                                       : with_suffix(output.path,
                                                     "_" + std::to_string(set + 1));
                CsvWriter csv(resolve(opt, path));
                csv.header(header);
                for (const auto& row : tables[set]) csv.row(row);
            }
        } else {
            // Per-component plot, one curve per constants set.
            for (std::size_t j = 0; j < n; ++j) {
                SvgPlot plot("t", "x" + std::to_string(j + 1));
                for (std::size_t set = 0; set < tables.size(); ++set) {
                    SvgPlot::Series series;
                    series.color = SvgPlot::palette(set);
                    series.label = "c set " + std::to_string(set + 1);
                    for (const auto& row : tables[set]) {
                        series.x.push_back(row[0]);
                        series.y.push_back(row[2 + j]);
                    }
                    plot.add_series(std::move(series));
                }
                plot.write(resolve(opt, with_suffix(output.path,
                                                    "_x" + std::to_string(j + 1))));
            }
        }
    }
    std::printf("solve: %zu mode(s), %zu constant set(s), %d samples\n",
                basis.modes().size(), sets.size(), cfg.samples);
    return 0;
}

int cmd_verify(const RunConfig& cfg, const RunOptions& opt) {
    Staircase stair = make_stair(cfg, opt);
    ModeBasis basis = basis_for(cfg, stair);
    if (!cfg.matrix) throw ArgumentError("config: matrix: required for verify");
    const Mat& A = *cfg.matrix;
    if (A.rows() != basis.dimension()) {
        throw ArgumentError("config: matrix/modes dimension mismatch");
    }

    struct CheckRow {
        std::string name;
        bool pass;
        double value;
        double threshold;
        std::string note;
    };
    std::vector<CheckRow> report;

    // Spectral residuals of every mode.
    double worst_spectral = 0.0;
    for (const auto& mode : basis.modes()) {
        worst_spectral = std::max(worst_spectral, spectral_residual(A, mode));
    }
    report.push_back({"spectral_residual", worst_spectral <= 1e-9, worst_spectral, 1e-9,
                      "max normalized |A xi - r xi|"});

    auto samples = verify_samples(cfg, opt, 20);

    // System residual for the configured solution.
    Vec c;
    if (!cfg.constants.empty()) {
        c = cfg.constants.front();
    } else if (cfg.x0) {
        c = fit_initial_conditions(basis, cfg.t0, *cfg.x0);
    } else {
        c.assign(basis.dimension(), 1.0);
    }
    bool residual_converged = true;
    double residual_value = 0.0;
    std::string residual_note = "sup-norm over samples";
    try {
        auto rep = residual_check({basis, c}, A, samples);
        residual_converged = rep.all_converged;
        residual_value = rep.max_residual;
        if (!rep.all_converged) residual_note = "derivative convergence failures";
    } catch (const Error& e) {
        residual_converged = false;
        residual_value = std::numeric_limits<double>::infinity();
        residual_note = e.what();
    }
    report.push_back({"system_residual", residual_converged && residual_value <= 1e-5,
                      residual_value, 1e-5, residual_note});

    // Abel identity for the constant trace.
    double trace = A.trace();
    double t1 = samples.empty() ? cfg.t_range.second : samples.back();
    auto abel = abel_check(trace, basis, cfg.t0, t1);
    report.push_back(
        {"abel_identity", abel.relative <= 1e-9, abel.relative, 1e-9, "relative residual"});

    // Wronskian dichotomy over the samples.
    auto verdict = dichotomy_scan(basis, samples);
    report.push_back({"wronskian_dichotomy", verdict == DichotomyVerdict::NeverZero,
                      verdict == DichotomyVerdict::NeverZero ? 1.0 : 0.0, 1.0,
                      verdict == DichotomyVerdict::NeverZero        ? "never-zero"
                      : verdict == DichotomyVerdict::IdenticallyZero ? "identically-zero"
                                                                     : "violation"});

    // Initial-condition round trip.
    if (cfg.x0) {
        Vec coeffs = fit_initial_conditions(basis, cfg.t0, *cfg.x0);
        Vec back = evaluate({basis, coeffs}, cfg.t0);
        double err = 0.0;
        for (std::size_t i = 0; i < back.size(); ++i) {
            err = std::max(err, std::abs(back[i] - (*cfg.x0)[i]));
        }
        double bound = 1e-10 * (1.0 + inf_norm(*cfg.x0));
        report.push_back({"initial_condition_round_trip", err <= bound, err, bound, ""});
    }

    bool all_pass = true;
    for (const auto& row : report) {
        std::printf("verify: %-30s %s  value %.3e  threshold %.3e  %s\n", row.name.c_str(),
                    row.pass ? "PASS" : "FAIL", row.value, row.threshold,
                    row.note.c_str());
        all_pass = all_pass && row.pass;
    }
    for (const auto& output : cfg.outputs) {
        if (output.kind != OutputSpec::Kind::Csv) continue;
        CsvWriter csv(resolve(opt, output.path));
        csv.write_row_strings({"check", "status", "value", "threshold"});
        for (const auto& row : report) {
            csv.write_row_strings({row.name, row.pass ? "pass" : "fail",
                                   csv_number(row.value), csv_number(row.threshold)});
        }
    }
    std::printf("verify: %s\n", all_pass ? "all checks passed" : "FAILURES detected");
    return all_pass ? 0 : 3;
}

}  // namespace falpha::cli
