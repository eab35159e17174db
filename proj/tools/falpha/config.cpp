#include "config.hpp"

#include <fstream>

#include <json.hpp>

namespace falpha::cli {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& why) {
    throw ArgumentError("config: " + path + ": " + why);
}

double number_at(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

Vec vector_at(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of numbers");
    Vec out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(number_at(j[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

IfsSpec fractal_at(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object with base and maps");
    if (!j.contains("base")) fail(path + ".base", "missing");
    Vec base = vector_at(j["base"], path + ".base");
    if (base.size() != 2) fail(path + ".base", "expected [a, b]");
    if (!j.contains("maps")) fail(path + ".maps", "missing");
    const json& maps_json = j["maps"];
    if (!maps_json.is_array()) fail(path + ".maps", "expected an array");
    std::vector<AffineMap> maps;
    for (std::size_t i = 0; i < maps_json.size(); ++i) {
        std::string entry = path + ".maps[" + std::to_string(i) + "]";
        Vec pair = vector_at(maps_json[i], entry);
        if (pair.size() != 2) fail(entry, "expected [ratio, offset]");
        maps.push_back({pair[0], pair[1]});
    }
    try {
        return IfsSpec({base[0], base[1]}, std::move(maps));
    } catch (const ArgumentError& e) {
        fail(path, e.what());
    }
}

Mat matrix_at(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected an array of rows");
    std::size_t n = j.size();
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        std::string row_path = path + "[" + std::to_string(i) + "]";
        Vec row = vector_at(j[i], row_path);
        if (row.size() != n) fail(row_path, "matrix must be square");
        for (std::size_t k = 0; k < n; ++k) m(i, k) = row[k];
    }
    return m;
}

Mode mode_at(const json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("kind")) fail(path, "expected an object with kind");
    std::string kind = j["kind"].get<std::string>();
    if (kind == "real") {
        return RealMode{number_at(j.value("r", json()), path + ".r"),
                        vector_at(j.value("xi", json()), path + ".xi")};
    }
    if (kind == "complex") {
        return ComplexPairMode{number_at(j.value("a", json()), path + ".a"),
                               number_at(j.value("b", json()), path + ".b"),
                               vector_at(j.value("u0", json()), path + ".u0"),
                               vector_at(j.value("v0", json()), path + ".v0")};
    }
    if (kind == "chain") {
        const json& links = j.value("chain", json());
        if (!links.is_array() || links.empty()) fail(path + ".chain", "expected links");
        std::vector<Vec> chain;
        for (std::size_t i = 0; i < links.size(); ++i) {
            chain.push_back(vector_at(links[i], path + ".chain[" + std::to_string(i) + "]"));
        }
        return ChainMode{number_at(j.value("r", json()), path + ".r"), std::move(chain)};
    }
    fail(path + ".kind", "must be real, complex or chain");
}

}  // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("config: cannot open " + path);
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ArgumentError(std::string("config: ") + e.what());
    }
    if (!root.is_object()) throw ArgumentError("config: top level must be an object");

    RunConfig cfg;
    if (!root.contains("fractal")) throw ArgumentError("config: fractal: missing");
    cfg.fractal = fractal_at(root["fractal"], "fractal");

    if (root.contains("alpha")) {
        const json& a = root["alpha"];
        if (a.is_string() && a.get<std::string>() == "auto") {
            cfg.alpha.reset();
        } else if (a.is_number() && a.get<double>() > 0.0 && a.get<double>() <= 1.0) {
            cfg.alpha = a.get<double>();
        } else {
            throw ArgumentError("config: alpha: expected a number in (0,1] or \"auto\"");
        }
    }

    if (root.contains("matrix")) cfg.matrix = matrix_at(root["matrix"], "matrix");

    if (root.contains("t_range")) {
        Vec range = vector_at(root["t_range"], "t_range");
        if (range.size() != 2 || !(range[0] < range[1])) {
            throw ArgumentError("config: t_range: expected [lo, hi] with lo < hi");
        }
        cfg.t_range = {range[0], range[1]};
    }
    cfg.t0 = root.contains("t0") ? number_at(root["t0"], "t0") : cfg.t_range.first;
    if (cfg.t0 < cfg.t_range.first || cfg.t0 > cfg.t_range.second) {
        throw ArgumentError("config: t0: must lie in t_range");
    }

    if (root.contains("x0")) cfg.x0 = vector_at(root["x0"], "x0");

    if (root.contains("constants")) {
        const json& c = root["constants"];
        if (!c.is_array() || c.empty()) {
            throw ArgumentError("config: constants: expected a vector or list of vectors");
        }
        if (c[0].is_array()) {
            for (std::size_t i = 0; i < c.size(); ++i) {
                cfg.constants.push_back(vector_at(c[i], "constants[" + std::to_string(i) + "]"));
            }
        } else {
            cfg.constants.push_back(vector_at(c, "constants"));
        }
    }

    if (root.contains("modes")) {
        const json& m = root["modes"];
        if (!m.is_array() || m.empty()) throw ArgumentError("config: modes: expected a list");
        std::vector<Mode> modes;
        for (std::size_t i = 0; i < m.size(); ++i) {
            modes.push_back(mode_at(m[i], "modes[" + std::to_string(i) + "]"));
        }
        cfg.modes = std::move(modes);
    }

    if (root.contains("alphas")) {
        cfg.alphas = vector_at(root["alphas"], "alphas");
        for (double a : *cfg.alphas) {
            if (!(a > 0.0 && a <= 1.0)) {
                throw ArgumentError("config: alphas: entries must lie in (0, 1]");
            }
        }
    }

    if (root.contains("dimension_tol")) {
        cfg.dimension_tol = number_at(root["dimension_tol"], "dimension_tol");
    }

    if (root.contains("samples")) {
        double s = number_at(root["samples"], "samples");
        if (!(s >= 2 && s <= 10'000'000)) {
            throw ArgumentError("config: samples: expected an integer in [2, 1e7]");
        }
        cfg.samples = int(s);
    }

    if (root.contains("outputs")) {
        const json& outs = root["outputs"];
        if (!outs.is_array()) throw ArgumentError("config: outputs: expected a list");
        for (std::size_t i = 0; i < outs.size(); ++i) {
            std::string entry = "outputs[" + std::to_string(i) + "]";
            const json& o = outs[i];
            if (!o.is_object() || !o.contains("kind") || !o.contains("path")) {
                throw ArgumentError("config: " + entry + ": expected {kind, path}");
            }
            std::string kind = o["kind"].get<std::string>();
            OutputSpec spec;
            if (kind == "csv") {
                spec.kind = OutputSpec::Kind::Csv;
            } else if (kind == "svg") {
                spec.kind = OutputSpec::Kind::Svg;
            } else {
                throw ArgumentError("config: " + entry + ".kind: must be csv or svg");
            }
            spec.path = o["path"].get<std::string>();
            cfg.outputs.push_back(std::move(spec));
        }
    }

    // Cross-field dimension checks.
    if (cfg.matrix) {
        std::size_t n = cfg.matrix->rows();
        if (cfg.x0 && cfg.x0->size() != n) {
            throw ArgumentError("config: x0: dimension disagrees with matrix");
        }
        for (std::size_t i = 0; i < cfg.constants.size(); ++i) {
            if (cfg.constants[i].size() != n) {
                throw ArgumentError("config: constants[" + std::to_string(i) +
                                    "]: dimension disagrees with matrix");
            }
        }
    }
    return cfg;
}

}  // namespace falpha::cli
