#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xxzsim/gates.hpp"
#include "xxzsim/noisezne.hpp"

namespace xxzsim {

inline constexpr const char* kVersion = "0.1.0";

enum class RunMode { EntropyCurve, DensityProfile, Correlator, ZneSweep, Fit, Convert };

/// Parsed run configuration.  The on-disk format is flat `key = value` lines
/// with '#' comments; unknown keys are rejected by name.
struct RunConfig {
    RunMode mode = RunMode::Correlator;
    std::uint64_t seed = 0;
    std::filesystem::path output_dir = ".";
    int threads = 0;

    FloquetSpec floquet;
    bool exact_method = false;  // correlator mode: exact trace vs typicality
    int exact_cap = 14;
    int realizations = 10;
    int n_max = 10;
    int shots = 0;

    NoiseModel noise;
    std::vector<std::pair<int, int>> zne_folds;  // (f, s)
    int zne_trajectories = 2000;

    std::optional<int> entropy_cut;

    std::filesystem::path fit_input;
    std::optional<double> fit_t_min, fit_t_max;
    double slope_tol = 0.1;
    double agree_tol = 0.15;
    bool weighted_fit = false;

    double j_cal = 0.0, j_cal_prime = 0.0;

    std::string raw_text;  // original config file contents (hashed into the manifest)
};

RunConfig parse_config(const std::string& text);

struct RunResult {
    std::vector<std::filesystem::path> artifacts;
    std::string stdout_text;  // convert mode prints through here
};

/// Executes one configured experiment and writes its artifacts plus
/// manifest.json into output_dir.  Fully deterministic for a given config and
/// seed, independent of the thread count.
RunResult run(const RunConfig& config);

}  // namespace xxzsim
