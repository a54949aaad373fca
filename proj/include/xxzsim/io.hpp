#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "xxzsim/analysis.hpp"
#include "xxzsim/noisezne.hpp"
#include "xxzsim/typicality.hpp"

namespace xxzsim {

// %.17g rendering: round-trip exact and byte-stable for a given binary,
// which golden/determinism tests rely on.
std::string format_double(double v);

std::uint64_t fnv1a64(std::string_view bytes);

/// CSV with header `time,value,std_err,realizations` (0 realizations marks an
/// exact series).  '.' decimal separator, '\n' newlines, UTF-8.
std::string correlator_to_csv(const CorrelatorSeries& series);
CorrelatorSeries correlator_from_csv(const std::string& text);

/// CSV with header `lambda,value,std_err,f,s`.
struct ZneSweepRow {
    double lambda = 1.0;
    double value = 0.0;
    double std_err = 0.0;
    int f = 0;
    int s = 0;
};
std::string zne_sweep_to_csv(const std::vector<ZneSweepRow>& rows);

std::string fit_result_to_json(const FitResult& fit);

void write_file(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace xxzsim
