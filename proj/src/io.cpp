#include "xxzsim/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace xxzsim {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string correlator_to_csv(const CorrelatorSeries& series) {
    std::string out = "time,value,std_err,realizations\n";
    for (const auto& e : series.entries) {
        out += format_double(e.time);
        out += ',';
        out += format_double(e.value);
        out += ',';
        out += format_double(e.std_err);
        out += ',';
        out += std::to_string(series.realizations);
        out += '\n';
    }
    return out;
}

CorrelatorSeries correlator_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "time,value,std_err,realizations")
        throw validation_error("correlator CSV: bad header");
    CorrelatorSeries series;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        CorrelatorEntry e;
        long realizations = 0;
        char extra;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%ld%c", &e.time, &e.value, &e.std_err,
                        &realizations, &extra) != 4)
            throw validation_error("correlator CSV: bad row: " + line);
        if (first) {
            series.realizations = static_cast<int>(realizations);
            first = false;
        }
        series.entries.push_back(e);
    }
    return series;
}

std::string zne_sweep_to_csv(const std::vector<ZneSweepRow>& rows) {
    std::string out = "lambda,value,std_err,f,s\n";
    for (const auto& r : rows) {
        out += format_double(r.lambda);
        out += ',';
        out += format_double(r.value);
        out += ',';
        out += format_double(r.std_err);
        out += ',';
        out += std::to_string(r.f);
        out += ',';
        out += std::to_string(r.s);
        out += '\n';
    }
    return out;
}

std::string fit_result_to_json(const FitResult& fit) {
    nlohmann::json j;
    j["alpha"] = fit.alpha;
    j["amplitude"] = fit.amplitude;
    j["t_min"] = fit.t_min;
    j["t_max"] = fit.t_max;
    j["residual_rms"] = fit.residual_rms;
    j["n_points"] = fit.n_points;
    return j.dump(2) + "\n";
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace xxzsim
