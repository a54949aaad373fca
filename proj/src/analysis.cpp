#include "xxzsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace xxzsim {

namespace {

struct LogPoint {
    double t, lt, lv;
};

std::vector<LogPoint> log_points(const CorrelatorSeries& series) {
    std::vector<LogPoint> pts;
    std::string bad;
    for (const auto& e : series.entries) {
        if (e.time <= 0.0) continue;  // ln t undefined; the t=0 anchor never enters log-log work
        if (e.value <= 0.0) {
            bad += (bad.empty() ? "" : ", ") + std::to_string(e.time);
            continue;
        }
        pts.push_back({e.time, std::log(e.time), std::log(e.value)});
    }
    if (!bad.empty())
        throw std::domain_error("non-positive correlator value at t = {" + bad + "}");
    return pts;
}

}  // namespace

std::vector<std::pair<double, double>> local_exponent(const CorrelatorSeries& series) {
    const auto pts = log_points(series);
    const std::size_t n = pts.size();
    if (n < 3) throw validation_error("local_exponent needs >= 3 positive-time points");

    std::vector<std::pair<double, double>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t a = (i == 0) ? 0 : i - 1;
        std::size_t b = (i + 1 == n) ? i : i + 1;
        out.emplace_back(pts[i].t, (pts[b].lv - pts[a].lv) / (pts[b].lt - pts[a].lt));
    }
    return out;
}

FitResult power_law_fit(const CorrelatorSeries& series, double t_min, double t_max,
                        bool weighted) {
    std::vector<LogPoint> pts;
    std::vector<double> wts;
    for (const auto& e : series.entries) {
        if (e.time < t_min || e.time > t_max || e.time <= 0.0 || e.value <= 0.0) continue;
        pts.push_back({e.time, std::log(e.time), std::log(e.value)});
        // ln-space sigma is std_err/value; zero std_err (exact data) gets
        // unit weight to keep the fit defined.
        double w = 1.0;
        if (weighted && e.std_err > 0.0) {
            const double sl = e.std_err / e.value;
            w = 1.0 / (sl * sl);
        }
        wts.push_back(w);
    }
    if (pts.size() < 3)
        throw validation_error("power_law_fit: fewer than 3 usable points in window");

    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double w = wts[i], x = pts[i].lt, y = pts[i].lv;
        sw += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
    }
    const double det = sw * sxx - sx * sx;
    if (det == 0.0) throw validation_error("power_law_fit: degenerate time grid");
    const double alpha = (sw * sxy - sx * sy) / det;
    const double intercept = (sxx * sy - sx * sxy) / det;

    double ss = 0.0;
    for (const auto& p : pts) {
        const double r = p.lv - (intercept + alpha * p.lt);
        ss += r * r;
    }

    FitResult fit;
    fit.alpha = alpha;
    fit.amplitude = std::exp(intercept);
    fit.t_min = pts.front().t;
    fit.t_max = pts.back().t;
    fit.residual_rms = std::sqrt(ss / pts.size());
    fit.n_points = static_cast<int>(pts.size());
    return fit;
}

std::pair<double, double> fit_window_select(const CorrelatorSeries& exact,
                                            const CorrelatorSeries& estimated, double slope_tol,
                                            double agree_tol) {
    const auto alphas = local_exponent(exact);

    // Common grid: times present in both series (1e-9 match) with positive
    // values, carrying exact's local exponent and the agreement flag.
    struct Point {
        double t, alpha;
        bool agree;
    };
    std::vector<Point> grid;
    for (const auto& ee : exact.entries) {
        if (ee.time <= 0.0 || ee.value <= 0.0) continue;
        const CorrelatorEntry* match = nullptr;
        for (const auto& se : estimated.entries) {
            if (std::abs(se.time - ee.time) < 1e-9) {
                match = &se;
                break;
            }
        }
        if (!match) continue;
        double alpha = 0.0;
        bool found = false;
        for (const auto& [t, a] : alphas) {
            if (std::abs(t - ee.time) < 1e-9) {
                alpha = a;
                found = true;
                break;
            }
        }
        if (!found) continue;
        grid.push_back({ee.time, alpha, std::abs(match->value - ee.value) <=
                                            agree_tol * std::abs(ee.value)});
    }
    if (grid.size() < 3) throw analysis_error("fit_window_select: series overlap below 3 points");

    double best_span = -1.0;
    std::size_t best_n = 0;
    std::pair<double, double> best{0.0, 0.0};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!grid[i].agree) continue;
        double amin = grid[i].alpha, amax = grid[i].alpha;
        for (std::size_t j = i; j < grid.size(); ++j) {
            if (!grid[j].agree) break;
            amin = std::min(amin, grid[j].alpha);
            amax = std::max(amax, grid[j].alpha);
            if (amax - amin > slope_tol) break;
            const std::size_t count = j - i + 1;
            if (count < 3) continue;
            const double span = std::log(grid[j].t) - std::log(grid[i].t);
            if (span > best_span + 1e-12 ||
                (std::abs(span - best_span) <= 1e-12 && count > best_n)) {
                best_span = span;
                best_n = count;
                best = {grid[i].t, grid[j].t};
            }
        }
    }
    if (best_span < 0.0)
        throw analysis_error(
            "fit_window_select: no window satisfies slope_tol/agree_tol; adjust tolerances");
    return best;
}

double page_value(double dim_a, double dim_b) {
    if (!(dim_a >= 1.0) || !(dim_b >= 1.0))
        throw validation_error("page_value: dimensions must be >= 1");
    if (dim_a > dim_b) std::swap(dim_a, dim_b);
    return std::log(dim_a) - dim_a / (2.0 * dim_b);
}

Parameterization convert_parameterization(double j_cal, double j_cal_prime,
                                          double dual_warn_band) {
    if (j_cal == 0.0) throw std::domain_error("convert_parameterization: J coupling is zero");
    Parameterization p;
    p.tau = 4.0 * j_cal;
    p.delta = j_cal_prime / j_cal;
    p.near_dual_unitary = std::abs(p.tau - std::numbers::pi) < dual_warn_band;
    return p;
}

}  // namespace xxzsim
