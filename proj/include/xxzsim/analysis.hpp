#pragma once

#include <utility>
#include <vector>

#include "xxzsim/common.hpp"
#include "xxzsim/typicality.hpp"

namespace xxzsim {

struct FitResult {
    double alpha = 0.0;       // fitted log-log slope
    double amplitude = 0.0;   // prefactor of amplitude * t^alpha
    double t_min = 0.0;       // window actually used (first/last fitted time)
    double t_max = 0.0;
    double residual_rms = 0.0;  // rms residual of ln C
    int n_points = 0;
};

/// Local exponent alpha(t) = d ln C / d ln t by central differences on the
/// (possibly non-uniform) time grid; one-sided at the ends.  Only t > 0
/// entries participate; a non-positive value among them is a domain error.
std::vector<std::pair<double, double>> local_exponent(const CorrelatorSeries& series);

/// Ordinary least squares of ln C against ln t over [t_min, t_max].
/// With weighted = true, points are weighted by (value/std_err)^2.
FitResult power_law_fit(const CorrelatorSeries& series, double t_min, double t_max,
                        bool weighted = false);

/// Largest contiguous window (by log-time span, ties by point count) on the
/// common time grid of the two series where (1) the exact series' local
/// exponent varies by at most slope_tol and (2) the estimate stays within
/// agree_tol relative deviation from the exact values.  Throws
/// analysis_error when no window of >= 3 points qualifies.
std::pair<double, double> fit_window_select(const CorrelatorSeries& exact,
                                            const CorrelatorSeries& estimated, double slope_tol,
                                            double agree_tol);

/// Mean entanglement entropy of a Haar-random bipartite pure state:
/// ln(dim_a) - dim_a / (2 dim_b), in nats.  Swaps the arguments if needed.
double page_value(double dim_a, double dim_b);

struct Parameterization {
    double tau = 0.0;    // units 1/J
    double delta = 0.0;
    bool near_dual_unitary = false;  // |J tau - pi| below the warning band
};

/// Change of variables from the two-coupling form (Jc (XX+YY) + Jc' ZZ) to
/// (tau, delta): tau = 4 Jc, delta = Jc'/Jc.  Flags proximity to the dual
/// unitary point J tau = pi, where power-law transport breaks down.
Parameterization convert_parameterization(double j_cal, double j_cal_prime,
                                          double dual_warn_band = 0.3);

}  // namespace xxzsim
