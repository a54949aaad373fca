#pragma once

#include <cstdint>
#include <vector>

#include "xxzsim/common.hpp"
#include "xxzsim/gates.hpp"

namespace xxzsim {

struct CorrelatorEntry {
    double time = 0.0;     // units 1/J
    double value = 0.0;
    double std_err = 0.0;
};

/// Time series of the probe-site spin autocorrelator.  realizations == 0
/// marks an exact (trace) evaluation, which is the only case allowed to carry
/// zero std_err.
struct CorrelatorSeries {
    std::vector<CorrelatorEntry> entries;
    int realizations = 0;
    std::uint64_t fingerprint = 0;
};

struct TypicalityOptions {
    int realizations = 10;
    std::uint64_t seed = 0;
    int shots = 0;   // 0 = exact expectation values
    int threads = 0; // 0 = resolve from env/hardware
};

/// The time grid of one evolution strand: the base strand (offset 0) records
/// t = 0, tau, ..., n_max*tau; a weave strand with offset tau' records after
/// its initial kick and after each of its n_max - 1 full steps, i.e.
/// t = tau' + n*tau for n = 0 .. n_max-1.
std::vector<double> strand_time_grid(const FloquetSpec& spec, int n_max, double offset);

/// Typicality estimate of C_00(t) = Tr(S^z_p S^z_p(t))/2^L: for each
/// realization, prepare |0>_probe (x) |psi_R> with a seeded random circuit,
/// evolve, and record (1/4) <sigma^z_probe>.  Mean over realizations, with
/// std_err = sample sd / sqrt(R).  If shots > 0 the expectation at each time
/// is replaced by a finite-shot sample (fresh state re-prepared per record).
/// Weave offsets in the spec produce extra strands, merged into one series.
CorrelatorSeries estimate_autocorrelation(const FloquetSpec& spec, int n_max,
                                          const TypicalityOptions& opts);
std::vector<CorrelatorSeries> estimate_autocorrelation_strands(const FloquetSpec& spec, int n_max,
                                                               const TypicalityOptions& opts);

/// Exact infinite-temperature autocorrelator by evolving every computational
/// basis state (spin-flip symmetry halves the work for the clean model).
/// Cost is 2^L statevector evolutions; refuses n_qubits above l_cap.
CorrelatorSeries exact_autocorrelation(const FloquetSpec& spec, int n_max, int l_cap = 14,
                                       int threads = 0);
std::vector<CorrelatorSeries> exact_autocorrelation_strands(const FloquetSpec& spec, int n_max,
                                                            int l_cap = 14, int threads = 0);

/// Sorted union of weave strands.  All strands must share a fingerprint;
/// times closer than 1e-9 are rejected rather than averaged.
CorrelatorSeries weave_merge(const std::vector<CorrelatorSeries>& strands);

/// Mean of <S^z_probe(t)> over fully Haar-random |psi_R> on the non-probe
/// qubits (probe pinned to |0>).  This converges to 2*C_00(t); used to check
/// the projector identity behind the estimator.
CorrelatorSeries haar_typicality_expectation(const FloquetSpec& spec, int n_max, int realizations,
                                             std::uint64_t seed, int threads = 0);

}  // namespace xxzsim
