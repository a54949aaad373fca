#include "xxzsim/typicality.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "xxzsim/parallel.hpp"
#include "xxzsim/qstate.hpp"
#include "xxzsim/rng.hpp"

namespace xxzsim {

namespace {

// Seed-stream tags so different consumers of the same master seed cannot
// collide.
constexpr std::uint64_t kStreamPrep = 0x9d2c5680aull;
constexpr std::uint64_t kStreamShots = 0x5f356495bull;
constexpr std::uint64_t kStreamHaar = 0x38b34c1dcull;

struct Strand {
    double offset = 0.0;  // 0 = base strand
    Circuit evolution;    // kick (if offset > 0) + full Trotter layers
    std::vector<double> times;
};

// Number of full-tau layers a strand runs (the kick replaces one record).
int strand_full_steps(int n_max, double offset) {
    return offset > 0.0 ? std::max(0, n_max - 1) : n_max;
}

Strand make_strand(const FloquetSpec& spec, int n_max, double offset) {
    Strand s;
    s.offset = offset;
    const int full = strand_full_steps(n_max, offset);
    // A weave strand at n_max == 0 has no record slots, so skip its kick too.
    if (offset > 0.0 && n_max > 0)
        s.evolution = floquet_circuit(spec, full, offset);
    else
        s.evolution = floquet_circuit(spec, full);
    s.times = strand_time_grid(spec, n_max, offset);
    return s;
}

std::vector<double> strand_offsets(const FloquetSpec& spec) {
    std::vector<double> offsets{0.0};
    offsets.insert(offsets.end(), spec.weave_offsets.begin(), spec.weave_offsets.end());
    return offsets;
}

// Walks the strand evolution, invoking record(k, state) for record index k:
// the base strand records before any layer (t=0) and after every layer; a
// weave strand records after every layer (the kick included).
template <typename F>
void evolve_recording(const Strand& strand, StateVector& state, F&& record) {
    int k = 0;
    if (strand.offset == 0.0) record(k++, state);
    for (std::size_t l = 0; l < strand.evolution.layers.size(); ++l) {
        strand.evolution.apply_layer(state, l);
        record(k++, state);
    }
}

double sampled_z_expectation(const StateVector& state, int site, int shots, std::uint64_t seed) {
    const auto samples = state.sample_bitstrings(shots, 0.0, seed);
    const std::uint64_t mask = std::uint64_t{1} << site;
    std::int64_t sum = 0;
    for (std::uint64_t b : samples) sum += (b & mask) ? -1 : 1;
    return static_cast<double>(sum) / static_cast<double>(shots);
}

CorrelatorSeries mean_series(const FloquetSpec& spec, const std::vector<double>& times,
                             const std::vector<std::vector<double>>& per_realization) {
    const int r = static_cast<int>(per_realization.size());
    CorrelatorSeries series;
    series.realizations = r;
    series.fingerprint = spec.fingerprint();
    series.entries.resize(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        double mean = 0.0;
        for (const auto& row : per_realization) mean += row[k];
        mean /= r;
        double var = 0.0;
        for (const auto& row : per_realization) {
            const double d = row[k] - mean;
            var += d * d;
        }
        const double std_err = r > 1 ? std::sqrt(var / (r - 1)) / std::sqrt(double(r)) : 0.0;
        series.entries[k] = CorrelatorEntry{times[k], mean, std_err};
    }
    return series;
}

}  // namespace

std::vector<double> strand_time_grid(const FloquetSpec& spec, int n_max, double offset) {
    std::vector<double> times;
    if (offset == 0.0) {
        for (int n = 0; n <= n_max; ++n) times.push_back(n * spec.tau);
    } else {
        for (int n = 0; n < n_max; ++n) times.push_back(offset + n * spec.tau);
    }
    return times;
}

std::vector<CorrelatorSeries> estimate_autocorrelation_strands(const FloquetSpec& spec, int n_max,
                                                               const TypicalityOptions& opts) {
    spec.validate();
    if (opts.realizations < 1) throw validation_error("realizations must be >= 1");
    if (n_max < 0) throw validation_error("n_max must be >= 0");
    if (opts.shots < 0) throw validation_error("shots must be >= 0");

    std::vector<CorrelatorSeries> result;
    const auto offsets = strand_offsets(spec);
    for (std::size_t s_idx = 0; s_idx < offsets.size(); ++s_idx) {
        const Strand strand = make_strand(spec, n_max, offsets[s_idx]);
        std::vector<std::vector<double>> values(opts.realizations);

        parallel_for(static_cast<std::size_t>(opts.realizations), opts.threads, [&](std::size_t r) {
            const std::uint64_t prep_seed = derive_seed(opts.seed, kStreamPrep + s_idx, r);
            const Circuit prep =
                random_prep_circuit(spec.n_qubits, spec.prep_layers, prep_seed, spec.probe_site);
            for (const auto& op : prep.ops)
                if (op.q0 == spec.probe_site || op.q1 == spec.probe_site)
                    throw std::logic_error("prep circuit touched the probe qubit");

            StateVector state(spec.n_qubits);
            prep.apply_to(state);
            auto& row = values[r];
            row.resize(strand.times.size());
            evolve_recording(strand, state, [&](int k, const StateVector& st) {
                double z;
                if (opts.shots > 0) {
                    const std::uint64_t shot_seed =
                        derive_seed(opts.seed, kStreamShots + s_idx, r * 4096 + k);
                    z = sampled_z_expectation(st, spec.probe_site, opts.shots, shot_seed);
                } else {
                    z = st.expectation_z(spec.probe_site);
                }
                // Eq-level prefactor 1/2 times S^z = sigma^z/2.
                row[k] = 0.25 * z;
            });
        });

        result.push_back(mean_series(spec, strand.times, values));
    }
    return result;
}

CorrelatorSeries estimate_autocorrelation(const FloquetSpec& spec, int n_max,
                                          const TypicalityOptions& opts) {
    return weave_merge(estimate_autocorrelation_strands(spec, n_max, opts));
}

std::vector<CorrelatorSeries> exact_autocorrelation_strands(const FloquetSpec& spec, int n_max,
                                                            int l_cap, int threads) {
    spec.validate();
    if (n_max < 0) throw validation_error("n_max must be >= 0");
    if (spec.n_qubits > l_cap)
        throw capacity_error("exact autocorrelation needs 2^L evolutions; n_qubits " +
                             std::to_string(spec.n_qubits) + " exceeds cap " +
                             std::to_string(l_cap));

    const std::uint64_t dim = std::uint64_t{1} << spec.n_qubits;
    const std::uint64_t probe_mask = std::uint64_t{1} << spec.probe_site;

    // The clean model commutes with the global spin flip X^(x)L while
    // S^z_probe changes sign, so basis states x and ~x contribute equally to
    // the trace: enumerate half the basis and double.
    const bool halved = !spec.staggered;
    const std::uint64_t n_states = halved ? dim / 2 : dim;
    const std::uint64_t top_mask = std::uint64_t{1} << (spec.n_qubits - 1);

    constexpr std::uint64_t kChunk = 256;
    const std::uint64_t n_chunks = (n_states + kChunk - 1) / kChunk;

    std::vector<CorrelatorSeries> result;
    const auto offsets = strand_offsets(spec);
    for (std::size_t s_idx = 0; s_idx < offsets.size(); ++s_idx) {
        const Strand strand = make_strand(spec, n_max, offsets[s_idx]);
        const std::size_t n_times = strand.times.size();
        std::vector<std::vector<double>> chunk_sums(n_chunks);

        parallel_ranges(n_chunks, threads, [&](std::size_t c_begin, std::size_t c_end) {
            StateVector state(spec.n_qubits);
            for (std::size_t c = c_begin; c < c_end; ++c) {
                auto& acc = chunk_sums[c];
                acc.assign(n_times, 0.0);
                const std::uint64_t x_begin = c * kChunk;
                const std::uint64_t x_end = std::min(n_states, x_begin + kChunk);
                for (std::uint64_t x = x_begin; x < x_end; ++x) {
                    // With halving, enumerate states whose top bit is clear.
                    const std::uint64_t basis = halved ? (x & ~top_mask) : x;
                    const double s_x = (basis & probe_mask) ? -0.5 : 0.5;
                    state.set_basis_state(basis);
                    evolve_recording(strand, state, [&](int k, const StateVector& st) {
                        acc[k] += s_x * 0.5 * st.expectation_z(spec.probe_site);
                    });
                }
            }
        });

        CorrelatorSeries series;
        series.realizations = 0;
        series.fingerprint = spec.fingerprint();
        series.entries.resize(n_times);
        for (std::size_t k = 0; k < n_times; ++k) {
            double total = 0.0;
            for (const auto& acc : chunk_sums) total += acc[k];
            if (halved) total *= 2.0;
            series.entries[k] = CorrelatorEntry{strand.times[k], total / static_cast<double>(dim), 0.0};
        }
        result.push_back(std::move(series));
    }
    return result;
}

CorrelatorSeries exact_autocorrelation(const FloquetSpec& spec, int n_max, int l_cap, int threads) {
    return weave_merge(exact_autocorrelation_strands(spec, n_max, l_cap, threads));
}

CorrelatorSeries weave_merge(const std::vector<CorrelatorSeries>& strands) {
    if (strands.empty()) throw validation_error("weave_merge: no strands");
    CorrelatorSeries merged;
    merged.fingerprint = strands.front().fingerprint;
    merged.realizations = strands.front().realizations;
    for (const auto& s : strands) {
        if (s.fingerprint != merged.fingerprint)
            throw validation_error("weave_merge: strand fingerprints differ");
        merged.realizations = std::min(merged.realizations, s.realizations);
        merged.entries.insert(merged.entries.end(), s.entries.begin(), s.entries.end());
    }
    std::sort(merged.entries.begin(), merged.entries.end(),
              [](const CorrelatorEntry& a, const CorrelatorEntry& b) { return a.time < b.time; });
    for (std::size_t i = 1; i < merged.entries.size(); ++i)
        if (merged.entries[i].time - merged.entries[i - 1].time < 1e-9)
            throw validation_error("weave_merge: duplicate time " +
                                   std::to_string(merged.entries[i].time));
    return merged;
}

CorrelatorSeries haar_typicality_expectation(const FloquetSpec& spec, int n_max, int realizations,
                                             std::uint64_t seed, int threads) {
    spec.validate();
    if (realizations < 1) throw validation_error("realizations must be >= 1");

    const Strand strand = make_strand(spec, n_max, 0.0);
    const int rest = spec.n_qubits - 1;
    const std::uint64_t probe_mask = std::uint64_t{1} << spec.probe_site;
    std::vector<std::vector<double>> values(realizations);

    parallel_for(static_cast<std::size_t>(realizations), threads, [&](std::size_t r) {
        std::mt19937_64 eng(derive_seed(seed, kStreamHaar, r));
        const StateVector psi_r = StateVector::haar_random(rest, eng);

        // Embed with the probe qubit pinned to |0>: insert a zero bit at the
        // probe position of every basis index.
        StateVector state(spec.n_qubits);
        auto amps = state.amplitudes();
        std::fill(amps.begin(), amps.end(), cx{0.0, 0.0});
        const auto small = psi_r.amplitudes();
        const std::uint64_t low_mask = probe_mask - 1;
        for (std::uint64_t i = 0; i < psi_r.dim(); ++i) {
            const std::uint64_t idx = ((i & ~low_mask) << 1) | (i & low_mask);
            amps[idx] = small[i];
        }

        auto& row = values[r];
        row.resize(strand.times.size());
        evolve_recording(strand, state, [&](int k, const StateVector& st) {
            row[k] = 0.5 * st.expectation_z(spec.probe_site);  // <S^z>, not halved again
        });
    });

    return mean_series(spec, strand.times, values);
}

}  // namespace xxzsim
