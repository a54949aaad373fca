#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "xxzsim/common.hpp"
#include "xxzsim/gates.hpp"

namespace xxzsim {

/// Stochastic Pauli noise: after each gate, with the per-kind probability, a
/// uniformly random non-identity Pauli is inserted on the touched qubits.
/// Averaged over trajectories this realizes the uniform depolarizing channel.
struct NoiseModel {
    double two_qubit_pauli_p = 0.0;
    double one_qubit_pauli_p = 0.0;
    double readout_flip = 0.0;
    bool noise_on_prep = false;  // prep layers are noiseless unless enabled

    bool noiseless() const {
        return two_qubit_pauli_p == 0.0 && one_qubit_pauli_p == 0.0 && readout_flip == 0.0;
    }
    void validate() const;
};

/// Runs one noisy trajectory of `circuit` from |0...0> in `state` (reset
/// inside) and returns <sigma^z_site> at the end.
double noisy_trajectory(const Circuit& circuit, const NoiseModel& noise, int site,
                        std::mt19937_64& eng, StateVector& state);

struct NoisyExpectation {
    double value = 0.0;
    double std_err = 0.0;
};

/// Trajectory average of <sigma^z_site>; deterministic given the seed and
/// independent of the thread count.
NoisyExpectation noisy_expectation(const Circuit& circuit, int site, const NoiseModel& noise,
                                   int trajectories, std::uint64_t seed, int threads = 0);

struct FoldedCircuit {
    Circuit circuit;
    double lambda = 1.0;
    int f = 0;
    int s = 0;
};

/// Unitary folding with a partial tail: prep layers pass through unchanged;
/// the m Trotter layers U = T_1..T_m become U [U^dag U]^f followed by
/// (T_m..T_{m-s+1})^dag (T_{m-s+1}..T_m).  Noise factor lambda = 2f+1+2s/m.
/// The folded circuit acts identically to the original in the absence of
/// noise.
FoldedCircuit fold_circuit(const Circuit& circuit, int f, int s);

struct ZnePoint {
    double lambda = 1.0;
    double value = 0.0;
    double std_err = 0.0;
};

struct ZneFit {
    double value0 = 0.0;      // extrapolated E(0) = a + b
    double value0_err = 0.0;  // propagated 1-sigma uncertainty of value0
    double a = 0.0;           // asymptote (0 when pinned)
    double b = 0.0;
    double c = 0.0;           // decay rate
    double residual_norm = 0.0;
    bool pinned = true;
    bool log_linear = false;  // whether the closed-form log path was used
};

/// Least-squares fit of E(lambda) = a + b e^{-c lambda}; with the asymptote
/// pinned (a = 0) and single-signed data this reduces to linear regression of
/// ln|E| on lambda, otherwise damped Gauss-Newton.  Needs >= 2 distinct
/// lambda values pinned, >= 3 otherwise.
ZneFit zne_fit(std::span<const ZnePoint> points, bool pin_asymptote = true);

}  // namespace xxzsim
