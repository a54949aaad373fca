#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xxzsim/common.hpp"

namespace xxzsim {

/// Dense statevector over L qubits.
///
/// Bit convention (used everywhere in this project): qubit j addresses bit j
/// of the basis-state integer label, i.e. index = sum_j bit_j << j.  For
/// two-qubit gates acting on the ordered pair (q_a, q_b) the 4x4 matrix is
/// indexed by 2*bit_a + bit_b, so the sub-basis reads |b_a b_b> with q_a the
/// left (most significant) slot.
class StateVector {
  public:
    // All-|0...0> state.
    explicit StateVector(int n_qubits);

    // State |bits>, where bits[j] is the value of qubit j ('0' or '1').
    static StateVector basis_state(int n_qubits, const std::string& bits);

    // Haar-random state (complex Gaussian amplitudes, normalized).
    static StateVector haar_random(int n_qubits, std::mt19937_64& eng);

    int n_qubits() const { return n_qubits_; }
    std::uint64_t dim() const { return std::uint64_t{1} << n_qubits_; }
    std::span<cx> amplitudes() { return amps_; }
    std::span<const cx> amplitudes() const { return amps_; }

    // Resets to the computational basis state with the given index.
    void set_basis_state(std::uint64_t index);

    double norm_sq() const;

    // In-place unitary application.  Matrices are checked for unitarity
    // (tolerance 1e-12) on every call; the check is negligible next to the
    // amplitude sweep.
    void apply_1q(const Eigen::Matrix2cd& u, int target);
    void apply_2q(const Eigen::Matrix4cd& u, int q_a, int q_b);
    void apply_cx(int control, int target);

    // <sigma^z_site>; bit 0 contributes +1.  (S^z is half of this.)
    double expectation_z(int site) const;

    // Von Neumann entropy (nats) of qubits [0, cut), from the Schmidt
    // spectrum of the amplitude matrix reshaped to 2^cut x 2^(L-cut).
    double bipartite_entropy(int cut) const;

    // `shots` independent draws from |amplitude|^2, then each bit flipped
    // independently with probability readout_flip.  Returns basis indices in
    // draw order; deterministic given the seed.
    std::vector<std::uint64_t> sample_bitstrings(int shots, double readout_flip,
                                                 std::uint64_t seed) const;

  private:
    int n_qubits_;
    std::vector<cx> amps_;

    void check_target(int q, const char* what) const;
};

}  // namespace xxzsim
