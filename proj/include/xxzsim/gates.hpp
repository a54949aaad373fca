#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "xxzsim/common.hpp"
#include "xxzsim/qstate.hpp"

namespace xxzsim {

/// One gate application.  Matrices follow the StateVector index convention:
/// a TwoQubit matrix on (q0, q1) is indexed by 2*bit_{q0} + bit_{q1}.
struct GateOp {
    enum class Kind { OneQubit, TwoQubit, Cx };

    Kind kind;
    int q0 = -1;  // OneQubit target / TwoQubit first / Cx control
    int q1 = -1;  // TwoQubit second / Cx target
    Eigen::Matrix2cd m2 = Eigen::Matrix2cd::Identity();
    Eigen::Matrix4cd m4 = Eigen::Matrix4cd::Identity();
    std::string label;

    static GateOp one_qubit(const Eigen::Matrix2cd& u, int target, std::string label);
    static GateOp two_qubit(const Eigen::Matrix4cd& u, int qa, int qb, std::string label);
    static GateOp cx(int control, int target);

    GateOp dagger() const;
    void apply_to(StateVector& state) const;
};

struct Layer {
    enum class Kind { Prep, Trotter };
    Kind kind;
    std::size_t begin = 0;  // [begin, end) into Circuit::ops
    std::size_t end = 0;
    std::string name;
};

/// Ordered gate list with contiguous named layers.  Immutable by convention
/// once built; freely shareable across workers.
struct Circuit {
    int n_qubits = 0;
    std::vector<GateOp> ops;
    std::vector<Layer> layers;

    void start_layer(Layer::Kind kind, std::string name);
    void push(GateOp op);

    std::size_t trotter_layer_count() const;
    // End indices of each layer (strictly increasing, last == ops.size()).
    std::vector<std::size_t> layer_marks() const;

    void apply_to(StateVector& state) const;
    void apply_layer(StateVector& state, std::size_t layer_index) const;

    // Dense matrix of the whole circuit (small n_qubits only; for tests).
    Eigen::MatrixXcd to_matrix() const;

    // Line-oriented text form: `qubits N`, `layer <name> <prep|trotter>`,
    // then one `<label> <q0> [<q1>]` line per gate.
    std::string to_text() const;

    // Throws if layer records do not partition ops or indices are off-range.
    void validate() const;
};

Circuit concat(const Circuit& a, const Circuit& b);

/// Named gate constants.  Accepts X, X^{1/2}, Y^{1/2}, T, CX, Rz, Ry
/// (the rotations require an angle).  2x2 results are returned embedded in
/// the top-left of a dynamically sized matrix.
Eigen::MatrixXcd gate_matrix(std::string_view name, std::optional<double> angle = std::nullopt);

Eigen::Matrix2cd pauli_x();
Eigen::Matrix2cd pauli_y();
Eigen::Matrix2cd pauli_z();
Eigen::Matrix2cd sqrt_x();
Eigen::Matrix2cd sqrt_y();
Eigen::Matrix2cd t_gate();
Eigen::Matrix2cd rz(double theta);
Eigen::Matrix2cd ry(double theta);
Eigen::Matrix4cd cx_matrix();

/// exp(-i tau h) for h = (J/4)(XX + YY + delta ZZ), in closed form:
/// e^{-i J tau delta/4} phases on |00>,|11>; the {|01>,|10>} block is
/// e^{+i J tau delta/4} [[cos(J tau/2), -i sin],[-i sin, cos]].
Eigen::Matrix4cd xxz_block_matrix(double j, double delta, double tau);

/// The 3-CX circuit form of the same block on the ordered pair (qj, qk):
/// Rz(pi/2) k; CX(k,j); Rz(theta) j; Ry(phi) k; CX(j,k); Ry(-phi) k;
/// CX(k,j); Rz(-pi/2) j, with theta = delta*J*tau/2 - pi/2 and
/// phi = J*tau/2 - pi/2.  Composes to e^{+i pi/4} * xxz_block_matrix.
std::vector<GateOp> xxz_block_circuit(double j, double delta, double tau, int qj, int qk);

/// Physical run parameters.  Times are in units of 1/J throughout.
struct FloquetSpec {
    int n_qubits = 2;
    double j = 1.0;
    double delta = 1.0;
    double tau = 4.0;
    bool staggered = false;
    double stagger_strength = 0.5;  // J/2 prefactor of the alternating field
    int probe_site = 0;
    int prep_layers = 20;
    std::vector<double> weave_offsets;

    void validate() const;
    // Hash of the physics parameters, excluding weave offsets, used to guard
    // series merges.
    std::uint64_t fingerprint() const;
};

/// Pseudo-random state preparation: the probe qubit stays idle; every other
/// qubit gets one single-qubit gate per layer from {X^{1/2}, Y^{1/2}, T}
/// (never repeating its previous choice), followed by a CX brickwork layer
/// alternating pattern A (1,2),(3,4),... and pattern B (2,3),(4,5),...
Circuit random_prep_circuit(int n_qubits, int layers, std::uint64_t seed, int idle_qubit = 0);

/// n_steps Trotter layers of the discrete-time evolution; each layer applies
/// the even-pair blocks first, then (staggered only) the single-qubit layer
/// exp(-i theta_j sigma^z_j) with theta_j = stagger_strength*(tau/2)*(-1)^j,
/// then the odd-pair blocks.  A weave offset prepends one full layer at
/// tau' < tau as a modified initial condition.
Circuit floquet_circuit(const FloquetSpec& spec, int n_steps,
                        std::optional<double> weave_offset = std::nullopt);

}  // namespace xxzsim
