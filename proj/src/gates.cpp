#include "xxzsim/gates.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "xxzsim/rng.hpp"

namespace xxzsim {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt_angle(double a) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", a);
    return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// GateOp / Circuit

GateOp GateOp::one_qubit(const Eigen::Matrix2cd& u, int target, std::string label) {
    GateOp op;
    op.kind = Kind::OneQubit;
    op.q0 = target;
    op.m2 = u;
    op.label = std::move(label);
    return op;
}

GateOp GateOp::two_qubit(const Eigen::Matrix4cd& u, int qa, int qb, std::string label) {
    GateOp op;
    op.kind = Kind::TwoQubit;
    op.q0 = qa;
    op.q1 = qb;
    op.m4 = u;
    op.label = std::move(label);
    return op;
}

GateOp GateOp::cx(int control, int target) {
    GateOp op;
    op.kind = Kind::Cx;
    op.q0 = control;
    op.q1 = target;
    op.label = "CX";
    return op;
}

GateOp GateOp::dagger() const {
    GateOp op = *this;
    switch (kind) {
        case Kind::OneQubit:
            op.m2 = m2.adjoint().eval();
            break;
        case Kind::TwoQubit:
            op.m4 = m4.adjoint().eval();
            break;
        case Kind::Cx:
            return op;  // self-inverse
    }
    if (op.label.size() >= 4 && op.label.ends_with("^dag"))
        op.label.erase(op.label.size() - 4);
    else
        op.label += "^dag";
    return op;
}

void GateOp::apply_to(StateVector& state) const {
    switch (kind) {
        case Kind::OneQubit:
            state.apply_1q(m2, q0);
            break;
        case Kind::TwoQubit:
            state.apply_2q(m4, q0, q1);
            break;
        case Kind::Cx:
            state.apply_cx(q0, q1);
            break;
    }
}

void Circuit::start_layer(Layer::Kind kind, std::string name) {
    layers.push_back(Layer{kind, ops.size(), ops.size(), std::move(name)});
}

void Circuit::push(GateOp op) {
    if (layers.empty()) start_layer(Layer::Kind::Trotter, "layer");
    ops.push_back(std::move(op));
    layers.back().end = ops.size();
}

std::size_t Circuit::trotter_layer_count() const {
    std::size_t n = 0;
    for (const auto& l : layers)
        if (l.kind == Layer::Kind::Trotter) ++n;
    return n;
}

std::vector<std::size_t> Circuit::layer_marks() const {
    std::vector<std::size_t> marks;
    marks.reserve(layers.size());
    for (const auto& l : layers) marks.push_back(l.end);
    return marks;
}

void Circuit::apply_to(StateVector& state) const {
    for (const auto& op : ops) op.apply_to(state);
}

void Circuit::apply_layer(StateVector& state, std::size_t layer_index) const {
    const Layer& l = layers.at(layer_index);
    for (std::size_t i = l.begin; i < l.end; ++i) ops[i].apply_to(state);
}

Eigen::MatrixXcd Circuit::to_matrix() const {
    if (n_qubits > 12) throw capacity_error("to_matrix limited to 12 qubits");
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    Eigen::MatrixXcd m(dim, dim);
    StateVector col(n_qubits);
    for (Eigen::Index x = 0; x < dim; ++x) {
        col.set_basis_state(static_cast<std::uint64_t>(x));
        apply_to(col);
        for (Eigen::Index i = 0; i < dim; ++i) m(i, x) = col.amplitudes()[i];
    }
    return m;
}

std::string Circuit::to_text() const {
    std::ostringstream out;
    out << "qubits " << n_qubits << "\n";
    for (const auto& l : layers) {
        out << "layer " << l.name << ' '
            << (l.kind == Layer::Kind::Prep ? "prep" : "trotter") << "\n";
        for (std::size_t i = l.begin; i < l.end; ++i) {
            const GateOp& op = ops[i];
            out << op.label << ' ' << op.q0;
            if (op.kind != GateOp::Kind::OneQubit) out << ' ' << op.q1;
            out << "\n";
        }
    }
    return out.str();
}

void Circuit::validate() const {
    std::size_t pos = 0;
    for (const auto& l : layers) {
        if (l.begin != pos || l.end < l.begin || l.end > ops.size())
            throw validation_error("circuit layers do not partition ops");
        pos = l.end;
    }
    if (pos != ops.size()) throw validation_error("ops outside any layer");
    for (const auto& op : ops) {
        const int hi = (op.kind == GateOp::Kind::OneQubit) ? op.q0 : std::max(op.q0, op.q1);
        const int lo = (op.kind == GateOp::Kind::OneQubit) ? op.q0 : std::min(op.q0, op.q1);
        if (lo < 0 || hi >= n_qubits) throw validation_error("gate index out of range");
    }
}

Circuit concat(const Circuit& a, const Circuit& b) {
    if (a.n_qubits != b.n_qubits) throw validation_error("concat: qubit counts differ");
    Circuit c = a;
    const std::size_t shift = a.ops.size();
    c.ops.insert(c.ops.end(), b.ops.begin(), b.ops.end());
    for (Layer l : b.layers) {
        l.begin += shift;
        l.end += shift;
        c.layers.push_back(std::move(l));
    }
    return c;
}

// ---------------------------------------------------------------------------
// Gate constants

Eigen::Matrix2cd pauli_x() {
    Eigen::Matrix2cd m;
    m << 0, 1, 1, 0;
    return m;
}

Eigen::Matrix2cd pauli_y() {
    Eigen::Matrix2cd m;
    m << 0, cx{0, -1}, cx{0, 1}, 0;
    return m;
}

Eigen::Matrix2cd pauli_z() {
    Eigen::Matrix2cd m;
    m << 1, 0, 0, -1;
    return m;
}

Eigen::Matrix2cd sqrt_x() {
    Eigen::Matrix2cd m;
    m << cx{0.5, 0.5}, cx{0.5, -0.5}, cx{0.5, -0.5}, cx{0.5, 0.5};
    return m;
}

Eigen::Matrix2cd sqrt_y() {
    Eigen::Matrix2cd m;
    m << cx{0.5, 0.5}, cx{-0.5, -0.5}, cx{0.5, 0.5}, cx{0.5, 0.5};
    return m;
}

Eigen::Matrix2cd t_gate() {
    Eigen::Matrix2cd m;
    m << 1, 0, 0, std::polar(1.0, kPi / 4);
    return m;
}

Eigen::Matrix2cd rz(double theta) {
    Eigen::Matrix2cd m;
    m << std::polar(1.0, -theta / 2), 0, 0, std::polar(1.0, theta / 2);
    return m;
}

Eigen::Matrix2cd ry(double theta) {
    Eigen::Matrix2cd m;
    m << std::cos(theta / 2), -std::sin(theta / 2), std::sin(theta / 2), std::cos(theta / 2);
    return m;
}

Eigen::Matrix4cd cx_matrix() {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = 1;
    m(1, 1) = 1;
    m(2, 3) = 1;
    m(3, 2) = 1;
    return m;
}

Eigen::MatrixXcd gate_matrix(std::string_view name, std::optional<double> angle) {
    if (name == "Rz" || name == "Ry") {
        if (!angle || !std::isfinite(*angle))
            throw validation_error(std::string(name) + " requires a finite angle");
        return name == "Rz" ? Eigen::MatrixXcd(rz(*angle)) : Eigen::MatrixXcd(ry(*angle));
    }
    if (name == "X") return pauli_x();
    if (name == "X^{1/2}") return sqrt_x();
    if (name == "Y^{1/2}") return sqrt_y();
    if (name == "T") return t_gate();
    if (name == "CX") return cx_matrix();
    throw validation_error("unknown gate name: " + std::string(name));
}

// ---------------------------------------------------------------------------
// XXZ Trotter block

Eigen::Matrix4cd xxz_block_matrix(double j, double delta, double tau) {
    if (!std::isfinite(j) || !std::isfinite(delta) || !std::isfinite(tau))
        throw validation_error("xxz_block_matrix: parameters must be finite");
    const double a = j * tau;
    const cx corner = std::polar(1.0, -a * delta / 4);
    const cx mid = std::polar(1.0, a * delta / 4);
    const double c = std::cos(a / 2), s = std::sin(a / 2);
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
    u(0, 0) = corner;
    u(3, 3) = corner;
    u(1, 1) = mid * c;
    u(2, 2) = mid * c;
    u(1, 2) = mid * cx{0, -s};
    u(2, 1) = mid * cx{0, -s};
    return u;
}

std::vector<GateOp> xxz_block_circuit(double j, double delta, double tau, int qj, int qk) {
    if (!std::isfinite(j) || !std::isfinite(delta) || !std::isfinite(tau))
        throw validation_error("xxz_block_circuit: parameters must be finite");
    const double a = j * tau;
    const double theta = delta * a / 2 - kPi / 2;
    const double phi = a / 2 - kPi / 2;
    std::vector<GateOp> ops;
    ops.reserve(8);
    ops.push_back(GateOp::one_qubit(rz(kPi / 2), qk, "Rz(" + fmt_angle(kPi / 2) + ")"));
    ops.push_back(GateOp::cx(qk, qj));
    ops.push_back(GateOp::one_qubit(rz(theta), qj, "Rz(" + fmt_angle(theta) + ")"));
    ops.push_back(GateOp::one_qubit(ry(phi), qk, "Ry(" + fmt_angle(phi) + ")"));
    ops.push_back(GateOp::cx(qj, qk));
    ops.push_back(GateOp::one_qubit(ry(-phi), qk, "Ry(" + fmt_angle(-phi) + ")"));
    ops.push_back(GateOp::cx(qk, qj));
    ops.push_back(GateOp::one_qubit(rz(-kPi / 2), qj, "Rz(" + fmt_angle(-kPi / 2) + ")"));
    return ops;
}

// ---------------------------------------------------------------------------
// FloquetSpec

void FloquetSpec::validate() const {
    if (n_qubits < 2 || n_qubits > kMaxQubits)
        throw capacity_error("n_qubits " + std::to_string(n_qubits) + " outside [2, " +
                             std::to_string(kMaxQubits) + "]");
    if (!(tau > 0)) throw validation_error("tau must be positive");
    if (probe_site < 0 || probe_site >= n_qubits)
        throw validation_error("probe_site out of range");
    if (prep_layers < 1) throw validation_error("prep_layers must be >= 1");
    for (double o : weave_offsets)
        if (!(o > 0) || !(o < tau))
            throw validation_error("weave offsets must lie in (0, tau)");
}

std::uint64_t FloquetSpec::fingerprint() const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d|%.17g|%.17g|%.17g|%d|%.17g|%d|%d", n_qubits, j, delta,
                  tau, staggered ? 1 : 0, stagger_strength, probe_site, prep_layers);
    std::uint64_t h = 1469598103934665603ULL;
    for (const char* p = buf; *p; ++p) {
        h ^= static_cast<unsigned char>(*p);
        h *= 1099511628211ULL;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Random state preparation

Circuit random_prep_circuit(int n_qubits, int layers, std::uint64_t seed, int idle_qubit) {
    if (n_qubits < 2) throw validation_error("random_prep_circuit needs >= 2 qubits");
    if (layers < 1) throw validation_error("random_prep_circuit needs >= 1 layers");
    if (idle_qubit < 0 || idle_qubit >= n_qubits)
        throw std::out_of_range("idle qubit out of range");

    std::vector<int> active;
    for (int q = 0; q < n_qubits; ++q)
        if (q != idle_qubit) active.push_back(q);

    static const Eigen::Matrix2cd kGates[3] = {sqrt_x(), sqrt_y(), t_gate()};
    static const char* kNames[3] = {"X^{1/2}", "Y^{1/2}", "T"};

    std::mt19937_64 eng(seed);
    std::vector<int> previous(active.size(), -1);

    Circuit c;
    c.n_qubits = n_qubits;
    for (int layer = 1; layer <= layers; ++layer) {
        c.start_layer(Layer::Kind::Prep, "prep" + std::to_string(layer));
        for (std::size_t i = 0; i < active.size(); ++i) {
            int g;
            if (previous[i] < 0) {
                g = static_cast<int>(uniform_index(eng, 3));
            } else {
                // draw from the two gates other than last layer's choice
                const int r = static_cast<int>(uniform_index(eng, 2));
                g = (previous[i] + 1 + r) % 3;
            }
            previous[i] = g;
            c.push(GateOp::one_qubit(kGates[g], active[i], kNames[g]));
        }
        // brickwork CX step: pattern A on odd layers, B on even; control is
        // the lower-index qubit of each pair
        const std::size_t start = (layer % 2 == 1) ? 0 : 1;
        for (std::size_t i = start; i + 1 < active.size(); i += 2)
            c.push(GateOp::cx(active[i], active[i + 1]));
    }
    return c;
}

// ---------------------------------------------------------------------------
// Floquet evolution

namespace {

void push_trotter_layer(Circuit& c, const FloquetSpec& spec, double step, const std::string& name) {
    c.start_layer(Layer::Kind::Trotter, name);
    const Eigen::Matrix4cd block = xxz_block_matrix(spec.j, spec.delta, step);
    const std::string block_label =
        "XXZ(tau=" + fmt_angle(step) + ",delta=" + fmt_angle(spec.delta) + ")";
    for (int q = 0; q + 1 < spec.n_qubits; q += 2)
        c.push(GateOp::two_qubit(block, q, q + 1, block_label));
    if (spec.staggered) {
        for (int q = 0; q < spec.n_qubits; ++q) {
            const double theta = spec.stagger_strength * (step / 2) * ((q % 2 == 0) ? 1.0 : -1.0);
            // exp(-i theta sigma^z) == Rz(2 theta)
            c.push(GateOp::one_qubit(rz(2 * theta), q, "Rz(" + fmt_angle(2 * theta) + ")"));
        }
    }
    for (int q = 1; q + 1 < spec.n_qubits; q += 2)
        c.push(GateOp::two_qubit(block, q, q + 1, block_label));
}

}  // namespace

Circuit floquet_circuit(const FloquetSpec& spec, int n_steps, std::optional<double> weave_offset) {
    spec.validate();
    if (n_steps < 0) throw validation_error("n_steps must be >= 0");
    if (weave_offset && !(*weave_offset > 0 && *weave_offset < spec.tau))
        throw validation_error("weave offset must lie in (0, tau)");

    Circuit c;
    c.n_qubits = spec.n_qubits;
    if (weave_offset)
        push_trotter_layer(c, spec, *weave_offset, "kick(" + fmt_angle(*weave_offset) + ")");
    for (int n = 1; n <= n_steps; ++n)
        push_trotter_layer(c, spec, spec.tau, "step" + std::to_string(n));
    return c;
}

}  // namespace xxzsim
