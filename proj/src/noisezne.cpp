#include "xxzsim/noisezne.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "xxzsim/parallel.hpp"
#include "xxzsim/qstate.hpp"
#include "xxzsim/rng.hpp"

namespace xxzsim {

namespace {

constexpr std::uint64_t kStreamTrajectory = 0x7e46a3c1ull;

const Eigen::Matrix2cd& pauli(int k) {
    static const Eigen::Matrix2cd p[3] = {pauli_x(), pauli_y(), pauli_z()};
    return p[k];
}

void insert_pauli_noise(StateVector& state, const GateOp& op, const NoiseModel& noise,
                        std::mt19937_64& eng) {
    if (op.kind == GateOp::Kind::OneQubit) {
        if (noise.one_qubit_pauli_p <= 0.0) return;
        if (uniform01(eng) < noise.one_qubit_pauli_p)
            state.apply_1q(pauli(static_cast<int>(uniform_index(eng, 3))), op.q0);
        return;
    }
    if (noise.two_qubit_pauli_p <= 0.0) return;
    if (uniform01(eng) < noise.two_qubit_pauli_p) {
        // uniform over the 15 non-identity two-qubit Paulis
        const std::uint64_t r = uniform_index(eng, 15) + 1;
        const int pa = static_cast<int>(r >> 2), pb = static_cast<int>(r & 3);
        if (pa > 0) state.apply_1q(pauli(pa - 1), op.q0);
        if (pb > 0) state.apply_1q(pauli(pb - 1), op.q1);
    }
}

}  // namespace

void NoiseModel::validate() const {
    for (double p : {two_qubit_pauli_p, one_qubit_pauli_p, readout_flip})
        if (!(p >= 0.0 && p <= 1.0))
            throw validation_error("noise probabilities must lie in [0, 1]");
}

double noisy_trajectory(const Circuit& circuit, const NoiseModel& noise, int site,
                        std::mt19937_64& eng, StateVector& state) {
    state.set_basis_state(0);
    for (const auto& layer : circuit.layers) {
        const bool noisy = noise.noise_on_prep || layer.kind != Layer::Kind::Prep;
        for (std::size_t i = layer.begin; i < layer.end; ++i) {
            circuit.ops[i].apply_to(state);
            if (noisy) insert_pauli_noise(state, circuit.ops[i], noise, eng);
        }
    }
    return state.expectation_z(site);
}

NoisyExpectation noisy_expectation(const Circuit& circuit, int site, const NoiseModel& noise,
                                   int trajectories, std::uint64_t seed, int threads) {
    if (trajectories < 1) throw validation_error("trajectories must be >= 1");
    noise.validate();

    std::vector<double> values(trajectories);
    parallel_ranges(static_cast<std::size_t>(trajectories), threads,
                    [&](std::size_t begin, std::size_t end) {
                        StateVector scratch(circuit.n_qubits);
                        for (std::size_t t = begin; t < end; ++t) {
                            std::mt19937_64 eng(derive_seed(seed, kStreamTrajectory, t));
                            values[t] = noisy_trajectory(circuit, noise, site, eng, scratch);
                        }
                    });

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= trajectories;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double std_err =
        trajectories > 1 ? std::sqrt(var / (trajectories - 1)) / std::sqrt(double(trajectories))
                         : 0.0;
    return {mean, std_err};
}

FoldedCircuit fold_circuit(const Circuit& circuit, int f, int s) {
    if (f < 0) throw validation_error("fold repetitions f must be >= 0");

    // Split into the prep prefix and the m Trotter layers.
    std::size_t first_trotter = circuit.layers.size();
    for (std::size_t i = 0; i < circuit.layers.size(); ++i) {
        if (circuit.layers[i].kind == Layer::Kind::Trotter) {
            first_trotter = i;
            break;
        }
    }
    for (std::size_t i = first_trotter; i < circuit.layers.size(); ++i)
        if (circuit.layers[i].kind == Layer::Kind::Prep)
            throw validation_error("fold_circuit: prep layers must precede Trotter layers");

    const std::size_t m = circuit.layers.size() - first_trotter;
    if (m == 0) throw validation_error("fold_circuit: no Trotter layers to fold");
    if (s < 0 || static_cast<std::size_t>(s) > m)
        throw validation_error("fold_circuit: partial depth s outside [0, m]");

    FoldedCircuit out;
    out.f = f;
    out.s = s;
    out.lambda = 2.0 * f + 1.0 + 2.0 * static_cast<double>(s) / static_cast<double>(m);
    Circuit& c = out.circuit;
    c.n_qubits = circuit.n_qubits;

    for (std::size_t i = 0; i < first_trotter; ++i) {
        const Layer& l = circuit.layers[i];
        c.start_layer(Layer::Kind::Prep, l.name);
        for (std::size_t k = l.begin; k < l.end; ++k) c.push(circuit.ops[k]);
    }

    auto push_forward = [&](std::size_t layer_idx) {
        const Layer& l = circuit.layers[layer_idx];
        c.start_layer(Layer::Kind::Trotter, l.name);
        for (std::size_t k = l.begin; k < l.end; ++k) c.push(circuit.ops[k]);
    };
    auto push_dagger = [&](std::size_t layer_idx) {
        const Layer& l = circuit.layers[layer_idx];
        c.start_layer(Layer::Kind::Trotter, l.name + "^dag");
        for (std::size_t k = l.end; k > l.begin; --k) c.push(circuit.ops[k - 1].dagger());
    };

    for (std::size_t i = first_trotter; i < circuit.layers.size(); ++i) push_forward(i);
    for (int rep = 0; rep < f; ++rep) {
        for (std::size_t i = circuit.layers.size(); i > first_trotter; --i) push_dagger(i - 1);
        for (std::size_t i = first_trotter; i < circuit.layers.size(); ++i) push_forward(i);
    }
    // partial tail on the last s layers
    for (std::size_t k = 0; k < static_cast<std::size_t>(s); ++k)
        push_dagger(circuit.layers.size() - 1 - k);
    for (std::size_t k = static_cast<std::size_t>(s); k > 0; --k)
        push_forward(circuit.layers.size() - k);
    return out;
}

ZneFit zne_fit(std::span<const ZnePoint> points, bool pin_asymptote) {
    std::vector<ZnePoint> pts(points.begin(), points.end());
    for (const auto& p : pts)
        if (!std::isfinite(p.lambda) || !std::isfinite(p.value))
            throw validation_error("zne_fit: non-finite input");
    std::sort(pts.begin(), pts.end(),
              [](const ZnePoint& a, const ZnePoint& b) { return a.lambda < b.lambda; });

    std::size_t distinct = pts.empty() ? 0 : 1;
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i].lambda > pts[i - 1].lambda + 1e-12) ++distinct;
    const std::size_t needed = pin_asymptote ? 2 : 3;
    if (distinct < needed)
        throw validation_error("zne_fit: needs >= " + std::to_string(needed) +
                               " distinct lambda values");

    ZneFit fit;
    fit.pinned = pin_asymptote;
    const std::size_t n = pts.size();

    const bool all_pos = std::all_of(pts.begin(), pts.end(),
                                     [](const ZnePoint& p) { return p.value > 0.0; });
    const bool all_neg = std::all_of(pts.begin(), pts.end(),
                                     [](const ZnePoint& p) { return p.value < 0.0; });

    if (pin_asymptote && (all_pos || all_neg)) {
        // ln|v| = ln|b| - c*lambda
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto& p : pts) {
            const double y = std::log(std::abs(p.value));
            sx += p.lambda;
            sy += y;
            sxx += p.lambda * p.lambda;
            sxy += p.lambda * y;
        }
        const double det = n * sxx - sx * sx;
        const double slope = (n * sxy - sx * sy) / det;
        const double intercept = (sxx * sy - sx * sxy) / det;
        fit.c = -slope;
        fit.b = (all_pos ? 1.0 : -1.0) * std::exp(intercept);
        fit.a = 0.0;
        fit.value0 = fit.b;
        fit.log_linear = true;

        double ss = 0.0;
        for (const auto& p : pts) {
            const double r = std::log(std::abs(p.value)) - (intercept + slope * p.lambda);
            ss += r * r;
        }
        fit.residual_norm = std::sqrt(ss);
        if (n > 2) {
            const double sigma2 = ss / (n - 2);
            const double var_intercept = sigma2 * sxx / det;
            fit.value0_err = std::abs(fit.b) * std::sqrt(var_intercept);
        }

        double model_ss = 0.0;
        for (const auto& p : pts) {
            const double r = fit.b * std::exp(-fit.c * p.lambda) - p.value;
            model_ss += r * r;
        }
        fit.residual_norm = std::sqrt(model_ss);
        return fit;
    }

    // Damped Gauss-Newton on (a,) b, c.
    const int np = pin_asymptote ? 2 : 3;
    double a0 = pin_asymptote ? 0.0 : pts.back().value;
    double b0 = pts.front().value - a0;
    double c0 = 0.5;
    if (pts.size() >= 2) {
        const double v1 = pts.front().value - a0, v2 = pts[1].value - a0;
        if (v1 != 0.0 && v2 != 0.0 && ((v1 > 0) == (v2 > 0)) &&
            pts[1].lambda > pts.front().lambda)
            c0 = std::log(std::abs(v1 / v2)) / (pts[1].lambda - pts.front().lambda);
        if (!std::isfinite(c0) || c0 == 0.0) c0 = 0.5;
    }
    if (b0 != 0.0) b0 *= std::exp(c0 * pts.front().lambda);

    Eigen::VectorXd theta(np);
    if (pin_asymptote)
        theta << b0, c0;
    else
        theta << a0, b0, c0;

    auto residuals = [&](const Eigen::VectorXd& th, Eigen::VectorXd& r, Eigen::MatrixXd& jac) {
        const double a = pin_asymptote ? 0.0 : th(0);
        const double b = th(pin_asymptote ? 0 : 1);
        const double cc = th(pin_asymptote ? 1 : 2);
        r.resize(static_cast<Eigen::Index>(n));
        jac.resize(static_cast<Eigen::Index>(n), np);
        for (std::size_t i = 0; i < n; ++i) {
            const double e = std::exp(-cc * pts[i].lambda);
            r(i) = a + b * e - pts[i].value;
            int col = 0;
            if (!pin_asymptote) jac(i, col++) = 1.0;
            jac(i, col++) = e;
            jac(i, col) = -b * pts[i].lambda * e;
        }
    };

    Eigen::VectorXd r;
    Eigen::MatrixXd jac;
    residuals(theta, r, jac);
    double cost = r.squaredNorm();
    double mu = 1e-3;
    for (int iter = 0; iter < 200; ++iter) {
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd g = jac.transpose() * r;
        Eigen::MatrixXd damped = jtj;
        damped.diagonal().array() += mu;
        const Eigen::VectorXd step = damped.ldlt().solve(-g);
        if (!step.allFinite()) break;
        Eigen::VectorXd cand = theta + step;
        Eigen::VectorXd rc;
        Eigen::MatrixXd jc;
        residuals(cand, rc, jc);
        const double cost_c = rc.squaredNorm();
        if (cost_c < cost) {
            theta = cand;
            r = rc;
            jac = jc;
            mu = std::max(mu * 0.3, 1e-12);
            if (cost - cost_c < 1e-15 * (1.0 + cost)) {
                cost = cost_c;
                break;
            }
            cost = cost_c;
        } else {
            mu *= 3.0;
            if (mu > 1e12) break;
        }
    }

    fit.a = pin_asymptote ? 0.0 : theta(0);
    fit.b = theta(pin_asymptote ? 0 : 1);
    fit.c = theta(pin_asymptote ? 1 : 2);
    fit.value0 = fit.a + fit.b;
    fit.residual_norm = std::sqrt(cost);
    fit.log_linear = false;

    if (n > static_cast<std::size_t>(np)) {
        const double sigma2 = cost / (n - np);
        const Eigen::MatrixXd cov = sigma2 * (jac.transpose() * jac)
                                                 .ldlt()
                                                 .solve(Eigen::MatrixXd::Identity(np, np));
        // var(a + b) over the parameter block that contributes to E(0)
        double v = 0.0;
        if (pin_asymptote) {
            v = cov(0, 0);
        } else {
            v = cov(0, 0) + cov(1, 1) + 2.0 * cov(0, 1);
        }
        fit.value0_err = v > 0.0 ? std::sqrt(v) : 0.0;
    }
    return fit;
}

}  // namespace xxzsim
