#include "xxzsim/qstate.hpp"

#include <algorithm>
#include <cmath>

#include "xxzsim/rng.hpp"

namespace xxzsim {

namespace {

constexpr double kUnitaryTol = 1e-12;

bool is_unitary(const Eigen::Matrix2cd& u) {
    return (u.adjoint() * u - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <= kUnitaryTol;
}

bool is_unitary(const Eigen::Matrix4cd& u) {
    return (u.adjoint() * u - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() <= kUnitaryTol;
}

// Deterministic blockwise summation: per-4096 partial sums accumulated in
// index order.  Keeps round-off at the 1e-12 level for 2^21-term sums and is
// independent of any parallel context the caller runs in.
template <typename F>
double block_sum(std::uint64_t n, F term) {
    constexpr std::uint64_t kBlock = 4096;
    double total = 0.0;
    for (std::uint64_t b = 0; b < n; b += kBlock) {
        const std::uint64_t hi = std::min(n, b + kBlock);
        double part = 0.0;
        for (std::uint64_t i = b; i < hi; ++i) part += term(i);
        total += part;
    }
    return total;
}

}  // namespace

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
        throw capacity_error("qubit count " + std::to_string(n_qubits) + " outside [1, " +
                             std::to_string(kMaxQubits) + "]");
    amps_.assign(std::uint64_t{1} << n_qubits, cx{0.0, 0.0});
    amps_[0] = cx{1.0, 0.0};
}

StateVector StateVector::basis_state(int n_qubits, const std::string& bits) {
    if (static_cast<int>(bits.size()) != n_qubits)
        throw validation_error("bitstring length " + std::to_string(bits.size()) +
                               " does not match qubit count " + std::to_string(n_qubits));
    std::uint64_t index = 0;
    for (int j = 0; j < n_qubits; ++j) {
        if (bits[j] == '1')
            index |= std::uint64_t{1} << j;
        else if (bits[j] != '0')
            throw validation_error("bitstring must contain only '0'/'1'");
    }
    StateVector s(n_qubits);
    s.set_basis_state(index);
    return s;
}

StateVector StateVector::haar_random(int n_qubits, std::mt19937_64& eng) {
    StateVector s(n_qubits);
    double nsq = 0.0;
    for (auto& a : s.amps_) {
        a = cx{standard_normal(eng), standard_normal(eng)};
        nsq += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(nsq);
    for (auto& a : s.amps_) a *= inv;
    return s;
}

void StateVector::set_basis_state(std::uint64_t index) {
    if (index >= dim()) throw std::out_of_range("basis index out of range");
    std::fill(amps_.begin(), amps_.end(), cx{0.0, 0.0});
    amps_[index] = cx{1.0, 0.0};
}

double StateVector::norm_sq() const {
    return block_sum(dim(), [&](std::uint64_t i) { return std::norm(amps_[i]); });
}

void StateVector::check_target(int q, const char* what) const {
    if (q < 0 || q >= n_qubits_)
        throw std::out_of_range(std::string(what) + " qubit " + std::to_string(q) +
                                " out of range for " + std::to_string(n_qubits_) + " qubits");
}

void StateVector::apply_1q(const Eigen::Matrix2cd& u, int target) {
    check_target(target, "target");
    if (!is_unitary(u)) throw validation_error("apply_1q: matrix is not unitary");

    const std::uint64_t stride = std::uint64_t{1} << target;
    const std::uint64_t dim2 = dim() >> 1;
    cx* a = amps_.data();

    const cx u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
    const bool diagonal = (u01 == cx{} && u10 == cx{});
    const bool antidiag = (u00 == cx{} && u11 == cx{});

    for (std::uint64_t g = 0; g < dim2; ++g) {
        // insert a 0 bit at position `target`
        const std::uint64_t i0 = ((g >> target) << (target + 1)) | (g & (stride - 1));
        const std::uint64_t i1 = i0 | stride;
        if (diagonal) {
            a[i0] *= u00;
            a[i1] *= u11;
        } else if (antidiag) {
            const cx lo = a[i0];
            a[i0] = u01 * a[i1];
            a[i1] = u10 * lo;
        } else {
            const cx lo = a[i0], hi = a[i1];
            a[i0] = u00 * lo + u01 * hi;
            a[i1] = u10 * lo + u11 * hi;
        }
    }
}

void StateVector::apply_2q(const Eigen::Matrix4cd& u_in, int q_a, int q_b) {
    check_target(q_a, "pair");
    check_target(q_b, "pair");
    if (q_a == q_b) throw std::out_of_range("apply_2q: qubits must differ");
    if (!is_unitary(u_in)) throw validation_error("apply_2q: matrix is not unitary");

    // Normalize to lo < hi; the matrix is indexed by 2*bit_a + bit_b, so
    // exchanging the pair conjugates by SWAP (permutation of rows/cols 1<->2).
    Eigen::Matrix4cd u = u_in;
    int lo = q_a, hi = q_b;
    if (lo > hi) {
        std::swap(lo, hi);
        static const Eigen::Vector4i perm{0, 2, 1, 3};
        Eigen::Matrix4cd v;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) v(r, c) = u_in(perm(r), perm(c));
        u = v;
    }
    // After normalization the row index is 2*bit_hi' + bit_lo' where
    // (hi', lo') correspond to (q_a, q_b); expressed on (lo, hi) positions the
    // sub-index is 2*bit_{q_a} + bit_{q_b}.  We address amplitudes by
    // (bit_lo, bit_hi) below, so build the index map once:
    //   amp slot k = bit_hi*2 + bit_lo  ->  matrix row = 2*bit_{q_a} + bit_{q_b}
    // With q_a == lo (no swap): row = 2*bit_lo + bit_hi.
    // With the swap applied above, u is already re-indexed so that
    // row = 2*bit_lo + bit_hi holds in both cases.

    const std::uint64_t slo = std::uint64_t{1} << lo;
    const std::uint64_t shi = std::uint64_t{1} << hi;
    const std::uint64_t groups = dim() >> 2;
    cx* a = amps_.data();

    const cx m00 = u(0, 0), m01 = u(0, 1), m02 = u(0, 2), m03 = u(0, 3);
    const cx m10 = u(1, 0), m11 = u(1, 1), m12 = u(1, 2), m13 = u(1, 3);
    const cx m20 = u(2, 0), m21 = u(2, 1), m22 = u(2, 2), m23 = u(2, 3);
    const cx m30 = u(3, 0), m31 = u(3, 1), m32 = u(3, 2), m33 = u(3, 3);

    // XXZ-form fast path: diagonal |00>/|11> phases plus a 2x2 block mixing
    // |01> and |10>.  This is the shape of every Trotter block, and the hot
    // loop of the exact-trace oracle.
    const bool xxz_form = (m01 == cx{} && m02 == cx{} && m03 == cx{} && m10 == cx{} &&
                           m13 == cx{} && m20 == cx{} && m23 == cx{} && m30 == cx{} &&
                           m31 == cx{} && m32 == cx{});

    for (std::uint64_t g = 0; g < groups; ++g) {
        // insert 0 bits at positions lo and hi
        std::uint64_t t = ((g >> lo) << (lo + 1)) | (g & (slo - 1));
        const std::uint64_t i00 = ((t >> hi) << (hi + 1)) | (t & (shi - 1));
        const std::uint64_t ilo = i00 | slo;   // bit_lo = 1
        const std::uint64_t ihi = i00 | shi;   // bit_hi = 1
        const std::uint64_t i11 = i00 | slo | shi;

        // matrix row order: 0 = (0,0), 1 = (lo=0,hi=1), 2 = (lo=1,hi=0), 3 = (1,1)
        if (xxz_form) {
            a[i00] *= m00;
            a[i11] *= m33;
            const cx v1 = a[ihi], v2 = a[ilo];
            a[ihi] = m11 * v1 + m12 * v2;
            a[ilo] = m21 * v1 + m22 * v2;
        } else {
            const cx v0 = a[i00], v1 = a[ihi], v2 = a[ilo], v3 = a[i11];
            a[i00] = m00 * v0 + m01 * v1 + m02 * v2 + m03 * v3;
            a[ihi] = m10 * v0 + m11 * v1 + m12 * v2 + m13 * v3;
            a[ilo] = m20 * v0 + m21 * v1 + m22 * v2 + m23 * v3;
            a[i11] = m30 * v0 + m31 * v1 + m32 * v2 + m33 * v3;
        }
    }
}

void StateVector::apply_cx(int control, int target) {
    check_target(control, "control");
    check_target(target, "target");
    if (control == target) throw std::out_of_range("apply_cx: qubits must differ");

    const std::uint64_t cmask = std::uint64_t{1} << control;
    const std::uint64_t tmask = std::uint64_t{1} << target;
    const std::uint64_t n = dim();
    cx* a = amps_.data();
    for (std::uint64_t i = 0; i < n; ++i) {
        if ((i & cmask) && !(i & tmask)) std::swap(a[i], a[i | tmask]);
    }
}

double StateVector::expectation_z(int site) const {
    check_target(site, "site");
    const std::uint64_t mask = std::uint64_t{1} << site;
    return block_sum(dim(), [&](std::uint64_t i) {
        const double p = std::norm(amps_[i]);
        return (i & mask) ? -p : p;
    });
}

double StateVector::bipartite_entropy(int cut) const {
    if (cut < 1 || cut >= n_qubits_) throw std::out_of_range("entropy cut out of range");
    const Eigen::Index rows = Eigen::Index{1} << cut;
    const Eigen::Index cols = Eigen::Index{1} << (n_qubits_ - cut);
    // Column-major map matches the bit convention: row = low bits = qubits [0, cut).
    Eigen::Map<const Eigen::MatrixXcd> m(amps_.data(), rows, cols);

    // Reduced density matrix on the smaller side, then its spectrum.
    Eigen::MatrixXcd rho;
    if (rows <= cols)
        rho = m * m.adjoint();
    else
        rho = (m.adjoint() * m).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double p = es.eigenvalues()[i];
        if (p > 1e-15) s -= p * std::log(p);
    }
    return s;
}

std::vector<std::uint64_t> StateVector::sample_bitstrings(int shots, double readout_flip,
                                                          std::uint64_t seed) const {
    if (shots < 1) throw validation_error("shots must be >= 1");
    if (readout_flip < 0.0 || readout_flip > 1.0)
        throw validation_error("readout_flip must lie in [0, 1]");

    const std::uint64_t n = dim();
    std::vector<double> cdf(n);
    double acc = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        acc += std::norm(amps_[i]);
        cdf[i] = acc;
    }

    std::mt19937_64 eng(seed);
    std::vector<std::uint64_t> out;
    out.reserve(static_cast<std::size_t>(shots));
    for (int s = 0; s < shots; ++s) {
        const double u = uniform01(eng) * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::uint64_t idx = (it == cdf.end()) ? n - 1 : static_cast<std::uint64_t>(it - cdf.begin());
        if (readout_flip > 0.0) {
            for (int q = 0; q < n_qubits_; ++q)
                if (uniform01(eng) < readout_flip) idx ^= std::uint64_t{1} << q;
        }
        out.push_back(idx);
    }
    return out;
}

}  // namespace xxzsim
