#include "qpkc/qmath.hpp"

#include <cmath>
#include <stdexcept>

namespace qpkc {
namespace {

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

constexpr double kInvSqrt2 = 0.70710678118654752440;

}  // namespace

OneQubitState OneQubitState::from_amplitudes(Complex a0, Complex a1) {
    if (!finite(a0) || !finite(a1)) {
        throw std::invalid_argument("OneQubitState: non-finite amplitude");
    }
    OneQubitState s;
    s.amps = {a0, a1};
    if (std::abs(s.norm_squared() - 1.0) > kExactTol) {
        throw std::invalid_argument("OneQubitState: amplitudes not normalized");
    }
    return s;
}

OneQubitState OneQubitState::zero() { return {}; }
OneQubitState OneQubitState::one() {
    OneQubitState s;
    s.amps = {Complex{}, Complex{1.0, 0.0}};
    return s;
}
OneQubitState OneQubitState::plus() {
    OneQubitState s;
    s.amps = {Complex{kInvSqrt2, 0.0}, Complex{kInvSqrt2, 0.0}};
    return s;
}
OneQubitState OneQubitState::minus() {
    OneQubitState s;
    s.amps = {Complex{kInvSqrt2, 0.0}, Complex{-kInvSqrt2, 0.0}};
    return s;
}

double OneQubitState::norm_squared() const { return std::norm(amps[0]) + std::norm(amps[1]); }

TwoQubitState TwoQubitState::from_amplitudes(const std::array<Complex, 4>& amps) {
    for (const Complex& a : amps) {
        if (!finite(a)) {
            throw std::invalid_argument("TwoQubitState: non-finite amplitude");
        }
    }
    TwoQubitState s;
    s.amps = amps;
    if (std::abs(s.norm_squared() - 1.0) > kExactTol) {
        throw std::invalid_argument("TwoQubitState: amplitudes not normalized");
    }
    return s;
}

double TwoQubitState::norm_squared() const {
    double n = 0.0;
    for (const Complex& a : amps) {
        n += std::norm(a);
    }
    return n;
}

Operator2::Operator2(Complex m00, Complex m01, Complex m10, Complex m11, OperatorKind kind)
    : m_{m00, m01, m10, m11} {
    *this = as(kind);
}

Operator2 Operator2::as(OperatorKind kind) const {
    if (kind == OperatorKind::Observable && !is_hermitian()) {
        throw std::invalid_argument("Operator2: observable must be Hermitian");
    }
    if (kind == OperatorKind::Unitary && !is_unitary()) {
        throw std::invalid_argument("Operator2: matrix is not unitary");
    }
    Operator2 out = *this;
    out.kind_ = kind;
    return out;
}

Operator2 Operator2::adjoint() const {
    Operator2 out;
    out.m_ = {std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]), std::conj(m_[3])};
    out.kind_ = kind_;
    return out;
}

bool Operator2::is_hermitian(double tol) const { return max_abs_diff(adjoint()) <= tol; }

bool Operator2::is_unitary(double tol) const {
    // Entries of u^dagger u compared against the identity.
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            const Complex e = std::conj(m_[r]) * m_[c] + std::conj(m_[2 + r]) * m_[2 + c];
            if (std::abs(e - (r == c ? 1.0 : 0.0)) > tol) {
                return false;
            }
        }
    }
    return true;
}

double Operator2::max_abs_diff(const Operator2& other) const {
    double d = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        d = std::max(d, std::abs(m_[i] - other.m_[i]));
    }
    return d;
}

Operator2 operator*(const Operator2& a, const Operator2& b) {
    Operator2 out;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            out.m_[2 * r + c] = a(r, 0) * b(0, c) + a(r, 1) * b(1, c);
        }
    }
    if (a.kind_ == OperatorKind::Unitary && b.kind_ == OperatorKind::Unitary) {
        out.kind_ = OperatorKind::Unitary;
    }
    return out;
}

Operator2 operator*(Complex c, const Operator2& a) {
    Operator2 out;
    for (std::size_t i = 0; i < 4; ++i) {
        out.m_[i] = c * a.m_[i];
    }
    return out;
}

Operator2 operator+(const Operator2& a, const Operator2& b) {
    Operator2 out;
    for (std::size_t i = 0; i < 4; ++i) {
        out.m_[i] = a.m_[i] + b.m_[i];
    }
    return out;
}

Operator2 operator-(const Operator2& a, const Operator2& b) {
    Operator2 out;
    for (std::size_t i = 0; i < 4; ++i) {
        out.m_[i] = a.m_[i] - b.m_[i];
    }
    return out;
}

Operator2 identity2() { return {1.0, 0.0, 0.0, 1.0, OperatorKind::Unitary}; }
Operator2 pauli_x() { return {0.0, 1.0, 1.0, 0.0, OperatorKind::Unitary}; }
Operator2 pauli_y() {
    return {0.0, Complex{0.0, -1.0}, Complex{0.0, 1.0}, 0.0, OperatorKind::Unitary};
}
Operator2 pauli_z() { return {1.0, 0.0, 0.0, -1.0, OperatorKind::Unitary}; }
Operator2 hadamard() {
    return {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2, OperatorKind::Unitary};
}

double normalize_angle(double phi) {
    if (!std::isfinite(phi)) {
        throw std::invalid_argument("Axis: angle must be finite");
    }
    double r = std::fmod(phi, kTwoPi);
    if (r < 0.0) {
        r += kTwoPi;
    }
    if (r >= kTwoPi) {
        r = 0.0;
    }
    return r;
}

namespace {

constexpr double kQuarterSnap = 1e-15;

// Index 0..3 of the quarter turn phi sits on, or -1.
int quarter_index(double phi) {
    const double q = std::round(phi / (kPi / 2.0));
    if (std::abs(phi - q * (kPi / 2.0)) > kQuarterSnap) {
        return -1;
    }
    return static_cast<int>(q) % 4;
}

}  // namespace

Axis::Axis(double phi) : phi_(normalize_angle(phi)) {
    // The z and x axes and their reversals come out of trig and subtraction
    // with last-bit noise; pin them so key axes compare exactly.
    const int q = quarter_index(phi_);
    if (q >= 0) {
        phi_ = q * (kPi / 2.0);
    }
}

double Axis::nx() const {
    constexpr double kSin[4] = {0.0, 1.0, 0.0, -1.0};
    const int q = quarter_index(phi_);
    return q >= 0 ? kSin[q] : std::sin(phi_);
}

double Axis::nz() const {
    constexpr double kCos[4] = {1.0, 0.0, -1.0, 0.0};
    const int q = quarter_index(phi_);
    return q >= 0 ? kCos[q] : std::cos(phi_);
}

Axis axis_from_vector(PlaneVector v) {
    if (std::hypot(v.x, v.z) == 0.0) {
        throw std::invalid_argument("axis_from_vector: zero vector");
    }
    return Axis(std::atan2(v.x, v.z));
}

Operator2 observable_from_axis(Axis axis) {
    const double c = axis.nz();
    const double s = axis.nx();
    return {c, s, s, -c, OperatorKind::Observable};
}

Operator2 rotation(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    // Columns: U|0> = c|0> + s|1>, U|1> = -s|0> + c|1>.
    return {c, -s, s, c, OperatorKind::Unitary};
}

Operator2 conjugate(const Operator2& m, const Operator2& u) {
    if (!u.is_unitary()) {
        throw std::invalid_argument("conjugate: u is not unitary");
    }
    Operator2 out = u.adjoint() * m * u;
    return m.is_hermitian() ? out.as(OperatorKind::Observable) : out;
}

AxisSign axis_of(const Operator2& m) {
    if (!m.is_hermitian(kAxisTol)) {
        throw std::invalid_argument("axis_of: operator is not Hermitian");
    }
    if (std::abs(m.trace()) > kAxisTol) {
        throw std::invalid_argument("axis_of: operator is not traceless");
    }
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            if (std::abs(m(r, c).imag()) > kAxisTol) {
                throw std::invalid_argument("axis_of: operator has a y component");
            }
        }
    }
    const double z = 0.5 * (m(0, 0).real() - m(1, 1).real());
    const double x = 0.5 * (m(0, 1).real() + m(1, 0).real());
    if (std::abs(std::hypot(x, z) - 1.0) > kAxisTol) {
        throw std::invalid_argument("axis_of: eigenvalues are not +-1");
    }
    return {Axis(std::atan2(x, z)), 1};
}

OneQubitState eigenstate(Axis axis, int label) {
    const double c = std::cos(0.5 * axis.phi());
    const double s = std::sin(0.5 * axis.phi());
    OneQubitState e;
    if (label == 0) {
        e.amps = {Complex{c, 0.0}, Complex{s, 0.0}};
    } else {
        e.amps = {Complex{-s, 0.0}, Complex{c, 0.0}};
    }
    return e;
}

OneQubitState apply(const Operator2& u, const OneQubitState& s) {
    OneQubitState out;
    out.amps = {u(0, 0) * s.amps[0] + u(0, 1) * s.amps[1],
                u(1, 0) * s.amps[0] + u(1, 1) * s.amps[1]};
    return out;
}

TwoQubitState tensor(const OneQubitState& bob, const OneQubitState& alice) {
    TwoQubitState out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out.amps[2 * i + j] = bob.amps[i] * alice.amps[j];
        }
    }
    return out;
}

TwoQubitState apply_single(const Operator2& u, const TwoQubitState& s, Party which) {
    if (!u.is_unitary()) {
        throw std::invalid_argument("apply_single: operator is not unitary");
    }
    TwoQubitState out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            if (which == Party::Bob) {
                out.amps[2 * i + j] = u(i, 0) * s.amps[j] + u(i, 1) * s.amps[2 + j];
            } else {
                out.amps[2 * i + j] = u(j, 0) * s.amps[2 * i] + u(j, 1) * s.amps[2 * i + 1];
            }
        }
    }
    return out;
}

double expectation(const TwoQubitState& s, Axis axis_bob, Axis axis_alice) {
    const Operator2 b = observable_from_axis(axis_bob);
    const Operator2 a = observable_from_axis(axis_alice);
    Complex acc{};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            Complex row{};
            for (int k = 0; k < 2; ++k) {
                for (int l = 0; l < 2; ++l) {
                    row += b(i, k) * a(j, l) * s.amps[2 * k + l];
                }
            }
            acc += std::conj(s.amps[2 * i + j]) * row;
        }
    }
    return acc.real();
}

double expectation(const OneQubitState& s, Axis axis) {
    return overlap(s, apply(observable_from_axis(axis), s)).real();
}

Projection project(const TwoQubitState& s, Axis axis, Party which, int label) {
    const OneQubitState e = eigenstate(axis, label);
    OneQubitState rest;
    for (int other = 0; other < 2; ++other) {
        Complex v{};
        for (int k = 0; k < 2; ++k) {
            const Complex amp = which == Party::Bob ? s.amps[2 * k + other] : s.amps[2 * other + k];
            v += std::conj(e.amps[k]) * amp;
        }
        rest.amps[other] = v;
    }
    Projection out;
    out.probability = rest.norm_squared();
    if (out.probability > 0.0) {
        const double norm = std::sqrt(out.probability);
        rest.amps[0] /= norm;
        rest.amps[1] /= norm;
    } else {
        rest = OneQubitState::zero();
    }
    out.collapsed = which == Party::Bob ? tensor(e, rest) : tensor(rest, e);
    return out;
}

std::array<double, 2> outcome_probabilities(const TwoQubitState& s, Axis axis, Party which) {
    return {project(s, axis, which, 0).probability, project(s, axis, which, 1).probability};
}

Measurement measure_one(const TwoQubitState& s, Axis axis, Party which, RandomSource& rng) {
    Projection zero = project(s, axis, which, 0);
    Projection one = project(s, axis, which, 1);
    const double total = zero.probability + one.probability;
    if (rng.uniform() * total < zero.probability) {
        return {0, zero.collapsed};
    }
    return {1, one.collapsed};
}

SingleMeasurement measure_single(const OneQubitState& s, Axis axis, RandomSource& rng) {
    const double p0 = std::norm(overlap(eigenstate(axis, 0), s));
    const double p1 = std::norm(overlap(eigenstate(axis, 1), s));
    const int label = rng.uniform() * (p0 + p1) < p0 ? 0 : 1;
    return {label, eigenstate(axis, label)};
}

Complex overlap(std::span<const Complex> s, std::span<const Complex> t) {
    if (s.size() != t.size()) {
        throw std::invalid_argument("overlap: dimension mismatch");
    }
    Complex acc{};
    for (std::size_t i = 0; i < s.size(); ++i) {
        acc += std::conj(s[i]) * t[i];
    }
    return acc;
}

Complex overlap(const OneQubitState& s, const OneQubitState& t) {
    return overlap(std::span<const Complex>(s.amps), std::span<const Complex>(t.amps));
}

Complex overlap(const TwoQubitState& s, const TwoQubitState& t) {
    return overlap(std::span<const Complex>(s.amps), std::span<const Complex>(t.amps));
}

OneQubitState condition_on(const TwoQubitState& s, Party measured, const OneQubitState& outcome) {
    OneQubitState rest;
    for (int other = 0; other < 2; ++other) {
        Complex v{};
        for (int k = 0; k < 2; ++k) {
            const Complex amp = measured == Party::Bob ? s.amps[2 * k + other] : s.amps[2 * other + k];
            v += std::conj(outcome.amps[k]) * amp;
        }
        rest.amps[other] = v;
    }
    const double norm = std::sqrt(rest.norm_squared());
    if (norm == 0.0) {
        throw std::invalid_argument("condition_on: outcome has zero probability");
    }
    rest.amps[0] /= norm;
    rest.amps[1] /= norm;
    return rest;
}

Operator2 reduced_single(const TwoQubitState& s, Party which) {
    std::array<Complex, 4> rho{};
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            Complex acc{};
            for (int k = 0; k < 2; ++k) {
                if (which == Party::Bob) {
                    acc += s.amps[2 * r + k] * std::conj(s.amps[2 * c + k]);
                } else {
                    acc += s.amps[2 * k + r] * std::conj(s.amps[2 * k + c]);
                }
            }
            rho[2 * r + c] = acc;
        }
    }
    return Operator2(rho[0], rho[1], rho[2], rho[3], OperatorKind::Observable);
}

}  // namespace qpkc
