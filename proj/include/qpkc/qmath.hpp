#pragma once

// Exact small-dimension linear algebra for one and two spin-1/2 particles.
//
// Conventions shared by every module:
//  * Standard Pauli matrices: sigma_z = diag(1, -1), sigma_x = offdiag(1, 1).
//  * In-plane observable sigma(phi) = cos(phi) sigma_z + sin(phi) sigma_x.
//  * Outcome label 0 is the +1 eigenstate cos(phi/2)|0> + sin(phi/2)|1>,
//    label 1 the -1 eigenstate -sin(phi/2)|0> + cos(phi/2)|1>.
//  * Two-particle amplitudes are indexed 2*bitBob + bitAlice: Bob is the
//    first tensor factor, Alice the second.

#include <array>
#include <complex>
#include <cstddef>
#include <span>

#include "qpkc/random.hpp"

namespace qpkc {

using Complex = std::complex<double>;

inline constexpr double kExactTol = 1e-12;
inline constexpr double kAxisTol = 1e-10;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class Party { Bob, Alice };

struct OneQubitState {
    std::array<Complex, 2> amps{Complex{1.0, 0.0}, Complex{0.0, 0.0}};

    // Validates finiteness and unit norm (1e-12).
    static OneQubitState from_amplitudes(Complex a0, Complex a1);

    static OneQubitState zero();
    static OneQubitState one();
    static OneQubitState plus();
    static OneQubitState minus();

    double norm_squared() const;
};

struct TwoQubitState {
    std::array<Complex, 4> amps{Complex{1.0, 0.0}, {}, {}, {}};

    static TwoQubitState from_amplitudes(const std::array<Complex, 4>& amps);

    Complex amp(int bit_bob, int bit_alice) const { return amps[2 * bit_bob + bit_alice]; }
    double norm_squared() const;
};

enum class OperatorKind { Observable, Unitary, General };

// 2x2 complex matrix, row-major.
class Operator2 {
public:
    Operator2() = default;
    Operator2(Complex m00, Complex m01, Complex m10, Complex m11,
              OperatorKind kind = OperatorKind::General);

    Complex operator()(int row, int col) const { return m_[2 * row + col]; }
    OperatorKind kind() const { return kind_; }

    // Returns a copy re-tagged after checking the tag's defining property.
    Operator2 as(OperatorKind kind) const;

    Operator2 adjoint() const;
    bool is_hermitian(double tol = kExactTol) const;
    bool is_unitary(double tol = kExactTol) const;
    Complex trace() const { return m_[0] + m_[3]; }
    double max_abs_diff(const Operator2& other) const;

    friend Operator2 operator*(const Operator2& a, const Operator2& b);
    friend Operator2 operator*(Complex c, const Operator2& a);
    friend Operator2 operator+(const Operator2& a, const Operator2& b);
    friend Operator2 operator-(const Operator2& a, const Operator2& b);

private:
    std::array<Complex, 4> m_{};
    OperatorKind kind_ = OperatorKind::General;
};

Operator2 identity2();
Operator2 pauli_x();
Operator2 pauli_y();
Operator2 pauli_z();
Operator2 hadamard();

// In-plane measurement direction n = (sin phi, 0, cos phi). phi is kept in
// [0, 2pi); angles within 1e-15 of a quarter turn are pinned to it.
class Axis {
public:
    Axis() = default;
    explicit Axis(double phi);

    static Axis z() { return Axis(0.0); }
    static Axis x() { return Axis(kPi / 2.0); }

    double phi() const { return phi_; }
    // Bloch components in the x-z plane.
    double nx() const;
    double nz() const;

    friend bool operator==(const Axis&, const Axis&) = default;

private:
    double phi_ = 0.0;
};

double normalize_angle(double phi);

struct AxisSign {
    Axis axis;
    int sign = 1;
};

// A two-dimensional vector in the x-z plane, components (x, z).
struct PlaneVector {
    double x = 0.0;
    double z = 0.0;
};

Axis axis_from_vector(PlaneVector v);

Operator2 observable_from_axis(Axis axis);
Operator2 rotation(double theta);

// u^-1 * m * u. Throws std::invalid_argument unless u is unitary.
Operator2 conjugate(const Operator2& m, const Operator2& u);

// Inverse of observable_from_axis for real, traceless, Hermitian m with
// eigenvalues +-1. The sign is folded into the angle, so sign is always +1.
AxisSign axis_of(const Operator2& m);

// Eigenstate of sigma(axis) carrying the given outcome label.
OneQubitState eigenstate(Axis axis, int label);

// +1 for label 0, -1 for label 1.
inline int label_value(int label) { return label == 0 ? 1 : -1; }

OneQubitState apply(const Operator2& u, const OneQubitState& s);

TwoQubitState tensor(const OneQubitState& bob, const OneQubitState& alice);

// u (x) I for Bob, I (x) u for Alice.
TwoQubitState apply_single(const Operator2& u, const TwoQubitState& s, Party which);

// <s| sigma(axis_bob) (x) sigma(axis_alice) |s>.
double expectation(const TwoQubitState& s, Axis axis_bob, Axis axis_alice);

// Single-particle expectation <s| sigma(axis) |s>.
double expectation(const OneQubitState& s, Axis axis);

struct Projection {
    double probability = 0.0;
    TwoQubitState collapsed;  // renormalized; unspecified when probability is 0
};

// Post-measurement state for a given label, without sampling.
Projection project(const TwoQubitState& s, Axis axis, Party which, int label);

struct Measurement {
    int label = 0;
    TwoQubitState collapsed;
};

// Probability of each label when measuring one party's particle.
std::array<double, 2> outcome_probabilities(const TwoQubitState& s, Axis axis, Party which);

Measurement measure_one(const TwoQubitState& s, Axis axis, Party which, RandomSource& rng);

struct SingleMeasurement {
    int label = 0;
    OneQubitState collapsed;
};

SingleMeasurement measure_single(const OneQubitState& s, Axis axis, RandomSource& rng);

// <s|t>. The span overload throws on dimension mismatch.
Complex overlap(std::span<const Complex> s, std::span<const Complex> t);
Complex overlap(const OneQubitState& s, const OneQubitState& t);
Complex overlap(const TwoQubitState& s, const TwoQubitState& t);

// State of the other party's particle given that `measured` was found in
// `outcome` (s must factor as outcome (x) rest). Renormalized.
OneQubitState condition_on(const TwoQubitState& s, Party measured, const OneQubitState& outcome);

// Partial trace over the other particle.
Operator2 reduced_single(const TwoQubitState& s, Party which);

}  // namespace qpkc
