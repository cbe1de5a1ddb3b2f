#pragma once

#include <array>
#include <complex>
#include <span>
#include <utility>

namespace lghom {

/// Azimuthal/radial quantum numbers (ell, p) of a Laguerre-Gauss mode.
/// ell is the OAM index (any integer), p the radial index (p >= 0).
struct ModeIndex {
    int ell = 0;
    int p = 0;

    ModeIndex() = default;
    ModeIndex(int ell_, int p_);

    /// Mode order N = 2p + |ell|.
    int order() const;

    auto operator<=>(const ModeIndex&) const = default;
};

/// Gaussian beam geometry: waist radius w0 [m], signed propagation
/// distance z from the waist [m], wavenumber k [rad/m].
///
/// The wavefront is tracked through its curvature C(z) = 1/R(z), which
/// stays finite at the waist plane where R itself diverges.
struct BeamGeometry {
    double w0 = 1.0;
    double z = 0.0;
    double k = 1.0;

    BeamGeometry() = default;
    BeamGeometry(double w0_, double z_, double k_);

    /// Rayleigh range zR = k w0^2 / 2.
    double rayleigh() const;
    /// Beam radius w(z) = w0 sqrt(1 + (z/zR)^2).
    double width() const;
    /// Wavefront curvature C(z) = z/(z^2 + zR^2) = 1/R(z); C(0) = 0.
    double curvature() const;
    /// Gouy phase m * arctan(z/zR) for mode order m = 2p + |ell| + 1.
    double gouy(int mode_order) const;

    bool operator==(const BeamGeometry&) const = default;
};

/// Transverse observation point in cylindrical coordinates.
struct FieldPoint {
    double rho = 0.0;
    double phi = 0.0;

    FieldPoint() = default;
    FieldPoint(double rho_, double phi_);
};

/// log(n!) via lgamma; exact to double precision for all n >= 0.
double log_factorial(int n);

/// Generalized Laguerre polynomial L_p^alpha(x), p >= 0, alpha >= 0,
/// by the upward three-term recurrence in p.
double laguerre(int p, int alpha, double x);

/// Complex LG mode amplitude at a transverse point: normalization,
/// radial polynomial, Gaussian envelope, vortex phase ell*phi, Gouy
/// phase (2p+|ell|+1) arctan(z/zR) and curvature phase k rho^2 C(z)/2.
/// The plane-wave factor exp(i(kz - wt)) is omitted.
std::complex<double> lg_field(const ModeIndex& mode, const BeamGeometry& geom,
                              const FieldPoint& pt);

using AbcdMatrix = std::array<std::array<double, 2>, 2>;

/// Propagate a beam through a lossless paraxial system via the complex
/// beam parameter q = z + i zR, q' = (A q + B)/(C q + D). The matrix
/// must have unit determinant (within 1e-9) and the transformed q must
/// keep a positive imaginary part.
BeamGeometry abcd_propagate(const BeamGeometry& geom, const AbcdMatrix& abcd);

/// Transverse intensity of a mode superposition at one point.
/// coherent = true:  |sum_i a_i LG_i|^2
/// coherent = false: sum_i |a_i|^2 |LG_i|^2  (incoherent g1 sum)
double intensity_profile(std::span<const std::pair<ModeIndex, BeamGeometry>> modes,
                         bool coherent,
                         std::span<const std::complex<double>> amplitudes,
                         const FieldPoint& pt);

}  // namespace lghom
