#include "lghom/lgmodes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lghom {

ModeIndex::ModeIndex(int ell_, int p_) : ell(ell_), p(p_) {
    if (p < 0) throw std::invalid_argument("ModeIndex: radial index p must be >= 0");
}

int ModeIndex::order() const { return 2 * p + std::abs(ell); }

BeamGeometry::BeamGeometry(double w0_, double z_, double k_) : w0(w0_), z(z_), k(k_) {
    if (!(w0 > 0.0) || !std::isfinite(w0))
        throw std::invalid_argument("BeamGeometry: waist w0 must be positive");
    if (!(k > 0.0) || !std::isfinite(k))
        throw std::invalid_argument("BeamGeometry: wavenumber k must be positive");
    if (!std::isfinite(z)) throw std::invalid_argument("BeamGeometry: z must be finite");
}

double BeamGeometry::rayleigh() const { return 0.5 * k * w0 * w0; }

double BeamGeometry::width() const {
    const double zr = rayleigh();
    return w0 * std::sqrt(1.0 + (z / zr) * (z / zr));
}

double BeamGeometry::curvature() const {
    const double zr = rayleigh();
    return z / (z * z + zr * zr);
}

double BeamGeometry::gouy(int mode_order) const {
    return mode_order * std::atan(z / rayleigh());
}

FieldPoint::FieldPoint(double rho_, double phi_) : rho(rho_), phi(phi_) {
    if (!(rho >= 0.0) || !std::isfinite(rho))
        throw std::invalid_argument("FieldPoint: rho must be >= 0");
}

double log_factorial(int n) {
    if (n < 0) throw std::invalid_argument("log_factorial: negative argument");
    return std::lgamma(static_cast<double>(n) + 1.0);
}

double laguerre(int p, int alpha, double x) {
    if (p < 0 || alpha < 0) throw std::invalid_argument("laguerre: p and alpha must be >= 0");
    if (!std::isfinite(x)) throw std::invalid_argument("laguerre: x must be finite");
    if (p == 0) return 1.0;
    double lm1 = 1.0;                  // L_0
    double l = 1.0 + alpha - x;        // L_1
    for (int n = 1; n < p; ++n) {
        const double lp1 = ((2.0 * n + 1.0 + alpha - x) * l - (n + alpha) * lm1) / (n + 1.0);
        lm1 = l;
        l = lp1;
    }
    return l;
}

std::complex<double> lg_field(const ModeIndex& mode, const BeamGeometry& geom,
                              const FieldPoint& pt) {
    const int a = std::abs(mode.ell);
    const double w = geom.width();
    const double r2w2 = (pt.rho * pt.rho) / (w * w);

    // sqrt(2 p! / (pi (p+|ell|)!)), exponentiated once from log space.
    const double norm = std::exp(
        0.5 * (std::numbers::ln2 - std::log(std::numbers::pi) + log_factorial(mode.p) -
               log_factorial(mode.p + a)));

    const double amp = (norm / w) * std::pow(std::numbers::sqrt2 * pt.rho / w, a) *
                       std::exp(-r2w2) * laguerre(mode.p, a, 2.0 * r2w2);
    const double phase = mode.ell * pt.phi + geom.gouy(mode.order() + 1) +
                         0.5 * geom.k * pt.rho * pt.rho * geom.curvature();
    return amp * std::polar(1.0, phase);
}

BeamGeometry abcd_propagate(const BeamGeometry& geom, const AbcdMatrix& m) {
    const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if (std::abs(det - 1.0) > 1e-9)
        throw std::invalid_argument("abcd_propagate: matrix determinant must be 1");

    const std::complex<double> q(geom.z, geom.rayleigh());
    const std::complex<double> qp = (m[0][0] * q + m[0][1]) / (m[1][0] * q + m[1][1]);
    if (!(qp.imag() > 0.0))
        throw std::domain_error("abcd_propagate: transformed q has non-positive Im(q)");

    return BeamGeometry(std::sqrt(2.0 * qp.imag() / geom.k), qp.real(), geom.k);
}

double intensity_profile(std::span<const std::pair<ModeIndex, BeamGeometry>> modes,
                         bool coherent,
                         std::span<const std::complex<double>> amplitudes,
                         const FieldPoint& pt) {
    if (modes.empty()) throw std::invalid_argument("intensity_profile: empty mode list");
    if (modes.size() != amplitudes.size())
        throw std::invalid_argument("intensity_profile: amplitude/mode count mismatch");

    if (coherent) {
        std::complex<double> field(0.0, 0.0);
        for (std::size_t i = 0; i < modes.size(); ++i)
            field += amplitudes[i] * lg_field(modes[i].first, modes[i].second, pt);
        return std::norm(field);
    }
    double intensity = 0.0;
    for (std::size_t i = 0; i < modes.size(); ++i)
        intensity += std::norm(amplitudes[i]) * std::norm(lg_field(modes[i].first, modes[i].second, pt));
    return intensity;
}

}  // namespace lghom
