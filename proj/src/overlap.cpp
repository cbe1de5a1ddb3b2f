#include "lghom/overlap.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cfloat>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lghom {

namespace {

// z^n for integer n >= 0 with the exact 0^0 = 1 convention.
std::complex<double> ipow(std::complex<double> z, int n) {
    std::complex<double> result(1.0, 0.0);
    while (n > 0) {
        if (n & 1) result *= z;
        z *= z;
        n >>= 1;
    }
    return result;
}

// x beyond which exp(-decay x) x^m has fallen below 1e-16 of its peak.
double envelope_cutoff(double decay, int m) {
    constexpr double log_tol = -36.841361487904734;  // log(1e-16)
    if (m == 0) return -log_tol / decay;
    const double x_peak = m / decay;
    const double log_thresh = log_tol + m * std::log(x_peak) - m;
    double x = x_peak;
    while (m * std::log(x) - decay * x > log_thresh) x *= 2.0;
    return x;
}

}  // namespace

OverlapParams::OverlapParams(ModeIndex m1, BeamGeometry g1, ModeIndex m2, BeamGeometry g2)
    : mode1(m1), geom1(g1), mode2(m2), geom2(g2) {
    if (std::abs(geom1.k - geom2.k) > 1e-12 * std::max(geom1.k, geom2.k))
        throw std::invalid_argument("OverlapParams: wavenumbers must match");
}

KernelIntermediates kernel_intermediates(const OverlapParams& params) {
    const double w1 = params.geom1.width();
    const double w2 = params.geom2.width();
    const int a = std::abs(params.mode1.ell);

    KernelIntermediates ki;
    ki.mu = 2.0 / (w1 * w1);
    ki.mu_prime = 2.0 / (w2 * w2);
    ki.sigma = std::complex<double>(
        0.5 * (ki.mu + ki.mu_prime),
        0.5 * params.geom1.k * (params.geom1.curvature() - params.geom2.curvature()));
    ki.delta_gouy = params.geom2.gouy(params.mode2.order() + 1) -
                    params.geom1.gouy(params.mode1.order() + 1);

    const double log_scale =
        (a + 1) * std::numbers::ln2 +
        0.5 * (log_factorial(params.mode1.p) + log_factorial(params.mode2.p) -
               log_factorial(params.mode1.p + a) - log_factorial(params.mode2.p + a)) -
        (a + 1) * std::log(w1 * w2);
    ki.prefactor = std::exp(log_scale) * std::polar(1.0, ki.delta_gouy);
    return ki;
}

std::complex<double> hyp2f1_terminating(int p, int p_prime, int abs_ell,
                                        std::complex<double> x) {
    if (p < 0 || p_prime < 0 || abs_ell < 0)
        throw std::invalid_argument("hyp2f1_terminating: indices must be >= 0");
    const int j_max = std::min(p, p_prime);
    std::complex<double> term(1.0, 0.0);
    std::complex<double> sum(1.0, 0.0);
    for (int j = 0; j < j_max; ++j) {
        const double ratio = (static_cast<double>(j - p) * static_cast<double>(j - p_prime)) /
                             (static_cast<double>(j - p - p_prime - abs_ell) *
                              static_cast<double>(j + 1));
        term *= ratio * x;
        sum += term;
    }
    return sum;
}

std::complex<double> overlap_analytic(const OverlapParams& params) {
    if (params.mode1.ell != params.mode2.ell) return {0.0, 0.0};

    const int a = std::abs(params.mode1.ell);
    const int p = params.mode1.p;
    const int q = params.mode2.p;
    const auto ki = kernel_intermediates(params);

    // Dimensionless form: everything is scaled by powers of sigma, so no
    // large intermediates appear even for micron waists and high orders.
    const std::complex<double> inv_sigma = 1.0 / ki.sigma;
    const std::complex<double> u = 1.0 - ki.mu * inv_sigma;        // (sigma-mu)/sigma
    const std::complex<double> up = 1.0 - ki.mu_prime * inv_sigma;  // (sigma-mu')/sigma
    const std::complex<double> v = u + up - 1.0;                    // (sigma-mu-mu')/sigma
    const std::complex<double> g = std::sqrt(ki.mu * ki.mu_prime) * inv_sigma;

    // (s-mu)^p (s-mu')^p' 2F1 expanded term-by-term; the j-th term keeps
    // (s-mu)^(p-j) (s-mu')^(p'-j), finite for all parameter values.
    std::complex<double> sum(0.0, 0.0);
    for (int j = 0; j <= std::min(p, q); ++j) {
        const double coeff = std::exp(log_factorial(p + q + a - j) - log_factorial(p - j) -
                                      log_factorial(q - j) - log_factorial(j));
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        sum += sign * coeff * ipow(u, p - j) * ipow(up, q - j) * ipow(v, j);
    }

    const double scale = std::exp(0.5 * (log_factorial(p) + log_factorial(q) -
                                         log_factorial(p + a) - log_factorial(q + a)));
    return scale * std::polar(1.0, ki.delta_gouy) * ipow(g, a + 1) * sum;
}

QuadratureResult overlap_quadrature(const OverlapParams& params, double rel_tol) {
    if (!(rel_tol > 1e-14 && rel_tol < 1e-4))
        throw std::invalid_argument("overlap_quadrature: rel_tol must lie in (1e-14, 1e-4)");
    if (params.mode1.ell != params.mode2.ell) return {{0.0, 0.0}, 0.0, true};

    // Azimuthal part is 2*pi; radial part in x = rho^2 gives I = pi * int f.
    // The integration runs in the scale-free variable u = Re(sigma) x so the
    // interval has O(10) measure regardless of the waist units.
    const double sigma_re = 1.0 / std::pow(params.geom1.width(), 2) +
                            1.0 / std::pow(params.geom2.width(), 2);
    const auto integrand = [&params, sigma_re](double u) {
        const FieldPoint pt(std::sqrt(u / sigma_re), 0.0);
        return std::conj(lg_field(params.mode1, params.geom1, pt)) *
               lg_field(params.mode2, params.geom2, pt) / sigma_re;
    };

    const int m = std::abs(params.mode1.ell) + 2 * (params.mode1.p + params.mode2.p);
    const double u_max = envelope_cutoff(1.0, m);

    using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
    constexpr unsigned max_depth = 15;
    double err_re = 0.0, err_im = 0.0, l1_re = 0.0, l1_im = 0.0;
    const double re = gk::integrate([&](double u) { return integrand(u).real(); }, 0.0, u_max,
                                    max_depth, rel_tol, &err_re, &l1_re);
    const double im = gk::integrate([&](double u) { return integrand(u).imag(); }, 0.0, u_max,
                                    max_depth, rel_tol, &err_im, &l1_im);

    QuadratureResult result;
    result.value = std::numbers::pi * std::complex<double>(re, im);
    const double l1 = std::max(l1_re + l1_im, DBL_MIN);
    result.rel_error = (err_re + err_im) / l1;
    result.converged = result.rel_error <= rel_tol;
    return result;
}

std::vector<std::vector<double>> crosstalk_matrix(int ell, int p_max,
                                                  const BeamGeometry& geom1,
                                                  const BeamGeometry& geom2) {
    if (p_max < 0) throw std::invalid_argument("crosstalk_matrix: p_max must be >= 0");
    std::vector<std::vector<double>> matrix(p_max + 1, std::vector<double>(p_max + 1, 0.0));
    for (int p = 0; p <= p_max; ++p)
        for (int q = 0; q <= p_max; ++q)
            matrix[p][q] = std::norm(
                overlap_analytic({ModeIndex(ell, p), geom1, ModeIndex(ell, q), geom2}));
    return matrix;
}

}  // namespace lghom
