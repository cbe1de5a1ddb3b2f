#pragma once

#include <complex>
#include <vector>

#include "lghom/lgmodes.hpp"

namespace lghom {

/// Inputs of the LG inner product <mode1, geom1 | mode2, geom2>.
/// The first mode is the conjugated one. Both geometries must share
/// the same wavenumber (frequency-degenerate photons).
struct OverlapParams {
    ModeIndex mode1;
    BeamGeometry geom1;
    ModeIndex mode2;
    BeamGeometry geom2;

    OverlapParams(ModeIndex m1, BeamGeometry g1, ModeIndex m2, BeamGeometry g2);
};

/// Quantities of the closed-form radial kernel
///   I = A * Gamma(p+p'+|l|+1)/(p! p'!) * (s-mu')^p' (s-mu)^p / s^(p+p'+|l|+1) * 2F1(...)
/// evaluated for the l = l' case.
///
/// sigma carries Im = (k/2)(C1 - C2): with mode 1 conjugated this is the
/// sign that reproduces the direct integral (pinned by a regression test
/// against overlap_quadrature).
struct KernelIntermediates {
    double mu;                       // 2 / w1(z1)^2
    double mu_prime;                 // 2 / w2(z2)^2
    std::complex<double> sigma;      // (mu + mu')/2 + i (k/2)(C1 - C2)
    double delta_gouy;               // Gouy(mode2, z2) - Gouy(mode1, z1)
    std::complex<double> prefactor;  // A = 2^(|l|+1) sqrt(p!p'!/((p+|l|)!(p'+|l|)!)) (w1 w2)^-(|l|+1) e^(i dGouy)
};

KernelIntermediates kernel_intermediates(const OverlapParams& params);

/// Terminating hypergeometric series 2F1(-p, -p'; -p-p'-|l|; x):
///   sum_{j=0}^{min(p,p')} [(-p)_j (-p')_j / ((-p-p'-|l|)_j j!)] x^j,
/// accumulated term-by-term through the rational Pochhammer ratios.
std::complex<double> hyp2f1_terminating(int p, int p_prime, int abs_ell,
                                        std::complex<double> x);

/// Closed-form LG inner product. Exact 0 when ell1 != ell2. The
/// (s-mu)^p (s-mu')^p' 2F1 product is expanded term-by-term so the
/// removable sigma = mu / sigma = mu' degeneracies stay finite.
std::complex<double> overlap_analytic(const OverlapParams& params);

/// Numerical-integration result with its achieved accuracy estimate.
/// rel_error is relative to the L1 norm of the integrand; converged is
/// false when the subdivision budget ran out before reaching rel_tol.
struct QuadratureResult {
    std::complex<double> value;
    double rel_error = 0.0;
    bool converged = true;
};

/// Ground-truth oracle for overlap_analytic: the azimuthal integral is
/// done analytically (exact 0 for ell1 != ell2, 2*pi otherwise) and the
/// radial part by adaptive Gauss-Kronrod quadrature in x = rho^2,
/// truncated where the envelope exp(-Re(sigma) x) x^(|l|+2p+2p') drops
/// below 1e-16 of its peak. Calls lg_field directly, so it shares no
/// assumption with the closed form. rel_tol must lie in (1e-14, 1e-4).
QuadratureResult overlap_quadrature(const OverlapParams& params, double rel_tol);

/// Crosstalk matrix M[p][p'] = |<l,p,geom1 | l,p',geom2>|^2 for
/// p, p' = 0..p_max, from the closed form.
std::vector<std::vector<double>> crosstalk_matrix(int ell, int p_max,
                                                  const BeamGeometry& geom1,
                                                  const BeamGeometry& geom2);

}  // namespace lghom
