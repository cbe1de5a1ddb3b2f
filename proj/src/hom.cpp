#include "lghom/hom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lghom {

namespace {

void require_common_basis(const ModeSuperposition& psi1, const ModeSuperposition& psi2) {
    if (std::abs(psi1.geom.k - psi2.geom.k) > 1e-12 * std::max(psi1.geom.k, psi2.geom.k))
        throw std::invalid_argument("hom: input states must share one wavenumber");
    if (!(psi1.geom == psi2.geom))
        throw std::invalid_argument(
            "hom: input states must be expanded in one LG basis; rebase first");
}

// Modes the detector projects onto, within the truncation spanned by the
// two input states.
std::vector<ModeIndex> accepted_modes(const DetectorModel& det, const ModeSuperposition& psi1,
                                      const ModeSuperposition& psi2) {
    switch (det.kind()) {
        case DetectorModel::Kind::SingleMode:
            return {det.mode()};
        case DetectorModel::Kind::ModeSet:
            return {det.modes().begin(), det.modes().end()};
        case DetectorModel::Kind::Bucket: {
            std::set<ModeIndex> support;
            for (const auto& [mode, amp] : psi1.amps) support.insert(mode);
            for (const auto& [mode, amp] : psi2.amps) support.insert(mode);
            return {support.begin(), support.end()};
        }
    }
    return {};
}

}  // namespace

ModeSuperposition::ModeSuperposition(BeamGeometry geom_,
                                     std::map<ModeIndex, std::complex<double>> amps_,
                                     double norm_tol_)
    : geom(geom_), amps(std::move(amps_)), norm_tol(norm_tol_) {
    if (amps.empty()) throw std::invalid_argument("ModeSuperposition: empty coefficient map");
    const double n2 = norm_sq();
    if (std::abs(n2 - 1.0) > norm_tol)
        throw std::invalid_argument("ModeSuperposition: coefficients not normalized");
}

ModeSuperposition ModeSuperposition::single(const ModeIndex& mode, const BeamGeometry& geom) {
    return ModeSuperposition(geom, {{mode, {1.0, 0.0}}});
}

std::complex<double> ModeSuperposition::amplitude(const ModeIndex& mode) const {
    const auto it = amps.find(mode);
    return it == amps.end() ? std::complex<double>(0.0, 0.0) : it->second;
}

double ModeSuperposition::norm_sq() const {
    double n2 = 0.0;
    for (const auto& [mode, amp] : amps) n2 += std::norm(amp);
    return n2;
}

int ModeSuperposition::ell_max() const {
    int m = 0;
    for (const auto& [mode, amp] : amps) m = std::max(m, std::abs(mode.ell));
    return m;
}

int ModeSuperposition::p_max() const {
    int m = 0;
    for (const auto& [mode, amp] : amps) m = std::max(m, mode.p);
    return m;
}

DetectorModel DetectorModel::bucket() {
    DetectorModel det;
    det.kind_ = Kind::Bucket;
    return det;
}

DetectorModel DetectorModel::single_mode(const ModeIndex& mode) {
    DetectorModel det;
    det.kind_ = Kind::SingleMode;
    det.mode_ = mode;
    return det;
}

DetectorModel DetectorModel::mode_set(std::set<ModeIndex> modes) {
    if (modes.empty()) throw std::invalid_argument("DetectorModel: empty mode set");
    DetectorModel det;
    det.kind_ = Kind::ModeSet;
    det.modes_ = std::move(modes);
    return det;
}

bool DetectorModel::accepts(const ModeIndex& mode) const {
    switch (kind_) {
        case Kind::Bucket: return true;
        case Kind::SingleMode: return mode == mode_;
        case Kind::ModeSet: return modes_.count(mode) > 0;
    }
    return false;
}

BeamsplitterSpec::BeamsplitterSpec(std::complex<double> r_, std::complex<double> t_)
    : r(r_), t(t_) {
    if (std::abs(std::norm(r) + std::norm(t) - 1.0) > 1e-12)
        throw std::invalid_argument("BeamsplitterSpec: |r|^2 + |t|^2 must equal 1");
}

BeamsplitterSpec BeamsplitterSpec::balanced() {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    return BeamsplitterSpec({inv_sqrt2, 0.0}, {inv_sqrt2, 0.0});
}

TwoPhotonAmplitude::TwoPhotonAmplitude(std::vector<ModeIndex> basis_,
                                       std::vector<std::vector<std::complex<double>>> psi_,
                                       BeamGeometry geom_a_, BeamGeometry geom_b_)
    : basis(std::move(basis_)), psi(std::move(psi_)), geom_a(geom_a_), geom_b(geom_b_) {
    if (basis.empty()) throw std::invalid_argument("TwoPhotonAmplitude: empty basis");
    if (psi.size() != basis.size())
        throw std::invalid_argument("TwoPhotonAmplitude: psi row count must match basis");
    double n2 = 0.0;
    for (const auto& row : psi) {
        if (row.size() != basis.size())
            throw std::invalid_argument("TwoPhotonAmplitude: psi must be square over the basis");
        for (const auto& amp : row) n2 += std::norm(amp);
    }
    if (std::abs(n2 - 1.0) > 1e-9)
        throw std::invalid_argument("TwoPhotonAmplitude: amplitudes not normalized");
}

std::complex<double> inner_product(const ModeSuperposition& psi1,
                                   const ModeSuperposition& psi2) {
    if (std::abs(psi1.geom.k - psi2.geom.k) > 1e-12 * std::max(psi1.geom.k, psi2.geom.k))
        throw std::invalid_argument("inner_product: wavenumbers must match");

    if (psi1.geom == psi2.geom) {
        std::complex<double> ip(0.0, 0.0);
        for (const auto& [mode, amp] : psi1.amps) ip += std::conj(amp) * psi2.amplitude(mode);
        return ip;
    }
    std::complex<double> ip(0.0, 0.0);
    for (const auto& [mode1, amp1] : psi1.amps)
        for (const auto& [mode2, amp2] : psi2.amps) {
            if (mode1.ell != mode2.ell) continue;  // azimuthal orthogonality
            ip += std::conj(amp1) * amp2 *
                  overlap_analytic({mode1, psi1.geom, mode2, psi2.geom});
        }
    return ip;
}

double rate_general(const ModeSuperposition& psi1, const ModeSuperposition& psi2,
                    const DetectorModel& det_c, const DetectorModel& det_d) {
    require_common_basis(psi1, psi2);
    const auto modes_c = accepted_modes(det_c, psi1, psi2);
    const auto modes_d = accepted_modes(det_d, psi1, psi2);

    double sum = 0.0;
    for (const auto& g : modes_c)
        for (const auto& gp : modes_d)
            sum += std::norm(psi1.amplitude(gp) * psi2.amplitude(g) -
                             psi1.amplitude(g) * psi2.amplitude(gp));
    return 0.25 * sum;
}

double rate_general_distinguishable(const ModeSuperposition& psi1,
                                    const ModeSuperposition& psi2,
                                    const DetectorModel& det_c, const DetectorModel& det_d) {
    require_common_basis(psi1, psi2);
    const auto modes_c = accepted_modes(det_c, psi1, psi2);
    const auto modes_d = accepted_modes(det_d, psi1, psi2);

    double sum = 0.0;
    for (const auto& g : modes_c)
        for (const auto& gp : modes_d)
            sum += std::norm(psi1.amplitude(gp) * psi2.amplitude(g)) +
                   std::norm(psi1.amplitude(g) * psi2.amplitude(gp));
    return 0.25 * sum;
}

double rate_bucket(const ModeSuperposition& psi1, const ModeSuperposition& psi2) {
    // Cauchy-Schwarz keeps this non-negative; clamp the roundoff residue.
    return std::max(
        0.0, 0.5 * (psi1.norm_sq() * psi2.norm_sq() - std::norm(inner_product(psi1, psi2))));
}

double rate_single_mode(const ModeSuperposition& psi1, const ModeSuperposition& psi2,
                        const ModeIndex& eta_c, const ModeIndex& eta_d) {
    require_common_basis(psi1, psi2);
    return 0.25 * std::norm(psi1.amplitude(eta_c) * psi2.amplitude(eta_d) -
                            psi1.amplitude(eta_d) * psi2.amplitude(eta_c));
}

double rate_hybrid(const ModeSuperposition& psi1, const ModeSuperposition& psi2,
                   const ModeIndex& eta) {
    require_common_basis(psi1, psi2);
    const std::complex<double> a1 = psi1.amplitude(eta);
    const std::complex<double> a2 = psi2.amplitude(eta);
    const std::complex<double> ip21 = inner_product(psi2, psi1);
    return std::max(0.0, 0.25 * (std::norm(a2) * psi1.norm_sq() + std::norm(a1) * psi2.norm_sq() -
                                 2.0 * std::real(ip21 * a2 * std::conj(a1))));
}

double rate_correlated(const TwoPhotonAmplitude& state, const DetectorModel& det_c,
                       const DetectorModel& det_d, const BeamsplitterSpec& bs) {
    const double r2 = std::norm(bs.r);
    const double t2 = std::norm(bs.t);
    const std::size_t n = state.basis.size();

    double sum = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        if (!det_c.accepts(state.basis[a])) continue;
        for (std::size_t b = 0; b < n; ++b) {
            if (!det_d.accepts(state.basis[b])) continue;
            sum += std::norm(r2 * state.psi[a][b] - t2 * state.psi[b][a]);
        }
    }
    return sum;
}

double visibility(double rate, double rate_distinguishable) {
    if (!(rate_distinguishable > 0.0))
        throw std::invalid_argument("visibility: distinguishable rate must be positive");
    return 1.0 - rate / rate_distinguishable;
}

}  // namespace lghom
