#pragma once

#include <complex>
#include <map>
#include <set>
#include <vector>

#include "lghom/lgmodes.hpp"
#include "lghom/overlap.hpp"

namespace lghom {

/// A single photon's spatial state: a finite LG-coefficient map over one
/// decomposition basis (waist/plane fixed by geom). norm_tol widens the
/// unit-norm check, e.g. for truncated states produced by rebasing.
struct ModeSuperposition {
    BeamGeometry geom;
    std::map<ModeIndex, std::complex<double>> amps;
    double norm_tol = 1e-9;

    ModeSuperposition(BeamGeometry geom_, std::map<ModeIndex, std::complex<double>> amps_,
                      double norm_tol_ = 1e-9);

    static ModeSuperposition single(const ModeIndex& mode, const BeamGeometry& geom);

    std::complex<double> amplitude(const ModeIndex& mode) const;
    double norm_sq() const;
    int ell_max() const;
    int p_max() const;
};

/// Projective detector: the p_gamma coefficients restricted to {0, 1}.
/// Bucket accepts every mode within the truncation, SingleMode projects
/// onto one LG mode, ModeSet onto an explicit accepted set.
class DetectorModel {
  public:
    enum class Kind { Bucket, SingleMode, ModeSet };

    DetectorModel() = default;  // bucket

    static DetectorModel bucket();
    static DetectorModel single_mode(const ModeIndex& mode);
    static DetectorModel mode_set(std::set<ModeIndex> modes);

    Kind kind() const { return kind_; }
    const ModeIndex& mode() const { return mode_; }
    const std::set<ModeIndex>& modes() const { return modes_; }
    bool accepts(const ModeIndex& mode) const;

  private:
    Kind kind_ = Kind::Bucket;
    ModeIndex mode_;
    std::set<ModeIndex> modes_;
};

/// Beamsplitter reflectivity/transmissivity with |r|^2 + |t|^2 = 1.
struct BeamsplitterSpec {
    std::complex<double> r;
    std::complex<double> t;

    BeamsplitterSpec(std::complex<double> r_, std::complex<double> t_);
    static BeamsplitterSpec balanced();
};

/// Pure correlated two-photon state: psi[alpha][beta] is the amplitude
/// for the port-a photon in basis[alpha] and the port-b photon in
/// basis[beta].
struct TwoPhotonAmplitude {
    std::vector<ModeIndex> basis;
    std::vector<std::vector<std::complex<double>>> psi;
    BeamGeometry geom_a;
    BeamGeometry geom_b;

    TwoPhotonAmplitude(std::vector<ModeIndex> basis_,
                       std::vector<std::vector<std::complex<double>>> psi_,
                       BeamGeometry geom_a_, BeamGeometry geom_b_);
};

/// Hermitian product <psi1|psi2>. For equal geometries this is the plain
/// coefficient sum; otherwise every LG-pair overlap is evaluated with
/// the closed-form kernel.
std::complex<double> inner_product(const ModeSuperposition& psi1,
                                   const ModeSuperposition& psi2);

/// Coincidence rate behind a balanced beamsplitter under arbitrary
/// projective detection:
///   R = 1/4 sum_{g,g'} p_c(g) p_d(g') |psi1_g' psi2_g - psi1_g psi2_g'|^2.
/// Both states must share one LG basis (equal geometry); rebase first
/// when they do not.
double rate_general(const ModeSuperposition& psi1, const ModeSuperposition& psi2,
                    const DetectorModel& det_c, const DetectorModel& det_d);

/// Same sum with the two-photon interference cross-term dropped: the
/// rate fully distinguishable photons would give. Reference value for
/// visibility.
double rate_general_distinguishable(const ModeSuperposition& psi1,
                                    const ModeSuperposition& psi2,
                                    const DetectorModel& det_c, const DetectorModel& det_d);

/// Bucket/bucket detection: R = 1/2 (1 - |<psi1|psi2>|^2). Accepts
/// cross-geometry inputs through the overlap kernel.
double rate_bucket(const ModeSuperposition& psi1, const ModeSuperposition& psi2);

/// Two single-mode detectors projecting onto eta_c and eta_d:
///   R = 1/4 |psi1_c psi2_d - psi1_d psi2_c|^2.
double rate_single_mode(const ModeSuperposition& psi1, const ModeSuperposition& psi2,
                        const ModeIndex& eta_c, const ModeIndex& eta_d);

/// Single-mode detector on port c (mode eta) and bucket on port d.
double rate_hybrid(const ModeSuperposition& psi1, const ModeSuperposition& psi2,
                   const ModeIndex& eta);

/// Coincidence rate for a correlated input pair:
///   R = sum_{g,g'} p_c(g) p_d(g') | |r|^2 psi_{g,g'} - |t|^2 psi_{g',g} |^2.
/// At 50:50 this reduces to 1/4 sum |psi_{g,g'} - psi_{g',g}|^2, half the
/// balanced-case prefactor quoted alongside the unbalanced formula; this
/// normalization makes a product-state input reproduce rate_general and
/// fully distinguishable photons give 1/2 under bucket detection.
double rate_correlated(const TwoPhotonAmplitude& state, const DetectorModel& det_c,
                       const DetectorModel& det_d, const BeamsplitterSpec& bs);

/// HOM visibility V = 1 - rate / rate_distinguishable.
double visibility(double rate, double rate_distinguishable);

}  // namespace lghom
