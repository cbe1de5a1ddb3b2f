#pragma once

#include <complex>
#include <map>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lghom/hom.hpp"
#include "lghom/lgmodes.hpp"

namespace lghom {

/// One creation-operator label: a network port plus a spatial LG mode.
struct ModeLabel {
    std::string path;
    ModeIndex spatial;

    auto operator<=>(const ModeLabel&) const = default;
};

/// Multi-photon state stored as amplitudes of creation-operator
/// monomials: |psi> = sum_T c_T prod_{m in T} a_m^dag |0>, with T a
/// sorted multiset of labels. The sqrt(n!) occupation factors are not
/// folded into c_T; they enter at measurement time, which keeps element
/// application a plain linear substitution.
class FockState {
  public:
    using Monomial = std::vector<ModeLabel>;  // kept sorted

    /// Product state prod_i a^dag(photons[i]) |0>, scaled to unit norm.
    /// extra_ports declares additional network ports with no input photon.
    static FockState product(std::vector<ModeLabel> photons,
                             std::set<std::string> extra_ports = {});

    /// General state from monomial amplitudes; the physical norm must be
    /// 1 within norm_tol and every monomial must hold photon_number labels.
    static FockState from_terms(std::map<Monomial, std::complex<double>> terms,
                                std::set<std::string> ports, double norm_tol = 1e-9);

    /// Two photons entering ports path1/path2 in the given spatial states.
    static FockState two_photon_input(const ModeSuperposition& psi1, const std::string& path1,
                                      const ModeSuperposition& psi2, const std::string& path2);

    const std::map<Monomial, std::complex<double>>& terms() const { return terms_; }
    int photon_number() const { return photon_number_; }
    const std::set<std::string>& ports() const { return ports_; }

    /// Physical squared norm sum_T |c_T|^2 prod_i n_i!(T).
    double norm_sq() const;

  private:
    FockState() = default;
    friend FockState apply_element(const FockState&, const struct Beamsplitter&);
    friend FockState apply_element(const FockState&, const struct PhaseShifter&);
    friend FockState apply_element(const FockState&, const struct GouyPhaseShifter&);

    std::map<Monomial, std::complex<double>> terms_;
    int photon_number_ = 0;
    std::set<std::string> ports_;
};

/// Two-port beamsplitter. With path1 as input a and path2 as input b,
/// the creation operators map as
///   a_{l,p} -> r* c_{l,p} + t d_{l,p}
///   b_{l,p} -> -t* c_{l,p} + r d_{l,p}
/// where c/d are the same two paths on the output side. When oam_flip
/// is set, the reflected branches carry -l instead of l.
struct Beamsplitter {
    std::string path1;
    std::string path2;
    std::complex<double> r;
    std::complex<double> t;
    bool oam_flip = false;

    Beamsplitter(std::string path1_, std::string path2_, std::complex<double> r_,
                 std::complex<double> t_, bool oam_flip_ = false);
    static Beamsplitter balanced(std::string path1_, std::string path2_,
                                 bool oam_flip_ = false);
};

/// Mode-independent phase: a_{l,p} -> e^{i theta} a_{l,p} on one path.
struct PhaseShifter {
    std::string path;
    double theta = 0.0;
};

/// Gouy-type phase: a_{l,p} -> e^{i (2p+|l|+1) phi_g} a_{l,p} on one path.
struct GouyPhaseShifter {
    std::string path;
    double phi_g = 0.0;
};

using NetworkElement = std::variant<Beamsplitter, PhaseShifter, GouyPhaseShifter>;

FockState apply_element(const FockState& state, const Beamsplitter& bs);
FockState apply_element(const FockState& state, const PhaseShifter& ps);
FockState apply_element(const FockState& state, const GouyPhaseShifter& ps);
FockState apply_element(const FockState& state, const NetworkElement& element);

/// Left-fold of apply_element over the element list; checks that the
/// physical norm survives to 1e-9.
FockState run_network(const FockState& input, std::span<const NetworkElement> elements);

/// One detection outcome per monitored path: the projector model plus
/// the required photon count.
struct PatternEntry {
    DetectorModel detector;
    int count = 0;
};

/// Probability of the detection pattern: sum over basis multisets whose
/// per-path counts match and whose spatial modes pass each detector, of
/// |c_T|^2 times the occupation factorials. Pattern counts must sum to
/// the photon number; unmonitored paths must end up empty.
double coincidence_probability(const FockState& state,
                               const std::map<std::string, PatternEntry>& pattern);

/// Result of re-expanding a state in a different LG basis.
struct RebaseResult {
    ModeSuperposition state;
    double leakage = 0.0;  // 1 - sum |B|^2
};

/// Re-expands a spatial state in the LG basis of new_geom, keeping radial
/// indices q <= p_max per OAM value:
///   B_{l,q} = sum_p <l,q,new | l,p,old> A_{l,p}.
RebaseResult rebase(const ModeSuperposition& state, const BeamGeometry& new_geom, int p_max);

}  // namespace lghom
