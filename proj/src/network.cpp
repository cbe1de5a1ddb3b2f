#include "lghom/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lghom {

namespace {

double monomial_occupation_factor(const FockState::Monomial& monomial) {
    double factor = 1.0;
    std::size_t i = 0;
    while (i < monomial.size()) {
        std::size_t j = i + 1;
        while (j < monomial.size() && monomial[j] == monomial[i]) ++j;
        for (std::size_t n = 2; n <= j - i; ++n) factor *= static_cast<double>(n);
        i = j;
    }
    return factor;
}

void check_norm_preserved(const FockState& before, const FockState& after) {
    if (std::abs(after.norm_sq() - before.norm_sq()) > 1e-10 * std::max(1.0, before.norm_sq()))
        throw std::logic_error("apply_element: element failed to preserve the norm");
}

// Applies a per-operator linear substitution label -> sum_k coeff_k label_k
// to every monomial and re-collects like terms.
template <typename Substitution>
std::map<FockState::Monomial, std::complex<double>> substitute_terms(
    const std::map<FockState::Monomial, std::complex<double>>& terms, Substitution&& subst) {
    std::map<FockState::Monomial, std::complex<double>> merged;

    for (const auto& [monomial, amp] : terms) {
        // Expand the product of per-photon branch sums.
        std::vector<std::pair<FockState::Monomial, std::complex<double>>> partial;
        partial.emplace_back(FockState::Monomial{}, amp);
        for (const auto& label : monomial) {
            const auto branches = subst(label);
            std::vector<std::pair<FockState::Monomial, std::complex<double>>> next;
            next.reserve(partial.size() * branches.size());
            for (const auto& [labels, coeff] : partial)
                for (const auto& [new_label, branch_coeff] : branches) {
                    auto extended = labels;
                    extended.push_back(new_label);
                    next.emplace_back(std::move(extended), coeff * branch_coeff);
                }
            partial = std::move(next);
        }
        for (auto& [labels, coeff] : partial) {
            std::sort(labels.begin(), labels.end());
            merged[labels] += coeff;
        }
    }

    for (auto it = merged.begin(); it != merged.end();) {
        if (it->second == std::complex<double>(0.0, 0.0))
            it = merged.erase(it);
        else
            ++it;
    }
    return merged;
}

void require_port(const FockState& state, const std::string& path) {
    if (!state.ports().count(path))
        throw std::invalid_argument("network: unknown path '" + path + "'");
}

}  // namespace

FockState FockState::product(std::vector<ModeLabel> photons, std::set<std::string> extra_ports) {
    if (photons.empty()) throw std::invalid_argument("FockState: no input photons");
    std::sort(photons.begin(), photons.end());

    FockState state;
    state.photon_number_ = static_cast<int>(photons.size());
    for (const auto& label : photons) state.ports_.insert(label.path);
    state.ports_.merge(extra_ports);

    const double occupation = monomial_occupation_factor(photons);
    state.terms_[std::move(photons)] = std::complex<double>(1.0 / std::sqrt(occupation), 0.0);
    return state;
}

FockState FockState::from_terms(std::map<Monomial, std::complex<double>> terms,
                                std::set<std::string> ports, double norm_tol) {
    if (terms.empty()) throw std::invalid_argument("FockState: empty term map");

    FockState state;
    state.photon_number_ = static_cast<int>(terms.begin()->first.size());
    state.ports_ = std::move(ports);
    for (auto& [monomial, amp] : terms) {
        if (static_cast<int>(monomial.size()) != state.photon_number_)
            throw std::invalid_argument("FockState: photon number differs between terms");
        if (!std::is_sorted(monomial.begin(), monomial.end()))
            throw std::invalid_argument("FockState: monomials must be sorted");
        for (const auto& label : monomial)
            if (!state.ports_.count(label.path))
                throw std::invalid_argument("FockState: undeclared path '" + label.path + "'");
    }
    state.terms_ = std::move(terms);
    if (std::abs(state.norm_sq() - 1.0) > norm_tol)
        throw std::invalid_argument("FockState: terms not normalized");
    return state;
}

FockState FockState::two_photon_input(const ModeSuperposition& psi1, const std::string& path1,
                                      const ModeSuperposition& psi2, const std::string& path2) {
    if (path1 == path2)
        throw std::invalid_argument("FockState: two-photon input needs distinct ports");
    if (!(psi1.geom == psi2.geom))
        throw std::invalid_argument("FockState: input states must share one LG basis");

    std::map<Monomial, std::complex<double>> terms;
    for (const auto& [mode1, amp1] : psi1.amps)
        for (const auto& [mode2, amp2] : psi2.amps) {
            Monomial monomial{{path1, mode1}, {path2, mode2}};
            std::sort(monomial.begin(), monomial.end());
            terms[std::move(monomial)] += amp1 * amp2;
        }
    const double slack = psi1.norm_tol + psi2.norm_tol + 1e-12;
    return from_terms(std::move(terms), {path1, path2}, slack);
}

double FockState::norm_sq() const {
    double n2 = 0.0;
    for (const auto& [monomial, amp] : terms_)
        n2 += std::norm(amp) * monomial_occupation_factor(monomial);
    return n2;
}

Beamsplitter::Beamsplitter(std::string path1_, std::string path2_, std::complex<double> r_,
                           std::complex<double> t_, bool oam_flip_)
    : path1(std::move(path1_)), path2(std::move(path2_)), r(r_), t(t_), oam_flip(oam_flip_) {
    if (path1 == path2) throw std::invalid_argument("Beamsplitter: ports must differ");
    if (std::abs(std::norm(r) + std::norm(t) - 1.0) > 1e-12)
        throw std::invalid_argument("Beamsplitter: |r|^2 + |t|^2 must equal 1");
}

Beamsplitter Beamsplitter::balanced(std::string path1_, std::string path2_, bool oam_flip_) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    return Beamsplitter(std::move(path1_), std::move(path2_), {inv_sqrt2, 0.0},
                        {inv_sqrt2, 0.0}, oam_flip_);
}

FockState apply_element(const FockState& state, const Beamsplitter& bs) {
    require_port(state, bs.path1);
    require_port(state, bs.path2);

    const auto flip = [&bs](const ModeIndex& mode) {
        return bs.oam_flip ? ModeIndex(-mode.ell, mode.p) : mode;
    };
    using Branches = std::vector<std::pair<ModeLabel, std::complex<double>>>;
    const auto subst = [&](const ModeLabel& label) -> Branches {
        if (label.path == bs.path1)  // input a: reflected branch flips l
            return {{{bs.path1, flip(label.spatial)}, std::conj(bs.r)},
                    {{bs.path2, label.spatial}, bs.t}};
        if (label.path == bs.path2)  // input b: reflected branch flips l
            return {{{bs.path1, label.spatial}, -std::conj(bs.t)},
                    {{bs.path2, flip(label.spatial)}, bs.r}};
        return {{label, {1.0, 0.0}}};
    };

    FockState out = state;
    out.terms_ = substitute_terms(state.terms(), subst);
    check_norm_preserved(state, out);
    return out;
}

FockState apply_element(const FockState& state, const PhaseShifter& ps) {
    require_port(state, ps.path);
    using Branches = std::vector<std::pair<ModeLabel, std::complex<double>>>;
    const std::complex<double> phase = std::polar(1.0, ps.theta);

    FockState out = state;
    out.terms_ = substitute_terms(state.terms(), [&](const ModeLabel& label) -> Branches {
        if (label.path == ps.path) return {{label, phase}};
        return {{label, {1.0, 0.0}}};
    });
    check_norm_preserved(state, out);
    return out;
}

FockState apply_element(const FockState& state, const GouyPhaseShifter& ps) {
    require_port(state, ps.path);
    using Branches = std::vector<std::pair<ModeLabel, std::complex<double>>>;

    FockState out = state;
    out.terms_ = substitute_terms(state.terms(), [&](const ModeLabel& label) -> Branches {
        if (label.path == ps.path) {
            const double phase = (label.spatial.order() + 1) * ps.phi_g;
            return {{label, std::polar(1.0, phase)}};
        }
        return {{label, {1.0, 0.0}}};
    });
    check_norm_preserved(state, out);
    return out;
}

FockState apply_element(const FockState& state, const NetworkElement& element) {
    return std::visit([&state](const auto& e) { return apply_element(state, e); }, element);
}

FockState run_network(const FockState& input, std::span<const NetworkElement> elements) {
    FockState state = input;
    for (const auto& element : elements) state = apply_element(state, element);
    if (std::abs(state.norm_sq() - input.norm_sq()) > 1e-9)
        throw std::logic_error("run_network: norm drifted beyond 1e-9");
    return state;
}

double coincidence_probability(const FockState& state,
                               const std::map<std::string, PatternEntry>& pattern) {
    int total = 0;
    for (const auto& [path, entry] : pattern) {
        require_port(state, path);
        if (entry.count < 0)
            throw std::invalid_argument("coincidence_probability: negative photon count");
        total += entry.count;
    }
    if (total != state.photon_number())
        throw std::invalid_argument(
            "coincidence_probability: pattern counts must sum to the photon number");

    double probability = 0.0;
    for (const auto& [monomial, amp] : state.terms()) {
        bool compatible = true;
        std::map<std::string, int> counts;
        for (const auto& label : monomial) {
            const auto it = pattern.find(label.path);
            if (it == pattern.end() || !it->second.detector.accepts(label.spatial)) {
                compatible = false;
                break;
            }
            ++counts[label.path];
        }
        if (!compatible) continue;
        for (const auto& [path, entry] : pattern)
            if (counts[path] != entry.count) {
                compatible = false;
                break;
            }
        if (compatible) probability += std::norm(amp) * monomial_occupation_factor(monomial);
    }
    return probability;
}

RebaseResult rebase(const ModeSuperposition& state, const BeamGeometry& new_geom, int p_max) {
    if (p_max < 0) throw std::invalid_argument("rebase: p_max must be >= 0");

    std::set<int> ells;
    for (const auto& [mode, amp] : state.amps) ells.insert(mode.ell);

    std::map<ModeIndex, std::complex<double>> coeffs;
    double captured = 0.0;
    for (const int ell : ells)
        for (int q = 0; q <= p_max; ++q) {
            std::complex<double> b(0.0, 0.0);
            for (const auto& [mode, amp] : state.amps) {
                if (mode.ell != ell) continue;
                b += overlap_analytic({ModeIndex(ell, q), new_geom, mode, state.geom}) * amp;
            }
            coeffs[ModeIndex(ell, q)] = b;
            captured += std::norm(b);
        }

    const double leakage = 1.0 - captured;
    const double tol = std::max(state.norm_tol, std::abs(leakage) * (1.0 + 1e-9) + 1e-12);
    return {ModeSuperposition(new_geom, std::move(coeffs), tol), leakage};
}

}  // namespace lghom
