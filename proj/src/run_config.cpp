#include "lghom/run_config.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "lghom/hom.hpp"
#include "lghom/network.hpp"
#include "lghom/overlap.hpp"

namespace lghom::cli {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

const json& require_field(const json& j, const std::string& key) {
    const auto it = j.find(key);
    if (it == j.end()) throw config_error("missing config field '" + key + "'");
    return *it;
}

double require_number(const json& j, const std::string& key) {
    const json& field = require_field(j, key);
    if (!field.is_number()) throw config_error("config field '" + key + "' must be a number");
    return field.get<double>();
}

int require_int(const json& j, const std::string& key) {
    const json& field = require_field(j, key);
    if (!field.is_number_integer())
        throw config_error("config field '" + key + "' must be an integer");
    return field.get<int>();
}

std::string require_string(const json& j, const std::string& key) {
    const json& field = require_field(j, key);
    if (!field.is_string()) throw config_error("config field '" + key + "' must be a string");
    return field.get<std::string>();
}

double number_or(const json& j, const std::string& key, double fallback) {
    return j.contains(key) ? require_number(j, key) : fallback;
}

int int_or(const json& j, const std::string& key, int fallback) {
    return j.contains(key) ? require_int(j, key) : fallback;
}

// Library precondition failures on parsed values are config defects.
template <typename Fn>
auto lift(Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }
}

ModeIndex parse_mode(const json& j) {
    return lift([&] { return ModeIndex(require_int(j, "ell"), require_int(j, "p")); });
}

BeamGeometry parse_geometry(const json& j) {
    return lift([&] {
        return BeamGeometry(require_number(j, "w0"), require_number(j, "z"),
                            require_number(j, "k"));
    });
}

std::complex<double> parse_complex(const json& j, const std::string& key) {
    const json& field = require_field(j, key);
    if (field.is_number()) return {field.get<double>(), 0.0};
    if (field.is_object()) return {require_number(field, "re"), number_or(field, "im", 0.0)};
    throw config_error("config field '" + key + "' must be a number or {re, im}");
}

DetectorModel parse_detector(const json& j) {
    const std::string kind = require_string(j, "kind");
    if (kind == "bucket") return DetectorModel::bucket();
    if (kind == "single_mode")
        return DetectorModel::single_mode(parse_mode(require_field(j, "mode")));
    if (kind == "mode_set") {
        const json& modes = require_field(j, "modes");
        if (!modes.is_array() || modes.empty())
            throw config_error("detector mode_set needs a non-empty 'modes' array");
        std::set<ModeIndex> set;
        for (const auto& m : modes) set.insert(parse_mode(m));
        return lift([&] { return DetectorModel::mode_set(std::move(set)); });
    }
    throw config_error("unknown detector kind '" + kind + "'");
}

ModeSuperposition parse_superposition(const json& j) {
    const BeamGeometry geom = parse_geometry(require_field(j, "geom"));
    const json& amps = require_field(j, "amps");
    if (!amps.is_array() || amps.empty())
        throw config_error("superposition needs a non-empty 'amps' array");
    std::map<ModeIndex, std::complex<double>> coeffs;
    for (const auto& a : amps)
        coeffs[parse_mode(a)] +=
            std::complex<double>(number_or(a, "re", 0.0), number_or(a, "im", 0.0));
    const double norm_tol = number_or(j, "norm_tol", 1e-9);
    return lift([&] { return ModeSuperposition(geom, std::move(coeffs), norm_tol); });
}

struct Sweep {
    std::string parameter;
    double start = 0.0;
    double stop = 0.0;
    int count = 1;

    double value(int i) const {
        if (count == 1) return start;
        return start + (stop - start) * static_cast<double>(i) / (count - 1);
    }
};

Sweep parse_sweep(const json& j) {
    Sweep sweep;
    sweep.parameter = require_string(j, "parameter");
    sweep.start = require_number(j, "start");
    sweep.stop = require_number(j, "stop");
    sweep.count = require_int(j, "count");
    if (sweep.count < 1) throw config_error("sweep count must be >= 1");
    return sweep;
}

// Geometry-sweep parameters shared by crosstalk, hom and bench: the second
// beam's waist as a ratio of the first, or its plane in units of its own
// Rayleigh range.
BeamGeometry sweep_geometry2(const Sweep& sweep, double value, const BeamGeometry& geom1,
                             const BeamGeometry& geom2) {
    if (sweep.parameter == "waist_ratio") {
        if (!(value > 0.0)) throw config_error("waist_ratio sweep values must be positive");
        return lift([&] { return BeamGeometry(value * geom1.w0, geom2.z, geom2.k); });
    }
    if (sweep.parameter == "z2_over_zr2") {
        return lift([&] {
            const double zr2 = BeamGeometry(geom2.w0, 0.0, geom2.k).rayleigh();
            return BeamGeometry(geom2.w0, value * zr2, geom2.k);
        });
    }
    throw config_error("unknown sweep parameter '" + sweep.parameter +
                       "' (expected waist_ratio or z2_over_zr2)");
}

std::string join_csv_row(const std::vector<std::string>& cells) {
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) row += ',';
        row += cells[i];
    }
    row += '\n';
    return row;
}

std::string matrix_csv(const std::vector<std::vector<double>>& matrix) {
    std::string out = "p";
    for (std::size_t q = 0; q < matrix.size(); ++q) out += ',' + std::to_string(q);
    out += '\n';
    for (std::size_t p = 0; p < matrix.size(); ++p) {
        out += std::to_string(p);
        for (double v : matrix[p]) out += ',' + format_double(v);
        out += '\n';
    }
    return out;
}

json matrix_json(const std::vector<std::vector<double>>& matrix) {
    json rows = json::array();
    for (const auto& row : matrix) rows.push_back(row);
    return rows;
}

Format effective_format(const RunOptions& opts, Format fallback) {
    return opts.format.value_or(fallback);
}

std::string step_path(const std::string& base, int index) {
    char suffix[16];
    std::snprintf(suffix, sizeof(suffix), "_%03d", index);
    const auto dot = base.find_last_of('.');
    const auto slash = base.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return base + suffix;
    return base.substr(0, dot) + suffix + base.substr(dot);
}

RunResult single_file(const RunOptions& opts, std::string content) {
    return {{{opts.out_path.value_or(std::string{}), std::move(content)}}};
}

// --- hom helpers ------------------------------------------------------

struct HomPoint {
    double rate = 0.0;
    double rate_distinguishable = 0.0;
    double vis = 0.0;
    std::optional<double> leakage;
};

HomPoint hom_rates(const ModeSuperposition& psi1, const ModeSuperposition& psi2,
                   const DetectorModel& det_c, const DetectorModel& det_d, int rebase_p_max,
                   double leakage_tol) {
    HomPoint point;
    const bool both_bucket = det_c.kind() == DetectorModel::Kind::Bucket &&
                             det_d.kind() == DetectorModel::Kind::Bucket;
    if (psi1.geom == psi2.geom) {
        point.rate = rate_general(psi1, psi2, det_c, det_d);
        point.rate_distinguishable = rate_general_distinguishable(psi1, psi2, det_c, det_d);
    } else if (both_bucket) {
        point.rate = rate_bucket(psi1, psi2);
        point.rate_distinguishable = 0.5 * psi1.norm_sq() * psi2.norm_sq();
    } else {
        const RebaseResult rb = rebase(psi2, psi1.geom, rebase_p_max);
        if (rb.leakage > leakage_tol) {
            std::ostringstream msg;
            msg << "rebase leakage " << rb.leakage << " exceeds tolerance " << leakage_tol
                << " at p_max " << rebase_p_max;
            throw leakage_error(msg.str());
        }
        point.leakage = rb.leakage;
        point.rate = rate_general(psi1, rb.state, det_c, det_d);
        point.rate_distinguishable = rate_general_distinguishable(psi1, rb.state, det_c, det_d);
    }
    point.vis = visibility(point.rate, point.rate_distinguishable);
    return point;
}

// --- network helpers --------------------------------------------------

NetworkElement parse_element(const json& j) {
    const std::string type = require_string(j, "type");
    if (type == "beamsplitter") {
        const std::string path1 = require_string(j, "path1");
        const std::string path2 = require_string(j, "path2");
        const bool flip = j.contains("oam_flip") && j["oam_flip"].get<bool>();
        if (!j.contains("r") && !j.contains("t"))
            return lift([&] { return Beamsplitter::balanced(path1, path2, flip); });
        const auto r = parse_complex(j, "r");
        const auto t = parse_complex(j, "t");
        return lift([&] { return Beamsplitter(path1, path2, r, t, flip); });
    }
    if (type == "phase")
        return PhaseShifter{require_string(j, "path"), require_number(j, "theta")};
    if (type == "gouy_phase")
        return GouyPhaseShifter{require_string(j, "path"), require_number(j, "phi_g")};
    throw config_error("unknown element type '" + type + "'");
}

ModeLabel parse_label(const json& j) { return {require_string(j, "path"), parse_mode(j)}; }

FockState parse_input_state(const json& config, const std::set<std::string>& element_ports) {
    std::set<std::string> ports = element_ports;
    if (config.contains("ports"))
        for (const auto& p : config["ports"]) ports.insert(p.get<std::string>());

    if (config.contains("photons")) {
        const json& photons = config["photons"];
        if (!photons.is_array() || photons.empty())
            throw config_error("'photons' must be a non-empty array");
        std::vector<ModeLabel> labels;
        for (const auto& ph : photons) labels.push_back(parse_label(ph));
        return lift([&] { return FockState::product(std::move(labels), std::move(ports)); });
    }
    if (config.contains("terms")) {
        const json& terms = config["terms"];
        if (!terms.is_array() || terms.empty())
            throw config_error("'terms' must be a non-empty array");
        std::map<FockState::Monomial, std::complex<double>> amp_map;
        for (const auto& term : terms) {
            FockState::Monomial monomial;
            for (const auto& ph : require_field(term, "photons")) {
                monomial.push_back(parse_label(ph));
                ports.insert(monomial.back().path);
            }
            std::sort(monomial.begin(), monomial.end());
            amp_map[std::move(monomial)] +=
                std::complex<double>(number_or(term, "re", 0.0), number_or(term, "im", 0.0));
        }
        const double norm_tol = number_or(config, "norm_tol", 1e-9);
        return lift(
            [&] { return FockState::from_terms(std::move(amp_map), std::move(ports), norm_tol); });
    }
    throw config_error("network config needs 'photons' or 'terms'");
}

struct NamedPattern {
    std::string name;
    std::map<std::string, PatternEntry> entries;
};

std::vector<NamedPattern> parse_patterns(const json& config) {
    std::vector<NamedPattern> patterns;
    if (!config.contains("patterns")) return patterns;
    for (const auto& p : config["patterns"]) {
        NamedPattern pattern;
        pattern.name = require_string(p, "name");
        const json& counts = require_field(p, "counts");
        if (!counts.is_object()) throw config_error("pattern 'counts' must be an object");
        for (const auto& [path, count] : counts.items()) {
            if (!count.is_number_integer())
                throw config_error("pattern counts must be integers");
            PatternEntry entry;
            entry.count = count.get<int>();
            entry.detector = DetectorModel::bucket();
            if (p.contains("detectors") && p["detectors"].contains(path))
                entry.detector = parse_detector(p["detectors"][path]);
            pattern.entries[path] = std::move(entry);
        }
        patterns.push_back(std::move(pattern));
    }
    return patterns;
}

json amplitude_listing(const FockState& state, double cutoff) {
    json list = json::array();
    for (const auto& [monomial, amp] : state.terms()) {
        if (std::abs(amp) <= cutoff) continue;
        json labels = json::array();
        for (const auto& label : monomial)
            labels.push_back(
                {{"path", label.path}, {"ell", label.spatial.ell}, {"p", label.spatial.p}});
        list.push_back({{"labels", std::move(labels)}, {"re", amp.real()}, {"im", amp.imag()}});
    }
    return list;
}

// --- bench helpers ----------------------------------------------------

void keep(const std::complex<double>& v) { asm volatile("" : : "g"(&v) : "memory"); }

struct Timing {
    double mean = 0.0;
    double stddev = 0.0;
};

template <typename Fn>
Timing time_evaluations(int warmup, int iterations, Fn&& fn) {
    using clock = std::chrono::steady_clock;
    for (int i = 0; i < warmup; ++i) keep(fn());
    std::vector<double> seconds(iterations);
    for (int i = 0; i < iterations; ++i) {
        const auto t0 = clock::now();
        keep(fn());
        const auto t1 = clock::now();
        seconds[i] = std::chrono::duration<double>(t1 - t0).count();
    }
    Timing timing;
    for (double s : seconds) timing.mean += s;
    timing.mean /= iterations;
    double var = 0.0;
    for (double s : seconds) var += (s - timing.mean) * (s - timing.mean);
    timing.stddev = iterations > 1 ? std::sqrt(var / (iterations - 1)) : 0.0;
    return timing;
}

}  // namespace

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

RunResult cmd_overlap(const json& config, const RunOptions& opts) {
    const OverlapParams params = lift([&] {
        return OverlapParams(parse_mode(require_field(config, "mode1")),
                             parse_geometry(require_field(config, "geom1")),
                             parse_mode(require_field(config, "mode2")),
                             parse_geometry(require_field(config, "geom2")));
    });
    const double rel_tol = number_or(config, "rel_tol", 1e-10);

    const std::complex<double> value = overlap_analytic(params);
    json record = {{"schema_version", kSchemaVersion},
                   {"command", "overlap"},
                   {"re", value.real()},
                   {"im", value.imag()},
                   {"abs2", std::norm(value)}};
    if (opts.check) {
        const QuadratureResult oracle = lift([&] { return overlap_quadrature(params, rel_tol); });
        if (!oracle.converged) {
            std::ostringstream msg;
            msg << "quadrature oracle missed rel_tol " << rel_tol << ": best estimate ("
                << oracle.value.real() << ", " << oracle.value.imag() << "), achieved rel_error "
                << oracle.rel_error;
            throw accuracy_error(msg.str());
        }
        record["oracle_re"] = oracle.value.real();
        record["oracle_im"] = oracle.value.imag();
        record["oracle_rel_error"] = oracle.rel_error;
        record["abs_diff"] = std::abs(value - oracle.value);
    }

    if (effective_format(opts, Format::Json) == Format::Json)
        return single_file(opts, record.dump(2) + "\n");

    std::vector<std::string> header{"re", "im", "abs2"};
    std::vector<std::string> row{format_double(value.real()), format_double(value.imag()),
                                 format_double(std::norm(value))};
    if (opts.check) {
        header.insert(header.end(), {"oracle_re", "oracle_im", "oracle_rel_error", "abs_diff"});
        row.insert(row.end(), {format_double(record["oracle_re"].get<double>()),
                               format_double(record["oracle_im"].get<double>()),
                               format_double(record["oracle_rel_error"].get<double>()),
                               format_double(record["abs_diff"].get<double>())});
    }
    return single_file(opts, join_csv_row(header) + join_csv_row(row));
}

RunResult cmd_crosstalk(const json& config, const RunOptions& opts) {
    const int ell = require_int(config, "ell");
    const int p_max = require_int(config, "p_max");
    if (p_max < 0) throw config_error("p_max must be >= 0");
    const BeamGeometry geom1 = parse_geometry(require_field(config, "geom1"));
    const BeamGeometry geom2 = parse_geometry(require_field(config, "geom2"));
    const Format format = effective_format(opts, Format::Csv);

    if (!config.contains("sweep")) {
        const auto matrix = lift([&] { return crosstalk_matrix(ell, p_max, geom1, geom2); });
        if (format == Format::Json) {
            const json record = {{"schema_version", kSchemaVersion},
                                 {"command", "crosstalk"},
                                 {"ell", ell},
                                 {"p_max", p_max},
                                 {"matrix", matrix_json(matrix)}};
            return single_file(opts, record.dump(2) + "\n");
        }
        return single_file(opts, matrix_csv(matrix));
    }

    const Sweep sweep = parse_sweep(config["sweep"]);
    if (format == Format::Json) {
        json steps = json::array();
        for (int i = 0; i < sweep.count; ++i) {
            const double value = sweep.value(i);
            const BeamGeometry g2 = sweep_geometry2(sweep, value, geom1, geom2);
            const auto matrix = lift([&] { return crosstalk_matrix(ell, p_max, geom1, g2); });
            steps.push_back({{sweep.parameter, value}, {"matrix", matrix_json(matrix)}});
        }
        const json record = {{"schema_version", kSchemaVersion},
                             {"command", "crosstalk"},
                             {"ell", ell},
                             {"p_max", p_max},
                             {"steps", std::move(steps)}};
        return single_file(opts, record.dump(2) + "\n");
    }

    if (!opts.out_path) throw config_error("crosstalk sweeps with CSV output require --out");
    RunResult result;
    for (int i = 0; i < sweep.count; ++i) {
        const BeamGeometry g2 = sweep_geometry2(sweep, sweep.value(i), geom1, geom2);
        const auto matrix = lift([&] { return crosstalk_matrix(ell, p_max, geom1, g2); });
        result.files.push_back({step_path(*opts.out_path, i), matrix_csv(matrix)});
    }
    return result;
}

RunResult cmd_hom(const json& config, const RunOptions& opts) {
    const ModeSuperposition psi1 = parse_superposition(require_field(config, "input1"));
    const ModeSuperposition psi2 = parse_superposition(require_field(config, "input2"));
    const DetectorModel det_c = config.contains("detector_c") ? parse_detector(config["detector_c"])
                                                              : DetectorModel::bucket();
    const DetectorModel det_d = config.contains("detector_d") ? parse_detector(config["detector_d"])
                                                              : DetectorModel::bucket();
    const int rebase_p_max = int_or(config, "rebase_p_max", 20);
    if (rebase_p_max < 0) throw config_error("rebase_p_max must be >= 0");
    const double leakage_tol = number_or(config, "leakage_tol", 1e-4);

    if (!config.contains("sweep")) {
        const HomPoint point =
            lift([&] { return hom_rates(psi1, psi2, det_c, det_d, rebase_p_max, leakage_tol); });
        json record = {{"schema_version", kSchemaVersion},
                       {"command", "hom"},
                       {"rate", point.rate},
                       {"rate_distinguishable", point.rate_distinguishable},
                       {"visibility", point.vis}};
        if (point.leakage) record["leakage"] = *point.leakage;
        if (effective_format(opts, Format::Json) == Format::Json)
            return single_file(opts, record.dump(2) + "\n");
        return single_file(opts, join_csv_row({"rate", "rate_distinguishable", "visibility"}) +
                                     join_csv_row({format_double(point.rate),
                                                   format_double(point.rate_distinguishable),
                                                   format_double(point.vis)}));
    }

    const Sweep sweep = parse_sweep(config["sweep"]);
    std::string csv = join_csv_row({sweep.parameter, "rate", "rate_distinguishable", "visibility"});
    json steps = json::array();
    for (int i = 0; i < sweep.count; ++i) {
        const double value = sweep.value(i);
        const BeamGeometry g2 = sweep_geometry2(sweep, value, psi1.geom, psi2.geom);
        const ModeSuperposition psi2_step(g2, psi2.amps, psi2.norm_tol);
        const HomPoint point = lift(
            [&] { return hom_rates(psi1, psi2_step, det_c, det_d, rebase_p_max, leakage_tol); });
        csv += join_csv_row({format_double(value), format_double(point.rate),
                             format_double(point.rate_distinguishable), format_double(point.vis)});
        steps.push_back({{sweep.parameter, value},
                         {"rate", point.rate},
                         {"rate_distinguishable", point.rate_distinguishable},
                         {"visibility", point.vis}});
    }
    if (effective_format(opts, Format::Csv) == Format::Json) {
        const json record = {
            {"schema_version", kSchemaVersion}, {"command", "hom"}, {"steps", std::move(steps)}};
        return single_file(opts, record.dump(2) + "\n");
    }
    return single_file(opts, std::move(csv));
}

RunResult cmd_network(const json& config, const RunOptions& opts) {
    std::vector<NetworkElement> elements;
    std::set<std::string> element_ports;
    if (config.contains("elements"))
        for (const auto& e : config["elements"]) {
            elements.push_back(parse_element(e));
            std::visit(
                [&element_ports](const auto& el) {
                    using T = std::decay_t<decltype(el)>;
                    if constexpr (std::is_same_v<T, Beamsplitter>) {
                        element_ports.insert(el.path1);
                        element_ports.insert(el.path2);
                    } else {
                        element_ports.insert(el.path);
                    }
                },
                elements.back());
        }

    const FockState input = parse_input_state(config, element_ports);
    const auto patterns = parse_patterns(config);
    const double cutoff = number_or(config, "amplitude_cutoff", 1e-12);

    const auto run_once = [&](const std::vector<NetworkElement>& els) {
        return lift([&] { return run_network(input, els); });
    };
    const auto pattern_probability = [&](const FockState& state, const NamedPattern& pattern) {
        return lift([&] { return coincidence_probability(state, pattern.entries); });
    };

    if (!config.contains("sweep")) {
        const FockState output = run_once(elements);
        json pattern_probs = json::object();
        for (const auto& pattern : patterns)
            pattern_probs[pattern.name] = pattern_probability(output, pattern);
        const json record = {{"schema_version", kSchemaVersion},
                             {"command", "network"},
                             {"photon_number", output.photon_number()},
                             {"norm", output.norm_sq()},
                             {"amplitudes", amplitude_listing(output, cutoff)},
                             {"patterns", std::move(pattern_probs)}};
        return single_file(opts, record.dump(2) + "\n");
    }

    const json& sweep_cfg = config["sweep"];
    if (require_string(sweep_cfg, "parameter") != "phi")
        throw config_error("network sweeps support parameter 'phi' only");
    const int element_index = require_int(sweep_cfg, "element");
    if (element_index < 0 || element_index >= static_cast<int>(elements.size()))
        throw config_error("sweep element index out of range");
    const auto index = static_cast<std::size_t>(element_index);
    if (!std::holds_alternative<PhaseShifter>(elements[index]) &&
        !std::holds_alternative<GouyPhaseShifter>(elements[index]))
        throw config_error("sweep element must be a phase or gouy_phase element");
    Sweep sweep;
    sweep.parameter = "phi";
    sweep.start = require_number(sweep_cfg, "start");
    sweep.stop = require_number(sweep_cfg, "stop");
    sweep.count = require_int(sweep_cfg, "count");
    if (sweep.count < 1) throw config_error("sweep count must be >= 1");

    std::vector<std::string> header{"phi"};
    for (const auto& pattern : patterns) header.push_back(pattern.name);
    std::string csv = join_csv_row(header);
    json steps = json::array();
    for (int i = 0; i < sweep.count; ++i) {
        const double phi = sweep.value(i);
        auto swept = elements;
        if (auto* ps = std::get_if<PhaseShifter>(&swept[index]))
            ps->theta = phi;
        else
            std::get<GouyPhaseShifter>(swept[index]).phi_g = phi;
        const FockState output = run_once(swept);
        std::vector<std::string> row{format_double(phi)};
        json step = {{"phi", phi}};
        for (const auto& pattern : patterns) {
            const double prob = pattern_probability(output, pattern);
            row.push_back(format_double(prob));
            step[pattern.name] = prob;
        }
        csv += join_csv_row(row);
        steps.push_back(std::move(step));
    }
    if (effective_format(opts, Format::Csv) == Format::Json) {
        const json record = {{"schema_version", kSchemaVersion},
                             {"command", "network"},
                             {"steps", std::move(steps)}};
        return single_file(opts, record.dump(2) + "\n");
    }
    return single_file(opts, std::move(csv));
}

RunResult cmd_bench(const json& config, const RunOptions& opts) {
    const ModeIndex mode1 = parse_mode(require_field(config, "mode1"));
    const ModeIndex mode2 = parse_mode(require_field(config, "mode2"));
    const BeamGeometry geom1 = parse_geometry(require_field(config, "geom1"));
    const BeamGeometry geom2 = parse_geometry(require_field(config, "geom2"));
    const int iterations = opts.iterations.value_or(int_or(config, "iterations", 100));
    if (iterations < 10) throw config_error("bench iterations must be >= 10");
    const int warmup = int_or(config, "warmup", 5);
    if (warmup < 0) throw config_error("bench warmup must be >= 0");
    const double rel_tol = number_or(config, "rel_tol", 1e-10);

    std::vector<std::pair<double, BeamGeometry>> grid;
    if (config.contains("grid")) {
        const Sweep sweep = parse_sweep(config["grid"]);
        for (int i = 0; i < sweep.count; ++i)
            grid.emplace_back(sweep.value(i), sweep_geometry2(sweep, sweep.value(i), geom1, geom2));
    } else {
        grid.emplace_back(0.0, geom2);
    }

    std::string csv = join_csv_row(
        {"param", "t_analytic", "t_analytic_std", "t_numeric", "t_numeric_std", "ratio"});
    json rows = json::array();
    for (const auto& [value, g2] : grid) {
        const OverlapParams params = lift([&] { return OverlapParams(mode1, geom1, mode2, g2); });
        const Timing analytic =
            time_evaluations(warmup, iterations, [&] { return overlap_analytic(params); });
        const Timing numeric = time_evaluations(
            warmup, iterations, [&] { return overlap_quadrature(params, rel_tol).value; });
        const double ratio = numeric.mean / analytic.mean;
        csv += join_csv_row({format_double(value), format_double(analytic.mean),
                             format_double(analytic.stddev), format_double(numeric.mean),
                             format_double(numeric.stddev), format_double(ratio)});
        rows.push_back({{"param", value},
                        {"t_analytic", analytic.mean},
                        {"t_analytic_std", analytic.stddev},
                        {"t_numeric", numeric.mean},
                        {"t_numeric_std", numeric.stddev},
                        {"ratio", ratio}});
    }
    if (effective_format(opts, Format::Csv) == Format::Json) {
        const json record = {{"schema_version", kSchemaVersion},
                             {"command", "bench"},
                             {"iterations", iterations},
                             {"rows", std::move(rows)}};
        return single_file(opts, record.dump(2) + "\n");
    }
    return single_file(opts, std::move(csv));
}

RunResult run_command(const std::string& command, const json& config, const RunOptions& opts) {
    if (!config.is_object()) throw config_error("config document must be a JSON object");
    try {
        if (command == "overlap") return cmd_overlap(config, opts);
        if (command == "crosstalk") return cmd_crosstalk(config, opts);
        if (command == "hom") return cmd_hom(config, opts);
        if (command == "network") return cmd_network(config, opts);
        if (command == "bench") return cmd_bench(config, opts);
    } catch (const json::exception& e) {
        throw config_error(std::string("malformed config value: ") + e.what());
    }
    throw config_error("unknown command '" + command + "'");
}

}  // namespace lghom::cli
