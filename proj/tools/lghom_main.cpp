#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lghom/run_config.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitAccuracy = 3;
constexpr int kExitLeakage = 4;

nlohmann::json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw lghom::cli::config_error("cannot open config file '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw lghom::cli::config_error("config is not valid JSON: " + std::string(e.what()));
    }
}

void emit(const lghom::cli::RunResult& result) {
    for (const auto& file : result.files) {
        if (file.path.empty()) {
            std::cout << file.content;
            continue;
        }
        std::ofstream out(file.path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write output file '" + file.path + "'");
        out << file.content;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hong-Ou-Mandel interference with structured (Laguerre-Gauss) photons"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format;
    bool check = false;
    std::uint64_t seed = 0;
    int iterations = 0;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config document")->required();
        sub->add_option("--out", out_path, "output file (default: stdout)");
        sub->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_flag("--check", check, "also run the quadrature oracle and report the difference");
        sub->add_option("--seed", seed, "seed for randomized property-test helpers");
        return sub;
    };

    add_common(app.add_subcommand("overlap", "closed-form LG mode overlap"));
    add_common(app.add_subcommand("crosstalk", "crosstalk matrix |<l,p|l,p'>|^2"));
    add_common(app.add_subcommand("hom", "two-photon coincidence rate and visibility"));
    add_common(app.add_subcommand("network", "multi-photon linear network run"));
    add_common(app.add_subcommand("bench", "analytic-vs-quadrature timing table"))
        ->add_option("--iterations", iterations, "evaluations per method (>= 10)");

    CLI11_PARSE(app, argc, argv);

    lghom::cli::RunOptions opts;
    if (!out_path.empty()) opts.out_path = out_path;
    if (format == "csv") opts.format = lghom::cli::Format::Csv;
    if (format == "json") opts.format = lghom::cli::Format::Json;
    opts.check = check;
    opts.seed = seed;
    if (iterations > 0) opts.iterations = iterations;

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        emit(lghom::cli::run_command(command, load_config(config_path), opts));
    } catch (const lghom::cli::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const lghom::cli::accuracy_error& e) {
        std::cerr << "accuracy error: " << e.what() << "\n";
        return kExitAccuracy;
    } catch (const lghom::cli::leakage_error& e) {
        std::cerr << "leakage error: " << e.what() << "\n";
        return kExitLeakage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
