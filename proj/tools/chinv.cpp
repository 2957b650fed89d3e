// chinv: characteristic and hyperinvariant subspaces of a nilpotent GF(2) operator.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "chinv/report.hpp"

namespace {

using chinv::report::JobConfig;
using chinv::report::json;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (cur.find_first_not_of(" \t") != std::string::npos) out.push_back(cur);
    return out;
}

template <class T>
std::vector<T> split_numbers(const std::string& s) {
    std::vector<T> out;
    for (const auto& p : split(s, ',')) {
        std::size_t used = 0;
        long long v = std::stoll(p, &used);
        if (p.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(p);
        if (v < 0 && std::is_unsigned_v<T>) throw std::invalid_argument(p);
        out.push_back(static_cast<T>(v));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Characteristic and hyperinvariant subspaces of a nilpotent operator over GF(2)"};
    app.require_subcommand(1);

    std::string segre, gens, J, mu, config, closure, format, output, lattice;
    std::size_t cap_endos = 0, threads = 0, samples = 0;
    bool verbose = false;

    const std::pair<const char*, const char*> commands[] = {
        {"analyze", "closure, flags and frame of a generated subspace"},
        {"lattice", "hyperinvariant tuples, or the full invariant/characteristic lattice for small n"},
        {"interval", "census of the characteristic subspaces over a frame interval"},
        {"construct", "a characteristic non-hyperinvariant subspace, if one exists"},
        {"oracle", "cross-check formulas against brute force"},
        {"hasse", "Hasse diagram of a lattice"},
    };
    for (const auto& [name, desc] : commands) {
        auto* sub = app.add_subcommand(name, desc);
        sub->add_option("--segre", segre, "Jordan block sizes, e.g. 1,3,6");
        sub->add_option("--gens", gens, "generators separated by ';', e.g. \"u1 + f*u2;f^2*u3\"");
        sub->add_option("--closure", closure, "span | cyclic | char | hyp");
        sub->add_option("--J", J, "1-based index set, e.g. 1,2,3");
        sub->add_option("--mu", mu, "tuple entries, e.g. 0,1,2");
        sub->add_option("--lattice", lattice, "hinv | chinv | inv");
        sub->add_option("--cap-endos", cap_endos, "largest commutant dimension to enumerate");
        sub->add_option("--samples", samples, "random automorphisms tried for the unit span");
        sub->add_option("--threads", threads, "worker threads for enumeration");
        sub->add_option("--format", format, "json | dot | text");
        sub->add_option("--output,-o", output, "write the report to this file");
        sub->add_option("--config", config, "JSON job file, or - for stdin");
        sub->add_flag("--verbose,-v", verbose, "per-element detail");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : chinv::report::kUsage;
    }

    JobConfig cfg;
    std::string command = app.get_subcommands().front()->get_name();
    try {
        if (!config.empty()) {
            json j;
            if (config == "-") {
                j = json::parse(std::cin);
            } else {
                std::ifstream in(config);
                if (!in) throw chinv::report::UsageError("cannot open config file " + config);
                j = json::parse(in);
            }
            cfg = chinv::report::job_from_json(j);
            if (!cfg.command.empty() && cfg.command != command)
                throw chinv::report::UsageError("config command '" + cfg.command + "' differs from '" + command + "'");
        }
        cfg.command = command;
        if (command == "hasse" && format.empty() && cfg.format == "json" && config.empty()) cfg.format = "dot";
        if (!segre.empty()) cfg.segre = split_numbers<int>(segre);
        if (!gens.empty()) cfg.gens = split(gens, ';');
        if (!closure.empty()) cfg.closure = closure;
        if (!J.empty()) cfg.J = split_numbers<std::size_t>(J);
        if (!mu.empty()) cfg.mu = split_numbers<int>(mu);
        if (!lattice.empty()) cfg.lattice = lattice;
        if (!format.empty()) cfg.format = format;
        if (!output.empty()) cfg.output = output;
        if (cap_endos) cfg.caps.endo_dim = cap_endos;
        if (threads) cfg.caps.threads = threads;
        if (samples) cfg.caps.unit_samples = samples;
        if (verbose) cfg.verbose = true;
    } catch (const json::exception& e) {
        std::cerr << "error: bad JSON config: " << e.what() << "\n";
        return chinv::report::kUsage;
    } catch (const chinv::report::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return chinv::report::kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: not an integer list: " << e.what() << "\n";
        return chinv::report::kUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: number out of range\n";
        return chinv::report::kUsage;
    }

    chinv::report::Result r = chinv::report::run(cfg);
    if (cfg.output.empty()) {
        std::cout << r.out;
    } else {
        std::ofstream out(cfg.output);
        if (!out) {
            std::cerr << "error: cannot write " << cfg.output << "\n";
            return chinv::report::kUsage;
        }
        out << r.out;
    }
    if (!r.err.empty()) std::cerr << "error: " << r.err << "\n";
    return r.code;
}
