// espsim command line: run scenarios, sweep parameters, print lower
// bounds, or play the fixed-speed adversary game.
//
// Exit codes: 0 ok, 1 a competitive bound was violated, 2 usage or
// scenario parse error, 3 simulation error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "espsim/scenario.hpp"

namespace {

constexpr const char* kUsage =
    "usage: espsim <verb> [args]\n"
    "\n"
    "  run <scenario>                        simulate and report one CSV row per\n"
    "                                        (instance, policy, objective)\n"
    "  sweep <scenario> --param <name> --values <v1,v2,...>\n"
    "                                        repeat the run over alpha | P | n_jobs\n"
    "  bounds <scenario>                     print lower bounds only\n"
    "  game --P <n> --alpha <a> [--budget <b>]\n"
    "                                        adversary ratio of the robust speed vector\n"
    "\n"
    "CSV goes to the scenario's 'output' path ('-' = stdout); 'game' prints\n"
    "to stdout. ESPSIM_SEED overrides scenario seeds.\n";

int usage_error(const std::string& msg) {
    std::cerr << "espsim: " << msg << "\n\n" << kUsage;
    return 2;
}

std::optional<std::uint64_t> env_seed() {
    const char* raw = std::getenv("ESPSIM_SEED");
    if (!raw) return std::nullopt;
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(raw, &used);
        if (used != std::string(raw).size()) throw std::invalid_argument(raw);
        return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
        throw espsim::ScenarioError(std::string("ESPSIM_SEED: '") + raw +
                                    "' is not an unsigned integer");
    }
}

int write_output(const std::string& path, const std::string& csv) {
    if (path == "-") {
        std::cout << csv;
        return 0;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "espsim: cannot write '" << path << "'\n";
        return 3;
    }
    out << csv;
    return 0;
}

std::vector<double> parse_values(const std::string& list) {
    std::vector<double> values;
    std::string item;
    std::size_t start = 0;
    while (start <= list.size()) {
        const auto comma = list.find(',', start);
        item = list.substr(start, comma == std::string::npos ? std::string::npos
                                                             : comma - start);
        if (!item.empty()) {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size())
                throw espsim::ScenarioError("sweep value '" + item +
                                            "' is not a number");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return values;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty()) return usage_error("missing verb");
    const std::string verb = args[0];

    try {
        const std::optional<std::uint64_t> seed = env_seed();

        if (verb == "run" || verb == "bounds") {
            if (args.size() != 2) return usage_error(verb + " takes one scenario file");
            const espsim::Scenario sc = espsim::parse_scenario_file(args[1]);
            if (verb == "bounds")
                return write_output(sc.output, espsim::bounds_csv(sc, seed));
            const espsim::RunResult r = espsim::run_scenario(sc, seed);
            const int io = write_output(sc.output, r.csv);
            return io != 0 ? io : (r.all_bounds_ok ? 0 : 1);
        }

        if (verb == "sweep") {
            std::string file, param, values_raw;
            for (std::size_t i = 1; i < args.size(); ++i) {
                if (args[i] == "--param" && i + 1 < args.size())
                    param = args[++i];
                else if (args[i] == "--values" && i + 1 < args.size())
                    values_raw = args[++i];
                else if (file.empty() && args[i][0] != '-')
                    file = args[i];
                else
                    return usage_error("unexpected argument '" + args[i] + "'");
            }
            if (file.empty() || param.empty())
                return usage_error("sweep needs <scenario> --param <name> --values <list>");
            const espsim::Scenario sc = espsim::parse_scenario_file(file);
            const espsim::RunResult r =
                espsim::sweep_scenario(sc, param, parse_values(values_raw), seed);
            const int io = write_output(sc.output, r.csv);
            return io != 0 ? io : (r.all_bounds_ok ? 0 : 1);
        }

        if (verb == "game") {
            double alpha = 0.0, budget = -1.0;
            int P = 0;
            for (std::size_t i = 1; i < args.size(); ++i) {
                if (args[i] == "--P" && i + 1 < args.size())
                    P = std::stoi(args[++i]);
                else if (args[i] == "--alpha" && i + 1 < args.size())
                    alpha = std::stod(args[++i]);
                else if (args[i] == "--budget" && i + 1 < args.size())
                    budget = std::stod(args[++i]);
                else
                    return usage_error("unexpected argument '" + args[i] + "'");
            }
            if (P < 1) return usage_error("game needs --P >= 1");
            if (!(alpha > 1.0)) return usage_error("game: alpha must exceed 1");
            const espsim::RunResult r =
                espsim::game_csv(espsim::PowerParams(alpha, P), budget);
            std::cout << r.csv;
            return r.all_bounds_ok ? 0 : 1;
        }

        return usage_error("unknown verb '" + verb + "'");
    } catch (const espsim::ScenarioError& e) {
        std::cerr << "espsim: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "espsim: " << e.what() << '\n';
        return 2;
    } catch (const espsim::SimError& e) {
        std::cerr << "espsim: simulation error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "espsim: " << e.what() << '\n';
        return 3;
    }
}
