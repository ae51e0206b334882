#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "susy2d/commands.hpp"
#include "susy2d/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"susy2d: supersymmetric quantum mechanics on planar charts"};
    app.require_subcommand(1);
    std::string config, out;
    long long seed = -1;
    double tol_scale = 0.0;
    std::vector<std::string> sets;
    app.add_option("--config", config, "INI run config")->check(CLI::ExistingFile);
    app.add_option("--out", out, "report path (default: stdout)");
    app.add_option("--seed", seed, "seed for random test fields and the eigensolver");
    app.add_option("--tol-scale", tol_scale, "multiply every tolerance");
    app.add_option("--set", sets, "override a config key, section.key=value");
    for (const char* name : {"verify-algebra", "spectrum", "zero-modes", "limit-sweep", "specfun-test"})
        app.add_subcommand(name)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    if (seed >= 0) sets.push_back("run.seed=" + std::to_string(seed));
    if (tol_scale != 0.0) {
        std::ostringstream s;
        s.precision(17);
        s << "tolerances.scale=" << tol_scale;
        sets.push_back(s.str());
    }

    susy2d::RunConfig cfg;
    try {
        cfg = susy2d::load_config(config, sets);
    } catch (const std::exception& e) {
        std::cerr << "config: " << e.what() << "\n";
        return 2;
    }
    std::string name = app.get_subcommands().front()->get_name();
    susy2d::CommandResult r = susy2d::run_command(name, cfg);
    if (!r.output.empty()) {
        if (out.empty()) {
            std::cout << r.output;
        } else {
            std::ofstream f(out);
            if (!f) {
                std::cerr << "cannot write '" << out << "'\n";
                return 2;
            }
            f << r.output;
        }
    }
    if (!r.message.empty()) std::cerr << r.message << "\n";
    return r.exit_code;
}
