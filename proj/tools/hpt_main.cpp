// Command line front end for the housing panel toolkit.

#include <CLI11.hpp>

#include <cstdio>
#include <set>

#include "hpt/config.hpp"
#include "hpt/error.hpp"
#include "hpt/pipeline.hpp"
#include "hpt/synth.hpp"

namespace {

struct Options {
    std::string config_path;
    std::string out_dir;        // overrides config out_dir when set
    std::string stage_only;     // restrict `run` to a single stage
    long long seed = -1;        // overrides config seed when >= 0
};

hpt::RunConfig effective_config(const Options& opt) {
    hpt::RunConfig cfg = hpt::load_config(opt.config_path);
    if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
    if (opt.seed >= 0) cfg.seed = static_cast<unsigned long long>(opt.seed);
    return cfg;
}

int dispatch(const std::string& command, const Options& opt) {
    hpt::RunConfig cfg = effective_config(opt);
    if (command == "synth") {
        hpt::generate_synthetic(cfg.synth, cfg.seed, cfg.out_dir);
        return 0;
    }
    if (command == "run") {
        if (!opt.stage_only.empty()) {
            hpt::run_stages(cfg, {hpt::parse_stage(opt.stage_only)});
            return 0;
        }
        return hpt::run_all(cfg);
    }
    hpt::run_stages(cfg, {hpt::parse_stage(command)});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"housing panel toolkit"};
    app.require_subcommand(1);

    Options opt;
    std::vector<CLI::App*> subs;
    for (const char* name : {"ingest", "integrate", "jumps", "correlate", "contagion",
                             "figures", "run", "synth"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", opt.config_path, "key = value config file")->required();
        sub->add_option("--out", opt.out_dir, "output directory (overrides config)");
        sub->add_option("--seed", opt.seed, "random seed (overrides config)");
        if (std::string(name) == "run")
            sub->add_option("--stage-only", opt.stage_only, "run a single stage");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return dispatch(command, opt);
    } catch (const hpt::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const hpt::DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 3;
    } catch (const hpt::NumericError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
