#include "hpt/synth.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "hpt/csv.hpp"
#include "hpt/series.hpp"

namespace hpt {

namespace {

std::string state_for(const SynthConfig& s, int msa_index) {
    return s.states[static_cast<size_t>(msa_index) % s.states.size()];
}

}  // namespace

SynthOutputs generate_synthetic(const SynthConfig& synth, unsigned long long seed,
                                const std::filesystem::path& out_dir) {
    if (synth.n_msas < 1 || synth.n_quarters < 10)
        throw ConfigError("synth: need at least 1 MSA and 10 quarters");
    if (!(synth.target_r2 >= 0.0 && synth.target_r2 < 1.0))
        throw ConfigError("synth: target_r2 must be in [0,1)");

    std::filesystem::create_directories(out_dir);
    SynthOutputs out;
    out.hpi_csv = out_dir / "synth_hpi.csv";
    out.factor_csv = out_dir / "synth_factors.csv";
    out.truth_json = out_dir / "synth_truth.json";

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const auto& transforms = default_factor_transforms();
    const int n_factors = static_cast<int>(transforms.size());
    const int n_returns = synth.n_quarters - 1;  // one lost to differencing

    // Transformed factor values (the regressors), standard normal iid.
    std::vector<std::vector<double>> g(static_cast<size_t>(n_factors),
                                       std::vector<double>(static_cast<size_t>(n_returns)));
    for (auto& series : g)
        for (double& v : series) v = gauss(rng);

    // Equal loadings sized so the population R2 of returns on the factors hits
    // the target: signal variance b^2 against noise variance sigma^2.
    const double signal_sd =
        synth.noise_sigma * std::sqrt(synth.target_r2 / (1.0 - synth.target_r2));
    const double loading = signal_sd / std::sqrt(static_cast<double>(n_factors));

    nlohmann::ordered_json truth;
    truth["seed"] = seed;
    truth["n_msas"] = synth.n_msas;
    truth["n_quarters"] = synth.n_quarters;
    truth["population_r2"] = synth.target_r2;
    truth["loading_per_factor"] = loading;
    truth["noise_sigma"] = synth.noise_sigma;
    truth["mean_return"] = synth.mean_return;
    truth["lead_lag"] = synth.lead_lag;
    truth["lead_lag_profile"] = {0.6, 0.3};
    auto& jump_list = truth["injected_jumps"] = nlohmann::ordered_json::array();

    // Returns per MSA.
    std::vector<std::vector<double>> returns(static_cast<size_t>(synth.n_msas),
                                             std::vector<double>(static_cast<size_t>(n_returns)));
    for (int m = 0; m < synth.n_msas; ++m) {
        auto& r = returns[static_cast<size_t>(m)];
        for (int t = 0; t < n_returns; ++t) {
            double signal = 0.0;
            for (int j = 0; j < n_factors; ++j)
                signal += loading * g[static_cast<size_t>(j)][static_cast<size_t>(t)];
            r[static_cast<size_t>(t)] = synth.mean_return + signal + synth.noise_sigma * gauss(rng);
        }
    }
    if (synth.lead_lag && synth.n_msas >= 2) {
        // Satellites (every MSA past the first) follow MSA 0 with a fixed profile.
        const auto& p = returns[0];
        for (int m = 1; m < synth.n_msas; ++m) {
            auto& r = returns[static_cast<size_t>(m)];
            for (int t = 0; t < n_returns; ++t) {
                const double lag1 = t >= 1 ? p[static_cast<size_t>(t - 1)] : 0.0;
                r[static_cast<size_t>(t)] = 0.6 * p[static_cast<size_t>(t)] + 0.3 * lag1 +
                                            synth.noise_sigma * gauss(rng);
            }
        }
    }
    if (synth.jumps_per_msa > 0) {
        std::uniform_int_distribution<int> pick(9, n_returns - 1);  // past the default history
        for (int m = 0; m < synth.n_msas; ++m) {
            auto& r = returns[static_cast<size_t>(m)];
            double mean = 0.0;
            for (double v : r) mean += v;
            mean /= n_returns;
            double ss = 0.0;
            for (double v : r) ss += (v - mean) * (v - mean);
            const double sd = std::sqrt(ss / (n_returns - 1));
            for (int j = 0; j < synth.jumps_per_msa; ++j) {
                const int t = pick(rng);
                const double shock = (j % 2 == 0 ? 1.0 : -1.0) * synth.jump_magnitude * sd;
                r[static_cast<size_t>(t)] += shock;
                char id[16];
                std::snprintf(id, sizeof(id), "msa%03d", m + 1);
                jump_list.push_back({{"msa_id", id},
                                     {"quarter", (synth.start + 1 + t).str()},
                                     {"shock", shock}});
            }
        }
    }

    {
        csv::Writer w(out.hpi_csv);
        w.row({"msa_id", "msa_name", "state", "year", "quarter", "index"});
        for (int m = 0; m < synth.n_msas; ++m) {
            char id[16], name[32];
            std::snprintf(id, sizeof(id), "msa%03d", m + 1);
            std::snprintf(name, sizeof(name), "Synth City %d", m + 1);
            const std::string state = state_for(synth, m);
            double level = 100.0;
            for (int t = 0; t < synth.n_quarters; ++t) {
                if (t > 0) level *= std::exp(returns[static_cast<size_t>(m)][static_cast<size_t>(t - 1)] / 100.0);
                QuarterId q = synth.start + t;
                w.row({id, name, state, std::to_string(q.year()), std::to_string(q.quarter()),
                       csv::format_double(level)});
            }
        }
    }
    {
        csv::Writer w(out.factor_csv);
        w.row({"quarter_id", "series_id", "value"});
        int j = 0;
        for (const auto& [key, tag] : transforms) {
            if (tag == FactorTransform::log_pct_change) {
                double level = 100.0;
                for (int t = 0; t < synth.n_quarters; ++t) {
                    if (t > 0)
                        level *= std::exp(g[static_cast<size_t>(j)][static_cast<size_t>(t - 1)] / 100.0);
                    w.row({(synth.start + t).str(), key, csv::format_double(level)});
                }
            } else {
                // ln(level) equals the generated regressor; first quarter repeats
                // the initial draw so the series spans the full grid.
                for (int t = 0; t < synth.n_quarters; ++t) {
                    const int src = t > 0 ? t - 1 : 0;
                    const double level =
                        std::exp(g[static_cast<size_t>(j)][static_cast<size_t>(src)]);
                    w.row({(synth.start + t).str(), key, csv::format_double(level)});
                }
            }
            ++j;
        }
    }
    {
        std::ofstream f(out.truth_json, std::ios::binary | std::ios::trunc);
        f << truth.dump(2) << "\n";
    }
    return out;
}

}  // namespace hpt
