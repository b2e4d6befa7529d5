#include "hpt/config.hpp"

#include <fstream>

#include "hpt/csv.hpp"
#include "hpt/error.hpp"

namespace hpt {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (true) {
        size_t next = s.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(trim(s.substr(pos)));
            return out;
        }
        out.push_back(trim(s.substr(pos, next - pos)));
        pos = next + 1;
    }
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: bad boolean for '" + key + "': '" + v + "'");
}

}  // namespace

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());

    RunConfig cfg;
    bool region_cleared = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string where = "config line " + std::to_string(lineno) + " ('" + key + "')";

        auto as_int = [&] { return csv::parse_int(value, where); };
        auto as_double = [&] { return csv::parse_double(value, where); };

        try {
            if (key == "hpi_csv") cfg.hpi_csv = value;
            else if (key == "factor_csv") cfg.factor_csv = value;
            else if (key == "out_dir") cfg.out_dir = value;
            else if (key == "report_start") cfg.report_span.first = QuarterId::parse(value);
            else if (key == "report_end") cfg.report_span.last = QuarterId::parse(value);
            else if (key == "window_len") cfg.window_len = as_int();
            else if (key == "rolling_dependent") {
                if (value == "prewhitened") cfg.rolling_on_prewhitened = true;
                else if (value == "raw") cfg.rolling_on_prewhitened = false;
                else throw ConfigError(where + ": want prewhitened|raw");
            } else if (key == "cohort_starts") {
                cfg.cohort_starts.clear();
                for (const auto& q : split(value, ','))
                    cfg.cohort_starts.push_back(QuarterId::parse(q));
            } else if (key == "min_history") cfg.jump.min_history = as_int();
            else if (key == "jump_threshold_10pct") cfg.jump.threshold_10pct = as_double();
            else if (key == "jump_threshold_big") cfg.jump.threshold_big = as_double();
            else if (key == "lm_scaled") cfg.jump.scaled = parse_bool(value, key);
            else if (key == "jump_gate") cfg.jump_corr.gate = as_double();
            else if (key == "jump_corr_min_quarters") cfg.jump_corr.min_jump_quarters = as_int();
            else if (key == "jump_corr_mean_mode") {
                if (value == "union") cfg.jump_corr.mean_mode = JumpCorrMeanMode::union_set;
                else if (value == "full") cfg.jump_corr.mean_mode = JumpCorrMeanMode::full_overlap;
                else throw ConfigError(where + ": want union|full");
            } else if (key == "corr_min_overlap") cfg.corr_min_overlap = as_int();
            else if (key == "corr_t_thresholds") {
                cfg.corr_t_thresholds.clear();
                for (const auto& t : split(value, ','))
                    cfg.corr_t_thresholds.push_back(csv::parse_double(t, where));
            } else if (key == "division_t_threshold") cfg.division_t_threshold = as_double();
            else if (key == "region") {
                if (!region_cleared) {
                    cfg.region.groups.clear();
                    region_cleared = true;
                }
                auto colon = value.find(':');
                if (colon == std::string::npos)
                    throw ConfigError(where + ": want 'Primary: Sat1, Sat2'");
                cfg.region.groups.emplace_back(trim(value.substr(0, colon)),
                                               split(value.substr(colon + 1), ','));
            } else if (key == "interaction_variant") {
                if (value == "primary_city") cfg.interaction = InteractionVariant::primary_city_residual;
                else if (value == "equal_weight_ca") cfg.interaction = InteractionVariant::equal_weight_ca_residual;
                else throw ConfigError(where + ": want primary_city|equal_weight_ca");
            } else if (key == "serial_policy") {
                if (value == "plain") cfg.serial_policy = SerialPolicy::plain;
                else if (value == "auto") cfg.serial_policy = SerialPolicy::auto_cochrane_orcutt;
                else if (value == "force") cfg.serial_policy = SerialPolicy::force_cochrane_orcutt;
                else throw ConfigError(where + ": want plain|auto|force");
            } else if (key == "n_lags") cfg.n_lags = as_int();
            else if (key == "ew_index_averaging") {
                if (value == "log_levels") cfg.ew_index_averaging = IndexAveraging::log_levels;
                else if (value == "levels") cfg.ew_index_averaging = IndexAveraging::levels;
                else throw ConfigError(where + ": want log_levels|levels");
            } else if (key == "fig_base_quarter") cfg.fig_base_quarter = QuarterId::parse(value);
            else if (key == "seed") cfg.seed = static_cast<unsigned long long>(std::stoull(value));
            else if (key == "synth_n_msas") cfg.synth.n_msas = as_int();
            else if (key == "synth_n_quarters") cfg.synth.n_quarters = as_int();
            else if (key == "synth_start") cfg.synth.start = QuarterId::parse(value);
            else if (key == "synth_target_r2") cfg.synth.target_r2 = as_double();
            else if (key == "synth_noise_sigma") cfg.synth.noise_sigma = as_double();
            else if (key == "synth_mean_return") cfg.synth.mean_return = as_double();
            else if (key == "synth_jumps_per_msa") cfg.synth.jumps_per_msa = as_int();
            else if (key == "synth_jump_magnitude") cfg.synth.jump_magnitude = as_double();
            else if (key == "synth_lead_lag") cfg.synth.lead_lag = parse_bool(value, key);
            else if (key == "synth_states") cfg.synth.states = split(value, ',');
            else throw ConfigError(where + ": unknown key");
        } catch (const DataError& e) {
            throw ConfigError(std::string(e.what()));
        }
    }

    if (cfg.window_len <= 14)
        throw ConfigError("window_len must exceed 14 (13 regressors + intercept)");
    if (cfg.jump.threshold_10pct <= 0 || cfg.jump.threshold_big <= 0 || cfg.jump_corr.gate <= 0)
        throw ConfigError("jump thresholds must be positive");
    for (double t : cfg.corr_t_thresholds)
        if (t <= 0) throw ConfigError("correlation t thresholds must be positive");
    if (cfg.division_t_threshold <= 0)
        throw ConfigError("division_t_threshold must be positive");
    if (cfg.report_span.first > cfg.report_span.last)
        throw ConfigError("report_start after report_end");
    return cfg;
}

std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> e;
    auto add = [&](const std::string& k, const std::string& v) { e.emplace_back(k, v); };
    add("hpi_csv", cfg.hpi_csv.string());
    add("factor_csv", cfg.factor_csv.string());
    add("out_dir", cfg.out_dir.string());
    add("report_start", cfg.report_span.first.str());
    add("report_end", cfg.report_span.last.str());
    add("window_len", std::to_string(cfg.window_len));
    add("rolling_dependent", cfg.rolling_on_prewhitened ? "prewhitened" : "raw");
    {
        std::string cs;
        for (const auto& q : cfg.cohort_starts) cs += (cs.empty() ? "" : ",") + q.str();
        add("cohort_starts", cs);
    }
    add("min_history", std::to_string(cfg.jump.min_history));
    add("jump_threshold_10pct", csv::format_double(cfg.jump.threshold_10pct));
    add("jump_threshold_big", csv::format_double(cfg.jump.threshold_big));
    add("lm_scaled", cfg.jump.scaled ? "true" : "false");
    add("jump_gate", csv::format_double(cfg.jump_corr.gate));
    add("jump_corr_min_quarters", std::to_string(cfg.jump_corr.min_jump_quarters));
    add("jump_corr_mean_mode",
        cfg.jump_corr.mean_mode == JumpCorrMeanMode::union_set ? "union" : "full");
    add("corr_min_overlap", std::to_string(cfg.corr_min_overlap));
    {
        std::string ts;
        for (double t : cfg.corr_t_thresholds)
            ts += (ts.empty() ? "" : ",") + csv::format_double(t);
        add("corr_t_thresholds", ts);
    }
    add("division_t_threshold", csv::format_double(cfg.division_t_threshold));
    for (const auto& [primary, sats] : cfg.region.groups) {
        std::string v = primary + ":";
        for (size_t i = 0; i < sats.size(); ++i) v += (i ? "," : " ") + sats[i];
        add("region", v);
    }
    add("interaction_variant",
        cfg.interaction == InteractionVariant::equal_weight_ca_residual ? "equal_weight_ca"
                                                                        : "primary_city");
    add("serial_policy", cfg.serial_policy == SerialPolicy::plain              ? "plain"
                         : cfg.serial_policy == SerialPolicy::force_cochrane_orcutt ? "force"
                                                                                   : "auto");
    add("n_lags", std::to_string(cfg.n_lags));
    add("ew_index_averaging",
        cfg.ew_index_averaging == IndexAveraging::log_levels ? "log_levels" : "levels");
    add("fig_base_quarter", cfg.fig_base_quarter.str());
    add("seed", std::to_string(cfg.seed));
    return e;
}

}  // namespace hpt
