#include "hpt/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>

#include "hpt/contagion.hpp"
#include "hpt/correlations.hpp"
#include "hpt/csv.hpp"
#include "hpt/ingest.hpp"
#include "hpt/integration.hpp"
#include "hpt/jumps.hpp"

namespace hpt {

Stage parse_stage(const std::string& name) {
    if (name == "ingest") return Stage::ingest;
    if (name == "integrate") return Stage::integrate;
    if (name == "jumps") return Stage::jumps;
    if (name == "correlate") return Stage::correlate;
    if (name == "contagion") return Stage::contagion;
    if (name == "figures") return Stage::figures;
    throw ConfigError("unknown stage: '" + name + "'");
}

std::string stage_name(Stage s) {
    switch (s) {
        case Stage::ingest: return "ingest";
        case Stage::integrate: return "integrate";
        case Stage::jumps: return "jumps";
        case Stage::correlate: return "correlate";
        case Stage::contagion: return "contagion";
        case Stage::figures: return "figures";
    }
    return "?";
}

namespace {

namespace fs = std::filesystem;
using csv::format_double;

struct PipelineData {
    ReturnPanel panel;
    FactorPanel factors;
    std::optional<std::map<std::string, IntegrationSeries>> integration;
    std::optional<std::map<std::string, JumpSeries>> jumps;
};

PipelineData load_inputs(const RunConfig& cfg) {
    if (cfg.hpi_csv.empty() || cfg.factor_csv.empty())
        throw ConfigError("hpi_csv and factor_csv must be set");
    PipelineData d;
    HpiData hpi = parse_hpi_csv(cfg.hpi_csv);
    d.panel = build_return_panel(hpi);
    d.factors = transform_factors(parse_factor_csv(cfg.factor_csv));
    return d;
}

const std::map<std::string, IntegrationSeries>& integration_of(const RunConfig& cfg,
                                                               PipelineData& d) {
    if (!d.integration) {
        std::map<std::string, IntegrationSeries> integ;
        for (const auto& [id, returns] : d.panel.series) {
            Series dep = returns;
            if (cfg.rolling_on_prewhitened) {
                if (returns.length() < 8) continue;
                dep = prewhiten(returns).residuals;
            }
            if (dep.length() < cfg.window_len) continue;
            IntegrationSeries is = rolling_r2(id, dep, d.factors, cfg.window_len);
            if (is.r2.length() > 0) integ.emplace(id, std::move(is));
        }
        d.integration = std::move(integ);
    }
    return *d.integration;
}

const std::map<std::string, JumpSeries>& jumps_of(const RunConfig& cfg, PipelineData& d) {
    if (!d.jumps) {
        std::map<std::string, JumpSeries> js;
        for (const auto& [id, returns] : d.panel.series) {
            if (returns.length() < cfg.jump.min_history + 1) continue;
            js.emplace(id, classify_jumps(id, returns, cfg.jump));
        }
        d.jumps = std::move(js);
    }
    return *d.jumps;
}

void write_series_csv(const fs::path& path, const Series& s,
                      const std::vector<std::string>& header, StageResult& result) {
    csv::Writer w(path);
    w.row(header);
    for (int i = 0; i < s.length(); ++i)
        w.row({(s.start + i).str(), format_double(s.values[static_cast<size_t>(i)])});
    result.files_written.push_back(path);
}

void stage_ingest(const RunConfig& cfg, PipelineData& d, StageResult& result) {
    {
        csv::Writer w(cfg.out_dir / "returns_panel.csv");
        w.row({"msa_id", "quarter", "return_pct"});
        for (const auto& [id, s] : d.panel.series)
            for (int i = 0; i < s.length(); ++i)
                w.row({id, (s.start + i).str(), format_double(s.values[static_cast<size_t>(i)])});
        result.files_written.push_back(cfg.out_dir / "returns_panel.csv");
    }
    {
        csv::Writer w(cfg.out_dir / "factors_transformed.csv");
        w.row({"quarter_id", "series_id", "value"});
        for (const auto& [key, s] : d.factors.factors)
            for (int i = 0; i < s.length(); ++i)
                w.row({(s.start + i).str(), key, format_double(s.values[static_cast<size_t>(i)])});
        result.files_written.push_back(cfg.out_dir / "factors_transformed.csv");
    }
}

void stage_integrate(const RunConfig& cfg, PipelineData& d, StageResult& result) {
    const auto& integ = integration_of(cfg, d);
    IntegrationReport report = integration_report(d.panel, integ, cfg.report_span);

    {
        csv::Writer w(cfg.out_dir / "integration_per_msa.csv");
        w.row({"msa_id", "state", "mean", "rank_mean", "quintile_mean", "sigma", "rank_sigma",
               "quintile_sigma", "final_r2", "change_r2", "trend_t", "rank_trend_t",
               "quintile_trend_t"});
        for (const auto& r : report.per_msa)
            w.row({r.msa_id, r.state, format_double(r.mean_return),
                   std::to_string(r.rank_mean), std::to_string(r.quintile_mean),
                   format_double(r.sigma), std::to_string(r.rank_sigma),
                   std::to_string(r.quintile_sigma), format_double(r.final_r2),
                   format_double(r.change_r2), format_double(r.trend_t),
                   std::to_string(r.rank_trend_t), std::to_string(r.quintile_trend_t)});
        result.files_written.push_back(cfg.out_dir / "integration_per_msa.csv");
    }
    {
        csv::Writer w(cfg.out_dir / "integration_summary.csv");
        w.row({"row", "mean", "sigma", "final_r2", "change_r2", "trend_t"});
        auto emit = [&](const std::string& label, auto pick) {
            const IntegrationSummary& s = report.summary;
            w.row({label, format_double(pick(s.mean_return)), format_double(pick(s.sigma)),
                   format_double(pick(s.final_r2)), format_double(pick(s.change_r2)),
                   format_double(pick(s.trend_t))});
        };
        emit("mean", [](const StatSummary& s) { return s.mean; });
        emit("std_dev", [](const StatSummary& s) { return s.std_dev; });
        for (int q = 0; q < 5; ++q)
            emit("quintile" + std::to_string(q + 1) + "_min",
                 [q](const StatSummary& s) { return s.quintile_min[q]; });
        emit("max", [](const StatSummary& s) { return s.max; });
        result.files_written.push_back(cfg.out_dir / "integration_summary.csv");
    }

    // Figure-2 style mean series: national, CA, cohorts, coastal/inland.
    std::map<std::string, Series> trend;
    {
        std::vector<const IntegrationSeries*> all;
        QuarterId from(0);
        bool first = true;
        for (const auto& [id, is] : integ) {
            all.push_back(&is);
            if (first || is.r2.start < from) from = is.r2.start;
            first = false;
        }
        if (!all.empty()) trend["national"] = mean_r2_series(all, from);
    }
    for (auto& [name, s] : group_averages(integ, d.panel.metadata, GroupBy::census_division))
        if (name == "ca") trend["ca"] = s;
    for (auto& [name, s] : group_averages(integ, d.panel.metadata, GroupBy::coast_flag))
        if (name != "not_ca") trend[name] = s;
    for (auto& [name, s] : cohort_averages(integ, cfg.cohort_starts)) trend[name] = s;

    for (const auto& [name, s] : trend)
        write_series_csv(cfg.out_dir / ("r2_trend_" + name + ".csv"), s,
                         {"quarter", "mean_r2"}, result);
}

std::vector<const JumpSeries*> jump_group(const std::map<std::string, JumpSeries>& jumps,
                                          const ReturnPanel& panel, const std::string& group) {
    std::vector<const JumpSeries*> out;
    for (const auto& [id, js] : jumps) {
        const MsaMeta& meta = panel.metadata.at(id);
        bool in = group == "national" ||
                  (group == "ca_coastal" && meta.coast_flag == CoastFlag::coastal) ||
                  (group == "ca_inland" && meta.coast_flag == CoastFlag::inland);
        if (in) out.push_back(&js);
    }
    return out;
}

void stage_jumps(const RunConfig& cfg, PipelineData& d, StageResult& result) {
    const auto& jumps = jumps_of(cfg, d);
    {
        csv::Writer w(cfg.out_dir / "jumps_per_msa.csv");
        w.row({"msa_id", "quarter", "lm", "jump165", "jump200"});
        for (const auto& [id, js] : jumps)
            for (int i = 0; i < js.length(); ++i) {
                if (!js.lm_defined[static_cast<size_t>(i)]) continue;
                w.row({id, (js.lm_start + i).str(),
                       format_double(js.lm_values[static_cast<size_t>(i)]),
                       std::to_string(js.jump_10pct[static_cast<size_t>(i)]),
                       std::to_string(js.jump_big[static_cast<size_t>(i)])});
            }
        result.files_written.push_back(cfg.out_dir / "jumps_per_msa.csv");
    }
    for (const std::string group : {"national", "ca_coastal", "ca_inland"}) {
        auto members = jump_group(jumps, d.panel, group);
        if (members.empty()) continue;
        Series inc = jump_incidence(members, JumpThresholdTag::big);
        write_series_csv(cfg.out_dir / ("jump_incidence_" + group + ".csv"), inc,
                         {"quarter", "pct"}, result);
    }
}

void write_pairs_csv(const fs::path& path, const PairCorrelationList& list,
                     StageResult& result) {
    csv::Writer w(path);
    w.row({"id_a", "id_b", "r", "n", "t"});
    for (const auto& p : list.pairs)
        w.row({p.id_a, p.id_b, format_double(p.r), std::to_string(p.n_obs),
               format_double(p.t_stat)});
    result.files_written.push_back(path);
}

void stage_correlate(const RunConfig& cfg, PipelineData& d, StageResult& result) {
    const auto& jumps = jumps_of(cfg, d);

    PairCorrelationList ret_con =
        return_corr_all_pairs(d.panel, CorrMode::contemporaneous, cfg.corr_min_overlap);
    PairCorrelationList ret_lead =
        return_corr_all_pairs(d.panel, CorrMode::lead, cfg.corr_min_overlap);
    PairCorrelationList jmp_con =
        jump_corr_all_pairs(jumps, CorrMode::contemporaneous, cfg.jump_corr);
    PairCorrelationList jmp_lead = jump_corr_all_pairs(jumps, CorrMode::lead, cfg.jump_corr);

    write_pairs_csv(cfg.out_dir / "corr_pairs_return_contemporaneous.csv", ret_con, result);
    write_pairs_csv(cfg.out_dir / "corr_pairs_return_lead.csv", ret_lead, result);
    write_pairs_csv(cfg.out_dir / "corr_pairs_jump_contemporaneous.csv", jmp_con, result);
    write_pairs_csv(cfg.out_dir / "corr_pairs_jump_lead.csv", jmp_lead, result);

    {
        csv::Writer w(cfg.out_dir / "table3.csv");
        w.row({"panel", "stratum", "n", "mean", "sigma", "t_stat", "max", "min"});
        auto emit = [&](const std::string& panel, const PairCorrelationList& list) {
            for (const auto& s : stratify(list.pairs, cfg.corr_t_thresholds))
                w.row({panel, s.tag, std::to_string(s.n), format_double(s.mean),
                       format_double(s.sigma), format_double(s.mean_t), format_double(s.max),
                       format_double(s.min)});
        };
        emit("return", ret_con);
        emit("jump", jmp_con);
        result.files_written.push_back(cfg.out_dir / "table3.csv");
    }
    {
        csv::Writer w(cfg.out_dir / "table4.csv");
        w.row({"panel", "mode", "division", "n", "n_significant", "pct_significant", "mean_r"});
        auto emit = [&](const std::string& panel, const std::string& mode,
                        const PairCorrelationList& list) {
            for (const auto& row :
                 division_summary(list.pairs, d.panel.metadata, cfg.division_t_threshold))
                w.row({panel, mode, row.division, std::to_string(row.n),
                       std::to_string(row.n_significant), format_double(row.pct_significant),
                       format_double(row.mean_r)});
        };
        emit("return", "contemporaneous", ret_con);
        emit("return", "lead", ret_lead);
        emit("jump", "contemporaneous", jmp_con);
        emit("jump", "lead", jmp_lead);
        result.files_written.push_back(cfg.out_dir / "table4.csv");
    }
}

std::string slug(const std::string& name) {
    std::string s;
    for (char c : name)
        s += (c == ' ' || c == '/') ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

void write_contagion_table(const fs::path& path, const std::vector<ContagionFit>& fits,
                           const std::string& primary, bool interaction, StageResult& result) {
    csv::Writer w(path);
    std::vector<std::string> header = {"satellite", "n", "constant", "constant_t"};
    int n_lags = fits.empty() ? 3 : fits.front().n_lags;
    for (int l = 0; l <= n_lags; ++l) {
        header.push_back("lag" + std::to_string(l));
        header.push_back("lag" + std::to_string(l) + "_t");
    }
    if (interaction)
        for (int l = 0; l <= n_lags; ++l) {
            header.push_back("ix_lag" + std::to_string(l));
            header.push_back("ix_lag" + std::to_string(l) + "_t");
        }
    header.insert(header.end(), {"r_squared", "durbin_watson", "co_applied", "rho"});
    w.row(header);
    for (const auto& f : fits) {
        if (f.primary_msa != primary) continue;
        std::vector<std::string> row = {f.satellite_msa, std::to_string(f.n_obs),
                                        format_double(f.constant), format_double(f.constant_t)};
        for (size_t l = 0; l < f.lag_coeffs.size(); ++l) {
            row.push_back(format_double(f.lag_coeffs[l]));
            row.push_back(format_double(f.lag_t_stats[l]));
        }
        if (interaction)
            for (size_t l = 0; l < f.interaction_coeffs.size(); ++l) {
                row.push_back(format_double(f.interaction_coeffs[l]));
                row.push_back(format_double(f.interaction_t_stats[l]));
            }
        row.push_back(format_double(f.r_squared));
        row.push_back(format_double(f.durbin_watson));
        row.push_back(f.co_applied ? "1" : "0");
        row.push_back(format_double(f.rho));
        w.row(row);
    }
    result.files_written.push_back(path);
}

void stage_contagion(const RunConfig& cfg, PipelineData& d, StageResult& result) {
    ContagionSuite suite = contagion_suite(cfg.region, d.panel, cfg.interaction,
                                           cfg.serial_policy, cfg.n_lags);
    for (const auto& [primary_key, sats] : cfg.region.groups) {
        // Fits carry resolved ids; resolve the key the same way for matching.
        std::string primary = primary_key;
        for (const auto& f : suite.plain)
            if (f.primary_msa == primary_key ||
                (d.panel.metadata.count(f.primary_msa) &&
                 d.panel.metadata.at(f.primary_msa).name == primary_key)) {
                primary = f.primary_msa;
                break;
            }
        write_contagion_table(cfg.out_dir / ("table5_" + slug(primary_key) + ".csv"),
                              suite.plain, primary, false, result);
        write_contagion_table(cfg.out_dir / ("table6_" + slug(primary_key) + ".csv"),
                              suite.interacted, primary, true, result);
    }
    {
        csv::Writer w(cfg.out_dir / "contagion_long.csv");
        w.row({"primary", "satellite", "variant", "term", "coefficient", "t_stat"});
        auto emit = [&](const std::vector<ContagionFit>& fits, const std::string& variant) {
            for (const auto& f : fits) {
                w.row({f.primary_msa, f.satellite_msa, variant, "constant",
                       format_double(f.constant), format_double(f.constant_t)});
                for (size_t l = 0; l < f.lag_coeffs.size(); ++l)
                    w.row({f.primary_msa, f.satellite_msa, variant, "lag" + std::to_string(l),
                           format_double(f.lag_coeffs[l]), format_double(f.lag_t_stats[l])});
                for (size_t l = 0; l < f.interaction_coeffs.size(); ++l)
                    w.row({f.primary_msa, f.satellite_msa, variant, "ix_lag" + std::to_string(l),
                           format_double(f.interaction_coeffs[l]),
                           format_double(f.interaction_t_stats[l])});
            }
        };
        emit(suite.plain, "plain");
        emit(suite.interacted, "interaction");
        result.files_written.push_back(cfg.out_dir / "contagion_long.csv");
    }
}

void stage_figures(const RunConfig& cfg, PipelineData& d, StageResult& result) {
    // fig1: equal-weighted US and CA index levels, rebased to 100 at the base quarter.
    {
        std::vector<std::string> all_ids, ca_ids;
        for (const auto& [id, meta] : d.panel.metadata) {
            if (!d.panel.series.count(id)) continue;
            all_ids.push_back(id);
            if (meta.census_division == kDivisionCalifornia) ca_ids.push_back(id);
        }
        if (all_ids.empty()) throw DataError("figures: empty panel");
        Series us = equal_weighted_log_index(d.panel, all_ids, cfg.ew_index_averaging);
        std::optional<Series> ca;
        if (!ca_ids.empty())
            ca = equal_weighted_log_index(d.panel, ca_ids, cfg.ew_index_averaging);

        if (!us.covers(cfg.fig_base_quarter))
            throw DataError("figures: base quarter " + cfg.fig_base_quarter.str() +
                            " outside the equal-weighted index coverage");
        const double us_base = us.at(cfg.fig_base_quarter);
        const double ca_base =
            ca && ca->covers(cfg.fig_base_quarter) ? ca->at(cfg.fig_base_quarter) : 0.0;

        csv::Writer w(cfg.out_dir / "fig1.csv");
        w.row(ca ? std::vector<std::string>{"quarter", "us_index", "ca_index"}
                 : std::vector<std::string>{"quarter", "us_index"});
        for (int i = 0; i < us.length(); ++i) {
            QuarterId q = us.start + i;
            std::vector<std::string> row = {
                q.str(), format_double(100.0 * std::exp(us.at(q) - us_base))};
            if (ca) {
                if (ca->covers(q) && ca->covers(cfg.fig_base_quarter))
                    row.push_back(format_double(100.0 * std::exp(ca->at(q) - ca_base)));
                else
                    row.push_back("nan");
            }
            w.row(row);
        }
        result.files_written.push_back(cfg.out_dir / "fig1.csv");
    }

    const auto& integ = integration_of(cfg, d);
    auto write_long = [&](const fs::path& path, const std::map<std::string, Series>& series_map) {
        csv::Writer w(path);
        w.row({"series", "quarter", "value"});
        for (const auto& [name, s] : series_map)
            for (int i = 0; i < s.length(); ++i)
                w.row({name, (s.start + i).str(), format_double(s.values[static_cast<size_t>(i)])});
        result.files_written.push_back(path);
    };

    {
        std::map<std::string, Series> m;
        std::vector<const IntegrationSeries*> all;
        QuarterId from(0);
        bool first = true;
        for (const auto& [id, is] : integ) {
            all.push_back(&is);
            if (first || is.r2.start < from) from = is.r2.start;
            first = false;
        }
        if (!all.empty()) m["us"] = mean_r2_series(all, from);
        for (auto& [name, s] : group_averages(integ, d.panel.metadata, GroupBy::census_division))
            if (name == "ca") m["ca"] = s;
        write_long(cfg.out_dir / "fig2a.csv", m);
    }
    write_long(cfg.out_dir / "fig2b.csv", cohort_averages(integ, cfg.cohort_starts));
    {
        std::map<std::string, Series> m;
        for (auto& [name, s] : group_averages(integ, d.panel.metadata, GroupBy::coast_flag))
            if (name != "not_ca") m[name] = s;
        write_long(cfg.out_dir / "fig2c.csv", m);
    }

    const auto& jumps = jumps_of(cfg, d);
    {
        auto members = jump_group(jumps, d.panel, "national");
        if (members.empty()) throw DataError("figures: no jump series");
        write_series_csv(cfg.out_dir / "fig3a.csv",
                         jump_incidence(members, JumpThresholdTag::big), {"quarter", "pct"},
                         result);
    }
    {
        csv::Writer w(cfg.out_dir / "fig3b.csv");
        w.row({"group", "quarter", "pct"});
        for (const std::string group : {"ca_coastal", "ca_inland"}) {
            auto members = jump_group(jumps, d.panel, group);
            if (members.empty()) continue;
            Series inc = jump_incidence(members, JumpThresholdTag::big);
            for (int i = 0; i < inc.length(); ++i)
                w.row({group, (inc.start + i).str(),
                       format_double(inc.values[static_cast<size_t>(i)])});
        }
        result.files_written.push_back(cfg.out_dir / "fig3b.csv");
    }
}

void run_stage(Stage s, const RunConfig& cfg, PipelineData& d, StageResult& result) {
    switch (s) {
        case Stage::ingest: stage_ingest(cfg, d, result); break;
        case Stage::integrate: stage_integrate(cfg, d, result); break;
        case Stage::jumps: stage_jumps(cfg, d, result); break;
        case Stage::correlate: stage_correlate(cfg, d, result); break;
        case Stage::contagion: stage_contagion(cfg, d, result); break;
        case Stage::figures: stage_figures(cfg, d, result); break;
    }
}

}  // namespace

StageResult run_stages(const RunConfig& cfg, const std::set<Stage>& stages) {
    std::filesystem::create_directories(cfg.out_dir);
    PipelineData d = load_inputs(cfg);
    StageResult result;
    for (Stage s : stages) run_stage(s, cfg, d, result);
    return result;
}

std::string file_hash(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("file_hash: cannot open " + path.string());
    unsigned long long h = 14695981039346656037ULL;
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ULL;
        }
        if (in.eof()) break;
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", h);
    return out;
}

long long file_row_count(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("file_row_count: cannot open " + path.string());
    long long rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    return rows;
}

int run_all(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);

    nlohmann::ordered_json manifest;
    manifest["status"] = "ok";
    auto& config_json = manifest["config"] = nlohmann::ordered_json::array();
    for (const auto& [k, v] : config_echo(cfg)) config_json.push_back({{k, v}});

    StageResult all;
    std::string failed_stage;
    std::string failure_message;
    std::exception_ptr failure;
    try {
        PipelineData d = load_inputs(cfg);
        for (Stage s : {Stage::ingest, Stage::integrate, Stage::jumps, Stage::correlate,
                        Stage::contagion, Stage::figures}) {
            failed_stage = stage_name(s);
            run_stage(s, cfg, d, all);
        }
        failed_stage.clear();
    } catch (const std::exception& e) {
        manifest["status"] = "failed";
        manifest["failed_stage"] = failed_stage.empty() ? "load" : failed_stage;
        failure_message = e.what();
        manifest["error"] = failure_message;
        failure = std::current_exception();
    }

    std::sort(all.files_written.begin(), all.files_written.end());
    auto& files = manifest["files"] = nlohmann::ordered_json::array();
    for (const auto& p : all.files_written) {
        files.push_back({{"name", p.filename().string()},
                         {"rows", file_row_count(p)},
                         {"fnv1a64", file_hash(p)}});
    }
    {
        std::ofstream f(cfg.out_dir / "manifest.json", std::ios::binary | std::ios::trunc);
        f << manifest.dump(2) << "\n";
    }
    if (failure) std::rethrow_exception(failure);
    return 0;
}

}  // namespace hpt
