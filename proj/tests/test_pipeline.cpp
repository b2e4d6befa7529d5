#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "hpt/pipeline.hpp"
#include "hpt/synth.hpp"

using namespace hpt;
namespace fs = std::filesystem;

namespace {

RunConfig synth_config(const fs::path& root, unsigned long long seed = 77) {
    RunConfig cfg;
    cfg.synth.n_msas = 6;
    cfg.synth.n_quarters = 60;
    cfg.synth.jumps_per_msa = 1;
    cfg.seed = seed;
    SynthOutputs so = generate_synthetic(cfg.synth, seed, root / "data");
    cfg.hpi_csv = so.hpi_csv;
    cfg.factor_csv = so.factor_csv;
    cfg.out_dir = root / "out";
    cfg.report_span = {QuarterId::parse("1983Q4"), QuarterId::parse("1994Q1")};
    cfg.region.groups = {{"msa001", {"msa002", "msa003"}}};
    return cfg;
}

fs::path fresh_dir(const char* name) {
    fs::path root = fs::temp_directory_path() / name;
    fs::remove_all(root);
    fs::create_directories(root);
    return root;
}

}  // namespace

TEST_CASE("stage names round trip and unknown names fail") {
    for (Stage s : {Stage::ingest, Stage::integrate, Stage::jumps, Stage::correlate,
                    Stage::contagion, Stage::figures})
        CHECK(parse_stage(stage_name(s)) == s);
    CHECK_THROWS_AS(parse_stage("compile"), ConfigError);
}

TEST_CASE("fnv-1a file hash and row count") {
    fs::path root = fresh_dir("hpt_hash_test");
    fs::path f = root / "x.txt";
    {
        std::ofstream out(f, std::ios::binary);
        out << "abc";
    }
    // Reference FNV-1a 64 of "abc".
    CHECK(file_hash(f) == "e71fa2190541574b");
    {
        std::ofstream out(f, std::ios::binary);
        out << "h\nrow1\nrow2\n";
    }
    CHECK(file_row_count(f) == 3);
    CHECK_THROWS_AS(file_hash(root / "missing"), DataError);
}

TEST_CASE("synthetic generator is deterministic and writes its truth sidecar") {
    fs::path root = fresh_dir("hpt_synth_test");
    SynthConfig sc;
    sc.n_msas = 4;
    sc.n_quarters = 50;
    sc.jumps_per_msa = 2;
    SynthOutputs a = generate_synthetic(sc, 5, root / "a");
    SynthOutputs b = generate_synthetic(sc, 5, root / "b");
    CHECK(file_hash(a.hpi_csv) == file_hash(b.hpi_csv));
    CHECK(file_hash(a.factor_csv) == file_hash(b.factor_csv));

    SynthOutputs c = generate_synthetic(sc, 6, root / "c");
    CHECK(file_hash(a.hpi_csv) != file_hash(c.hpi_csv));

    std::ifstream tf(a.truth_json);
    nlohmann::json truth = nlohmann::json::parse(tf);
    CHECK(truth["seed"] == 5);
    CHECK(truth["injected_jumps"].size() == 8);
}

TEST_CASE("full run emits the manifest and is byte-stable") {
    fs::path root = fresh_dir("hpt_run_test");
    RunConfig cfg = synth_config(root);
    CHECK(run_all(cfg) == 0);

    std::ifstream mf(cfg.out_dir / "manifest.json");
    REQUIRE(mf.good());
    nlohmann::json manifest = nlohmann::json::parse(mf);
    CHECK(manifest["status"] == "ok");
    CHECK(manifest["files"].size() >= 15);
    for (const auto& f : manifest["files"]) {
        fs::path p = cfg.out_dir / f["name"].get<std::string>();
        CHECK(fs::exists(p));
        CHECK(file_hash(p) == f["fnv1a64"].get<std::string>());
        CHECK(file_row_count(p) == f["rows"].get<long long>());
    }

    // A second run into another directory produces identical bytes.
    RunConfig cfg2 = cfg;
    cfg2.out_dir = root / "out2";
    run_all(cfg2);
    for (const auto& f : manifest["files"]) {
        const std::string name = f["name"].get<std::string>();
        CHECK(file_hash(cfg.out_dir / name) == file_hash(cfg2.out_dir / name));
    }
}

TEST_CASE("single-stage invocations compose to the full run") {
    fs::path root = fresh_dir("hpt_stage_test");
    RunConfig cfg = synth_config(root);
    run_all(cfg);

    RunConfig staged = cfg;
    staged.out_dir = root / "staged";
    for (Stage s : {Stage::ingest, Stage::integrate, Stage::jumps, Stage::correlate,
                    Stage::contagion, Stage::figures})
        run_stages(staged, {s});

    for (const auto& entry : fs::directory_iterator(cfg.out_dir)) {
        const std::string name = entry.path().filename().string();
        if (name == "manifest.json") continue;  // written by the full run only
        CHECK(fs::exists(staged.out_dir / name));
        CHECK(file_hash(entry.path()) == file_hash(staged.out_dir / name));
    }
}

TEST_CASE("a failing run still writes the manifest with the stage marked") {
    fs::path root = fresh_dir("hpt_fail_test");
    RunConfig cfg = synth_config(root);
    cfg.fig_base_quarter = QuarterId::parse("2050Q1");  // outside any coverage
    CHECK_THROWS_AS(run_all(cfg), DataError);

    std::ifstream mf(cfg.out_dir / "manifest.json");
    REQUIRE(mf.good());
    nlohmann::json manifest = nlohmann::json::parse(mf);
    CHECK(manifest["status"] == "failed");
    CHECK(manifest["failed_stage"] == "figures");
    // Earlier stages' outputs are retained.
    CHECK(fs::exists(cfg.out_dir / "returns_panel.csv"));
    CHECK(fs::exists(cfg.out_dir / "table3.csv"));
}

TEST_CASE("missing input paths fail before any stage") {
    fs::path root = fresh_dir("hpt_noinput_test");
    RunConfig cfg;
    cfg.out_dir = root / "out";
    CHECK_THROWS_AS(run_stages(cfg, {Stage::ingest}), ConfigError);
}
