#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <set>

#include "cellbench/core/errors.hpp"
#include "cellbench/core/io.hpp"
#include "cellbench/core/rng.hpp"
#include "cellbench/evalmetrics/retrieval.hpp"
#include "cellbench/harness/benchmark.hpp"
#include "cellbench/harness/folds.hpp"
#include "cellbench/harness/interchange.hpp"
#include "cellbench/harness/profiles.hpp"
#include "scratch.hpp"

using namespace cellbench;
using namespace cellbench::harness;
namespace fs = std::filesystem;

namespace {

EmbeddingTable random_table(Rng &rng, std::size_t n, std::size_t d) {
    EmbeddingTable t;
    std::vector<double> row(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto &v : row) v = rng.normal();
        t.add_row("item" + std::to_string(i), std::span<const double>(row), {{"plate", "p" + std::to_string(i % 3)}});
    }
    return t;
}

DataErrorCode read_error(const fs::path &prefix) {
    try {
        read_table(prefix);
    } catch (const DataError &e) {
        return e.code();
    }
    return DataErrorCode::Generic;
}

std::string file_bytes(const fs::path &p) { return io::read_file(p); }

// 5 genes x 12 images; genes g0-g1 and g2-g3 share a direction.
EmbeddingTable gene_table(Rng &rng) {
    const std::vector<std::vector<double>> centers{{1, 0, 0, 0}, {1, 0.2, 0, 0}, {0, 1, 0, 0}, {0, 1, 0.2, 0}, {0, 0, 0, 1}};
    EmbeddingTable t;
    for (std::size_t g = 0; g < centers.size(); ++g)
        for (int k = 0; k < 12; ++k) {
            std::vector<double> row(4);
            for (std::size_t d = 0; d < 4; ++d) row[d] = centers[g][d] + 0.05 * rng.normal();
            t.add_row("img_g" + std::to_string(g) + "_" + std::to_string(k), std::span<const double>(row),
                      {{"gene", "g" + std::to_string(g)}});
        }
    return t;
}

} // namespace

TEST_SUITE("harness") {

TEST_CASE("interchange round-trip and byte-identical rewrite") {
    ScratchDir dir("io");
    Rng rng(1);
    auto t = random_table(rng, 7, 5);
    t.meta[2]["note"] = "has,comma \"quoted\"";
    t.meta_keys.push_back("note");
    write_table(t, dir / "emb");
    const auto back = read_table(dir / "emb");
    CHECK(back == t);
    CHECK(read_table(dir / "emb.manifest.json") == t);
    write_table(back, dir / "copy");
    for (const char *ext : {".manifest.json", ".f32", ".meta.csv"})
        CHECK(file_bytes(dir / (std::string("emb") + ext)) == file_bytes(dir / (std::string("copy") + ext)));
    CHECK(file_bytes(dir / "emb.manifest.json").rfind("{\"version\":1,\"n_items\":7,\"dim\":5,\"dtype\":\"f32le\",", 0) == 0);
}

TEST_CASE("interchange errors carry distinct codes") {
    ScratchDir dir("ioerr");
    Rng rng(2);
    const auto t = random_table(rng, 4, 3);
    const auto fresh = [&](const std::string &name) {
        write_table(t, dir / name);
        return dir / name;
    };

    CHECK(read_error(dir / "absent") == DataErrorCode::MissingFile);

    auto p = fresh("trunc");
    auto payload = file_bytes(p.string() + ".f32");
    io::write_file_atomic(p.string() + ".f32", payload.substr(0, payload.size() - 4));
    CHECK(read_error(p) == DataErrorCode::PayloadSize);

    p = fresh("nan");
    payload = file_bytes(p.string() + ".f32");
    const float nan = std::nanf("");
    std::memcpy(payload.data() + 2 * 3 * 4 + 4, &nan, 4);
    io::write_file_atomic(p.string() + ".f32", payload);
    CHECK(read_error(p) == DataErrorCode::NonFinite);
    try {
        read_table(p);
    } catch (const DataError &e) {
        CHECK(std::string(e.what()).find("row 2") != std::string::npos);
        CHECK(std::string(e.what()).find("item2") != std::string::npos);
    }

    const auto with_manifest = [&](const std::string &name, const std::string &json) {
        auto q = fresh(name);
        io::write_file_atomic(q.string() + ".manifest.json", json);
        return q;
    };
    CHECK(read_error(with_manifest("count", R"({"version":1,"n_items":5,"dim":3,"dtype":"f32le","ids":["item0","item1","item2","item3"],"meta_keys":["plate"]})")) ==
          DataErrorCode::CountMismatch);
    CHECK(read_error(with_manifest("dup", R"({"version":1,"n_items":4,"dim":3,"dtype":"f32le","ids":["a","a","b","c"],"meta_keys":[]})")) ==
          DataErrorCode::DuplicateId);
    CHECK(read_error(with_manifest("dim", R"({"version":1,"n_items":4,"dim":0,"dtype":"f32le","ids":["a","b","c","d"],"meta_keys":[]})")) ==
          DataErrorCode::DimMismatch);
    CHECK(read_error(with_manifest("ver", R"({"version":2,"n_items":4,"dim":3,"dtype":"f32le","ids":["a","b","c","d"],"meta_keys":[]})")) ==
          DataErrorCode::UnsupportedVersion);
    CHECK(read_error(with_manifest("json", "{not json")) == DataErrorCode::BadFormat);
    CHECK(read_error(with_manifest("dtype", R"({"version":1,"n_items":4,"dim":3,"dtype":"f64le","ids":["a","b","c","d"],"meta_keys":[]})")) ==
          DataErrorCode::BadFormat);
}

TEST_CASE("writing an invalid table is refused") {
    ScratchDir dir("iow");
    EmbeddingTable t;
    const std::vector<double> row{1.0, 2.0};
    t.add_row("a", std::span<const double>(row));
    t.add_row("a", std::span<const double>(row));
    CHECK_THROWS_AS(write_table(t, dir / "bad"), DataError);
    CHECK_FALSE(fs::exists(dir / "bad.manifest.json"));
}

TEST_CASE("profiles: single members map to themselves") {
    Rng rng(3);
    auto t = random_table(rng, 5, 4);
    for (std::size_t i = 0; i < t.size(); ++i) t.meta[i]["well"] = "w" + std::to_string(i);
    t.meta_keys.push_back("well");
    const auto p = build_profiles(t, "well");
    REQUIRE(p.size() == 5);
    CHECK(p.data == t.data);
    CHECK(*p.meta_value(0, "n_members") == "1");
    CHECK(*p.meta_value(0, "plate") == "p0");
}

TEST_CASE("profiles: group mean equals the naive sum") {
    Rng rng(4);
    auto t = random_table(rng, 9, 6);
    for (std::size_t i = 0; i < t.size(); ++i) t.meta[i]["cpd"] = "c" + std::to_string(i / 3);
    t.meta_keys.push_back("cpd");
    const auto p = build_profiles(t, "cpd");
    REQUIRE(p.ids == std::vector<std::string>{"c0", "c1", "c2"});
    for (std::size_t g = 0; g < 3; ++g)
        for (std::size_t d = 0; d < 6; ++d) {
            double s = 0;
            for (std::size_t i = 3 * g; i < 3 * g + 3; ++i) s += t.data[i * 6 + d];
            CHECK(std::abs(p.data[g * 6 + d] - static_cast<float>(s / 3.0)) <= 1e-12);
        }
    // Plates differ within each group, so plate is not carried.
    CHECK(p.meta_value(0, "plate") == nullptr);
    CHECK(*p.meta_value(0, "n_members") == "3");

    // Member order does not matter.
    std::vector<std::size_t> perm{8, 3, 5, 0, 7, 1, 2, 6, 4};
    const auto q = build_profiles(t.subset(perm), "cpd");
    for (std::size_t g = 0; g < 3; ++g) {
        const auto qi = q.index_of(p.ids[g]);
        for (std::size_t d = 0; d < 6; ++d) CHECK(q.data[qi * 6 + d] == p.data[g * 6 + d]);
    }

    ProfileOptions med;
    med.aggregate = Aggregate::Median;
    const auto m = build_profiles(t, "cpd", med);
    std::vector<float> col{t.data[0], t.data[6], t.data[12]};
    std::sort(col.begin(), col.end());
    CHECK(m.data[0] == col[1]);
    CHECK_THROWS_AS(build_profiles(t, "absent"), DataError);
}

TEST_CASE("profiles: negative-control centering") {
    Rng rng(5);
    auto t = random_table(rng, 30, 4);
    for (std::size_t i = 0; i < t.size(); ++i) {
        t.meta[i]["control"] = i % 5 == 0 || i % 7 == 0 ? "negative" : "treated";
        t.meta[i]["cpd"] = "c" + std::to_string(i % 4);
    }
    t.meta_keys.insert(t.meta_keys.end(), {"control", "cpd"});
    ProfileOptions opts;
    opts.center = Centering::NegControlPerPlate;
    const Matrix c = center_on_negative_controls(t, opts);
    for (const std::string plate : {"p0", "p1", "p2"}) {
        Vector sum = Vector::Zero(4);
        int n = 0;
        for (std::size_t i = 0; i < t.size(); ++i)
            if (*t.meta_value(i, "plate") == plate && *t.meta_value(i, "control") == "negative") {
                sum += c.row(static_cast<Eigen::Index>(i)).transpose();
                ++n;
            }
        REQUIRE(n > 0);
        CHECK((sum / n).cwiseAbs().maxCoeff() <= 1e-9);
    }
    CHECK(build_profiles(t, "cpd", opts).size() == 4);

    for (std::size_t i = 0; i < t.size(); ++i)
        if (*t.meta_value(i, "plate") != "p0") t.meta[i]["control"] = "treated";
    try {
        center_on_negative_controls(t, opts);
        FAIL("expected an error");
    } catch (const DataError &e) {
        CHECK(e.code() == DataErrorCode::MissingControls);
        CHECK(std::string(e.what()).find("p1, p2") != std::string::npos);
    }
}

TEST_CASE("folds: per-gene subsampling") {
    EmbeddingTable t;
    const std::vector<double> row{1.0};
    for (int i = 0; i < 30; ++i) t.add_row("a" + std::to_string(i), std::span<const double>(row), {{"gene", "A"}});
    for (int i = 0; i < 40; ++i) t.add_row("b" + std::to_string(i), std::span<const double>(row), {{"gene", "B"}});
    for (int i = 0; i < 7; ++i) t.add_row("c" + std::to_string(i), std::span<const double>(row), {{"gene", "C"}});
    const auto f = make_folds(t, PerGeneSubsample{}, 42);
    std::map<std::pair<char, int>, int> counts;
    for (const auto &[id, fold] : f.fold_of) ++counts[{id[0], fold}];
    for (int k = 0; k < 3; ++k) {
        CHECK(counts[{'a', k}] == 10);
        CHECK(counts[{'b', k}] == 10);
        CHECK(counts[{'c', k}] >= 2);
        CHECK(counts[{'c', k}] <= 3);
    }
    CHECK(f.fold_of.size() == 30 + 30 + 7);
    CHECK(f.warnings.size() == 1);
    CHECK(make_folds(t, PerGeneSubsample{}, 42) == f);
    CHECK_FALSE(make_folds(t, PerGeneSubsample{}, 43) == f);
    // Input row order does not change the assignment.
    std::vector<std::size_t> rev(t.size());
    for (std::size_t i = 0; i < rev.size(); ++i) rev[i] = rev.size() - 1 - i;
    CHECK(make_folds(t.subset(rev), PerGeneSubsample{}, 42) == f);
}

TEST_CASE("folds: plate-grouped over labs") {
    EmbeddingTable t;
    const std::vector<double> row{1.0};
    for (int lab = 0; lab < 7; ++lab)
        for (int plate = 0; plate < 20; ++plate)
            for (int well = 0; well < 3; ++well)
                t.add_row("l" + std::to_string(lab) + "p" + std::to_string(plate) + "w" + std::to_string(well),
                          std::span<const double>(row),
                          {{"lab", "L" + std::to_string(lab)}, {"plate", "L" + std::to_string(lab) + "P" + std::to_string(plate)}});
    const auto f = make_folds(t, PlateGrouped{}, 7);
    CHECK(f.n_folds == 5);
    std::map<int, std::set<std::string>> plates;
    std::map<std::string, std::set<int>> folds_of_plate;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto it = f.fold_of.find(t.ids[i]);
        REQUIRE(it != f.fold_of.end());
        plates[it->second].insert(*t.meta_value(i, "plate"));
        folds_of_plate[*t.meta_value(i, "plate")].insert(it->second);
    }
    for (int k = 0; k < 5; ++k) CHECK(plates[k].size() == 28);
    for (const auto &[p, fs_] : folds_of_plate) CHECK(fs_.size() == 1);
    CHECK(f.warnings.empty());
    CHECK(make_folds(t, PlateGrouped{}, 7) == f);
}

TEST_CASE("folds stay disjoint and bounded on random metadata") {
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        EmbeddingTable t;
        const std::vector<double> row{0.0};
        const std::size_t n = 20 + rng.below(200);
        for (std::size_t i = 0; i < n; ++i)
            t.add_row("x" + std::to_string(i), std::span<const double>(row), {{"gene", "G" + std::to_string(rng.below(8))}});
        PerGeneSubsample s{1 + rng.below(12), static_cast<int>(1 + rng.below(5)), "gene"};
        const auto f = make_folds(t, s, rng.next());
        std::map<std::pair<std::string, int>, std::size_t> per;
        std::map<std::string, std::size_t> supply;
        for (std::size_t i = 0; i < n; ++i) ++supply[*t.meta_value(i, "gene")];
        for (std::size_t i = 0; i < n; ++i) {
            const auto it = f.fold_of.find(t.ids[i]);
            if (it == f.fold_of.end()) continue;
            CHECK(it->second >= 0);
            CHECK(it->second < s.folds);
            ++per[{*t.meta_value(i, "gene"), it->second}];
        }
        for (const auto &[key, c] : per) {
            CHECK(c <= s.n_per);
            if (supply[key.first] >= s.n_per * static_cast<std::size_t>(s.folds)) CHECK(c == s.n_per);
        }
    }
}

TEST_CASE("run config serialization and hash") {
    RunConfig c;
    c.kind = BenchmarkKind::Map;
    c.table = "emb";
    c.map.exclude_labels = {"DMSO"};
    const auto j = to_json(c);
    const auto back = config_from_json(nlohmann::json::parse(j.dump()));
    CHECK(to_json(back).dump() == j.dump());
    CHECK(config_hash(back) == config_hash(c));
    CHECK(config_hash(c).size() == 16);
    c.map.folds = 4;
    CHECK(config_hash(c) != config_hash(back));
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"benchmark":"map","table":"x","typo":1})")), ConfigError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"benchmark":"nope","table":"x"})")), ConfigError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"benchmark":"map","table":"x","map":{"folds":"two"}})")), ConfigError);
}

TEST_CASE("retrieval benchmark on a toy gene table") {
    ScratchDir dir("ret");
    Rng rng(8);
    write_table(gene_table(rng), dir / "genes");
    io::write_file_atomic(dir / "pairs.csv", "id_a,id_b,source\ng0,g1,complexes\ng2,g3,complexes\ng0,g4,other\n");
    RunConfig c;
    c.kind = BenchmarkKind::Retrieval;
    c.table = "genes";
    c.retrieval.pairs = "pairs.csv";
    c.retrieval.n_per = 4;
    c.retrieval.q = 0.2;
    c.base_dir = dir.path();
    const auto r = run_benchmark(c, dir / "out1");
    std::size_t complexes = 0;
    for (const auto &v : r.raw)
        if (v.target == "complexes") {
            ++complexes;
            CHECK(v.metric == "recall_top");
            CHECK(v.value == 1.0); // 2 of 10 pairs selected, both true pairs
        }
    CHECK(complexes == 3);
    REQUIRE(r.summary.size() == 2);
    CHECK(r.summary[0].n == 3);
    CHECK(r.summary[0].mean == 1.0);
    CHECK(r.summary[0].std == 0.0);
    CHECK(r.summary[1].mean == 0.0);
    CHECK(r.config_hash == config_hash(c));

    run_benchmark(c, dir / "out2");
    CHECK(file_bytes(dir / "out1" / "raw.csv") == file_bytes(dir / "out2" / "raw.csv"));
    CHECK(file_bytes(dir / "out1" / "report.json") == file_bytes(dir / "out2" / "report.json"));
    const auto reread = read_report(dir / "out1" / "report.json");
    CHECK(reread.raw.size() == r.raw.size());
    CHECK(parse_raw_csv(file_bytes(dir / "out1" / "raw.csv")).size() == r.raw.size());
}

TEST_CASE("mAP benchmark matches direct evaluation") {
    ScratchDir dir("map");
    Rng rng(9);
    EmbeddingTable t;
    std::vector<std::string> labels;
    std::vector<double> row(6);
    for (int g = 0; g < 8; ++g)
        for (int k = 0; k < 5; ++k) {
            for (auto &v : row) v = rng.normal();
            row[static_cast<std::size_t>(g % 6)] += 1.5;
            labels.push_back("cpd" + std::to_string(g));
            t.add_row("w" + std::to_string(g) + "_" + std::to_string(k), std::span<const double>(row),
                      {{"compound", labels.back()}, {"plate", "P" + std::to_string(k)}});
        }
    write_table(t, dir / "wells");
    RunConfig c;
    c.kind = BenchmarkKind::Map;
    c.table = (dir / "wells").string();
    c.map.folds = 0;
    const auto r = run_benchmark(c);
    const auto oracle = metrics::map_retrieval(t.matrix(), labels);
    std::size_t n_ap = 0;
    for (const auto &v : r.raw) {
        if (v.metric == "ap") {
            ++n_ap;
            CHECK(v.value == oracle.group_ap.at(v.target));
        }
        if (v.metric == "map") CHECK(v.value == oracle.mean_ap);
    }
    CHECK(n_ap == 8);

    // Excluding a label drops its group.
    c.map.exclude_labels = {"cpd0"};
    const auto r2 = run_benchmark(c);
    for (const auto &v : r2.raw) CHECK(v.target != "cpd0");
}

TEST_CASE("regression and kNN benchmarks") {
    ScratchDir dir("reg");
    Rng rng(10);
    EmbeddingTable t;
    std::string targets = "item_id,geneA,geneB\n";
    std::vector<double> row(5);
    for (int i = 0; i < 60; ++i) {
        for (auto &v : row) v = rng.normal();
        const std::string id = "spot" + std::to_string(i);
        t.add_row(id, std::span<const double>(row),
                  {{"fold", std::to_string(i % 3)}, {"dataset", i < 30 ? "D1" : "D2"}, {"label", row[0] > 0 ? "pos" : "neg"}});
        targets += id + "," + io::format_double(2.0 * t.row(static_cast<std::size_t>(i))[0]) + "," +
                   io::format_double(t.row(static_cast<std::size_t>(i))[1] - t.row(static_cast<std::size_t>(i))[2]) + "\n";
    }
    write_table(t, dir / "spots");
    io::write_file_atomic(dir / "targets.csv", targets);
    RunConfig c;
    c.kind = BenchmarkKind::Regression;
    c.table = "spots";
    c.regression.targets = "targets.csv";
    c.regression.components = 5;
    c.regression.alpha = 1e-6;
    c.base_dir = dir.path();
    const auto r = run_benchmark(c);
    std::size_t pcc = 0;
    for (const auto &v : r.raw)
        if (v.metric == "pcc") {
            ++pcc;
            CHECK(v.value > 0.999);
        }
    CHECK(pcc == 2 * 3 * 2);
    CHECK(r.summary.back().metric == "global_pcc");
    CHECK(r.summary.back().n == 2);
    CHECK(r.summary.back().mean > 0.999);

    c.kind = BenchmarkKind::Knn;
    c.knn.test_table = "spots";
    c.knn.k = 1;
    const auto k = run_benchmark(c);
    REQUIRE(k.raw.size() == 1);
    CHECK(k.raw[0].value == 1.0);

    c.knn.test_table = "missing";
    try {
        run_benchmark(c);
        FAIL("expected an error");
    } catch (const DataError &e) {
        CHECK(e.code() == DataErrorCode::MissingFile);
        CHECK(std::string(e.what()).rfind("knn: ", 0) == 0);
    }
}

TEST_CASE("report emission") {
    ScratchDir dir("rep");
    Report a;
    a.benchmark = "map";
    a.tool_version = kToolVersion;
    a.config_hash = "0";
    a.tags = {{"model", "m1"}, {"family", "resnet"}, {"stage", "2"}};
    a.raw = {{"ap", "", "c0", 0, 0.5}, {"ap", "", "c0", 1, 0.7}, {"map", "", "", 0, 0.4}, {"map", "", "", 1, 0.6}};
    a.summary = summarize(a.raw);
    Report b = a;
    b.tags["model"] = "m2";
    b.raw = {{"ap", "", "c0", 0, 0.9}, {"ap", "", "c0", 1, 0.9}, {"map", "", "", 0, 0.1}, {"map", "", "", 1, 0.3}};
    b.summary = summarize(b.raw);

    emit_report(a, ReportFormat::CsvDir, dir / "csv");
    CHECK(fs::exists(dir / "csv" / "ap.csv"));
    CHECK(fs::exists(dir / "csv" / "map.csv"));
    CHECK(fs::exists(dir / "csv" / "summary.csv"));
    CHECK(file_bytes(dir / "csv" / "map.csv") == "dataset,target,fold,value\n,,0,0.40000000000000002\n,,1,0.59999999999999998\n");

    // Error bars are the population std across folds, recomputed from raw values.
    CHECK(a.summary[0].std == doctest::Approx(0.1));
    CHECK(a.summary[1].mean == doctest::Approx(0.5));

    emit_plot_data({a, b}, dir / "plot");
    const auto bars = io::read_csv(dir / "plot" / "bars.csv");
    CHECK(bars.rows.size() == 4);
    CHECK(bars.rows[0][bars.column("std")] == io::format_double(a.summary[0].std));
    const auto stages = io::read_csv(dir / "plot" / "stages.csv");
    REQUIRE(stages.rows.size() == 2);
    const auto &ap_row = stages.rows[0];
    CHECK(io::parse_double(ap_row[stages.column("min")], "min") == doctest::Approx(0.6));
    CHECK(io::parse_double(ap_row[stages.column("max")], "max") == doctest::Approx(0.9));
    CHECK(ap_row[stages.column("n_models")] == "2");

    emit_report(a, ReportFormat::JsonFile, dir / "json");
    const auto back = read_report(dir / "json" / "report.json");
    CHECK(back.summary.size() == a.summary.size());
    CHECK(back.tags == a.tags);
}

} // TEST_SUITE
