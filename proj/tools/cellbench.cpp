// Command-line front end. Every verb writes its outputs under --out.
#include <algorithm>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cellbench/core/errors.hpp"
#include "cellbench/core/io.hpp"
#include "cellbench/core/rng.hpp"
#include "cellbench/evalmetrics/correlation.hpp"
#include "cellbench/evalmetrics/similarity.hpp"
#include "cellbench/featbase/features.hpp"
#include "cellbench/featbase/image.hpp"
#include "cellbench/harness/benchmark.hpp"
#include "cellbench/harness/config.hpp"
#include "cellbench/harness/interchange.hpp"
#include "cellbench/pointsynth/dataset.hpp"
#include "cellbench/regress/pca.hpp"
#include "cellbench/tissuegraph/graph.hpp"
#include "cellbench/tissuegraph/raster.hpp"
#include "cellbench/tissuegraph/spots.hpp"

namespace fs = std::filesystem;
using namespace cellbench;
using nlohmann::json;

namespace {

const std::set<std::string> kEvalVerbs{"eval-retrieval", "eval-map", "eval-regression", "eval-knn"};
const std::vector<std::string> kVerbs{"synth-gen",   "render-graph",   "bin-spots",       "feat-pixel",
                                      "feat-singleconv", "feat-cellcount", "eval-retrieval", "eval-map",
                                      "eval-regression", "eval-knn",   "rsa",             "pca-diag",
                                      "report"};

struct Globals {
    std::uint64_t seed = 0;
    std::string config;
    std::string out;
};

fs::path require_out(const Globals &g) {
    if (g.out.empty()) throw ConfigError("--out is required");
    return fs::path(g.out);
}

// ---------------------------------------------------------------- synth-gen

struct SynthArgs {
    std::size_t train = 1000, val = 100, test = 1000;
};

void run_synth(const Globals &g, const SynthArgs &a) {
    synth::write_dataset(require_out(g), {a.train, a.val, a.test}, g.seed);
}

// ------------------------------------------------------------- render-graph

struct RenderArgs {
    std::string input;
    std::size_t k = 5;
    int size = 224;
    int native = 224;
    int edge_width = 1;
    bool pgm = false;
};

void run_render(const Globals &g, const RenderArgs &a) {
    const fs::path out = require_out(g);
    const fs::path input(a.input);
    if (a.k == 0) throw ConfigError("--k must be positive");
    if (a.size <= 0 || a.native <= 0 || a.edge_width <= 0) throw ConfigError("raster sizes must be positive");

    // Sample files grouped by their directory relative to the input.
    std::map<fs::path, std::vector<fs::path>> groups;
    if (fs::is_regular_file(input)) {
        groups[fs::path()].push_back(input);
    } else if (fs::is_directory(input)) {
        for (const auto &e : fs::recursive_directory_iterator(input))
            if (e.is_regular_file() && e.path().extension() == ".csv" && e.path().filename() != "manifest.csv")
                groups[fs::relative(e.path().parent_path(), input)].push_back(e.path());
    } else {
        throw DataError(DataErrorCode::MissingFile, a.input + ": no such file or directory");
    }

    graph::RenderOptions opts;
    opts.edge_width = a.edge_width;
    opts.native_width = opts.native_height = a.native;
    opts.out_width = opts.out_height = a.size;
    for (auto &[rel, files] : groups) {
        std::sort(files.begin(), files.end());
        const fs::path dir = rel.empty() || rel == "." ? out : out / rel;
        std::string manifest = "item_id,path,label,seed\n";
        for (const auto &file : files) {
            const PointPattern pattern = synth::read_sample(file);
            const PointPattern norm = graph::normalize_coords(pattern);
            const auto knn = graph::knn_graph(norm.points, a.k);
            const auto raster = graph::render_edges(norm.points, knn.graph, opts);

            feat::MultiChannelImage image(1, raster.height, raster.width);
            for (std::size_t i = 0; i < raster.bits.size(); ++i) image.data[i] = raster.bits[i];
            const std::string stem = file.stem().string();
            feat::write_raw(dir / (stem + ".raw"), image);
            if (a.pgm) io::write_file_atomic(dir / (stem + ".pgm"), graph::encode_pgm(raster));
            manifest += io::csv_row({stem, stem + ".raw",
                                     pattern.class_id ? std::to_string(*pattern.class_id) : std::string(),
                                     std::to_string(pattern.seed)});
        }
        io::write_file_atomic(dir / "manifest.csv", manifest);
    }
}

// ---------------------------------------------------------------- bin-spots

struct BinArgs {
    std::string spots;
    std::string cells;
    std::string targets;
    double patch_um = 0.0;
    std::size_t render_k = 0;
    int size = 224;
};

void run_bin(const Globals &g, const BinArgs &a) {
    const fs::path out = require_out(g);
    const graph::SpotGrid grid = graph::read_spot_grid(a.spots);
    const double extent = a.patch_um > 0.0 ? a.patch_um : 224.0 * grid.pixel_size_um;
    auto patches = graph::bin_spots(grid, extent);

    graph::CellTable cells;
    if (!a.cells.empty()) {
        cells = graph::read_cells(a.cells);
        patches = graph::drop_empty_patches(std::move(patches), cells.centroids);
    }

    std::vector<std::string> genes;
    if (!a.targets.empty()) {
        const auto per_spot = graph::read_targets(a.targets, genes);
        for (auto &p : patches) p.averaged_targets = graph::average_targets(p, per_spot);
        std::vector<std::string> header{"item_id"};
        header.insert(header.end(), genes.begin(), genes.end());
        std::string csv = io::csv_row(header);
        for (const auto &p : patches) {
            std::vector<std::string> row{p.anchor_spot_id};
            for (double v : p.averaged_targets) row.push_back(io::format_double(v));
            csv += io::csv_row(row);
        }
        io::write_file_atomic(out / "targets.csv", csv);
    }

    std::string csv = "item_id,members,x0,y0,x1,y1,n_cells\n";
    for (const auto &p : patches) {
        std::string members;
        for (const auto &m : p.member_spot_ids) members += (members.empty() ? "" : ";") + m;
        const auto &b = p.bounding_box;
        csv += io::csv_row({p.anchor_spot_id, members, io::format_double(b.x0), io::format_double(b.y0),
                            io::format_double(b.x1), io::format_double(b.y1),
                            a.cells.empty() ? std::string() : std::to_string(graph::count_cells_in_box(b, cells.centroids))});
    }
    io::write_file_atomic(out / "patches.csv", csv);

    if (a.render_k == 0) return;
    if (a.cells.empty()) throw ConfigError("--render-k needs --cells");
    std::string manifest = "item_id,path,n_cells\n";
    for (const auto &p : patches) {
        const auto &b = p.bounding_box;
        const auto inside = graph::cells_in_box(b, cells.centroids);
        graph::RenderOptions opts;
        std::tie(opts.native_width, opts.native_height) = graph::native_size_for_extent(b.width(), b.height(), grid.pixel_size_um);
        opts.out_width = opts.out_height = a.size;
        opts.viewport = {b.x0, b.y0, b.x1, b.y1};
        graph::EdgeList edges{inside.size(), {}};
        if (inside.size() >= 2) edges = graph::knn_graph(inside, a.render_k).graph;
        const auto raster = graph::render_edges(inside, edges, opts);
        feat::MultiChannelImage image(1, raster.height, raster.width);
        for (std::size_t i = 0; i < raster.bits.size(); ++i) image.data[i] = raster.bits[i];
        feat::write_raw(out / "graphs" / (p.anchor_spot_id + ".raw"), image);
        manifest += io::csv_row({p.anchor_spot_id, p.anchor_spot_id + ".raw", std::to_string(inside.size())});
    }
    io::write_file_atomic(out / "graphs" / "manifest.csv", manifest);
}

// ------------------------------------------------------------ feature verbs

// Manifest rows with every column beyond item_id and path kept as metadata.
struct ManifestItem {
    std::string id;
    fs::path path;
    MetaMap meta;
};

std::vector<ManifestItem> read_items(const fs::path &manifest) {
    const auto paths = feat::read_manifest(manifest);
    const auto csv = io::read_csv(manifest);
    std::vector<ManifestItem> items;
    for (std::size_t r = 0; r < paths.size(); ++r) {
        ManifestItem item{paths[r].first, paths[r].second, {}};
        for (std::size_t c = 0; c < csv.header.size(); ++c)
            if (csv.header[c] != "item_id" && csv.header[c] != "path") item.meta[csv.header[c]] = csv.rows[r][c];
        items.push_back(std::move(item));
    }
    return items;
}

struct PixelArgs {
    std::string manifest;
    std::string mode = "mean_std_skew";
    std::string name = "pixel";
};

void run_pixel(const Globals &g, const PixelArgs &a) {
    const fs::path out = require_out(g);
    feat::PixelMode mode;
    if (a.mode == "mean") mode = feat::PixelMode::MeanOnly;
    else if (a.mode == "mean_std_skew") mode = feat::PixelMode::MeanStdSkew;
    else throw ConfigError("--mode must be mean or mean_std_skew");
    EmbeddingTable table;
    for (auto &item : read_items(a.manifest)) {
        const auto f = feat::pixel_features(feat::read_raw(item.path), mode);
        table.add_row(item.id, std::span<const double>(f.values), std::move(item.meta));
    }
    harness::write_table(table, out / a.name);
}

struct ConvArgs {
    std::string manifest;
    int filters = 256;
    int kernel = 3;
    std::string activation = "identity";
    std::string name = "singleconv";
};

void run_singleconv(const Globals &g, const ConvArgs &a) {
    const fs::path out = require_out(g);
    feat::Activation act;
    if (a.activation == "identity") act = feat::Activation::Identity;
    else if (a.activation == "relu") act = feat::Activation::Relu;
    else throw ConfigError("--activation must be identity or relu");
    EmbeddingTable table;
    std::unique_ptr<feat::FilterBank> bank;
    for (auto &item : read_items(a.manifest)) {
        const auto image = feat::read_raw(item.path);
        if (!bank)
            bank = std::make_unique<feat::FilterBank>(feat::random_filters(a.filters, image.channels, a.kernel, g.seed));
        if (image.channels != bank->channels)
            throw DataError(DataErrorCode::DimMismatch, item.path.string() + ": channel count differs from the first image");
        const auto f = feat::singleconv_apply(image, *bank, act);
        table.add_row(item.id, std::span<const double>(f.values), std::move(item.meta));
    }
    harness::write_table(table, out / a.name);
}

struct CountArgs {
    std::string counts;
    bool standardize = false;
    std::string name = "cellcount";
};

void run_cellcount(const Globals &g, const CountArgs &a) {
    const fs::path out = require_out(g);
    const auto csv = io::read_csv(a.counts);
    const auto c_id = csv.column("item_id"), c_count = csv.column("count");
    std::vector<std::uint64_t> counts;
    for (const auto &row : csv.rows) {
        const long long c = io::parse_int(row[c_count], "count");
        if (c < 0) throw DataError(DataErrorCode::BadFormat, a.counts + ": negative count for '" + row[c_id] + "'");
        counts.push_back(static_cast<std::uint64_t>(c));
    }
    feat::CellCountStandardizer standardizer;
    if (a.standardize) standardizer = feat::CellCountStandardizer::fit(counts);

    EmbeddingTable table;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        MetaMap meta;
        for (std::size_t c = 0; c < csv.header.size(); ++c)
            if (c != c_id) meta[csv.header[c]] = csv.rows[r][c];
        const auto f = feat::cellcount_features(counts[r], derive_seed(g.seed, {r}),
                                                a.standardize ? &standardizer : nullptr);
        table.add_row(csv.rows[r][c_id], std::span<const double>(f.values), std::move(meta));
    }
    harness::write_table(table, out / a.name);
}

// --------------------------------------------------------------- eval verbs

struct EvalOverrides {
    std::vector<std::string> tags;
};

void absolutize(CLI::App *sub, const char *flag, std::string &value) {
    const auto *opt = sub->get_option_no_throw(flag);
    if (opt && opt->count() > 0 && !value.empty()) value = fs::absolute(value).string();
}

void run_eval(const Globals &g, bool seed_given, CLI::App *sub, harness::RunConfig &cfg, const EvalOverrides &o,
              harness::BenchmarkKind kind) {
    if (cfg.kind != kind)
        throw ConfigError(std::string("config is for '") + harness::to_string(cfg.kind) + "' but the verb runs '" +
                          harness::to_string(kind) + "'");
    if (sub->get_option("--table")->count() > 0) cfg.table = fs::absolute(cfg.table).string();
    if (seed_given || g.config.empty()) cfg.seed = g.seed;
    for (const auto &t : o.tags) {
        const auto eq = t.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--tag expects key=value, got '" + t + "'");
        cfg.tags[t.substr(0, eq)] = t.substr(eq + 1);
    }
    if (cfg.table.empty()) throw ConfigError("--table (or 'table' in the config) is required");
    harness::run_benchmark(cfg, require_out(g));
}

// ---------------------------------------------------------------------- rsa

struct RsaArgs {
    std::vector<std::string> tables;
    std::vector<std::string> names;
};

void run_rsa(const Globals &g, const RsaArgs &a) {
    const fs::path out = require_out(g);
    if (a.tables.size() < 2) throw ConfigError("rsa needs at least two --table inputs");
    if (!a.names.empty() && a.names.size() != a.tables.size()) throw ConfigError("--name count must match --table count");

    std::vector<std::vector<double>> rankings;
    std::vector<std::string> names;
    std::vector<std::string> ids;
    for (std::size_t t = 0; t < a.tables.size(); ++t) {
        const EmbeddingTable table = harness::read_table(a.tables[t]);
        names.push_back(a.names.empty() ? harness::table_prefix(a.tables[t]).filename().string() : a.names[t]);
        if (t == 0) ids = table.ids;
        // Align every table to the first one's item order.
        std::vector<std::size_t> rows;
        for (const auto &id : ids) {
            const auto it = std::find(table.ids.begin(), table.ids.end(), id);
            if (it == table.ids.end())
                throw DataError(DataErrorCode::UnresolvedIds, a.tables[t] + ": missing item '" + id + "'");
            rows.push_back(static_cast<std::size_t>(it - table.ids.begin()));
        }
        if (table.size() != ids.size())
            throw DataError(DataErrorCode::CountMismatch, a.tables[t] + ": item set differs from the first table");
        rankings.push_back(metrics::pair_similarities(metrics::cosine_matrix(table.subset(rows))));
    }
    const auto r = metrics::rsa_matrix(rankings, names);

    std::vector<std::string> header{"model"};
    header.insert(header.end(), r.names.begin(), r.names.end());
    std::string csv = io::csv_row(header);
    for (std::size_t i = 0; i < r.names.size(); ++i) {
        std::vector<std::string> row{r.names[i]};
        for (std::size_t j = 0; j < r.names.size(); ++j)
            row.push_back(io::format_double(r.correlation(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
        csv += io::csv_row(row);
    }
    io::write_file_atomic(out / "rsa.csv", csv);

    std::string dendro = "step,left,right,distance,size\n";
    for (std::size_t s = 0; s < r.dendrogram.merges.size(); ++s) {
        const auto &m = r.dendrogram.merges[s];
        dendro += io::csv_row({std::to_string(s), std::to_string(m.left), std::to_string(m.right),
                               io::format_double(m.distance), std::to_string(m.size)});
    }
    io::write_file_atomic(out / "dendrogram.csv", dendro);

    std::string order = "position,model\n";
    for (std::size_t p = 0; p < r.dendrogram.leaf_order.size(); ++p)
        order += io::csv_row({std::to_string(p), r.names[r.dendrogram.leaf_order[p]]});
    io::write_file_atomic(out / "leaf_order.csv", order);
}

// ----------------------------------------------------------------- pca-diag

struct PcaArgs {
    std::string table;
    std::size_t components = 256;
};

void run_pca(const Globals &g, const PcaArgs &a) {
    const fs::path out = require_out(g);
    const Matrix x = harness::read_table(a.table).matrix();
    if (x.rows() < 3) throw DataError(DataErrorCode::DegenerateInput, "pca-diag needs at least 3 items");
    const auto model = regress::pca_fit(x, a.components);
    std::string csv = "component,explained_variance_ratio,cumulative\n";
    double cumulative = 0.0;
    for (Eigen::Index c = 0; c < model.explained_variance_ratio.size(); ++c) {
        cumulative += model.explained_variance_ratio(c);
        csv += io::csv_row({std::to_string(c), io::format_double(model.explained_variance_ratio(c)),
                            io::format_double(cumulative)});
    }
    io::write_file_atomic(out / "pca_diag.csv", csv);
    nlohmann::ordered_json j;
    j["n_items"] = x.rows();
    j["dim"] = x.cols();
    j["components"] = model.components.rows();
    j["capped"] = model.capped;
    j["first2"] = regress::variance_explained_first2(x);
    io::write_file_atomic(out / "pca_diag.json", j.dump(2) + "\n");
}

// ------------------------------------------------------------------- report

struct ReportArgs {
    std::vector<std::string> inputs;
    std::string format = "csv";
};

void run_report(const Globals &g, const ReportArgs &a) {
    const fs::path out = require_out(g);
    const auto format = harness::parse_report_format(a.format);
    std::vector<harness::Report> reports;
    for (const auto &in : a.inputs) {
        fs::path p(in);
        if (fs::is_directory(p)) p /= "report.json";
        reports.push_back(harness::read_report(p));
    }
    if (reports.empty()) throw ConfigError("report needs at least one --input");
    if (format == harness::ReportFormat::PlotData) {
        harness::emit_plot_data(reports, out);
        return;
    }
    if (reports.size() != 1) throw ConfigError("csv and json formats take a single --input");
    // Summaries are recomputed from the persisted raw values.
    auto r = reports.front();
    const auto extra = std::find_if(r.summary.begin(), r.summary.end(),
                                    [](const auto &s) { return s.metric == "global_pcc"; });
    std::optional<harness::SummaryRow> global;
    if (extra != r.summary.end()) global = *extra;
    r.summary = harness::summarize(r.raw);
    if (global) r.summary.push_back(*global);
    harness::emit_report(r, format, out);
}

// ------------------------------------------------------------ config plumbing

// Position of the verb in argv, or 0.
int find_verb(int argc, char **argv) {
    for (int i = 1; i < argc; ++i)
        if (std::find(kVerbs.begin(), kVerbs.end(), argv[i]) != kVerbs.end()) return i;
    return 0;
}

std::string find_config(int argc, char **argv) {
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--config") == 0 && i + 1 < argc) return argv[i + 1];
        if (std::strncmp(argv[i], "--config=", 9) == 0) return argv[i] + 9;
    }
    return {};
}

// A flat JSON object turned into `--key value` arguments for the verb.
std::vector<std::string> config_to_args(const fs::path &path) {
    json j;
    try {
        j = json::parse(io::read_file(path));
    } catch (const json::exception &e) {
        throw ConfigError(path.string() + ": invalid JSON: " + e.what());
    } catch (const DataError &e) {
        throw ConfigError(e.what());
    }
    if (!j.is_object()) throw ConfigError(path.string() + ": expected a JSON object");
    std::vector<std::string> args;
    const auto scalar = [&](const std::string &key, const json &v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_integer() || v.is_number_unsigned() || v.is_number_float()) return v.dump();
        throw ConfigError(path.string() + ": unsupported value for '" + key + "'");
    };
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string flag = "--" + it.key();
        if (it->is_boolean()) {
            if (it->get<bool>()) args.push_back(flag);
        } else if (it->is_array()) {
            for (const auto &v : *it) {
                args.push_back(flag);
                args.push_back(scalar(it.key(), v));
            }
        } else {
            args.push_back(flag);
            args.push_back(scalar(it.key(), *it));
        }
    }
    return args;
}

int run(int argc, char **argv) {
    const int verb_at = find_verb(argc, argv);
    const std::string verb = verb_at ? argv[verb_at] : "";
    const std::string config_path = find_config(argc, argv);

    harness::RunConfig cfg;
    std::vector<std::string> args(argv, argv + argc);
    if (!config_path.empty() && verb_at) {
        if (kEvalVerbs.count(verb)) {
            cfg = harness::load_config(config_path);
        } else {
            auto extra = config_to_args(config_path);
            args.insert(args.begin() + verb_at + 1, extra.begin(), extra.end());
        }
    } else if (kEvalVerbs.count(verb)) {
        cfg.kind = harness::parse_benchmark_kind(verb.substr(5));
    }

    CLI::App app{"Benchmark toolkit for cell-image embeddings"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    Globals g;
    auto *seed_opt = app.add_option("--seed", g.seed, "master seed")->capture_default_str();
    app.add_option("--config", g.config, "JSON config (run config for eval verbs, flag values otherwise)");
    app.add_option("--out", g.out, "output directory");
    app.fallthrough();

    const auto add_sub = [&](const char *name, const char *desc) {
        auto *s = app.add_subcommand(name, desc);
        s->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        return s;
    };

    SynthArgs synth_a;
    auto *synth = add_sub("synth-gen", "generate the synthetic point-pattern dataset");
    synth->add_option("--train", synth_a.train)->capture_default_str();
    synth->add_option("--val", synth_a.val)->capture_default_str();
    synth->add_option("--test", synth_a.test)->capture_default_str();

    RenderArgs render_a;
    auto *render = add_sub("render-graph", "render kNN cell graphs of point samples");
    render->add_option("--input", render_a.input, "sample file or directory")->required();
    render->add_option("--k", render_a.k)->capture_default_str();
    render->add_option("--size", render_a.size, "output raster side")->capture_default_str();
    render->add_option("--native", render_a.native, "native raster side")->capture_default_str();
    render->add_option("--edge-width", render_a.edge_width)->capture_default_str();
    render->add_flag("--pgm", render_a.pgm, "also write PGM previews");

    BinArgs bin_a;
    auto *bin = add_sub("bin-spots", "bin capture spots into patches");
    bin->add_option("--spots", bin_a.spots, "spot_id,x_um,y_um,grid_kind,pixel_size_um CSV")->required();
    bin->add_option("--cells", bin_a.cells, "cell_id,x_um,y_um CSV");
    bin->add_option("--targets", bin_a.targets, "per-spot item_id,g1..gG CSV");
    bin->add_option("--patch-um", bin_a.patch_um, "patch side in micrometres (default 224 pixels)");
    bin->add_option("--render-k", bin_a.render_k, "render per-patch kNN graphs with this k");
    bin->add_option("--size", bin_a.size)->capture_default_str();

    PixelArgs pixel_a;
    auto *pixel = add_sub("feat-pixel", "channel-wise pixel statistics");
    pixel->add_option("--manifest", pixel_a.manifest, "item_id,path[,meta...] CSV")->required();
    pixel->add_option("--mode", pixel_a.mode)->capture_default_str();
    pixel->add_option("--name", pixel_a.name)->capture_default_str();

    ConvArgs conv_a;
    auto *conv = add_sub("feat-singleconv", "random single-convolution features");
    conv->add_option("--manifest", conv_a.manifest)->required();
    conv->add_option("--filters", conv_a.filters)->capture_default_str();
    conv->add_option("--kernel", conv_a.kernel)->capture_default_str();
    conv->add_option("--activation", conv_a.activation)->capture_default_str();
    conv->add_option("--name", conv_a.name)->capture_default_str();

    CountArgs count_a;
    auto *count = add_sub("feat-cellcount", "cell-count embeddings");
    count->add_option("--counts", count_a.counts, "item_id,count[,meta...] CSV")->required();
    count->add_flag("--standardize", count_a.standardize);
    count->add_option("--name", count_a.name)->capture_default_str();

    EvalOverrides over;
    const auto add_eval = [&](const char *name, const char *desc) {
        auto *s = add_sub(name, desc);
        s->add_option("--table", cfg.table, "embedding table prefix");
        s->add_option("--tag", over.tags, "key=value report tag (model, family, stage)")
            ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
        s->add_option("--center", cfg.profiles.center, "none | negcon_per_plate");
        s->add_option("--aggregate", cfg.profiles.aggregate, "mean | median");
        s->add_option("--plate-key", cfg.profiles.plate_key);
        s->add_option("--control-key", cfg.profiles.control_key);
        s->add_option("--negative-value", cfg.profiles.negative_value);
        return s;
    };
    auto *ev_ret = add_eval("eval-retrieval", "recall of known relationships among gene profiles");
    ev_ret->add_option("--pairs", cfg.retrieval.pairs, "id_a,id_b,source CSV");
    ev_ret->add_option("--q", cfg.retrieval.q);
    ev_ret->add_option("--tail", cfg.retrieval.tail, "top | bottom");
    ev_ret->add_option("--mode", cfg.retrieval.mode, "global | per_query");
    ev_ret->add_option("--gene-key", cfg.retrieval.gene_key);
    ev_ret->add_option("--n-per", cfg.retrieval.n_per);
    ev_ret->add_option("--folds", cfg.retrieval.folds);

    auto *ev_map = add_eval("eval-map", "replicate retrieval mAP");
    ev_map->add_option("--label-key", cfg.map.label_key);
    ev_map->add_option("--profile-key", cfg.map.profile_key);
    ev_map->add_option("--exclude", cfg.map.exclude_labels)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    ev_map->add_option("--folds", cfg.map.folds);
    ev_map->add_option("--plates-per-lab", cfg.map.plates_per_lab);
    ev_map->add_option("--lab-key", cfg.map.lab_key);

    bool no_intercept = false;
    auto *ev_reg = add_eval("eval-regression", "PCA + ridge expression regression");
    ev_reg->add_option("--targets", cfg.regression.targets, "item_id,g1..gG CSV");
    ev_reg->add_option("--components", cfg.regression.components);
    ev_reg->add_option("--alpha", cfg.regression.alpha);
    ev_reg->add_flag("--no-intercept", no_intercept);
    ev_reg->add_option("--fold-key", cfg.regression.fold_key);
    ev_reg->add_option("--dataset-key", cfg.regression.dataset_key);

    auto *ev_knn = add_eval("eval-knn", "kNN classification probe");
    ev_knn->add_option("--test-table", cfg.knn.test_table);
    ev_knn->add_option("--label-key", cfg.knn.label_key);
    ev_knn->add_option("--k", cfg.knn.k);

    RsaArgs rsa_a;
    auto *rsa = add_sub("rsa", "representational similarity between models");
    rsa->add_option("--table", rsa_a.tables, "embedding table prefix (repeat)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    rsa->add_option("--name", rsa_a.names, "model name per table (repeat)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

    PcaArgs pca_a;
    auto *pca = add_sub("pca-diag", "explained variance of an embedding table");
    pca->add_option("--table", pca_a.table)->required();
    pca->add_option("--components", pca_a.components)->capture_default_str();

    ReportArgs report_a;
    auto *report = add_sub("report", "re-emit reports as CSV, JSON or plot data");
    report->add_option("--input", report_a.inputs, "report.json or run directory (repeat)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    report->add_option("--format", report_a.format, "csv | json | plot")->capture_default_str();

    std::reverse(args.begin(), args.end());
    args.pop_back(); // program name
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }
    if (no_intercept) cfg.regression.fit_intercept = false;

    if (*synth) run_synth(g, synth_a);
    else if (*render) run_render(g, render_a);
    else if (*bin) run_bin(g, bin_a);
    else if (*pixel) run_pixel(g, pixel_a);
    else if (*conv) run_singleconv(g, conv_a);
    else if (*count) run_cellcount(g, count_a);
    else if (*rsa) run_rsa(g, rsa_a);
    else if (*pca) run_pca(g, pca_a);
    else if (*report) run_report(g, report_a);
    else {
        CLI::App *sub = *ev_ret ? ev_ret : *ev_map ? ev_map : *ev_reg ? ev_reg : ev_knn;
        absolutize(sub, "--pairs", cfg.retrieval.pairs);
        absolutize(sub, "--targets", cfg.regression.targets);
        absolutize(sub, "--test-table", cfg.knn.test_table);
        run_eval(g, seed_opt->count() > 0, sub, cfg, over, harness::parse_benchmark_kind(verb.substr(5)));
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    try {
        return run(argc, argv);
    } catch (const ConfigError &e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const DataError &e) {
        std::fprintf(stderr, "data error [%s]: %s\n", to_string(e.code()), e.what());
        return 3;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
