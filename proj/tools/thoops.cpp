// thoops: command-line driver for the tensor pipeline.
//
// Every subcommand writes its artifact to --out and a sibling
// <out>.manifest recording version, seed, configuration and the FNV-1a
// hashes of its inputs. Exit codes: 0 ok, 1 usage, 2 data, 3 internal.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thoops/analytics.hpp"
#include "thoops/corcondia.hpp"
#include "thoops/court.hpp"
#include "thoops/cp_kl.hpp"
#include "thoops/error.hpp"
#include "thoops/ingest.hpp"
#include "thoops/random.hpp"
#include "thoops/rank_select.hpp"
#include "thoops/tensor.hpp"
#include "thoops/version.hpp"

namespace fs = std::filesystem;
using namespace thoops;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

class Manifest {
public:
    explicit Manifest(std::string command) : command_(std::move(command)) {}

    void seed(std::uint64_t s) { seed_ = s; }
    template <class T>
    void set(const std::string& key, const T& value) {
        std::ostringstream ss;
        ss << std::setprecision(17) << value;
        config_[key] = ss.str();
    }
    // Inputs are recorded by file name so runs in different directories agree.
    void input(const std::string& role, const std::string& path) {
        std::ostringstream ss;
        ss << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(read_file(path));
        inputs_.push_back(role + ' ' + fs::path(path).filename().string() + " fnv1a64:" + ss.str());
    }

    void write(const std::string& out_path) const {
        std::ofstream out(out_path + ".manifest");
        if (!out) throw DataError("cannot write " + out_path + ".manifest");
        out << "tool thoops\n"
            << "version " << version() << '\n'
            << "command " << command_ << '\n';
        if (seed_) out << "seed " << *seed_ << '\n';
        for (const auto& [k, v] : config_) out << "config " << k << ' ' << v << '\n';
        for (const auto& line : inputs_) out << "input " << line << '\n';
    }

private:
    std::string command_;
    std::optional<std::uint64_t> seed_;
    std::map<std::string, std::string> config_;
    std::vector<std::string> inputs_;
};

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    return out;
}

CoordUnit parse_unit(const std::string& s) {
    if (s == "feet") return CoordUnit::Feet;
    if (s == "tenths") return CoordUnit::Tenths;
    throw UsageError("coordinate unit must be 'feet' or 'tenths'");
}

const CourtZoneMap& zone_map(const std::string& path, std::optional<CourtZoneMap>& storage) {
    if (path.empty()) return default_court_zones();
    storage = load_zone_map(path);
    return *storage;
}

struct FitOptions {
    int max_iters = 500;
    double tol = 1e-6;
    int inner_iters = 10;
    std::uint64_t seed = 0;

    void add(CLI::App* app) {
        app->add_option("--seed", seed, "Random seed")->capture_default_str();
        app->add_option("--max-iters", max_iters, "Outer iterations")->capture_default_str();
        app->add_option("--tol", tol, "Relative objective tolerance")->capture_default_str();
        app->add_option("--inner-iters", inner_iters, "Multiplicative steps per mode")->capture_default_str();
    }
    FitConfig config() const {
        FitConfig c;
        c.max_outer_iters = max_iters;
        c.rel_tol = tol;
        c.inner_iters = inner_iters;
        c.seed = seed;
        return c;
    }
    void record(Manifest& m) const {
        m.seed(seed);
        m.set("max_iters", max_iters);
        m.set("tol", tol);
        m.set("inner_iters", inner_iters);
    }
};

std::vector<std::size_t> parse_grid(const std::string& text) {
    // "2,3,5" or "2:8" (inclusive) or "2:8:2".
    std::vector<std::size_t> grid;
    if (text.find(':') != std::string::npos) {
        std::vector<long> parts;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(std::stol(item));
        if (parts.size() < 2 || parts.size() > 3) throw UsageError("grid range must be lo:hi or lo:hi:step");
        const long step = parts.size() == 3 ? parts[2] : 1;
        if (parts[0] < 1 || parts[1] < parts[0] || step < 1) throw UsageError("bad grid range " + text);
        for (long f = parts[0]; f <= parts[1]; f += step) grid.push_back(static_cast<std::size_t>(f));
        return grid;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const long f = std::stol(item);
        if (f < 1) throw UsageError("grid ranks must be positive");
        grid.push_back(static_cast<std::size_t>(f));
    }
    if (grid.empty()) throw UsageError("empty rank grid");
    return grid;
}

struct OrientationOptions {
    int entity = 3;
    int spatial = 1;
    int temporal = 2;

    void add(CLI::App* app) {
        app->add_option("--entity-mode", entity, "Mode holding the entities")->capture_default_str();
        app->add_option("--spatial-mode", spatial, "Mode holding the zones")->capture_default_str();
        app->add_option("--temporal-mode", temporal, "Mode holding the time bins")->capture_default_str();
    }
    Orientation get() const {
        Orientation o{to_mode(entity), to_mode(spatial), to_mode(temporal)};
        o.validate();
        return o;
    }
    void record(Manifest& m) const {
        m.set("entity_mode", entity);
        m.set("spatial_mode", spatial);
        m.set("temporal_mode", temporal);
    }
};

// ------------------------------------------------------------------ ingest

struct IngestOptions {
    std::string shots;
    std::string tracking;
    bool made = false;
    bool missed = false;
    std::string zones;
    std::string unit = "feet";
    std::string delimiter = ",";
    bool strict = false;
    std::string out;
};

int run_ingest(const IngestOptions& o) {
    if (o.shots.empty() == o.tracking.empty()) throw UsageError("give exactly one of --shots or --tracking");
    std::optional<CourtZoneMap> storage;
    const CourtZoneMap& map = zone_map(o.zones, storage);
    Manifest m("ingest");
    m.set("unit", o.unit);
    if (!o.zones.empty()) m.input("zones", o.zones);

    SparseCountTensor tensor;
    if (!o.shots.empty()) {
        if (o.made && o.missed) throw UsageError("--made and --missed are exclusive");
        if (o.delimiter.size() != 1) throw UsageError("--delimiter must be one character");
        ShotFormat format;
        format.delimiter = o.delimiter[0];
        format.unit = parse_unit(o.unit);
        format.strict = o.strict;
        format.bounds = map.bounds();
        std::ifstream in(o.shots);
        if (!in) throw DataError("cannot open " + o.shots);
        const ShotParseResult parsed = parse_shots(in, format);
        for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << '\n';
        const ShotFilter filter = o.missed ? ShotFilter::Missed : ShotFilter::Made;
        const ShotTensor st = build_shot_tensor(parsed.events, filter, map);
        if (st.skipped > 0) std::cerr << "warning: " << st.skipped << " shots fell outside every zone\n";
        tensor = st.tensor;
        m.input("shots", o.shots);
        m.set("filter", o.missed ? "missed" : "made");
        m.set("strict", o.strict);
        std::cerr << parsed.events.size() << " shots read, " << parsed.skipped << " rows skipped\n";
    } else {
        TrackingFormat format;
        format.unit = parse_unit(o.unit);
        std::ifstream in(o.tracking);
        if (!in) throw DataError("cannot open " + o.tracking);
        const TrackingParseResult parsed = parse_tracking(in, map, format);
        for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << '\n';
        tensor = build_possession_tensor(parsed.snapshots, map);
        m.input("tracking", o.tracking);
        std::cerr << parsed.frames << " frames read, " << parsed.skipped_frames << " skipped\n";
    }
    std::ofstream out = open_out(o.out);
    write_tensor(out, tensor);
    m.write(o.out);
    std::cerr << "tensor " << tensor.dims()[0] << 'x' << tensor.dims()[1] << 'x' << tensor.dims()[2]
              << ", " << tensor.nnz() << " nonzeros\n";
    return 0;
}

// --------------------------------------------------------------- decompose

struct DecomposeOptions {
    std::string tensor;
    std::size_t rank = 0;
    FitOptions fit;
    std::string out;
};

int run_decompose(const DecomposeOptions& o) {
    const SparseCountTensor tensor = load_tensor(o.tensor);
    const CpModel model = fit_cp_kl(tensor, o.rank, o.fit.config());
    std::ofstream out = open_out(o.out);
    write_model(out, model);

    Manifest m("decompose");
    o.fit.record(m);
    m.set("rank", o.rank);
    m.input("tensor", o.tensor);
    m.write(o.out);

    for (const auto& flag : detect_degenerate(model)) {
        const char* kind = flag.kind == DegeneracyKind::Collapsed ? "collapsed"
                           : flag.kind == DegeneracyKind::Split   ? "split"
                                                                  : "near-duplicate";
        std::cerr << "degenerate: " << kind << ' ' << flag.first << ' ' << flag.second << ' ' << flag.value << '\n';
    }
    std::cerr << "objective " << std::setprecision(10) << model.fit_history.back() << " after "
              << model.fit_history.size() - 1 << " iterations\n";
    return 0;
}

// ---------------------------------------------------------------- diagnose

struct DiagnoseOptions {
    std::string tensor;
    std::vector<std::string> models;
    std::string grid;
    std::string method = "fast";
    FitOptions fit;
    std::string out;
};

int run_diagnose(const DiagnoseOptions& o) {
    if (o.models.empty() == o.grid.empty()) throw UsageError("give --model files or a --grid of ranks");
    if (o.method != "fast" && o.method != "reference") throw UsageError("--method must be fast or reference");
    const SparseCountTensor tensor = load_tensor(o.tensor);
    Manifest m("diagnose");
    m.set("method", o.method);
    m.input("tensor", o.tensor);

    std::vector<std::pair<std::string, CpModel>> models;
    if (!o.grid.empty()) {
        o.fit.record(m);
        m.set("grid", o.grid);
        for (std::size_t f : parse_grid(o.grid)) {
            FitConfig fc = o.fit.config();
            fc.seed = split_seed(o.fit.seed, f);
            models.emplace_back(std::to_string(f), fit_cp_kl(tensor, f, fc));
        }
    } else {
        for (const auto& path : o.models) {
            m.input("model", path);
            models.emplace_back(path, load_model(path));
        }
    }

    std::ofstream out = open_out(o.out);
    out << "F score truncated\n" << std::setprecision(10);
    std::cout << "F score seconds\n";
    for (const auto& [name, model] : models) {
        const auto t0 = std::chrono::steady_clock::now();
        const CorcondiaResult r =
            o.method == "fast" ? corcondia_fast(tensor, model) : corcondia_reference(tensor, model);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out << r.rank_used << ' ' << r.score << ' ' << r.truncated << '\n';
        std::cout << r.rank_used << ' ' << std::setprecision(10) << r.score << ' ' << std::setprecision(4)
                  << seconds << '\n';
    }
    m.write(o.out);
    return 0;
}

// ------------------------------------------------------------- select-rank

struct SelectOptions {
    std::string tensor;
    int mode = 1;
    std::string grid;
    std::size_t K = 10;
    double epsilon = 0.02;
    int restarts = 10;
    std::optional<double> min_silhouette;
    unsigned jobs = 1;
    FitOptions fit;
    std::string out;
};

int run_select(const SelectOptions& o) {
    const SparseCountTensor tensor = load_tensor(o.tensor);
    RankSelectConfig rc;
    rc.K = o.K;
    rc.epsilon = o.epsilon;
    rc.f_grid = parse_grid(o.grid);
    rc.restarts = o.restarts;
    rc.seed = o.fit.seed;
    rc.min_silhouette = o.min_silhouette;
    rc.jobs = o.jobs;
    const RankSelection sel = select_rank(tensor, to_mode(o.mode), rc, o.fit.config());

    std::ofstream out = open_out(o.out);
    out << std::setprecision(10);
    out << "# raw maxS " << sel.raw.max_value << " argmax_k " << sel.raw.argmax_k
        << (sel.raw.no_structure ? " no_structure" : "") << '\n';
    out << "F maxS argmax_k qualifies\n";
    for (const RankScore& s : sel.table) {
        out << s.rank << ' ' << s.profile.max_value << ' ' << s.profile.argmax_k << ' ' << (s.qualifies ? 1 : 0)
            << '\n';
    }
    out << "# chosen " << sel.chosen_rank << (sel.no_qualifier ? " no_qualifier" : "") << '\n';

    Manifest m("select-rank");
    o.fit.record(m);
    m.set("mode", o.mode);
    m.set("grid", o.grid);
    m.set("K", o.K);
    m.set("epsilon", o.epsilon);
    m.set("restarts", o.restarts);
    if (o.min_silhouette) m.set("min_silhouette", *o.min_silhouette);
    m.input("tensor", o.tensor);
    m.write(o.out);
    std::cout << sel.chosen_rank << '\n';
    return 0;
}

// ----------------------------------------------------------------- cluster

struct ClusterOptions {
    std::string model;
    int mode = 1;
    std::size_t K = 10;
    int restarts = 10;
    std::uint64_t seed = 0;
    std::string out;
};

int run_cluster(const ClusterOptions& o) {
    const CpModel model = load_model(o.model);
    const auto embeddings = embed_entities(model, to_mode(o.mode));
    RankSelectConfig rc;
    rc.K = o.K;
    rc.restarts = o.restarts;
    rc.seed = o.seed;
    const EntityClusters clusters = cluster_entities(embeddings, rc);
    std::ofstream out = open_out(o.out);
    write_clusters_csv(out, embeddings, clusters);

    Manifest m("cluster");
    m.seed(o.seed);
    m.set("mode", o.mode);
    m.set("K", o.K);
    m.set("restarts", o.restarts);
    m.input("model", o.model);
    m.write(o.out);
    if (clusters.no_structure) std::cerr << "warning: embeddings are identical; no cluster structure\n";
    std::cout << "k " << clusters.k << " silhouette " << clusters.profile.max_value << '\n';
    return 0;
}

// ------------------------------------------------------------------- query

struct QueryOptions {
    std::string model;
    std::string query;
    double theta = 0.5;
    std::optional<double> tau;
    double spatial_weight = 1.0;
    double temporal_weight = 1.0;
    OrientationOptions orientation;
    std::string out;
};

int run_query(const QueryOptions& o) {
    const CpModel model = load_model(o.model);
    IndexConfig ic;
    ic.orientation = o.orientation.get();
    ic.spatial_weight = o.spatial_weight;
    ic.temporal_weight = o.temporal_weight;
    if (o.tau) ic.tau = *o.tau;
    const ComponentIndex index = build_component_index(model, ic);
    std::ifstream qin(o.query);
    if (!qin) throw DataError("cannot open " + o.query);
    QuerySpec q = read_query(qin, index);
    q.theta = o.theta;
    q.tau = ic.tau;
    const QueryResult r = query(index, q);

    std::ofstream out = open_out(o.out);
    out << std::setprecision(10);
    for (const ComponentMatch& c : r.matched) out << "# component " << c.component << " sigma " << c.similarity << '\n';
    out << "entity score component\n";
    for (const QueryHit& h : r.hits) out << h.label << ' ' << h.score << ' ' << h.component << '\n';

    Manifest m("query");
    o.orientation.record(m);
    m.set("theta", o.theta);
    m.set("tau", ic.tau);
    m.set("spatial_weight", o.spatial_weight);
    m.set("temporal_weight", o.temporal_weight);
    m.input("model", o.model);
    m.input("query", o.query);
    m.write(o.out);
    std::cout << r.hits.size() << " hits from " << r.matched.size() << " of " << r.similarity_evaluations
              << " components\n";
    return 0;
}

// ------------------------------------------------------------------- synth

struct SynthOptions {
    std::string model;
    std::size_t events = 1000;
    std::uint64_t seed = 0;
    std::string zones;
    double made_rate = 0.5;
    std::string unit = "feet";
    int entity = 1;
    int spatial = 2;
    int temporal = 3;
    std::string out;
};

int run_synth(const SynthOptions& o) {
    const CpModel model = load_model(o.model);
    std::optional<CourtZoneMap> storage;
    const CourtZoneMap& map = zone_map(o.zones, storage);
    SynthConfig sc;
    sc.orientation = {to_mode(o.entity), to_mode(o.spatial), to_mode(o.temporal)};
    sc.made_rate = o.made_rate;
    const SynthResult r = generate_synthetic(model, o.events, map, o.seed, sc);
    for (const auto& d : r.diagnostics) std::cerr << "warning: " << d << '\n';
    std::ofstream out = open_out(o.out);
    write_shots_csv(out, r.events, parse_unit(o.unit));

    Manifest m("synth");
    m.seed(o.seed);
    m.set("events", o.events);
    m.set("made_rate", o.made_rate);
    m.set("unit", o.unit);
    m.set("entity_mode", o.entity);
    m.set("spatial_mode", o.spatial);
    m.set("temporal_mode", o.temporal);
    m.input("model", o.model);
    if (!o.zones.empty()) m.input("zones", o.zones);
    m.write(o.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse count-tensor decomposition for spatio-temporal sports data"};
    app.set_version_flag("--version", std::string(version()));
    app.require_subcommand(1);

    IngestOptions ingest;
    auto* c_ingest = app.add_subcommand("ingest", "Build a count tensor from shot or tracking files");
    c_ingest->add_option("--shots", ingest.shots, "Shot CSV (player x zone x period)")->check(CLI::ExistingFile);
    c_ingest->add_option("--tracking", ingest.tracking, "Tracking JSONL (zone x shot clock x possession)")
        ->check(CLI::ExistingFile);
    c_ingest->add_flag("--made", ingest.made, "Count made shots (default)");
    c_ingest->add_flag("--missed", ingest.missed, "Count missed shots");
    c_ingest->add_option("--zones", ingest.zones, "Zone map file (default: built-in 13 zones)")
        ->check(CLI::ExistingFile);
    c_ingest->add_option("--coord-unit", ingest.unit, "feet or tenths")->capture_default_str();
    c_ingest->add_option("--delimiter", ingest.delimiter, "Shot file delimiter")->capture_default_str();
    c_ingest->add_flag("--strict", ingest.strict, "Fail when more than 10% of rows are skipped");
    c_ingest->add_option("--out", ingest.out, "Tensor file")->required();

    DecomposeOptions decompose;
    auto* c_decompose = app.add_subcommand("decompose", "Fit a nonnegative CP model under KL divergence");
    c_decompose->add_option("tensor", decompose.tensor, "Tensor file")->required()->check(CLI::ExistingFile);
    c_decompose->add_option("--rank", decompose.rank, "Number of components")->required();
    decompose.fit.add(c_decompose);
    c_decompose->add_option("--out", decompose.out, "Model file")->required();

    DiagnoseOptions diagnose;
    auto* c_diagnose = app.add_subcommand("diagnose", "Core consistency of fitted models");
    c_diagnose->add_option("tensor", diagnose.tensor, "Tensor file")->required()->check(CLI::ExistingFile);
    c_diagnose->add_option("--model", diagnose.models, "Model file (repeatable)")->check(CLI::ExistingFile);
    c_diagnose->add_option("--grid", diagnose.grid, "Fit and diagnose these ranks: 1,2,4 or 1:6");
    c_diagnose->add_option("--method", diagnose.method, "fast or reference")->capture_default_str();
    diagnose.fit.add(c_diagnose);
    c_diagnose->add_option("--out", diagnose.out, "Score table")->required();

    SelectOptions select;
    auto* c_select = app.add_subcommand("select-rank", "Pick a rank by silhouette separability");
    c_select->add_option("tensor", select.tensor, "Tensor file")->required()->check(CLI::ExistingFile);
    c_select->add_option("--mode", select.mode, "Entity mode (1-3)")->capture_default_str();
    c_select->add_option("--grid", select.grid, "Candidate ranks: 2,4,6 or 2:10[:step]")->required();
    c_select->add_option("--K", select.K, "Largest cluster count")->capture_default_str();
    c_select->add_option("--epsilon", select.epsilon, "Plateau tolerance")->capture_default_str();
    c_select->add_option("--restarts", select.restarts, "k-means restarts")->capture_default_str();
    c_select->add_option("--min-silhouette", select.min_silhouette, "Floor on the chosen max silhouette");
    c_select->add_option("--jobs", select.jobs, "Grid points fitted concurrently")->capture_default_str();
    select.fit.add(c_select);
    c_select->add_option("--out", select.out, "Selection table")->required();

    ClusterOptions cluster;
    auto* c_cluster = app.add_subcommand("cluster", "k-means on factor embeddings, k by silhouette");
    c_cluster->add_option("--model", cluster.model, "Model file")->required()->check(CLI::ExistingFile);
    c_cluster->add_option("--mode", cluster.mode, "Entity mode (1-3)")->capture_default_str();
    c_cluster->add_option("--K", cluster.K, "Largest cluster count")->capture_default_str();
    c_cluster->add_option("--restarts", cluster.restarts, "k-means restarts")->capture_default_str();
    c_cluster->add_option("--seed", cluster.seed, "Random seed")->capture_default_str();
    c_cluster->add_option("--out", cluster.out, "CSV: entity_id,cluster,r_1..r_F")->required();

    QueryOptions qo;
    auto* c_query = app.add_subcommand("query", "Retrieve entities through the component index");
    c_query->add_option("--model", qo.model, "Model file")->required()->check(CLI::ExistingFile);
    c_query->add_option("--query", qo.query, "Query file of name:weight lines")->required()->check(CLI::ExistingFile);
    c_query->add_option("--theta", qo.theta, "Similarity threshold")->capture_default_str();
    c_query->add_option("--tau", qo.tau, "Coefficient quantile for postings (default 0.9)");
    c_query->add_option("--spatial-weight", qo.spatial_weight, "Weight of the spatial block")->capture_default_str();
    c_query->add_option("--temporal-weight", qo.temporal_weight, "Weight of the temporal block")
        ->capture_default_str();
    qo.orientation.add(c_query);
    c_query->add_option("--out", qo.out, "Ranked hits")->required();

    SynthOptions synth;
    auto* c_synth = app.add_subcommand("synth", "Sample shot events from a fitted model");
    c_synth->add_option("--model", synth.model, "Model file")->required()->check(CLI::ExistingFile);
    c_synth->add_option("--events", synth.events, "Number of events")->capture_default_str();
    c_synth->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
    c_synth->add_option("--zones", synth.zones, "Zone map file (default: built-in 13 zones)")
        ->check(CLI::ExistingFile);
    c_synth->add_option("--made-rate", synth.made_rate, "Share of events marked made")->capture_default_str();
    c_synth->add_option("--coord-unit", synth.unit, "feet or tenths")->capture_default_str();
    c_synth->add_option("--entity-mode", synth.entity, "Mode holding the players")->capture_default_str();
    c_synth->add_option("--spatial-mode", synth.spatial, "Mode holding the zones")->capture_default_str();
    c_synth->add_option("--temporal-mode", synth.temporal, "Mode holding the periods")->capture_default_str();
    c_synth->add_option("--out", synth.out, "Shot CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (c_ingest->parsed()) return run_ingest(ingest);
        if (c_decompose->parsed()) return run_decompose(decompose);
        if (c_diagnose->parsed()) return run_diagnose(diagnose);
        if (c_select->parsed()) return run_select(select);
        if (c_cluster->parsed()) return run_cluster(cluster);
        if (c_query->parsed()) return run_query(qo);
        if (c_synth->parsed()) return run_synth(synth);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        // Raised by number parsing inside option values.
        std::cerr << "error: bad argument: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
