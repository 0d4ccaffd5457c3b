#include "thoops/analytics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "thoops/error.hpp"
#include "thoops/random.hpp"

namespace thoops {

std::vector<EntityEmbedding> embed_entities(const CpModel& model, Mode mode) {
    const Matrix& m = model.factor(mode);
    const LabelTable& labels = model.labels[axis(mode)];
    std::vector<EntityEmbedding> out;
    out.reserve(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const auto row = static_cast<std::size_t>(i);
        out.push_back({row < labels.size() ? labels[row] : std::to_string(row), m.row(i).transpose()});
    }
    return out;
}

Matrix embedding_matrix(const std::vector<EntityEmbedding>& embeddings) {
    if (embeddings.empty()) return Matrix(0, 0);
    const Eigen::Index f = embeddings.front().r.size();
    Matrix out(static_cast<Eigen::Index>(embeddings.size()), f);
    for (std::size_t i = 0; i < embeddings.size(); ++i) {
        if (embeddings[i].r.size() != f) throw UsageError("embedding_matrix: ragged embeddings");
        out.row(static_cast<Eigen::Index>(i)) = embeddings[i].r.transpose();
    }
    return out;
}

EntityClusters cluster_entities(const std::vector<EntityEmbedding>& embeddings,
                                const RankSelectConfig& config) {
    if (config.K < 2) throw UsageError("K must be at least 2");
    if (config.restarts < 1) throw UsageError("restarts must be positive");
    const Matrix points = embedding_matrix(embeddings);
    const SilhouetteConfig sc = config.silhouette_config(0);

    EntityClusters out;
    out.profile = max_silhouette(points, sc);
    out.no_structure = out.profile.no_structure;
    out.k = out.profile.argmax_k;
    // Same seed as the profile run for this k, so the labels match its score.
    const KMeansResult km = kmeans(points, out.k, split_seed(sc.seed, out.k), sc.restarts);
    out.labels = km.labels;
    out.centroids = km.centroids;
    return out;
}

void write_clusters_csv(std::ostream& out, const std::vector<EntityEmbedding>& embeddings,
                        const EntityClusters& clusters) {
    if (clusters.labels.size() != embeddings.size()) {
        throw UsageError("write_clusters_csv: label count does not match embeddings");
    }
    const Eigen::Index f = embeddings.empty() ? 0 : embeddings.front().r.size();
    out << "entity_id,cluster";
    for (Eigen::Index c = 0; c < f; ++c) out << ",r_" << c + 1;
    out << '\n' << std::setprecision(17);
    for (std::size_t i = 0; i < embeddings.size(); ++i) {
        out << embeddings[i].entity_id << ',' << clusters.labels[i];
        for (Eigen::Index c = 0; c < f; ++c) out << ',' << embeddings[i].r(c);
        out << '\n';
    }
}

void Orientation::validate() const {
    const std::size_t e = axis(entity);
    const std::size_t s = axis(spatial);
    const std::size_t t = axis(temporal);
    if (e == s || e == t || s == t) {
        throw UsageError("orientation: entity, spatial and temporal modes must differ");
    }
}

namespace {

Vector unit_or_zero(const Vector& v) {
    const double n = v.norm();
    return n > 0.0 ? Vector(v / n) : Vector::Zero(v.size());
}

Vector stack_blocks(const Vector& spatial, const Vector& temporal, double ws, double wt) {
    Vector out(spatial.size() + temporal.size());
    out << ws * unit_or_zero(spatial), wt * unit_or_zero(temporal);
    return out;
}

}  // namespace

ComponentIndex build_component_index(const CpModel& model, const IndexConfig& config) {
    config.orientation.validate();
    if (!(config.tau > 0.0 && config.tau < 1.0)) throw UsageError("index: tau must lie in (0, 1)");
    if (!(config.spatial_weight >= 0.0 && config.temporal_weight >= 0.0) ||
        config.spatial_weight + config.temporal_weight <= 0.0) {
        throw UsageError("index: block weights must be nonnegative and not both zero");
    }
    const Matrix& a = model.factor(config.orientation.entity);
    const Matrix& b = model.factor(config.orientation.spatial);
    const Matrix& c = model.factor(config.orientation.temporal);
    const std::size_t rank = model.rank();
    if (static_cast<std::size_t>(a.cols()) != rank || static_cast<std::size_t>(b.cols()) != rank ||
        static_cast<std::size_t>(c.cols()) != rank) {
        throw UsageError("index: factor ranks disagree with lambda");
    }

    ComponentIndex index;
    index.config_ = config;
    index.spatial_dim_ = static_cast<std::size_t>(b.rows());
    index.temporal_dim_ = static_cast<std::size_t>(c.rows());
    index.entity_labels_ = model.labels[axis(config.orientation.entity)];
    index.spatial_labels_ = model.labels[axis(config.orientation.spatial)];
    index.temporal_labels_ = model.labels[axis(config.orientation.temporal)];
    index.patterns_.reserve(rank);
    index.ranked_.resize(rank);
    index.ascending_.resize(rank);

    for (std::size_t f = 0; f < rank; ++f) {
        const auto col = static_cast<Eigen::Index>(f);
        index.patterns_.push_back(unit_or_zero(
            stack_blocks(b.col(col), c.col(col), config.spatial_weight, config.temporal_weight)));

        std::vector<double>& column = index.ascending_[f];
        column.assign(a.col(col).data(), a.col(col).data() + a.rows());
        std::sort(column.begin(), column.end());

        std::vector<Posting>& ranked = index.ranked_[f];
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (a(i, col) > 0.0) ranked.push_back({static_cast<std::size_t>(i), a(i, col)});
        }
        std::sort(ranked.begin(), ranked.end(), [](const Posting& l, const Posting& r) {
            return l.coefficient != r.coefficient ? l.coefficient > r.coefficient : l.entity < r.entity;
        });
    }
    return index;
}

double ComponentIndex::cutoff(std::size_t f, double tau) const {
    if (!(tau > 0.0 && tau < 1.0)) throw UsageError("tau must lie in (0, 1)");
    const std::vector<double>& column = ascending_.at(f);
    if (column.empty()) return 0.0;
    const double h = static_cast<double>(column.size() - 1) * tau;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, column.size() - 1);
    return column[lo] + (h - static_cast<double>(lo)) * (column[hi] - column[lo]);
}

std::span<const Posting> ComponentIndex::postings(std::size_t f, double tau) const {
    const double cut = cutoff(f, tau);
    const std::vector<Posting>& ranked = ranked_.at(f);
    const auto end = std::partition_point(ranked.begin(), ranked.end(),
                                          [cut](const Posting& p) { return p.coefficient > cut; });
    return {ranked.data(), static_cast<std::size_t>(end - ranked.begin())};
}

Vector ComponentIndex::query_vector(const Vector& spatial, const Vector& temporal) const {
    if (static_cast<std::size_t>(spatial.size()) != spatial_dim_ ||
        static_cast<std::size_t>(temporal.size()) != temporal_dim_) {
        throw UsageError("query dimensions do not match the index (" + std::to_string(spatial_dim_) +
                         " spatial, " + std::to_string(temporal_dim_) + " temporal)");
    }
    if ((spatial.array() < 0.0).any() || (temporal.array() < 0.0).any()) {
        throw UsageError("query weights must be nonnegative");
    }
    const Vector q = stack_blocks(spatial, temporal, config_.spatial_weight, config_.temporal_weight);
    const double n = q.norm();
    if (!(n > 0.0)) throw UsageError("query vector is zero");
    return q / n;
}

QueryResult query(const ComponentIndex& index, const QuerySpec& q) {
    const Vector qv = index.query_vector(q.spatial, q.temporal);

    QueryResult result;
    for (std::size_t f = 0; f < index.rank(); ++f) {
        const double sigma = qv.dot(index.pattern(f));
        ++result.similarity_evaluations;
        if (sigma > q.theta) result.matched.push_back({f, sigma});
    }

    std::vector<QueryHit> hits;
    for (const ComponentMatch& m : result.matched) {
        for (const Posting& p : index.postings(m.component, q.tau)) {
            hits.push_back({p.entity, {}, m.similarity * p.coefficient, m.component});
        }
    }
    if (result.matched.size() > 1) {
        // Keep the best score per entity; earlier component wins an exact tie.
        std::sort(hits.begin(), hits.end(), [](const QueryHit& l, const QueryHit& r) {
            if (l.entity != r.entity) return l.entity < r.entity;
            if (l.score != r.score) return l.score > r.score;
            return l.component < r.component;
        });
        hits.erase(std::unique(hits.begin(), hits.end(),
                               [](const QueryHit& l, const QueryHit& r) { return l.entity == r.entity; }),
                   hits.end());
        std::sort(hits.begin(), hits.end(), [](const QueryHit& l, const QueryHit& r) {
            return l.score != r.score ? l.score > r.score : l.entity < r.entity;
        });
    }
    // A single posting list is already in score order.
    const LabelTable& labels = index.entity_labels();
    for (QueryHit& h : hits) {
        h.label = h.entity < labels.size() ? labels[h.entity] : std::to_string(h.entity);
    }
    result.hits = std::move(hits);
    return result;
}

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<std::size_t> find_label(const LabelTable& labels, const std::string& name) {
    const auto it = std::find(labels.begin(), labels.end(), name);
    if (it == labels.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels.begin());
}

}  // namespace

QuerySpec read_query(std::istream& in, const ComponentIndex& index) {
    QuerySpec q;
    q.tau = index.config().tau;
    q.spatial = Vector::Zero(static_cast<Eigen::Index>(index.spatial_dim()));
    q.temporal = Vector::Zero(static_cast<Eigen::Index>(index.temporal_dim()));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = trim(line.substr(0, line.find('#')));
        if (body.empty()) continue;
        const auto colon = body.rfind(':');
        if (colon == std::string::npos) {
            throw DataError("query line " + std::to_string(line_no) + ": expected name:weight");
        }
        const std::string name = trim(body.substr(0, colon));
        const std::string value = trim(body.substr(colon + 1));
        double w = 0.0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), w);
        if (ec != std::errc() || ptr != value.data() + value.size() || !(w >= 0.0) || !std::isfinite(w)) {
            throw DataError("query line " + std::to_string(line_no) + ": bad weight '" + value + "'");
        }
        if (const auto s = find_label(index.spatial_labels(), name)) {
            q.spatial(static_cast<Eigen::Index>(*s)) += w;
        } else if (const auto t = find_label(index.temporal_labels(), name)) {
            q.temporal(static_cast<Eigen::Index>(*t)) += w;
        } else {
            throw DataError("query line " + std::to_string(line_no) + ": unknown name '" + name + "'");
        }
    }
    return q;
}

std::vector<OracleHit> linear_scan_oracle(const SparseCountTensor& tensor, const QuerySpec& q,
                                          double threshold, const Orientation& orientation) {
    orientation.validate();
    const std::size_t ea = axis(orientation.entity);
    const std::size_t sa = axis(orientation.spatial);
    const std::size_t ta = axis(orientation.temporal);
    const Dims& dims = tensor.dims();
    if (static_cast<std::size_t>(q.spatial.size()) != dims[sa] ||
        static_cast<std::size_t>(q.temporal.size()) != dims[ta]) {
        throw UsageError("linear_scan_oracle: query dimensions do not match the tensor");
    }

    std::vector<double> score(dims[ea], 0.0);
    for (const Entry& e : tensor.entries()) {
        const std::size_t idx[3] = {e.i, e.j, e.k};
        score[idx[ea]] += e.value * q.spatial(static_cast<Eigen::Index>(idx[sa])) *
                          q.temporal(static_cast<Eigen::Index>(idx[ta]));
    }
    std::vector<OracleHit> hits;
    for (std::size_t n = 0; n < score.size(); ++n) {
        if (score[n] > threshold) hits.push_back({n, score[n]});
    }
    std::sort(hits.begin(), hits.end(), [](const OracleHit& l, const OracleHit& r) {
        return l.score != r.score ? l.score > r.score : l.entity < r.entity;
    });
    return hits;
}

namespace {

std::size_t zone_for_row(const CourtZoneMap& map, const LabelTable& labels, std::size_t row) {
    if (row < labels.size()) {
        if (const auto id = map.find(labels[row])) return *id;
    }
    if (row < map.size()) return row;
    throw UsageError("synthesis: spatial row " + std::to_string(row) + " has no zone in the map");
}

}  // namespace

SynthResult generate_synthetic(const CpModel& model, std::size_t n_events, const CourtZoneMap& map,
                               std::uint64_t seed, const SynthConfig& config) {
    config.orientation.validate();
    if (n_events < 1) throw UsageError("synthesis: need at least one event");
    if (!(config.made_rate >= 0.0 && config.made_rate <= 1.0)) {
        throw UsageError("synthesis: made rate must lie in [0, 1]");
    }
    const Matrix& a = model.factor(config.orientation.entity);
    const Matrix& b = model.factor(config.orientation.spatial);
    const Matrix& c = model.factor(config.orientation.temporal);
    const LabelTable& entity_labels = model.labels[axis(config.orientation.entity)];
    const LabelTable& spatial_labels = model.labels[axis(config.orientation.spatial)];

    std::vector<std::size_t> zone_of(static_cast<std::size_t>(b.rows()));
    for (std::size_t r = 0; r < zone_of.size(); ++r) zone_of[r] = zone_for_row(map, spatial_labels, r);

    SynthResult out;
    const std::size_t rank = model.rank();
    std::vector<double> weight(rank, 0.0);
    struct Columns {
        std::optional<CategoricalSampler> entity, zone, time;
    };
    std::vector<Columns> samplers(rank);
    auto column = [](const Matrix& m, std::size_t f) {
        const auto col = m.col(static_cast<Eigen::Index>(f));
        return std::vector<double>(col.data(), col.data() + col.size());
    };
    auto usable = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) {
            if (!(x >= 0.0)) return false;
            s += x;
        }
        return s > 0.0;
    };
    for (std::size_t f = 0; f < rank; ++f) {
        const double lf = model.lambda(static_cast<Eigen::Index>(f));
        if (!(lf > 0.0)) {
            out.diagnostics.push_back("component " + std::to_string(f) + " excluded: zero weight");
            continue;
        }
        const auto ca = column(a, f);
        const auto cb = column(b, f);
        const auto cc = column(c, f);
        if (!usable(ca) || !usable(cb) || !usable(cc)) {
            out.diagnostics.push_back("component " + std::to_string(f) + " excluded: all-zero column");
            continue;
        }
        weight[f] = lf;
        samplers[f].entity.emplace(ca);
        samplers[f].zone.emplace(cb);
        samplers[f].time.emplace(cc);
    }
    if (std::none_of(weight.begin(), weight.end(), [](double w) { return w > 0.0; })) {
        throw DataError("synthesis: no usable component in the model");
    }
    const CategoricalSampler pick_component(weight);

    Rng rng(seed);
    out.events.reserve(n_events);
    for (std::size_t n = 0; n < n_events; ++n) {
        const std::size_t f = pick_component(rng);
        const std::size_t entity = (*samplers[f].entity)(rng);
        const std::size_t zone = zone_of[(*samplers[f].zone)(rng)];
        const std::size_t time = (*samplers[f].time)(rng);
        const CourtPoint p = sample_in_zone(map, zone, rng);

        ShotEvent e;
        e.game_id = config.game_id;
        e.player_id = entity < entity_labels.size() ? entity_labels[entity] : std::to_string(entity);
        e.player_name = e.player_id;
        e.x = p.x;
        e.y = p.y;
        e.period_raw = static_cast<int>(time) + 1;
        e.made = rng.uniform() < config.made_rate;
        out.events.push_back(std::move(e));
    }
    return out;
}

}  // namespace thoops
