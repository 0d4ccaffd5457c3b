#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "thoops/cluster.hpp"
#include "thoops/court.hpp"
#include "thoops/cp_kl.hpp"
#include "thoops/ingest.hpp"
#include "thoops/rank_select.hpp"

namespace thoops {

// ---------------------------------------------------------------- embeddings

struct EntityEmbedding {
    std::string entity_id;
    Vector r;  // one coefficient per component
};

/// Row i of the factor for `mode`, labelled with the model's entity label.
std::vector<EntityEmbedding> embed_entities(const CpModel& model, Mode mode);

/// Stack embeddings as rows.
Matrix embedding_matrix(const std::vector<EntityEmbedding>& embeddings);

struct EntityClusters {
    std::vector<std::size_t> labels;
    Matrix centroids;
    std::size_t k = 0;
    SilhouetteProfile profile;
    /// Every embedding is identical; the labelling carries no information.
    bool no_structure = false;
};

/// k = argmax of the silhouette profile over 2..K, then the k-means run
/// that produced it.
EntityClusters cluster_entities(const std::vector<EntityEmbedding>& embeddings,
                                const RankSelectConfig& config);

/// `entity_id,cluster,r_1..r_F` with a header row.
void write_clusters_csv(std::ostream& out, const std::vector<EntityEmbedding>& embeddings,
                        const EntityClusters& clusters);

// ----------------------------------------------------------------- retrieval

/// Which model mode plays which role. The default fits the possession
/// tensor (zone x shot clock x possession).
struct Orientation {
    Mode entity = Mode::Three;
    Mode spatial = Mode::One;
    Mode temporal = Mode::Two;

    /// Throws UsageError unless the three modes are distinct.
    void validate() const;
};

struct IndexConfig {
    Orientation orientation;
    /// Default coefficient quantile for "high coefficient" postings.
    double tau = 0.9;
    double spatial_weight = 1.0;
    double temporal_weight = 1.0;
};

struct Posting {
    std::size_t entity = 0;
    double coefficient = 0.0;
};

/// Per-component retrieval index.
///
/// Component f keeps its pattern [w_s b_f/|b_f| , w_t c_f/|c_f|] scaled to
/// unit 2-norm, and every entity with a positive a_f coefficient sorted by
/// coefficient (descending, ties by entity index). The posting list for a
/// quantile tau is the prefix whose coefficients exceed the tau-quantile of
/// the whole a_f column; those cutoffs are resolved at query time from the
/// column kept in ascending order.
class ComponentIndex {
public:
    std::size_t rank() const { return patterns_.size(); }
    std::size_t spatial_dim() const { return spatial_dim_; }
    std::size_t temporal_dim() const { return temporal_dim_; }
    const IndexConfig& config() const { return config_; }
    const Vector& pattern(std::size_t f) const { return patterns_.at(f); }
    const LabelTable& entity_labels() const { return entity_labels_; }
    const LabelTable& spatial_labels() const { return spatial_labels_; }
    const LabelTable& temporal_labels() const { return temporal_labels_; }

    /// tau-quantile (linear interpolation) of the a_f column.
    double cutoff(std::size_t f, double tau) const;
    /// Entities whose a_f coefficient is strictly above cutoff(f, tau).
    std::span<const Posting> postings(std::size_t f, double tau) const;
    std::span<const Posting> postings(std::size_t f) const { return postings(f, config_.tau); }

    /// Block-normalized query vector in pattern space; throws UsageError
    /// on a dimension mismatch or an all-zero query.
    Vector query_vector(const Vector& spatial, const Vector& temporal) const;

private:
    friend ComponentIndex build_component_index(const CpModel& model, const IndexConfig& config);

    IndexConfig config_;
    std::size_t spatial_dim_ = 0;
    std::size_t temporal_dim_ = 0;
    std::vector<Vector> patterns_;
    std::vector<std::vector<Posting>> ranked_;      // descending coefficient
    std::vector<std::vector<double>> ascending_;    // full column, ascending
    LabelTable entity_labels_;
    LabelTable spatial_labels_;
    LabelTable temporal_labels_;
};

ComponentIndex build_component_index(const CpModel& model, const IndexConfig& config = {});

struct QuerySpec {
    Vector spatial;
    Vector temporal;
    double theta = 0.5;
    double tau = 0.9;
};

struct ComponentMatch {
    std::size_t component = 0;
    double similarity = 0.0;
};

struct QueryHit {
    std::size_t entity = 0;
    std::string label;
    double score = 0.0;      // max over matched components of sigma * coefficient
    std::size_t component = 0;
};

struct QueryResult {
    std::vector<QueryHit> hits;
    std::vector<ComponentMatch> matched;
    /// Similarity evaluations performed; always equals the index rank.
    std::size_t similarity_evaluations = 0;
};

/// sigma_f = cosine between the query vector and pattern f, for every f.
/// Returns the union of the tau-postings of components with sigma_f > theta,
/// ranked by score descending (ties by entity index).
QueryResult query(const ComponentIndex& index, const QuerySpec& q);

/// Query file: one `name:weight` per line. A name matching a spatial label
/// sets a spatial weight, otherwise it must match a temporal label.
QuerySpec read_query(std::istream& in, const ComponentIndex& index);

struct OracleHit {
    std::size_t entity = 0;
    double score = 0.0;
};

/// Scores every entity slice by its inner product with the outer product
/// of the raw spatial and temporal weights; returns entities scoring above
/// `threshold`, best first. O(nnz).
std::vector<OracleHit> linear_scan_oracle(const SparseCountTensor& tensor, const QuerySpec& q,
                                          double threshold,
                                          const Orientation& orientation = {});

// ----------------------------------------------------------------- synthesis

struct SynthConfig {
    /// Shot-tensor layout: player x zone x period.
    Orientation orientation{Mode::One, Mode::Two, Mode::Three};
    /// Probability that a generated shot is marked made.
    double made_rate = 0.5;
    std::string game_id = "synthetic";
};

struct SynthResult {
    std::vector<ShotEvent> events;
    std::vector<std::string> diagnostics;
};

/// Monte Carlo draws from the normalized components: component by lambda,
/// then entity, zone and time from the component's columns, then a uniform
/// location inside the zone. Components with a zero weight or an all-zero
/// column are skipped and reported. The time index t becomes period t+1.
SynthResult generate_synthetic(const CpModel& model, std::size_t n_events,
                               const CourtZoneMap& map, std::uint64_t seed,
                               const SynthConfig& config = {});

}  // namespace thoops
