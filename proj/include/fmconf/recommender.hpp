/**
 * @file recommender.hpp
 * @brief Content-based recommendation over a catalog of known configurations.
 *
 * Each catalog entry is a document whose terms are its feature ids, restricted
 * to one facet. Terms are weighted with tf-idf, `tf * log(N / df)`, where tf is
 * 0 or 1 because a configuration is a set, and documents are compared with the
 * cosine of their weight vectors.
 */
#ifndef FMCONF_RECOMMENDER_HPP
#define FMCONF_RECOMMENDER_HPP

#include "fmconf/configuration.hpp"
#include "fmconf/feature_model.hpp"

#include <map>
#include <memory>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace fmconf {

using FeatureSet = std::set<std::string, std::less<>>;

struct CatalogEntry {
    std::string id;
    /// Features as written in the catalog.
    std::vector<std::string> listed;
    /// Full configuration: listed features, their ancestors and the root.
    FeatureSet features;
};

class CatalogError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Immutable list of configurations known to the recommender.
class Catalog {
public:
    /// @throws CatalogError on duplicate ids or unknown features
    Catalog(ModelPtr model, std::vector<std::pair<std::string, std::vector<std::string>>> entries);

    const FeatureModel& model() const noexcept { return *model_; }
    const ModelPtr& model_ptr() const noexcept { return model_; }
    const std::vector<CatalogEntry>& entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }
    const CatalogEntry* find(std::string_view id) const;

private:
    ModelPtr model_;
    std::vector<CatalogEntry> entries_;
};

using CatalogPtr = std::shared_ptr<const Catalog>;

/// Parses `config <id> <feature> ...` lines.
/// @throws ParseError on syntax errors, CatalogError on bad references
Catalog parse_catalog(std::string_view text, ModelPtr model);

class RecommendError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Document frequencies of facet terms over a catalog.
struct VectorIndex {
    std::string facet;
    std::size_t documents = 0;
    std::map<std::string, std::size_t, std::less<>> document_frequency;
    /// Features of the facet; terms outside it are ignored.
    FeatureSet facet_terms;
    double log_base = std::numbers::e;
};

/// @throws RecommendError for an empty catalog or unknown facet
VectorIndex build_index(const Catalog& catalog, std::string_view facet, double log_base = std::numbers::e);

/// tf * log(N / df); 0 when the term is not in `doc`, outside the facet,
/// or absent from every catalog entry.
double tf_idf_weight(std::string_view term, const FeatureSet& doc, const VectorIndex& index);

/// Sparse non-negative weights; zero weights are never stored.
class TermVector {
public:
    void set(const std::string& term, double weight);
    double get(std::string_view term) const;
    double norm() const;
    bool empty() const noexcept { return weights_.empty(); }
    std::size_t size() const noexcept { return weights_.size(); }
    const std::map<std::string, double, std::less<>>& weights() const noexcept { return weights_; }

private:
    std::map<std::string, double, std::less<>> weights_;
};

TermVector vectorize(const FeatureSet& features, const VectorIndex& index);

/// Cosine similarity clamped to [0, 1]; 0 when either vector has zero norm.
double cosine(const TermVector& u, const TermVector& v);

struct ScoredEntry {
    std::string config_id;
    double similarity = 0.0;
};

/**
 * Scores every entry against the query. Sorted by similarity descending and
 * then by id; scores equal to within 1e-12 count as ties.
 * @throws RecommendError for an empty catalog or unknown facet
 */
std::vector<ScoredEntry> rank(const FeatureSet& query, const Catalog& catalog, std::string_view facet,
                              double log_base = std::numbers::e);

struct Recommendation {
    std::string config_id;
    double similarity = 0.0;
    bool valid = false;
    std::vector<Violation> violations;
};

/// Every catalog entry in rank order with its validity verdict.
std::vector<Recommendation> assess_candidates(const FeatureSet& query, const Catalog& catalog,
                                              std::string_view facet);

/// The top-k valid entries in rank order; empty when none is valid.
/// @throws RecommendError for an empty catalog, unknown facet or k == 0
std::vector<Recommendation> recommend_valid(const FeatureSet& query, const Catalog& catalog, std::string_view facet,
                                            std::size_t k);

/// "functional" when the model declares it, otherwise "all".
std::string default_facet(const FeatureModel& model);

}  // namespace fmconf

#endif  // FMCONF_RECOMMENDER_HPP
