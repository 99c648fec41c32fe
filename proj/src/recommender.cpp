#include "fmconf/recommender.hpp"

#include <algorithm>
#include <cmath>

namespace fmconf {

namespace {

constexpr double kScoreResolution = 1e-12;

long long score_key(double similarity)
{
    return std::llround(similarity / kScoreResolution);
}

void require_facet(const Catalog& catalog, std::string_view facet)
{
    if (!catalog.model().has_facet(facet)) throw RecommendError("unknown facet '" + std::string(facet) + "'");
}

}  // namespace

VectorIndex build_index(const Catalog& catalog, std::string_view facet, double log_base)
{
    if (catalog.empty()) throw RecommendError("empty catalog");
    require_facet(catalog, facet);
    if (!(log_base > 1.0)) throw RecommendError("logarithm base must exceed 1");

    VectorIndex index;
    index.facet = std::string(facet);
    index.documents = catalog.entries().size();
    index.log_base = log_base;
    for (auto& id : catalog.model().facet_members(facet)) index.facet_terms.insert(std::move(id));
    for (const auto& entry : catalog.entries()) {
        for (const auto& term : entry.features) {
            if (index.facet_terms.contains(term)) ++index.document_frequency[term];
        }
    }
    return index;
}

double tf_idf_weight(std::string_view term, const FeatureSet& doc, const VectorIndex& index)
{
    if (!doc.contains(term) || !index.facet_terms.contains(term)) return 0.0;
    auto it = index.document_frequency.find(term);
    if (it == index.document_frequency.end()) return 0.0;
    const double ratio = static_cast<double>(index.documents) / static_cast<double>(it->second);
    if (index.log_base == std::numbers::e) return std::log(ratio);
    return std::log(ratio) / std::log(index.log_base);
}

void TermVector::set(const std::string& term, double weight)
{
    if (!std::isfinite(weight) || weight < 0.0) throw std::invalid_argument("term weights must be finite and >= 0");
    if (weight == 0.0) {
        weights_.erase(term);
        return;
    }
    weights_[term] = weight;
}

double TermVector::get(std::string_view term) const
{
    auto it = weights_.find(term);
    return it == weights_.end() ? 0.0 : it->second;
}

double TermVector::norm() const
{
    double sum = 0.0;
    for (const auto& [term, w] : weights_) sum += w * w;
    return std::sqrt(sum);
}

TermVector vectorize(const FeatureSet& features, const VectorIndex& index)
{
    TermVector v;
    for (const auto& term : features) v.set(term, tf_idf_weight(term, features, index));
    return v;
}

double cosine(const TermVector& u, const TermVector& v)
{
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu == 0.0 || nv == 0.0) return 0.0;
    const auto& small = u.size() <= v.size() ? u : v;
    const auto& large = u.size() <= v.size() ? v : u;
    double dot = 0.0;
    for (const auto& [term, w] : small.weights()) dot += w * large.get(term);
    return std::clamp(dot / (nu * nv), 0.0, 1.0);
}

std::vector<ScoredEntry> rank(const FeatureSet& query, const Catalog& catalog, std::string_view facet,
                              double log_base)
{
    const VectorIndex index = build_index(catalog, facet, log_base);
    const TermVector q = vectorize(query, index);

    std::vector<ScoredEntry> scored;
    scored.reserve(catalog.entries().size());
    for (const auto& entry : catalog.entries())
        scored.push_back({entry.id, cosine(q, vectorize(entry.features, index))});

    std::sort(scored.begin(), scored.end(), [](const ScoredEntry& x, const ScoredEntry& y) {
        const long long kx = score_key(x.similarity);
        const long long ky = score_key(y.similarity);
        if (kx != ky) return kx > ky;
        return x.config_id < y.config_id;
    });
    return scored;
}

std::vector<Recommendation> assess_candidates(const FeatureSet& query, const Catalog& catalog,
                                              std::string_view facet)
{
    std::vector<Recommendation> out;
    for (auto& scored : rank(query, catalog, facet)) {
        const CatalogEntry& entry = *catalog.find(scored.config_id);
        auto violations = check_full(catalog.model(), std::vector<std::string>(entry.features.begin(), entry.features.end()));
        const bool valid = violations.empty();
        out.push_back({std::move(scored.config_id), scored.similarity, valid, std::move(violations)});
    }
    return out;
}

std::vector<Recommendation> recommend_valid(const FeatureSet& query, const Catalog& catalog, std::string_view facet,
                                            std::size_t k)
{
    if (k == 0) throw RecommendError("k must be at least 1");
    std::vector<Recommendation> out;
    for (auto& candidate : assess_candidates(query, catalog, facet)) {
        if (!candidate.valid) continue;
        out.push_back(std::move(candidate));
        if (out.size() == k) break;
    }
    return out;
}

std::string default_facet(const FeatureModel& model)
{
    return model.has_facet("functional") ? "functional" : std::string(kAllFacet);
}

}  // namespace fmconf
