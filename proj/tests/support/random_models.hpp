// Random well-formed models, decisions and catalogs for property tests.
#ifndef FMCONF_TESTS_RANDOM_MODELS_HPP
#define FMCONF_TESTS_RANDOM_MODELS_HPP

#include "fmconf/feature_model.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace fmconf::testing {

struct RandomModelLimits {
    int max_features = 16;
    int max_constraints = 6;
    int max_groups = 3;
    bool shuffle_declarations = true;
};

inline int uniform(std::mt19937_64& rng, int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline ModelDraft random_model(std::mt19937_64& rng, const RandomModelLimits& limits = {})
{
    const int n = uniform(rng, 2, limits.max_features);
    ModelDraft draft;
    std::vector<int> parent(n, -1);
    for (int i = 0; i < n; ++i) {
        Feature f;
        f.id = "f" + std::to_string(i);
        if (i == 0) {
            f.variability = Variability::Root;
        } else {
            parent[i] = uniform(rng, 0, i - 1);
            f.parent = "f" + std::to_string(parent[i]);
            f.variability = uniform(rng, 0, 3) == 0 ? Variability::Mandatory : Variability::Optional;
        }
        if (uniform(rng, 0, 9) == 0) f.attributes.push_back({"cost", IntRange{0, uniform(rng, 0, 100)}});
        if (uniform(rng, 0, 19) == 0) f.attributes.push_back({"tier", EnumDomain{{"low", "high"}}});
        draft.features.push_back(std::move(f));
    }

    std::vector<int> parents(n);
    for (int i = 0; i < n; ++i) parents[i] = i;
    std::shuffle(parents.begin(), parents.end(), rng);
    for (int p : parents) {
        if (static_cast<int>(draft.groups.size()) >= limits.max_groups) break;
        std::vector<int> children;
        for (int c = 1; c < n; ++c) {
            if (parent[c] == p) children.push_back(c);
        }
        if (children.size() < 2 || uniform(rng, 0, 2) == 0) continue;
        std::shuffle(children.begin(), children.end(), rng);
        const int k = uniform(rng, 2, static_cast<int>(children.size()));
        children.resize(k);
        std::sort(children.begin(), children.end());
        Group g;
        g.parent = "f" + std::to_string(p);
        g.lower = uniform(rng, 0, k);
        g.upper = uniform(rng, std::max(1, g.lower), k);
        for (int c : children) {
            g.members.push_back("f" + std::to_string(c));
            draft.features[c].variability = Variability::Grouped;
        }
        draft.groups.push_back(std::move(g));
    }

    const int constraints = uniform(rng, 0, limits.max_constraints);
    for (int i = 0; i < constraints; ++i) {
        const int a = uniform(rng, 0, n - 1);
        int b = uniform(rng, 0, n - 2);
        if (b >= a) ++b;
        draft.constraints.push_back({uniform(rng, 0, 1) ? ConstraintKind::Requires : ConstraintKind::Excludes,
                                     "f" + std::to_string(a), "f" + std::to_string(b)});
    }

    if (uniform(rng, 0, 1)) {
        Facet facet{"functional", {}};
        for (int i = 0; i < n; ++i) {
            if (uniform(rng, 0, 1)) facet.members.push_back("f" + std::to_string(i));
        }
        if (facet.members.empty()) facet.members.push_back("f0");
        draft.facets.push_back(std::move(facet));
    }

    if (limits.shuffle_declarations) {
        std::shuffle(draft.features.begin(), draft.features.end(), rng);
        std::shuffle(draft.groups.begin(), draft.groups.end(), rng);
    }
    return draft;
}

/// Random selected set, not necessarily valid.
inline std::vector<std::string> random_selection(std::mt19937_64& rng, const FeatureModel& model)
{
    std::vector<std::string> out;
    for (FeatureIndex f = 0; f < model.size(); ++f) {
        if (uniform(rng, 0, 1)) out.push_back(model.id(f));
    }
    return out;
}

}  // namespace fmconf::testing

#endif  // FMCONF_TESTS_RANDOM_MODELS_HPP
