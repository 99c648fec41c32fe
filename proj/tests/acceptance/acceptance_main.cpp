// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "fmconf/configuration.hpp"
#include "fmconf/fixtures.hpp"
#include "fmconf/recommender.hpp"
#include "fmconf/session.hpp"

#include "support/brute_force.hpp"
#include "support/dell_oracle.hpp"
#include "support/random_models.hpp"
#include "support/run_process.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

using namespace fmconf;
using testing::BruteForce;

namespace {

constexpr double kCliTimeLimitSeconds = 1.0;
constexpr double kCliScoreTolerance = 5e-7;  // scores are printed with six decimals
constexpr double kScoreTolerance = 1e-12;
constexpr double kOracleSuiteLimitSeconds = 60.0;
constexpr double kMedianLimitMs = 100.0;

constexpr int kOracleModels = 250;
constexpr int kDecisionSamplesPerModel = 8;
constexpr int kReplaySequences = 600;
constexpr int kCosineVectors = 2000;
constexpr int kRandomCatalogs = 300;
constexpr int kResponsivenessTrials = 100;
constexpr int kLargeFeatures = 500;
constexpr int kLargeConstraints = 200;

const testing::RandomModelLimits kCorpusLimits{16, 6, 3, true};

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool condition, const std::string& what)
    {
        if (!condition && pass) detail = what;
        pass = pass && condition;
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double value, int precision = 3)
{
    std::ostringstream os;
    os.precision(precision);
    os << std::fixed << value;
    return os.str();
}

std::string join(const std::vector<std::string>& items, const std::string& sep = " ")
{
    std::string out;
    for (const auto& s : items) out += (out.empty() ? "" : sep) + s;
    return out;
}

std::string cli() { return testing::shell_quote(FMCONF_CLI_PATH); }
std::string fixture(const std::string& file) { return testing::shell_quote(std::string(FMCONF_FIXTURE_DIR) + "/" + file); }

std::vector<std::pair<FeatureIndex, DecisionState>> random_decisions(std::mt19937_64& rng, const FeatureModel& m,
                                                                     int max_count)
{
    std::vector<FeatureIndex> pool;
    for (FeatureIndex f = 0; f < m.size(); ++f)
        if (f != m.root()) pool.push_back(f);
    std::shuffle(pool.begin(), pool.end(), rng);
    const int count = testing::uniform(rng, 1, std::min<int>(max_count, static_cast<int>(pool.size())));
    std::vector<std::pair<FeatureIndex, DecisionState>> out;
    for (int i = 0; i < count; ++i)
        out.emplace_back(pool[i], testing::uniform(rng, 0, 1) ? DecisionState::Selected : DecisionState::Rejected);
    return out;
}

// 1. validate on C1 reports exactly the two excludes violations.
Verdict dell_invalidity()
{
    Verdict v;
    auto r = testing::run_process(cli() + " validate --model " + fixture("dell.fm") + " --config " +
                                  testing::shell_quote(join(testing::kC1Listing, ",")));
    const std::vector<std::string> expected{"invalid: 2 violation(s)", "  excludes(Mininotebook, 320GB)",
                                            "  excludes(Mininotebook, CD_DVD+RW)"};
    v.require(r.exit_code == 1, "exit code " + std::to_string(r.exit_code));
    v.require(r.lines() == expected, "output: " + join(r.lines(), " | "));
    v.require(r.seconds < kCliTimeLimitSeconds, "took " + fmt(r.seconds) + " s");
    if (v.pass) v.detail = "exit 1, 2 violations, " + fmt(r.seconds) + " s";
    return v;
}

// 2. recommend with k=4 returns C1.3 then C1.4 with the oracle's scores.
Verdict dell_recommendation()
{
    Verdict v;
    auto r = testing::run_process(cli() + " recommend --model " + fixture("dell.fm") + " --catalog " +
                                  fixture("dell.catalog") + " --facet functional --top-k 4 --query " +
                                  testing::shell_quote(join(testing::kC1Listing)));
    v.require(r.exit_code == 0, "exit code " + std::to_string(r.exit_code));
    v.require(r.seconds < kCliTimeLimitSeconds, "took " + fmt(r.seconds) + " s");
    const auto lines = r.lines();
    v.require(lines.size() == 2, "output: " + join(lines, " | "));
    const std::vector<std::string> expected_ids{"C1.3", "C1.4"};
    for (std::size_t i = 0; i < lines.size() && i < 2; ++i) {
        std::istringstream in(lines[i]);
        std::string rank, id;
        double score = -1.0;
        in >> rank >> id >> score;
        v.require(rank == std::to_string(i + 1) + ".", "line " + lines[i]);
        v.require(id == expected_ids[i], "rank " + std::to_string(i + 1) + " is " + id);
        if (id == expected_ids[i])
            v.require(std::abs(score - testing::kDellOracleScores.at(id)) <= kCliScoreTolerance,
                      id + " scored " + fmt(score, 6));
    }

    auto fx = load_fixture("dell");
    auto closed = with_ancestors(*fx.model, testing::kC1Listing);
    auto recs = recommend_valid(FeatureSet(closed.begin(), closed.end()), *fx.catalog, "functional", 4);
    for (const auto& rec : recs)
        v.require(std::abs(rec.similarity - testing::kDellOracleScores.at(rec.config_id)) <= kScoreTolerance,
                  "library score for " + rec.config_id + " differs from the oracle");
    if (v.pass) v.detail = "C1.3 then C1.4, scores match the oracle, " + fmt(r.seconds) + " s";
    return v;
}

// 3. check_full and enumerate_valid agree with brute force on every assignment.
Verdict oracle_equivalence()
{
    Verdict v;
    std::mt19937_64 rng(3);
    const auto start = Clock::now();
    std::uint64_t assignments = 0;
    for (int i = 0; i < kOracleModels; ++i) {
        FeatureModel m(testing::random_model(rng, kCorpusLimits));
        BruteForce brute(m.draft());
        const int n = static_cast<int>(m.size());
        std::set<BruteForce::Mask> valid;
        std::vector<bool> selected(n);
        for (BruteForce::Mask s = 0; s < (BruteForce::Mask{1} << n); ++s) {
            for (int j = 0; j < n; ++j) selected[j] = (s >> j) & 1;
            const bool expected = brute.satisfied(s);
            if (check_full(m, selected).empty() != expected) {
                v.require(false, "disagreement on model " + std::to_string(i));
                break;
            }
            if (expected) valid.insert(s);
            ++assignments;
        }
        std::set<BruteForce::Mask> enumerated;
        for (const auto& config : enumerate_valid(m)) {
            BruteForce::Mask s = 0;
            for (const auto& id : config) s |= BruteForce::bit(static_cast<int>(m.require_index(id)));
            enumerated.insert(s);
        }
        v.require(enumerated == valid, "enumerate_valid disagrees on model " + std::to_string(i));
    }
    const double elapsed = seconds_since(start);
    v.require(elapsed < kOracleSuiteLimitSeconds, "took " + fmt(elapsed) + " s");
    if (v.pass)
        v.detail = std::to_string(kOracleModels) + " models, " + std::to_string(assignments) + " assignments, " +
                   fmt(elapsed) + " s";
    return v;
}

// 4. Propagated states are entailed and conflicts mean no completion exists.
Verdict propagation_soundness()
{
    Verdict v;
    std::mt19937_64 rng(3);
    int samples = 0, conflicts = 0, derived = 0, missed_conflicts = 0;
    for (int i = 0; i < kOracleModels; ++i) {
        auto m = std::make_shared<const FeatureModel>(testing::random_model(rng, kCorpusLimits));
        BruteForce brute(m->draft());
        std::vector<BruteForce::Mask> valid;
        brute.for_each_valid([&](BruteForce::Mask s) { valid.push_back(s); });
        for (int k = 0; k < kDecisionSamplesPerModel; ++k) {
            // Odd samples take their decisions from one valid configuration.
            auto decisions = random_decisions(rng, *m, 6);
            if (k % 2 == 1 && !valid.empty()) {
                const auto target = valid[testing::uniform(rng, 0, static_cast<int>(valid.size()) - 1)];
                for (auto& [f, s] : decisions)
                    s = (target & BruteForce::bit(static_cast<int>(f))) ? DecisionState::Selected : DecisionState::Rejected;
            }
            PartialConfiguration c(m);
            BruteForce::Mask on = 0, off = 0;
            for (auto [f, s] : decisions) {
                c.decide(f, s);
                (s == DecisionState::Selected ? on : off) |= BruteForce::bit(static_cast<int>(f));
            }
            BruteForce::Mask all_on = ~BruteForce::Mask{0}, any_on = 0;
            bool completion = false;
            brute.for_each_completion(on, off, [&](BruteForce::Mask s) {
                completion = true;
                all_on &= s;
                any_on |= s;
            });
            ++samples;
            auto r = propagate(c);
            if (!r.consistent()) {
                ++conflicts;
                v.require(!completion, "conflict reported although a completion exists (model " +
                                           std::to_string(i) + ")");
                continue;
            }
            if (!completion) {
                ++missed_conflicts;
                continue;
            }
            for (FeatureIndex f = 0; f < m->size(); ++f) {
                if (c.provenance(f) != Provenance::Propagated) continue;
                ++derived;
                const auto b = BruteForce::bit(static_cast<int>(f));
                if (c.state(f) == DecisionState::Selected)
                    v.require(all_on & b, "unsound selection of " + m->id(f) + " (model " + std::to_string(i) + ")");
                else
                    v.require(!(any_on & b), "unsound rejection of " + m->id(f) + " (model " + std::to_string(i) + ")");
            }
        }
    }
    if (v.pass)
        v.detail = std::to_string(samples) + " samples, " + std::to_string(derived) + " derived states, " +
                   std::to_string(conflicts) + " conflicts, 0 counterexamples; " + std::to_string(missed_conflicts) +
                   " dead ends left to later decisions";
    return v;
}

// 5. decide/retract sequences end in the same state as the surviving decisions.
Verdict retraction_order_independence()
{
    Verdict v;
    std::mt19937_64 rng(5);
    int retractions = 0, void_models = 0;
    for (int i = 0; i - void_models < kReplaySequences; ++i) {
        auto m = std::make_shared<const FeatureModel>(testing::random_model(rng, kCorpusLimits));
        Session s("a", m, nullptr);
        const bool void_model = s.status() == SessionStatus::Conflicted;
        std::map<FeatureIndex, DecisionState> surviving;
        const int steps = testing::uniform(rng, 2, 14);
        for (int step = 0; step < steps; ++step) {
            if (!surviving.empty() && testing::uniform(rng, 0, 2) == 0) {
                auto it = std::next(surviving.begin(), testing::uniform(rng, 0, static_cast<int>(surviving.size()) - 1));
                s.retract(m->id(it->first));
                surviving.erase(it);
                ++retractions;
                continue;
            }
            const auto f = static_cast<FeatureIndex>(testing::uniform(rng, 1, static_cast<int>(m->size()) - 1));
            if (f == m->root() || s.status() == SessionStatus::Complete) continue;
            const auto choice = testing::uniform(rng, 0, 1) ? DecisionState::Selected : DecisionState::Rejected;
            if (s.decide(m->id(f), choice).consistent()) surviving[f] = choice;
        }
        std::vector<std::pair<FeatureIndex, DecisionState>> order(surviving.begin(), surviving.end());
        std::shuffle(order.begin(), order.end(), rng);
        PartialConfiguration direct(m);
        for (auto [f, choice] : order) direct.decide(f, choice);
        const bool consistent = propagate(direct).consistent();
        if (void_model) {
            // No valid configuration exists; every decision conflicts and none survives.
            ++void_models;
            v.require(surviving.empty() && !consistent, "decision survived on a void model");
            continue;
        }
        v.require(consistent, "surviving decisions conflict (sequence " + std::to_string(i) + ")");
        v.require(direct == s.configuration(), "state differs (sequence " + std::to_string(i) + ")");
    }
    if (v.pass)
        v.detail = std::to_string(kReplaySequences) + " sequences, " + std::to_string(retractions) +
                   " retractions, exact state equality (" + std::to_string(void_models) +
                   " void models skipped)";
    return v;
}

TermVector random_vector(std::mt19937_64& rng)
{
    TermVector vec;
    const int terms = testing::uniform(rng, 0, 10);
    for (int i = 0; i < terms; ++i)
        vec.set("t" + std::to_string(testing::uniform(rng, 0, 15)),
                std::uniform_real_distribution<double>(0.0, 10.0)(rng));
    return vec;
}

Catalog random_catalog(std::mt19937_64& rng, const ModelPtr& model)
{
    std::vector<std::pair<std::string, std::vector<std::string>>> entries;
    const auto valid = enumerate_valid(*model, 32);
    const int count = testing::uniform(rng, 1, 10);
    for (int i = 0; i < count; ++i) {
        std::vector<std::string> features;
        if (!valid.empty() && testing::uniform(rng, 0, 1))
            features = valid[testing::uniform(rng, 0, static_cast<int>(valid.size()) - 1)];
        else
            features = testing::random_selection(rng, *model);
        entries.emplace_back("c" + std::to_string(i), std::move(features));
    }
    return Catalog(model, std::move(entries));
}

std::vector<std::string> ids(const std::vector<ScoredEntry>& ranked)
{
    std::vector<std::string> out;
    for (const auto& r : ranked) out.push_back(r.config_id);
    return out;
}

// 6. cosine properties, ubiquitous-term nullity and base-invariant ranking.
Verdict recommender_math()
{
    Verdict v;
    std::mt19937_64 rng(6);
    for (int i = 0; i < kCosineVectors; ++i) {
        auto a = random_vector(rng);
        auto b = random_vector(rng);
        const double ab = cosine(a, b);
        v.require(ab == cosine(b, a), "asymmetric cosine");
        v.require(ab >= 0.0 && ab <= 1.0, "cosine out of range: " + fmt(ab, 17));
        if (!a.empty()) v.require(std::abs(cosine(a, a) - 1.0) <= kScoreTolerance, "self-similarity != 1");
    }

    int ubiquitous = 0;
    for (int i = 0; i < kRandomCatalogs; ++i) {
        auto model = std::make_shared<const FeatureModel>(testing::random_model(rng, kCorpusLimits));
        Catalog catalog = random_catalog(rng, model);
        const auto facet = default_facet(*model);
        auto index = build_index(catalog, "all");
        for (const auto& [term, df] : index.document_frequency) {
            if (df != index.documents) continue;
            ++ubiquitous;
            for (const auto& entry : catalog.entries())
                v.require(tf_idf_weight(term, entry.features, index) == 0.0, "ubiquitous term " + term + " weighs");
        }
        auto selection = with_ancestors(*model, testing::random_selection(rng, *model));
        FeatureSet query(selection.begin(), selection.end());
        auto ln = rank(query, catalog, facet);
        auto log10 = rank(query, catalog, facet, 10.0);
        v.require(ids(ln) == ids(log10), "ln and log10 rankings differ (catalog " + std::to_string(i) + ")");
        auto again = rank(query, catalog, facet);
        for (std::size_t j = 0; j < ln.size(); ++j)
            v.require(again[j].config_id == ln[j].config_id && again[j].similarity == ln[j].similarity,
                      "ranking is not deterministic");
    }
    if (v.pass)
        v.detail = std::to_string(kCosineVectors) + " vector pairs, " + std::to_string(ubiquitous) +
                   " ubiquitous terms, " + std::to_string(kRandomCatalogs) + " ln/log10 rankings identical";
    return v;
}

// 7. every returned recommendation is a valid configuration.
Verdict validity_filter()
{
    Verdict v;
    std::mt19937_64 rng(7);
    int returned = 0;
    for (int i = 0; i < kRandomCatalogs; ++i) {
        auto model = std::make_shared<const FeatureModel>(testing::random_model(rng, kCorpusLimits));
        Catalog catalog = random_catalog(rng, model);
        std::set<FeatureSet> valid;
        for (const auto& config : enumerate_valid(*model)) valid.insert(FeatureSet(config.begin(), config.end()));
        auto selection = with_ancestors(*model, testing::random_selection(rng, *model));
        const std::size_t k = testing::uniform(rng, 1, 10);
        for (const auto& rec : recommend_valid(FeatureSet(selection.begin(), selection.end()), catalog,
                                               default_facet(*model), k)) {
            ++returned;
            const auto& features = catalog.find(rec.config_id)->features;
            v.require(check_full(*model, std::vector<std::string>(features.begin(), features.end())).empty(),
                      "invalid recommendation " + rec.config_id);
            v.require(valid.count(features) == 1, "recommendation outside enumerate_valid");
        }
    }
    if (v.pass) v.detail = std::to_string(returned) + " recommendations over " + std::to_string(kRandomCatalogs) +
                           " catalogs, 0 violations";
    return v;
}

/// Large model for timing: a random tree with single-choice and optional
/// groups plus cross constraints among optional features.
ModelPtr large_model(std::mt19937_64& rng)
{
    ModelDraft draft;
    std::vector<std::vector<int>> children(kLargeFeatures);
    for (int i = 0; i < kLargeFeatures; ++i) {
        Feature f;
        f.id = "f" + std::to_string(i);
        if (i == 0) {
            f.variability = Variability::Root;
        } else {
            const int parent = testing::uniform(rng, std::max(0, i / 4 - 10), i - 1);
            f.parent = "f" + std::to_string(parent);
            f.variability = testing::uniform(rng, 0, 9) == 0 ? Variability::Mandatory : Variability::Optional;
            children[parent].push_back(i);
        }
        draft.features.push_back(std::move(f));
    }
    for (int p = 0; p < kLargeFeatures; ++p) {
        std::vector<int> members;
        for (int c : children[p])
            if (draft.features[c].variability == Variability::Optional) members.push_back(c);
        if (members.size() < 2 || testing::uniform(rng, 0, 1) == 0) continue;
        members.resize(std::min<std::size_t>(members.size(), 4));
        Group g{"f" + std::to_string(p), testing::uniform(rng, 0, 1), 1, {}};
        for (int c : members) {
            g.members.push_back("f" + std::to_string(c));
            draft.features[c].variability = Variability::Grouped;
        }
        draft.groups.push_back(std::move(g));
    }
    std::vector<int> optional;
    for (int i = 1; i < kLargeFeatures; ++i)
        if (draft.features[i].variability == Variability::Optional) optional.push_back(i);
    while (static_cast<int>(draft.constraints.size()) < kLargeConstraints) {
        const int a = optional[testing::uniform(rng, 0, static_cast<int>(optional.size()) - 1)];
        const int b = testing::uniform(rng, 1, kLargeFeatures - 1);
        if (a == b) continue;
        draft.constraints.push_back({testing::uniform(rng, 0, 1) ? ConstraintKind::Requires : ConstraintKind::Excludes,
                                     "f" + std::to_string(a), "f" + std::to_string(b)});
    }
    return std::make_shared<const FeatureModel>(std::move(draft));
}

// 8. decide + propagate on a 500-feature, 200-constraint model.
Verdict responsiveness()
{
    Verdict v;
    std::mt19937_64 rng(8);
    auto model = large_model(rng);
    std::vector<double> ms;
    int conflicts = 0;
    for (int trial = 0; trial < kResponsivenessTrials; ++trial) {
        Session s("perf", model, nullptr);
        for (int warm = 0; warm < 10; ++warm) {
            const auto f = static_cast<FeatureIndex>(testing::uniform(rng, 1, kLargeFeatures - 1));
            s.decide(model->id(f), testing::uniform(rng, 0, 1) ? DecisionState::Selected : DecisionState::Rejected);
        }
        if (s.status() == SessionStatus::Complete) continue;
        const auto f = model->id(static_cast<FeatureIndex>(testing::uniform(rng, 1, kLargeFeatures - 1)));
        const auto choice = testing::uniform(rng, 0, 1) ? DecisionState::Selected : DecisionState::Rejected;
        const auto start = Clock::now();
        auto r = s.decide(f, choice);
        ms.push_back(seconds_since(start) * 1000.0);
        conflicts += r.consistent() ? 0 : 1;
    }
    v.require(static_cast<int>(ms.size()) == kResponsivenessTrials, "only " + std::to_string(ms.size()) + " trials ran");
    std::sort(ms.begin(), ms.end());
    const double median = ms.empty() ? 1e9 : ms[ms.size() / 2];
    v.require(median < kMedianLimitMs, "median " + fmt(median) + " ms");
    if (v.pass)
        v.detail = "median " + fmt(median) + " ms, max " + fmt(ms.back()) + " ms over " + std::to_string(ms.size()) +
                   " trials (" + std::to_string(conflicts) + " conflicts)";
    return v;
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"DELL scenario, invalidity", dell_invalidity},
        {"DELL scenario, recommendation", dell_recommendation},
        {"oracle equivalence", oracle_equivalence},
        {"propagation soundness", propagation_soundness},
        {"retraction and order independence", retraction_order_independence},
        {"recommender math", recommender_math},
        {"validity filter", validity_filter},
        {"responsiveness", responsiveness},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += v.pass ? 0 : 1;
        std::cout << "criterion " << i + 1 << ": " << (v.pass ? "PASS" : "FAIL") << "  " << criteria[i].first
                  << " (" << v.detail << ")" << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
