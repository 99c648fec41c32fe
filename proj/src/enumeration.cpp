#include "fmconf/configuration.hpp"

#include <functional>

namespace fmconf {

std::string_view to_string(BackboneState b)
{
    switch (b) {
    case BackboneState::ForcedSelected: return "forced-selected";
    case BackboneState::ForcedRejected: return "forced-rejected";
    case BackboneState::Free: return "free";
    case BackboneState::NoCompletion: return "no-completion";
    }
    return "?";
}

namespace {

enum : signed char { kUnassigned = -1, kRejected = 0, kSelected = 1 };

/**
 * Depth-first search over features in declaration order, rejected branch
 * first. A branch is cut once a relationship whose participants are all
 * assigned is broken, or a group bound can no longer be met. Leaves are
 * accepted only after a full check_full().
 */
class Enumerator {
public:
    Enumerator(const FeatureModel& model, std::vector<signed char> fixed)
        : model_(model), fixed_(std::move(fixed)), assignment_(model.size(), kUnassigned), incident_(model.size())
    {
        for (FeatureIndex f = 0; f < model.size(); ++f) {
            if (auto p = model.parent(f)) {
                incident_[f].push_back({Check::Tree, f});
                incident_[*p].push_back({Check::Tree, f});
            }
        }
        for (std::size_t g = 0; g < model.group_count(); ++g) {
            incident_[model.group_parent(g)].push_back({Check::Group, g});
            for (FeatureIndex m : model.group_members(g)) incident_[m].push_back({Check::Group, g});
        }
        for (std::size_t k = 0; k < model.constraints().size(); ++k) {
            incident_[model.constraints()[k].a].push_back({Check::Cross, k});
            incident_[model.constraints()[k].b].push_back({Check::Cross, k});
        }
    }

    void run(const std::function<bool(const std::vector<bool>&)>& visit)
    {
        visit_ = &visit;
        stopped_ = false;
        descend(0);
    }

private:
    enum class Check { Tree, Group, Cross };
    struct Incidence {
        Check check;
        std::size_t index;
    };

    void descend(FeatureIndex f)
    {
        if (stopped_) return;
        if (f == model_.size()) {
            std::vector<bool> selected(model_.size());
            for (FeatureIndex i = 0; i < model_.size(); ++i) selected[i] = assignment_[i] == kSelected;
            if (check_full(model_, selected).empty() && !(*visit_)(selected)) stopped_ = true;
            return;
        }
        for (signed char value : {kRejected, kSelected}) {
            if (fixed_[f] != kUnassigned && fixed_[f] != value) continue;
            assignment_[f] = value;
            if (consistent_at(f)) descend(f + 1);
            if (stopped_) break;
        }
        assignment_[f] = kUnassigned;
    }

    bool consistent_at(FeatureIndex f) const
    {
        if (f == model_.root() && assignment_[f] == kRejected) return false;
        for (const auto& inc : incident_[f]) {
            switch (inc.check) {
            case Check::Tree:
                if (!tree_ok(inc.index)) return false;
                break;
            case Check::Group:
                if (!group_ok(inc.index)) return false;
                break;
            case Check::Cross:
                if (!cross_ok(inc.index)) return false;
                break;
            }
        }
        return true;
    }

    bool tree_ok(FeatureIndex child) const
    {
        const signed char c = assignment_[child];
        const signed char p = assignment_[*model_.parent(child)];
        if (c == kUnassigned || p == kUnassigned) return true;
        if (c == kSelected && p == kRejected) return false;
        if (model_.variability(child) == Variability::Mandatory && p == kSelected && c == kRejected) return false;
        return true;
    }

    bool group_ok(std::size_t g) const
    {
        if (assignment_[model_.group_parent(g)] != kSelected) return true;
        const auto& grp = model_.draft().groups[g];
        int selected = 0;
        int open = 0;
        for (FeatureIndex m : model_.group_members(g)) {
            selected += assignment_[m] == kSelected;
            open += assignment_[m] == kUnassigned;
        }
        return selected <= grp.upper && selected + open >= grp.lower;
    }

    bool cross_ok(std::size_t k) const
    {
        const auto& c = model_.constraints()[k];
        const signed char a = assignment_[c.a];
        const signed char b = assignment_[c.b];
        if (c.kind == ConstraintKind::Requires) return !(a == kSelected && b == kRejected);
        return !(a == kSelected && b == kSelected);
    }

    const FeatureModel& model_;
    std::vector<signed char> fixed_;
    std::vector<signed char> assignment_;
    std::vector<std::vector<Incidence>> incident_;
    const std::function<bool(const std::vector<bool>&)>* visit_ = nullptr;
    bool stopped_ = false;
};

}  // namespace

std::vector<std::vector<std::string>> enumerate_valid(const FeatureModel& model, std::optional<std::size_t> limit)
{
    std::vector<std::vector<std::string>> out;
    if (limit && *limit == 0) return out;
    Enumerator e(model, std::vector<signed char>(model.size(), kUnassigned));
    e.run([&](const std::vector<bool>& selected) {
        auto& config = out.emplace_back();
        for (FeatureIndex f = 0; f < model.size(); ++f) {
            if (selected[f]) config.push_back(model.id(f));
        }
        return !limit || out.size() < *limit;
    });
    return out;
}

std::vector<BackboneState> backbone(const FeatureModel& model, const PartialConfiguration& c)
{
    std::vector<signed char> fixed(model.size(), kUnassigned);
    fixed[model.root()] = kSelected;
    for (auto [f, s] : c.user_decisions()) fixed[f] = s == DecisionState::Selected ? kSelected : kRejected;

    std::size_t completions = 0;
    std::vector<std::size_t> selected_in(model.size(), 0);
    Enumerator e(model, std::move(fixed));
    e.run([&](const std::vector<bool>& selected) {
        ++completions;
        for (FeatureIndex f = 0; f < model.size(); ++f) selected_in[f] += selected[f];
        return true;
    });

    std::vector<BackboneState> out(model.size(), BackboneState::NoCompletion);
    if (completions == 0) return out;
    for (FeatureIndex f = 0; f < model.size(); ++f) {
        if (selected_in[f] == completions)
            out[f] = BackboneState::ForcedSelected;
        else if (selected_in[f] == 0)
            out[f] = BackboneState::ForcedRejected;
        else
            out[f] = BackboneState::Free;
    }
    return out;
}

}  // namespace fmconf
