#include "fmconf/configuration.hpp"

#include <algorithm>
#include <stdexcept>

namespace fmconf {

std::string_view to_string(DecisionState s)
{
    switch (s) {
    case DecisionState::Undecided: return "undecided";
    case DecisionState::Selected: return "selected";
    case DecisionState::Rejected: return "rejected";
    }
    return "?";
}

std::string_view to_string(Provenance p)
{
    switch (p) {
    case Provenance::None: return "none";
    case Provenance::User: return "user";
    case Provenance::Propagated: return "propagated";
    case Provenance::Root: return "root";
    }
    return "?";
}

std::optional<DecisionState> parse_decision_state(std::string_view text)
{
    if (text == "selected") return DecisionState::Selected;
    if (text == "rejected") return DecisionState::Rejected;
    if (text == "undecided") return DecisionState::Undecided;
    return std::nullopt;
}

std::string_view to_string(ViolationKind k)
{
    switch (k) {
    case ViolationKind::Root: return "root";
    case ViolationKind::Parent: return "parent";
    case ViolationKind::Mandatory: return "mandatory";
    case ViolationKind::Requires: return "requires";
    case ViolationKind::Excludes: return "excludes";
    case ViolationKind::GroupCardinality: return "group";
    }
    return "?";
}

std::string_view to_string(Outcome o)
{
    return o == Outcome::Consistent ? "consistent" : "conflict";
}

std::string Violation::description() const
{
    std::string out(to_string(kind));
    out += '(';
    if (kind == ViolationKind::GroupCardinality) {
        out += features.front() + ", " + std::to_string(lower) + ".." + std::to_string(upper);
    } else {
        for (std::size_t i = 0; i < features.size(); ++i) {
            if (i > 0) out += ", ";
            out += features[i];
        }
    }
    out += ')';
    return out;
}

PartialConfiguration::PartialConfiguration(ModelPtr model)
    : model_(std::move(model)),
      state_(model_->size(), DecisionState::Undecided),
      provenance_(model_->size(), Provenance::None)
{
    state_[model_->root()] = DecisionState::Selected;
    provenance_[model_->root()] = Provenance::Root;
}

void PartialConfiguration::decide(FeatureIndex f, DecisionState s)
{
    if (s == DecisionState::Undecided) throw std::invalid_argument("a decision must select or reject");
    if (f == model_->root()) throw std::invalid_argument("the root cannot be decided");
    state_.at(f) = s;
    provenance_[f] = Provenance::User;
}

bool PartialConfiguration::retract(FeatureIndex f)
{
    if (provenance_.at(f) != Provenance::User) return false;
    state_[f] = DecisionState::Undecided;
    provenance_[f] = Provenance::None;
    clear_propagated();
    return true;
}

void PartialConfiguration::clear_propagated()
{
    for (FeatureIndex f = 0; f < state_.size(); ++f) {
        if (provenance_[f] == Provenance::Propagated) {
            state_[f] = DecisionState::Undecided;
            provenance_[f] = Provenance::None;
        }
    }
}

std::vector<std::pair<FeatureIndex, DecisionState>> PartialConfiguration::user_decisions() const
{
    std::vector<std::pair<FeatureIndex, DecisionState>> out;
    for (FeatureIndex f = 0; f < state_.size(); ++f) {
        if (provenance_[f] == Provenance::User) out.emplace_back(f, state_[f]);
    }
    return out;
}

std::vector<FeatureIndex> PartialConfiguration::selected() const
{
    std::vector<FeatureIndex> out;
    for (FeatureIndex f = 0; f < state_.size(); ++f) {
        if (state_[f] == DecisionState::Selected) out.push_back(f);
    }
    return out;
}

std::vector<std::string> PartialConfiguration::selected_ids() const
{
    std::vector<std::string> out;
    for (FeatureIndex f : selected()) out.push_back(model_->id(f));
    return out;
}

void PartialConfiguration::assign_propagated(FeatureIndex f, DecisionState s)
{
    state_.at(f) = s;
    provenance_[f] = Provenance::Propagated;
}

namespace {

using States = std::vector<DecisionState>;
constexpr auto Sel = DecisionState::Selected;
constexpr auto Rej = DecisionState::Rejected;
constexpr auto Und = DecisionState::Undecided;

void add_witness(Violation& v, const FeatureModel& model, const States& states, FeatureIndex f)
{
    if (states[f] != Und) v.witness.emplace_back(model.id(f), states[f]);
}

Violation make_violation(ViolationKind kind, const FeatureModel& model, const States& states,
                         std::initializer_list<FeatureIndex> features)
{
    Violation v{kind, {}, {}};
    for (FeatureIndex f : features) {
        v.features.push_back(model.id(f));
        add_witness(v, model, states, f);
    }
    return v;
}

// Relationships broken by the decided entries of `states`.
std::vector<Violation> scan(const FeatureModel& model, const States& states)
{
    std::vector<Violation> out;
    const FeatureIndex root = model.root();
    if (states[root] == Rej) out.push_back(make_violation(ViolationKind::Root, model, states, {root}));

    for (FeatureIndex f = 0; f < model.size(); ++f) {
        auto parent = model.parent(f);
        if (!parent) continue;
        if (states[f] == Sel && states[*parent] == Rej)
            out.push_back(make_violation(ViolationKind::Parent, model, states, {f, *parent}));
        if (model.variability(f) == Variability::Mandatory && states[*parent] == Sel && states[f] == Rej)
            out.push_back(make_violation(ViolationKind::Mandatory, model, states, {*parent, f}));
    }

    for (std::size_t g = 0; g < model.group_count(); ++g) {
        const FeatureIndex parent = model.group_parent(g);
        if (states[parent] != Sel) continue;
        const auto& grp = model.draft().groups[g];
        int selected = 0;
        int undecided = 0;
        for (FeatureIndex m : model.group_members(g)) {
            selected += states[m] == Sel;
            undecided += states[m] == Und;
        }
        if (selected > grp.upper || selected + undecided < grp.lower) {
            Violation v{ViolationKind::GroupCardinality, {model.id(parent)}, {}, grp.lower, grp.upper};
            add_witness(v, model, states, parent);
            for (FeatureIndex m : model.group_members(g)) {
                v.features.push_back(model.id(m));
                add_witness(v, model, states, m);
            }
            out.push_back(std::move(v));
        }
    }

    for (const auto& c : model.constraints()) {
        if (c.kind == ConstraintKind::Requires && states[c.a] == Sel && states[c.b] == Rej)
            out.push_back(make_violation(ViolationKind::Requires, model, states, {c.a, c.b}));
        if (c.kind == ConstraintKind::Excludes && states[c.a] == Sel && states[c.b] == Sel)
            out.push_back(make_violation(ViolationKind::Excludes, model, states, {c.a, c.b}));
    }
    return out;
}

}  // namespace

std::vector<Violation> check_full(const FeatureModel& model, const std::vector<bool>& selected)
{
    if (selected.size() != model.size()) throw std::invalid_argument("selection vector size mismatch");
    States states(model.size());
    for (FeatureIndex f = 0; f < model.size(); ++f) states[f] = selected[f] ? Sel : Rej;
    return scan(model, states);
}

std::vector<Violation> check_full(const FeatureModel& model, const std::vector<std::string>& selected)
{
    std::vector<bool> mask(model.size(), false);
    for (const auto& id : selected) mask[model.require_index(id)] = true;
    return check_full(model, mask);
}

std::vector<Violation> violations_of(const PartialConfiguration& c)
{
    return scan(c.model(), c.states());
}

PropagationResult propagate(PartialConfiguration& c)
{
    const FeatureModel& model = c.model();
    PartialConfiguration work = c;
    PropagationResult result;
    bool changed = true;

    // A contradicting assignment is skipped: the rule's relationship is then
    // broken by decided states and the final scan reports it.
    auto assign = [&](FeatureIndex f, DecisionState s) {
        if (work.state(f) != Und) return;
        work.assign_propagated(f, s);
        result.derived.emplace_back(f, s);
        changed = true;
    };

    while (changed) {
        changed = false;

        for (FeatureIndex f = 0; f < model.size(); ++f) {
            auto parent = model.parent(f);
            if (!parent) continue;
            if (work.state(f) == Sel) assign(*parent, Sel);
            if (work.state(*parent) == Rej) assign(f, Rej);
            if (model.variability(f) == Variability::Mandatory) {
                if (work.state(*parent) == Sel) assign(f, Sel);
                if (work.state(f) == Rej) assign(*parent, Rej);
            }
        }

        for (std::size_t g = 0; g < model.group_count(); ++g) {
            if (work.state(model.group_parent(g)) != Sel) continue;
            const auto& grp = model.draft().groups[g];
            int selected = 0;
            int undecided = 0;
            for (FeatureIndex m : model.group_members(g)) {
                selected += work.state(m) == Sel;
                undecided += work.state(m) == Und;
            }
            if (undecided == 0) continue;
            if (selected == grp.upper) {
                for (FeatureIndex m : model.group_members(g)) assign(m, Rej);
            } else if (selected + undecided == grp.lower) {
                for (FeatureIndex m : model.group_members(g)) assign(m, Sel);
            }
        }

        for (const auto& k : model.constraints()) {
            if (k.kind == ConstraintKind::Requires) {
                if (work.state(k.a) == Sel) assign(k.b, Sel);
                if (work.state(k.b) == Rej) assign(k.a, Rej);
            } else {
                if (work.state(k.a) == Sel) assign(k.b, Rej);
                if (work.state(k.b) == Sel) assign(k.a, Rej);
            }
        }
    }

    result.violations = violations_of(work);
    if (!result.violations.empty()) {
        result.outcome = Outcome::Conflict;
        result.derived.clear();
        return result;
    }
    c = std::move(work);
    return result;
}

bool is_complete(const PartialConfiguration& c)
{
    return std::none_of(c.states().begin(), c.states().end(), [](DecisionState s) { return s == Und; });
}

std::vector<std::string> with_ancestors(const FeatureModel& model, const std::vector<std::string>& features)
{
    std::vector<bool> mask(model.size(), false);
    mask[model.root()] = true;
    for (const auto& id : features) {
        std::optional<FeatureIndex> f = model.require_index(id);
        while (f && !mask[*f]) {
            mask[*f] = true;
            f = model.parent(*f);
        }
    }
    std::vector<std::string> out;
    for (FeatureIndex f = 0; f < model.size(); ++f) {
        if (mask[f]) out.push_back(model.id(f));
    }
    return out;
}

}  // namespace fmconf
