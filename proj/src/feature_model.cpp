#include "fmconf/feature_model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

namespace fmconf {

std::string_view to_string(Variability v)
{
    switch (v) {
    case Variability::Root: return "root";
    case Variability::Mandatory: return "mandatory";
    case Variability::Optional: return "optional";
    case Variability::Grouped: return "grouped";
    }
    return "?";
}

std::string_view to_string(ConstraintKind k)
{
    return k == ConstraintKind::Requires ? "requires" : "excludes";
}

std::string to_string(const Diagnostic& d)
{
    std::string out = d.message;
    if (!d.ids.empty()) {
        out += " (";
        for (std::size_t i = 0; i < d.ids.size(); ++i) {
            if (i > 0) out += ", ";
            out += d.ids[i];
        }
        out += ")";
    }
    return out;
}

bool is_valid_token(std::string_view token)
{
    if (token.empty()) return false;
    return std::all_of(token.begin(), token.end(), [](char c) {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
               c == '_' || c == '+' || c == '$' || c == '.' || c == '-';
    });
}

std::vector<std::string> split_ids(std::string_view text)
{
    std::vector<std::string> out;
    std::string current;
    for (char c : text) {
        if (c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            if (!current.empty()) out.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty()) out.push_back(std::move(current));
    return out;
}

namespace {

void add(std::vector<Diagnostic>& out, DiagnosticCode code, std::string message,
         std::vector<std::string> ids = {})
{
    out.push_back(Diagnostic{code, std::move(message), std::move(ids)});
}

void check_features(const ModelDraft& draft, std::vector<Diagnostic>& out,
                    std::map<std::string, const Feature*>& by_id)
{
    std::vector<std::string> roots;
    for (const auto& f : draft.features) {
        if (!is_valid_token(f.id)) add(out, DiagnosticCode::InvalidFeatureId, "invalid feature id", {f.id});
        if (!by_id.emplace(f.id, &f).second)
            add(out, DiagnosticCode::DuplicateFeature, "duplicate feature id", {f.id});
        if (f.variability == Variability::Root) {
            roots.push_back(f.id);
            if (f.parent) add(out, DiagnosticCode::RootHasParent, "root has a parent", {f.id});
        } else if (!f.parent) {
            add(out, DiagnosticCode::MissingParent, "non-root feature without parent", {f.id});
        }
    }
    if (roots.empty()) add(out, DiagnosticCode::NoRoot, "no root feature");
    if (roots.size() > 1) add(out, DiagnosticCode::MultipleRoots, "multiple roots", roots);

    for (const auto& f : draft.features) {
        if (f.variability != Variability::Root && f.parent && !by_id.contains(*f.parent))
            add(out, DiagnosticCode::UnknownParent, "unknown parent", {f.id, *f.parent});
    }

    // A walk up the parent links that takes more than |features| steps is a cycle.
    std::vector<std::string> cyclic;
    for (const auto& f : draft.features) {
        const Feature* cur = &f;
        std::size_t steps = 0;
        bool broken = false;
        while (cur->variability != Variability::Root && cur->parent) {
            auto it = by_id.find(*cur->parent);
            if (it == by_id.end()) {
                broken = true;
                break;
            }
            cur = it->second;
            if (++steps > draft.features.size()) break;
        }
        if (!broken && steps > draft.features.size()) cyclic.push_back(f.id);
    }
    if (!cyclic.empty()) add(out, DiagnosticCode::ParentCycle, "parent links form a cycle", cyclic);
}

void check_groups(const ModelDraft& draft, std::vector<Diagnostic>& out,
                  const std::map<std::string, const Feature*>& by_id)
{
    std::map<std::string, std::size_t> membership;
    for (std::size_t g = 0; g < draft.groups.size(); ++g) {
        const auto& grp = draft.groups[g];
        if (!by_id.contains(grp.parent))
            add(out, DiagnosticCode::UnknownGroupParent, "unknown group parent", {grp.parent});
        if (grp.members.size() < 2)
            add(out, DiagnosticCode::GroupTooFewMembers, "group has fewer than two members", {grp.parent});
        if (grp.lower < 0) add(out, DiagnosticCode::GroupLowerNegative, "group lower bound negative", {grp.parent});
        if (grp.upper < 1) add(out, DiagnosticCode::GroupUpperTooSmall, "group upper bound below one", {grp.parent});
        if (grp.lower > grp.upper)
            add(out, DiagnosticCode::GroupBoundsInverted, "group bounds inverted", {grp.parent});
        if (grp.upper > static_cast<int>(grp.members.size()))
            add(out, DiagnosticCode::GroupUpperExceedsMembers, "group upper bound exceeds member count",
                {grp.parent});

        std::set<std::string> seen;
        for (const auto& m : grp.members) {
            if (!seen.insert(m).second) {
                add(out, DiagnosticCode::GroupDuplicateMember, "member listed twice in group", {grp.parent, m});
                continue;
            }
            auto it = by_id.find(m);
            if (it == by_id.end()) {
                add(out, DiagnosticCode::UnknownGroupMember, "unknown group member", {grp.parent, m});
                continue;
            }
            const Feature& f = *it->second;
            if (f.parent != grp.parent)
                add(out, DiagnosticCode::GroupMemberParentMismatch, "group member has a different parent",
                    {grp.parent, m});
            if (f.variability != Variability::Grouped)
                add(out, DiagnosticCode::GroupMemberNotGrouped, "group member is not declared grouped", {m});
            auto [pos, fresh] = membership.emplace(m, g);
            if (!fresh)
                add(out, DiagnosticCode::FeatureInMultipleGroups, "feature belongs to more than one group", {m});
        }
    }
    for (const auto& f : draft.features) {
        if (f.variability == Variability::Grouped && !membership.contains(f.id))
            add(out, DiagnosticCode::GroupedFeatureWithoutGroup, "grouped feature is in no group", {f.id});
    }
}

void check_constraints(const ModelDraft& draft, std::vector<Diagnostic>& out,
                       const std::map<std::string, const Feature*>& by_id)
{
    for (const auto& c : draft.constraints) {
        for (const auto* end : {&c.a, &c.b}) {
            if (!by_id.contains(*end))
                add(out, DiagnosticCode::UnknownConstraintFeature,
                    "unknown feature in " + std::string(to_string(c.kind)), {*end});
        }
        if (c.a == c.b)
            add(out, DiagnosticCode::SelfConstraint,
                c.kind == ConstraintKind::Excludes ? "self-exclusion" : "self-requirement", {c.a});
    }
}

void check_facets(const ModelDraft& draft, std::vector<Diagnostic>& out,
                  const std::map<std::string, const Feature*>& by_id)
{
    std::set<std::string> names;
    for (const auto& facet : draft.facets) {
        if (facet.name == kAllFacet)
            add(out, DiagnosticCode::ReservedFacetName, "facet name 'all' is reserved", {facet.name});
        if (!names.insert(facet.name).second)
            add(out, DiagnosticCode::DuplicateFacet, "duplicate facet", {facet.name});
        if (facet.members.empty()) add(out, DiagnosticCode::EmptyFacet, "empty facet", {facet.name});
        for (const auto& m : facet.members) {
            if (!by_id.contains(m))
                add(out, DiagnosticCode::UnknownFacetMember, "unknown facet member", {facet.name, m});
        }
    }
}

void check_attributes(const ModelDraft& draft, std::vector<Diagnostic>& out)
{
    for (const auto& f : draft.features) {
        std::set<std::string> names;
        for (const auto& attr : f.attributes) {
            if (!names.insert(attr.name).second)
                add(out, DiagnosticCode::DuplicateAttribute, "duplicate attribute", {f.id, attr.name});
            if (const auto* range = std::get_if<IntRange>(&attr.domain); range && range->lo > range->hi)
                add(out, DiagnosticCode::AttributeRangeInverted, "attribute range inverted", {f.id, attr.name});
            if (const auto* e = std::get_if<EnumDomain>(&attr.domain); e && e->values.empty())
                add(out, DiagnosticCode::AttributeEmptyEnum, "attribute enum domain empty", {f.id, attr.name});
        }
    }
}

std::string describe(const std::vector<Diagnostic>& diagnostics)
{
    std::ostringstream os;
    os << "malformed feature model";
    for (const auto& d : diagnostics) os << "; " << to_string(d);
    return os.str();
}

}  // namespace

std::vector<Diagnostic> validate_wellformed(const ModelDraft& draft)
{
    std::vector<Diagnostic> out;
    std::map<std::string, const Feature*> by_id;
    check_features(draft, out, by_id);
    check_groups(draft, out, by_id);
    check_constraints(draft, out, by_id);
    check_facets(draft, out, by_id);
    check_attributes(draft, out);
    return out;
}

ModelError::ModelError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(describe(diagnostics)), diagnostics_(std::move(diagnostics))
{
}

ParseError::ParseError(std::size_t line, std::string token, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what +
                         (token.empty() ? std::string() : " near '" + token + "'")),
      line_(line), token_(std::move(token))
{
}

FeatureModel::FeatureModel(ModelDraft draft) : draft_(std::move(draft))
{
    if (auto diagnostics = validate_wellformed(draft_); !diagnostics.empty())
        throw ModelError(std::move(diagnostics));

    const std::size_t n = draft_.features.size();
    for (FeatureIndex f = 0; f < n; ++f) by_id_.emplace(draft_.features[f].id, f);

    parent_.resize(n);
    children_.resize(n);
    group_of_.resize(n);
    for (FeatureIndex f = 0; f < n; ++f) {
        const auto& feature = draft_.features[f];
        if (feature.variability == Variability::Root) {
            root_ = f;
            continue;
        }
        FeatureIndex p = by_id_.at(*feature.parent);
        parent_[f] = p;
        children_[p].push_back(f);
    }
    for (std::size_t g = 0; g < draft_.groups.size(); ++g) {
        const auto& grp = draft_.groups[g];
        group_parent_.push_back(by_id_.at(grp.parent));
        auto& members = group_members_.emplace_back();
        for (const auto& m : grp.members) {
            FeatureIndex f = by_id_.at(m);
            members.push_back(f);
            group_of_[f] = g;
        }
    }
    for (const auto& c : draft_.constraints)
        constraints_.push_back({c.kind, by_id_.at(c.a), by_id_.at(c.b)});
}

std::optional<FeatureIndex> FeatureModel::parent(FeatureIndex f) const
{
    return parent_[f];
}

std::optional<FeatureIndex> FeatureModel::index_of(std::string_view id) const
{
    auto it = by_id_.find(std::string(id));
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

FeatureIndex FeatureModel::require_index(std::string_view id) const
{
    auto f = index_of(id);
    if (!f) throw std::out_of_range("unknown feature '" + std::string(id) + "'");
    return *f;
}

std::optional<std::size_t> FeatureModel::group_of(FeatureIndex f) const
{
    return group_of_[f];
}

bool FeatureModel::has_facet(std::string_view name) const
{
    if (name == kAllFacet) return true;
    return std::any_of(draft_.facets.begin(), draft_.facets.end(),
                       [&](const Facet& f) { return f.name == name; });
}

std::vector<std::string> FeatureModel::facet_members(std::string_view name) const
{
    if (name == kAllFacet) {
        std::vector<std::string> all;
        all.reserve(size());
        for (const auto& f : draft_.features) all.push_back(f.id);
        return all;
    }
    for (const auto& facet : draft_.facets) {
        if (facet.name == name) return facet.members;
    }
    throw std::out_of_range("unknown facet '" + std::string(name) + "'");
}

std::vector<std::string> facet_members(const FeatureModel& model, std::string_view name)
{
    return model.facet_members(name);
}

}  // namespace fmconf
