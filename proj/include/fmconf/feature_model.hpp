/**
 * @file feature_model.hpp
 * @brief Feature model data structures, the `fm 1` text format and well-formedness checks.
 *
 * A model is described first as a ModelDraft, a plain aggregate that may be
 * malformed (validate_wellformed reports what is wrong with it). A FeatureModel
 * is built from a draft only when the draft is well-formed; it adds index
 * lookups used by the configuration engine and is immutable afterwards.
 *
 * Text format (line oriented, `#` starts a comment):
 * ```
 * fm 1
 * feature Laptop root
 * feature OS Laptop mandatory
 * feature Linux OS grouped
 * feature Windows OS grouped
 * group OS 1 1 Linux Windows
 * requires A B
 * excludes A B
 * facet functional Linux Windows
 * attr OS version int 1 10
 * ```
 */
#ifndef FMCONF_FEATURE_MODEL_HPP
#define FMCONF_FEATURE_MODEL_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace fmconf {

/// Position of a feature in declaration order.
using FeatureIndex = std::size_t;

enum class Variability { Root, Mandatory, Optional, Grouped };

struct IntRange {
    long long lo = 0;
    long long hi = 0;
    bool operator==(const IntRange&) const = default;
};

struct EnumDomain {
    std::vector<std::string> values;
    bool operator==(const EnumDomain&) const = default;
};

/// Attributes carry a name and a domain. Values belong to configurations and
/// are never stored in the model.
struct Attribute {
    std::string name;
    std::variant<IntRange, EnumDomain> domain;
    bool operator==(const Attribute&) const = default;
};

struct Feature {
    std::string id;
    std::optional<std::string> parent;  ///< absent only for the root
    Variability variability = Variability::Optional;
    std::vector<Attribute> attributes;
    bool operator==(const Feature&) const = default;
};

/// Group cardinality <lower..upper> over children of one parent.
struct Group {
    std::string parent;
    int lower = 0;
    int upper = 1;
    std::vector<std::string> members;
    bool operator==(const Group&) const = default;
};

enum class ConstraintKind { Requires, Excludes };

/// `excludes` is stored once and read symmetrically.
struct CrossConstraint {
    ConstraintKind kind = ConstraintKind::Requires;
    std::string a;
    std::string b;
    bool operator==(const CrossConstraint&) const = default;
};

struct Facet {
    std::string name;
    std::vector<std::string> members;
    bool operator==(const Facet&) const = default;
};

/// Unvalidated model contents, in declaration order.
struct ModelDraft {
    std::vector<Feature> features;
    std::vector<Group> groups;
    std::vector<CrossConstraint> constraints;
    std::vector<Facet> facets;
    bool operator==(const ModelDraft&) const = default;
};

enum class DiagnosticCode {
    NoRoot,
    MultipleRoots,
    DuplicateFeature,
    InvalidFeatureId,
    RootHasParent,
    MissingParent,
    UnknownParent,
    ParentCycle,
    UnknownGroupParent,
    UnknownGroupMember,
    GroupTooFewMembers,
    GroupBoundsInverted,
    GroupLowerNegative,
    GroupUpperTooSmall,
    GroupUpperExceedsMembers,
    GroupMemberParentMismatch,
    GroupMemberNotGrouped,
    GroupDuplicateMember,
    FeatureInMultipleGroups,
    GroupedFeatureWithoutGroup,
    UnknownConstraintFeature,
    SelfConstraint,
    EmptyFacet,
    UnknownFacetMember,
    DuplicateFacet,
    ReservedFacetName,
    UnknownAttributeFeature,
    DuplicateAttribute,
    AttributeRangeInverted,
    AttributeEmptyEnum,
};

struct Diagnostic {
    DiagnosticCode code;
    std::string message;
    std::vector<std::string> ids;  ///< offending feature/facet ids
};

std::string_view to_string(Variability v);
std::string_view to_string(ConstraintKind k);
std::string to_string(const Diagnostic& d);

/// Lists every violated model invariant. Never throws.
std::vector<Diagnostic> validate_wellformed(const ModelDraft& draft);

/// Thrown when a draft that is not well-formed is turned into a FeatureModel.
class ModelError : public std::runtime_error {
public:
    explicit ModelError(std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

/// Syntax error in a model or catalog document.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::string token, const std::string& what);
    std::size_t line() const noexcept { return line_; }
    const std::string& token() const noexcept { return token_; }

private:
    std::size_t line_;
    std::string token_;
};

/// Name of the pseudo-facet covering every feature.
inline constexpr std::string_view kAllFacet = "all";

/**
 * @brief A well-formed, immutable feature model with index lookups.
 */
class FeatureModel {
public:
    /// @throws ModelError if validate_wellformed(draft) is non-empty.
    explicit FeatureModel(ModelDraft draft);

    const ModelDraft& draft() const noexcept { return draft_; }

    std::size_t size() const noexcept { return draft_.features.size(); }
    FeatureIndex root() const noexcept { return root_; }
    const std::string& id(FeatureIndex f) const { return draft_.features[f].id; }
    Variability variability(FeatureIndex f) const { return draft_.features[f].variability; }
    std::optional<FeatureIndex> parent(FeatureIndex f) const;
    const std::vector<FeatureIndex>& children(FeatureIndex f) const { return children_[f]; }
    std::optional<FeatureIndex> index_of(std::string_view id) const;
    /// @throws std::out_of_range for unknown ids
    FeatureIndex require_index(std::string_view id) const;
    bool contains(std::string_view id) const { return index_of(id).has_value(); }

    /// Group of a grouped feature, as an index into draft().groups.
    std::optional<std::size_t> group_of(FeatureIndex f) const;
    FeatureIndex group_parent(std::size_t g) const { return group_parent_[g]; }
    const std::vector<FeatureIndex>& group_members(std::size_t g) const { return group_members_[g]; }
    std::size_t group_count() const noexcept { return draft_.groups.size(); }

    /// Cross constraint endpoints as indices, parallel to draft().constraints.
    struct IndexedConstraint {
        ConstraintKind kind;
        FeatureIndex a;
        FeatureIndex b;
    };
    const std::vector<IndexedConstraint>& constraints() const noexcept { return constraints_; }

    bool has_facet(std::string_view name) const;
    /// Member ids of a facet; "all" yields every feature in declaration order.
    /// @throws std::out_of_range for unknown facet names
    std::vector<std::string> facet_members(std::string_view name) const;

    bool operator==(const FeatureModel& other) const { return draft_ == other.draft_; }

private:
    ModelDraft draft_;
    FeatureIndex root_ = 0;
    std::unordered_map<std::string, FeatureIndex> by_id_;
    std::vector<std::optional<FeatureIndex>> parent_;
    std::vector<std::vector<FeatureIndex>> children_;
    std::vector<std::optional<std::size_t>> group_of_;
    std::vector<FeatureIndex> group_parent_;
    std::vector<std::vector<FeatureIndex>> group_members_;
    std::vector<IndexedConstraint> constraints_;
};

/// Parses an `fm 1` document into a draft without checking well-formedness.
/// @throws ParseError on syntax errors
ModelDraft parse_model_draft(std::string_view text);

/// Parses and validates an `fm 1` document.
/// @throws ParseError on syntax errors, ModelError when the model is malformed
FeatureModel parse_model(std::string_view text);

std::string serialize_model(const FeatureModel& model);
std::string serialize_model(const ModelDraft& draft);

/// Convenience for `model.facet_members(name)`.
std::vector<std::string> facet_members(const FeatureModel& model, std::string_view name);

/// Tokens allowed as feature ids: [A-Za-z0-9_+$.-]+
bool is_valid_token(std::string_view token);

/// Splits on whitespace and commas.
std::vector<std::string> split_ids(std::string_view text);

}  // namespace fmconf

#endif  // FMCONF_FEATURE_MODEL_HPP
