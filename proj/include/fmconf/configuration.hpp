/**
 * @file configuration.hpp
 * @brief Partial configurations, full-configuration checking, unit propagation
 *        and the enumeration oracle.
 *
 * Propagation applies local unit rules to a fixpoint:
 *  - child selected => parent selected; parent rejected => children rejected
 *  - mandatory child <=> parent
 *  - requires(A,B): A selected => B selected; B rejected => A rejected
 *  - excludes(A,B): either selected => the other rejected
 *  - group <n..m> under a selected parent: m selected => rest rejected,
 *    selected + undecided == n => all undecided selected
 *
 * The rules are sound but not complete; enumerate_valid() and backbone() give
 * the exact answer on small models and are used to check propagation.
 */
#ifndef FMCONF_CONFIGURATION_HPP
#define FMCONF_CONFIGURATION_HPP

#include "fmconf/feature_model.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fmconf {

enum class DecisionState { Undecided, Selected, Rejected };
enum class Provenance { None, User, Propagated, Root };

std::string_view to_string(DecisionState s);
std::string_view to_string(Provenance p);
std::optional<DecisionState> parse_decision_state(std::string_view text);

using ModelPtr = std::shared_ptr<const FeatureModel>;

/// Relationship whose semantics are broken by a configuration.
enum class ViolationKind { Root, Parent, Mandatory, Requires, Excludes, GroupCardinality };

std::string_view to_string(ViolationKind k);

/**
 * @brief One unsatisfied relationship and the decided features that break it.
 *
 * `features` are the relationship's participants (child/parent, a/b, or group
 * parent followed by members). `witness` only lists decided features.
 */
struct Violation {
    ViolationKind kind;
    std::vector<std::string> features;
    std::vector<std::pair<std::string, DecisionState>> witness;
    /// For group violations, the bounds being broken.
    int lower = 0;
    int upper = 0;

    /// Human-readable form, e.g. `excludes(Mininotebook, 320GB)`.
    std::string description() const;
    bool operator==(const Violation&) const = default;
};

/**
 * @brief Three-valued decision state for every feature of one model.
 *
 * The root is always Selected with provenance Root. Single-writer: callers
 * serialize mutations on one instance; distinct instances are independent.
 */
class PartialConfiguration {
public:
    explicit PartialConfiguration(ModelPtr model);

    const FeatureModel& model() const noexcept { return *model_; }
    const ModelPtr& model_ptr() const noexcept { return model_; }

    DecisionState state(FeatureIndex f) const { return state_[f]; }
    DecisionState state(std::string_view id) const { return state_[model_->require_index(id)]; }
    Provenance provenance(FeatureIndex f) const { return provenance_[f]; }
    Provenance provenance(std::string_view id) const { return provenance_[model_->require_index(id)]; }

    const std::vector<DecisionState>& states() const noexcept { return state_; }

    /// Records an explicit user decision, replacing any earlier one for the
    /// same feature. Deciding the root is rejected.
    /// @throws std::invalid_argument for Undecided or for the root
    void decide(FeatureIndex f, DecisionState s);
    void decide(std::string_view id, DecisionState s) { decide(model_->require_index(id), s); }

    /// Removes a user decision and every propagated state.
    /// @return false when `f` carries no user decision
    bool retract(FeatureIndex f);

    /// Returns every propagated state to Undecided; user decisions and root stay.
    void clear_propagated();

    /// User decisions in feature declaration order.
    std::vector<std::pair<FeatureIndex, DecisionState>> user_decisions() const;

    std::vector<FeatureIndex> selected() const;
    std::vector<std::string> selected_ids() const;

    /// Writes a propagated state. Used by propagate().
    void assign_propagated(FeatureIndex f, DecisionState s);

    bool operator==(const PartialConfiguration& other) const
    {
        return model_ == other.model_ && state_ == other.state_ && provenance_ == other.provenance_;
    }

private:
    ModelPtr model_;
    std::vector<DecisionState> state_;
    std::vector<Provenance> provenance_;
};

enum class Outcome { Consistent, Conflict };
std::string_view to_string(Outcome o);

struct PropagationResult {
    Outcome outcome = Outcome::Consistent;
    /// Newly derived (or, for session retractions, reset) states.
    std::vector<std::pair<FeatureIndex, DecisionState>> derived;
    /// Non-empty iff outcome == Conflict.
    std::vector<Violation> violations;

    bool consistent() const noexcept { return outcome == Outcome::Consistent; }
};

/**
 * Validates a full configuration: every feature outside `selected` is rejected.
 * Violations are listed in model declaration order.
 * @throws std::out_of_range on unknown feature ids
 */
std::vector<Violation> check_full(const FeatureModel& model, const std::vector<std::string>& selected);
std::vector<Violation> check_full(const FeatureModel& model, const std::vector<bool>& selected);

/// Relationships broken by the decided states of `c` alone. Undecided
/// features never contribute to a violation except through group bounds
/// that can no longer be met.
std::vector<Violation> violations_of(const PartialConfiguration& c);

/**
 * Runs unit propagation to a fixpoint. On Consistent, `c` is updated in place
 * and `derived` lists the newly assigned features; on Conflict `c` is left as
 * it was and every relationship broken by the decided states is reported.
 */
PropagationResult propagate(PartialConfiguration& c);

bool is_complete(const PartialConfiguration& c);

/// Adds the root and every ancestor of the listed features.
std::vector<std::string> with_ancestors(const FeatureModel& model, const std::vector<std::string>& features);

/**
 * Enumerates valid full configurations as selected-id lists, in lexicographic
 * order of assignment vectors over declaration order with Rejected < Selected.
 * Exhaustive when `limit` is absent. Intended for small models.
 */
std::vector<std::vector<std::string>> enumerate_valid(const FeatureModel& model,
                                                      std::optional<std::size_t> limit = std::nullopt);

enum class BackboneState { ForcedSelected, ForcedRejected, Free, NoCompletion };
std::string_view to_string(BackboneState b);

/// Classifies each feature over all valid completions of c's user decisions.
std::vector<BackboneState> backbone(const FeatureModel& model, const PartialConfiguration& c);

}  // namespace fmconf

#endif  // FMCONF_CONFIGURATION_HPP
