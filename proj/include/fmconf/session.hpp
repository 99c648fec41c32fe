/**
 * @file session.hpp
 * @brief One user's interactive configuration loop: decide, test, recommend,
 *        propagate, finalize.
 *
 * The configuration is always the propagation fixpoint of the surviving user
 * decisions, rebuilt from scratch on every change. That makes the final state
 * independent of the order in which decisions were made or retracted.
 */
#ifndef FMCONF_SESSION_HPP
#define FMCONF_SESSION_HPP

#include "fmconf/configuration.hpp"
#include "fmconf/recommender.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fmconf {

enum class SessionStatus { Open, Complete, Conflicted };
std::string_view to_string(SessionStatus s);

enum class EventKind { Decide, Retract, Propagated, RecommendationShown, RecommendationApplied, ConflictReported };
std::string_view to_string(EventKind k);
std::optional<EventKind> parse_event_kind(std::string_view text);

struct SessionEvent {
    std::uint64_t sequence = 0;
    EventKind kind = EventKind::Decide;
    std::vector<std::string> payload;
};

enum class SessionErrc {
    UnknownFeature,
    RootDecision,
    NotOpen,
    NotUserDecided,
    StaleRecommendation,
    InvalidRecommendation,
    InvalidArgument,
    MalformedLog,
};
/// snake_case name, e.g. "stale_recommendation".
std::string_view to_string(SessionErrc c);

class SessionError : public std::runtime_error {
public:
    SessionError(SessionErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    SessionErrc code() const noexcept { return code_; }

private:
    SessionErrc code_;
};

class Session {
public:
    /// Starts with the root selected and its mandatory closure propagated.
    /// @throws std::invalid_argument when the catalog belongs to another model
    Session(std::string id, ModelPtr model, CatalogPtr catalog, std::string facet);
    Session(std::string id, ModelPtr model, CatalogPtr catalog);

    const std::string& id() const noexcept { return id_; }
    SessionStatus status() const noexcept { return status_; }
    const PartialConfiguration& configuration() const noexcept { return config_; }
    const std::vector<SessionEvent>& log() const noexcept { return log_; }
    const std::string& facet() const noexcept { return facet_; }
    const FeatureModel& model() const noexcept { return *model_; }
    const std::vector<std::string>& last_shown() const noexcept { return last_shown_; }

    /**
     * Records a user decision and re-propagates the whole decision set. On
     * Conflict the decision is logged with its violations, the configuration
     * keeps its previous fixpoint and the status becomes Conflicted.
     * `derived` lists features whose state changed, other than `feature`.
     */
    PropagationResult decide(std::string_view feature, DecisionState choice);

    /// Drops a user decision; the result is as if it had never been made.
    PropagationResult retract(std::string_view feature);

    /// Undecided feature with the most group/requires/excludes incidences.
    std::optional<std::string> suggest_next() const;

    /// Valid catalog entries most similar to the currently selected features.
    std::vector<Recommendation> recommendations(std::size_t k);

    /// Replaces every user decision with the full configuration of a shown entry.
    PropagationResult apply_recommendation(std::string_view config_id);

    /// One event per line: `<seq> <kind> <payload tokens>`.
    std::string export_log() const;

private:
    PropagationResult rebuild(const std::vector<std::pair<FeatureIndex, DecisionState>>& decisions,
                              std::optional<FeatureIndex> acted_on);
    void refresh_status();
    void record(EventKind kind, std::vector<std::string> payload);
    FeatureIndex lookup(std::string_view feature) const;

    std::string id_;
    ModelPtr model_;
    CatalogPtr catalog_;
    std::string facet_;
    PartialConfiguration config_;
    SessionStatus status_ = SessionStatus::Open;
    std::vector<SessionEvent> log_;
    std::vector<std::string> last_shown_;
};

/// Re-executes the decide/retract/recommend/apply events of an exported log.
/// @throws SessionError{MalformedLog} on unreadable lines
Session replay_log(std::string_view log, std::string id, ModelPtr model, CatalogPtr catalog, std::string facet);

}  // namespace fmconf

#endif  // FMCONF_SESSION_HPP
