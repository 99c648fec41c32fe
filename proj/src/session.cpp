#include "fmconf/session.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace fmconf {

std::string_view to_string(SessionStatus s)
{
    switch (s) {
    case SessionStatus::Open: return "open";
    case SessionStatus::Complete: return "complete";
    case SessionStatus::Conflicted: return "conflicted";
    }
    return "?";
}

namespace {

constexpr std::pair<EventKind, std::string_view> kEventNames[] = {
    {EventKind::Decide, "decide"},
    {EventKind::Retract, "retract"},
    {EventKind::Propagated, "propagated"},
    {EventKind::RecommendationShown, "recommendation-shown"},
    {EventKind::RecommendationApplied, "recommendation-applied"},
    {EventKind::ConflictReported, "conflict-reported"},
};

std::string compact(std::string text)
{
    std::erase(text, ' ');
    return text;
}

CatalogPtr or_empty(CatalogPtr catalog, const ModelPtr& model)
{
    if (catalog) return catalog;
    return std::make_shared<const Catalog>(model, std::vector<std::pair<std::string, std::vector<std::string>>>{});
}

}  // namespace

std::string_view to_string(SessionErrc c)
{
    switch (c) {
    case SessionErrc::UnknownFeature: return "unknown_feature";
    case SessionErrc::RootDecision: return "root_decision";
    case SessionErrc::NotOpen: return "not_open";
    case SessionErrc::NotUserDecided: return "not_user_decided";
    case SessionErrc::StaleRecommendation: return "stale_recommendation";
    case SessionErrc::InvalidRecommendation: return "invalid_recommendation";
    case SessionErrc::InvalidArgument: return "invalid_argument";
    case SessionErrc::MalformedLog: return "malformed_log";
    }
    return "?";
}

std::string_view to_string(EventKind k)
{
    for (auto [kind, name] : kEventNames) {
        if (kind == k) return name;
    }
    return "?";
}

std::optional<EventKind> parse_event_kind(std::string_view text)
{
    for (auto [kind, name] : kEventNames) {
        if (name == text) return kind;
    }
    return std::nullopt;
}

Session::Session(std::string id, ModelPtr model, CatalogPtr catalog, std::string facet)
    : id_(std::move(id)),
      model_(std::move(model)),
      catalog_(or_empty(std::move(catalog), model_)),
      facet_(std::move(facet)),
      config_(model_)
{
    if (catalog_->model_ptr() != model_ && !(catalog_->model() == *model_))
        throw std::invalid_argument("catalog was built for a different model");
    if (!model_->has_facet(facet_)) throw std::invalid_argument("unknown facet '" + facet_ + "'");
    rebuild({}, std::nullopt);
}

Session::Session(std::string id, ModelPtr model, CatalogPtr catalog)
    : Session(std::move(id), model, std::move(catalog), default_facet(*model))
{
}

FeatureIndex Session::lookup(std::string_view feature) const
{
    auto f = model_->index_of(feature);
    if (!f) throw SessionError(SessionErrc::UnknownFeature, "unknown feature '" + std::string(feature) + "'");
    return *f;
}

void Session::record(EventKind kind, std::vector<std::string> payload)
{
    log_.push_back({log_.size() + 1, kind, std::move(payload)});
}

void Session::refresh_status()
{
    const bool complete = is_complete(config_) && check_full(*model_, config_.selected_ids()).empty();
    status_ = complete ? SessionStatus::Complete : SessionStatus::Open;
}

PropagationResult Session::rebuild(const std::vector<std::pair<FeatureIndex, DecisionState>>& decisions,
                                   std::optional<FeatureIndex> acted_on)
{
    PartialConfiguration next(model_);
    for (auto [f, s] : decisions) next.decide(f, s);
    PropagationResult result = propagate(next);
    if (!result.consistent()) {
        std::vector<std::string> payload;
        for (const auto& v : result.violations) payload.push_back(compact(v.description()));
        record(EventKind::ConflictReported, std::move(payload));
        status_ = SessionStatus::Conflicted;
        return result;
    }

    result.derived.clear();
    std::vector<std::string> payload;
    for (FeatureIndex f = 0; f < model_->size(); ++f) {
        if (next.state(f) == config_.state(f) || (acted_on && *acted_on == f && next.provenance(f) == Provenance::User))
            continue;
        result.derived.emplace_back(f, next.state(f));
        payload.push_back(model_->id(f) + "=" + std::string(to_string(next.state(f))));
    }
    config_ = std::move(next);
    if (!log_.empty()) record(EventKind::Propagated, std::move(payload));
    refresh_status();
    return result;
}

PropagationResult Session::decide(std::string_view feature, DecisionState choice)
{
    if (choice == DecisionState::Undecided)
        throw SessionError(SessionErrc::InvalidArgument, "a decision must select or reject");
    const FeatureIndex f = lookup(feature);
    if (f == model_->root()) throw SessionError(SessionErrc::RootDecision, "the root cannot be decided");
    if (status_ == SessionStatus::Complete)
        throw SessionError(SessionErrc::NotOpen, "session is complete; retract a decision first");

    record(EventKind::Decide, {model_->id(f), std::string(to_string(choice))});
    auto decisions = config_.user_decisions();
    std::erase_if(decisions, [f](const auto& d) { return d.first == f; });
    decisions.emplace_back(f, choice);
    return rebuild(decisions, f);
}

PropagationResult Session::retract(std::string_view feature)
{
    const FeatureIndex f = lookup(feature);
    if (config_.provenance(f) != Provenance::User)
        throw SessionError(SessionErrc::NotUserDecided,
                           "feature '" + std::string(feature) + "' carries no user decision");

    record(EventKind::Retract, {model_->id(f)});
    auto decisions = config_.user_decisions();
    std::erase_if(decisions, [f](const auto& d) { return d.first == f; });
    return rebuild(decisions, std::nullopt);
}

std::optional<std::string> Session::suggest_next() const
{
    std::vector<int> incidence(model_->size(), 0);
    for (std::size_t g = 0; g < model_->group_count(); ++g) {
        for (FeatureIndex m : model_->group_members(g)) ++incidence[m];
    }
    for (const auto& c : model_->constraints()) {
        ++incidence[c.a];
        ++incidence[c.b];
    }

    std::optional<FeatureIndex> best;
    for (FeatureIndex f = 0; f < model_->size(); ++f) {
        if (config_.state(f) != DecisionState::Undecided) continue;
        if (!best || incidence[f] > incidence[*best]) best = f;
    }
    if (!best) return std::nullopt;
    return model_->id(*best);
}

std::vector<Recommendation> Session::recommendations(std::size_t k)
{
    if (k == 0) throw SessionError(SessionErrc::InvalidArgument, "k must be at least 1");
    std::vector<Recommendation> out;
    if (!catalog_->empty()) {
        auto ids = config_.selected_ids();
        out = recommend_valid(FeatureSet(ids.begin(), ids.end()), *catalog_, facet_, k);
    }
    last_shown_.clear();
    std::vector<std::string> payload{std::to_string(k)};
    for (const auto& r : out) {
        last_shown_.push_back(r.config_id);
        payload.push_back(r.config_id);
    }
    record(EventKind::RecommendationShown, std::move(payload));
    return out;
}

PropagationResult Session::apply_recommendation(std::string_view config_id)
{
    if (std::find(last_shown_.begin(), last_shown_.end(), config_id) == last_shown_.end())
        throw SessionError(SessionErrc::StaleRecommendation,
                           "configuration '" + std::string(config_id) + "' was not in the last recommendations");
    const CatalogEntry* entry = catalog_->find(config_id);
    if (entry == nullptr)
        throw SessionError(SessionErrc::StaleRecommendation, "unknown configuration '" + std::string(config_id) + "'");
    const std::vector<std::string> features(entry->features.begin(), entry->features.end());
    if (!check_full(*model_, features).empty())
        throw SessionError(SessionErrc::InvalidRecommendation,
                           "configuration '" + std::string(config_id) + "' is not valid");

    record(EventKind::RecommendationApplied, {std::string(config_id)});
    std::vector<std::pair<FeatureIndex, DecisionState>> decisions;
    for (FeatureIndex f = 0; f < model_->size(); ++f) {
        if (f == model_->root()) continue;
        decisions.emplace_back(f, entry->features.contains(model_->id(f)) ? DecisionState::Selected
                                                                          : DecisionState::Rejected);
    }
    return rebuild(decisions, std::nullopt);
}

std::string Session::export_log() const
{
    std::ostringstream os;
    for (const auto& e : log_) {
        os << e.sequence << ' ' << to_string(e.kind);
        for (const auto& token : e.payload) os << ' ' << token;
        os << '\n';
    }
    return os.str();
}

Session replay_log(std::string_view log, std::string id, ModelPtr model, CatalogPtr catalog, std::string facet)
{
    Session session(std::move(id), std::move(model), std::move(catalog), std::move(facet));
    std::istringstream in{std::string(log)};
    std::string line;
    std::size_t line_no = 0;
    auto malformed = [&](const std::string& why) {
        return SessionError(SessionErrc::MalformedLog, "log line " + std::to_string(line_no) + ": " + why);
    };

    while (std::getline(in, line)) {
        ++line_no;
        auto tokens = split_ids(line);
        if (tokens.empty()) continue;
        if (tokens.size() < 2) throw malformed("expected '<seq> <kind>'");
        auto kind = parse_event_kind(tokens[1]);
        if (!kind) throw malformed("unknown event kind '" + tokens[1] + "'");
        std::vector<std::string> payload(tokens.begin() + 2, tokens.end());

        switch (*kind) {
        case EventKind::Decide: {
            auto choice = payload.size() == 2 ? parse_decision_state(payload[1]) : std::nullopt;
            if (!choice) throw malformed("decide needs a feature and selected|rejected");
            session.decide(payload[0], *choice);
            break;
        }
        case EventKind::Retract:
            if (payload.size() != 1) throw malformed("retract needs a feature");
            session.retract(payload[0]);
            break;
        case EventKind::RecommendationShown: {
            std::size_t k = 0;
            if (payload.empty() ||
                std::from_chars(payload[0].data(), payload[0].data() + payload[0].size(), k).ec != std::errc())
                throw malformed("recommendation-shown needs k");
            session.recommendations(k);
            break;
        }
        case EventKind::RecommendationApplied:
            if (payload.size() != 1) throw malformed("recommendation-applied needs a configuration id");
            session.apply_recommendation(payload[0]);
            break;
        case EventKind::Propagated:
        case EventKind::ConflictReported:
            break;
        }
    }
    return session;
}

}  // namespace fmconf
