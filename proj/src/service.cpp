#include "fmconf/service.hpp"

#include "httplib.h"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fmconf {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

ApiResponse error(int status, std::string_view code, const std::string& message)
{
    return {status, json{{"error", {{"code", code}, {"message", message}}}}};
}

ApiResponse from_session_error(const SessionError& e)
{
    switch (e.code()) {
    case SessionErrc::NotOpen:
    case SessionErrc::StaleRecommendation:
    case SessionErrc::InvalidRecommendation:
        return error(409, to_string(e.code()), e.what());
    default:
        return error(400, to_string(e.code()), e.what());
    }
}

std::optional<json> parse_body(const std::string& body)
{
    json parsed = json::parse(body, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) return std::nullopt;
    return parsed;
}

std::optional<std::string> string_field(const json& object, const char* name)
{
    auto it = object.find(name);
    if (it == object.end() || !it->is_string()) return std::nullopt;
    return it->get<std::string>();
}

}  // namespace

json to_json(const Violation& v)
{
    json witness = json::array();
    for (const auto& [id, state] : v.witness) witness.push_back({{"feature", id}, {"state", to_string(state)}});
    json constraint = {{"kind", to_string(v.kind)}, {"features", v.features}, {"description", v.description()}};
    if (v.kind == ViolationKind::GroupCardinality) {
        constraint["lower"] = v.lower;
        constraint["upper"] = v.upper;
    }
    return {{"constraint", std::move(constraint)}, {"witness", std::move(witness)}};
}

json to_json(const FeatureModel& model)
{
    const auto& draft = model.draft();
    json features = json::array();
    for (FeatureIndex f = 0; f < model.size(); ++f) {
        const auto& feature = draft.features[f];
        json attributes = json::array();
        for (const auto& attr : feature.attributes) {
            json domain;
            if (const auto* range = std::get_if<IntRange>(&attr.domain))
                domain = {{"kind", "int"}, {"lo", range->lo}, {"hi", range->hi}};
            else
                domain = {{"kind", "enum"}, {"values", std::get<EnumDomain>(attr.domain).values}};
            attributes.push_back({{"name", attr.name}, {"domain", std::move(domain)}});
        }
        json children = json::array();
        for (FeatureIndex c : model.children(f)) children.push_back(model.id(c));
        features.push_back({{"id", feature.id},
                            {"parent", feature.parent ? json(*feature.parent) : json(nullptr)},
                            {"variability", to_string(feature.variability)},
                            {"children", std::move(children)},
                            {"attributes", std::move(attributes)}});
    }
    json groups = json::array();
    for (const auto& g : draft.groups)
        groups.push_back({{"parent", g.parent}, {"lower", g.lower}, {"upper", g.upper}, {"members", g.members}});
    json constraints = json::array();
    for (const auto& c : draft.constraints) constraints.push_back({{"kind", to_string(c.kind)}, {"a", c.a}, {"b", c.b}});
    json facets = json::array();
    for (const auto& f : draft.facets) facets.push_back({{"name", f.name}, {"members", f.members}});
    return {{"root", model.id(model.root())},
            {"features", std::move(features)},
            {"groups", std::move(groups)},
            {"cross_constraints", std::move(constraints)},
            {"facets", std::move(facets)}};
}

json to_json(const Recommendation& r)
{
    json violations = json::array();
    for (const auto& v : r.violations) violations.push_back(to_json(v));
    return {{"config_id", r.config_id}, {"similarity", r.similarity}, {"valid", r.valid},
            {"violations", std::move(violations)}};
}

json to_json(const Session& s)
{
    const auto& config = s.configuration();
    json features = json::array();
    for (FeatureIndex f = 0; f < s.model().size(); ++f) {
        features.push_back({{"id", s.model().id(f)},
                            {"state", to_string(config.state(f))},
                            {"provenance", to_string(config.provenance(f))}});
    }
    auto next = s.suggest_next();
    return {{"id", s.id()},
            {"status", to_string(s.status())},
            {"facet", s.facet()},
            {"features", std::move(features)},
            {"suggested_next", next ? json(*next) : json(nullptr)}};
}

json to_json(const PropagationResult& r, const FeatureModel& model)
{
    json derived = json::array();
    for (auto [f, state] : r.derived) derived.push_back({{"feature", model.id(f)}, {"state", to_string(state)}});
    json violations = json::array();
    for (const auto& v : r.violations) violations.push_back(to_json(v));
    return {{"outcome", to_string(r.outcome)}, {"derived", std::move(derived)}, {"violations", std::move(violations)}};
}

Service::Service(ModelPtr model, CatalogPtr catalog, std::string facet, std::size_t default_k,
                 std::chrono::steady_clock::duration idle_timeout, Clock clock)
    : model_(std::move(model)),
      catalog_(std::move(catalog)),
      facet_(facet.empty() ? default_facet(*model_) : std::move(facet)),
      default_k_(default_k),
      idle_timeout_(idle_timeout),
      clock_(std::move(clock))
{
    if (!model_->has_facet(facet_)) throw std::invalid_argument("unknown facet '" + facet_ + "'");
    if (default_k_ == 0) throw std::invalid_argument("default k must be at least 1");
}

std::unique_ptr<Service> Service::load(const ServiceConfig& config)
{
    auto model = std::make_shared<const FeatureModel>(parse_model(read_file(config.model_path)));
    auto catalog = std::make_shared<const Catalog>(parse_catalog(read_file(config.catalog_path), model));
    return std::make_unique<Service>(model, catalog, config.facet, config.default_k, config.idle_timeout);
}

std::size_t Service::evict_idle()
{
    const auto now = clock_().time_since_epoch().count();
    std::lock_guard lock(registry_mutex_);
    return std::erase_if(sessions_, [&](const auto& item) {
        return now - item.second->last_used.load() > idle_timeout_.count();
    });
}

std::size_t Service::session_count() const
{
    std::lock_guard lock(registry_mutex_);
    return sessions_.size();
}

ApiResponse Service::with_session(const std::string& id, const std::function<ApiResponse(Session&)>& fn)
{
    evict_idle();
    std::shared_ptr<Slot> slot;
    {
        std::lock_guard lock(registry_mutex_);
        auto it = sessions_.find(id);
        if (it == sessions_.end()) return error(404, "unknown_session", "unknown session '" + id + "'");
        slot = it->second;
    }
    std::lock_guard lock(slot->mutex);
    slot->last_used = clock_().time_since_epoch().count();
    try {
        return fn(slot->session);
    } catch (const SessionError& e) {
        return from_session_error(e);
    } catch (const RecommendError& e) {
        return error(400, "invalid_argument", e.what());
    }
}

ApiResponse Service::get_model() const
{
    return {200, to_json(*model_)};
}

ApiResponse Service::create_session()
{
    evict_idle();
    std::lock_guard lock(registry_mutex_);
    std::string id = "s" + std::to_string(next_id_++);
    auto slot = std::make_shared<Slot>(Session(id, model_, catalog_, facet_));
    slot->last_used = clock_().time_since_epoch().count();
    json body = to_json(slot->session);
    sessions_.emplace(id, std::move(slot));
    return {201, std::move(body)};
}

ApiResponse Service::get_session(const std::string& id)
{
    return with_session(id, [](Session& s) { return ApiResponse{200, to_json(s)}; });
}

ApiResponse Service::post_decision(const std::string& id, const std::string& body)
{
    return with_session(id, [&](Session& s) {
        auto request = parse_body(body);
        if (!request) return error(400, "bad_request", "body must be a JSON object");
        auto feature = string_field(*request, "feature");
        auto choice_text = string_field(*request, "choice");
        if (!feature || !choice_text) return error(400, "bad_request", "expected string fields 'feature' and 'choice'");
        auto choice = parse_decision_state(*choice_text);
        if (!choice || *choice == DecisionState::Undecided)
            return error(400, "bad_request", "choice must be 'selected' or 'rejected'");

        PropagationResult result = s.decide(*feature, *choice);
        json out = to_json(result, s.model());
        out["status"] = to_string(s.status());
        return ApiResponse{result.consistent() ? 200 : 409, std::move(out)};
    });
}

ApiResponse Service::delete_decision(const std::string& id, const std::string& feature)
{
    return with_session(id, [&](Session& s) {
        PropagationResult result = s.retract(feature);
        json out = to_json(result, s.model());
        out["status"] = to_string(s.status());
        return ApiResponse{200, std::move(out)};
    });
}

ApiResponse Service::get_recommendations(const std::string& id, const std::optional<std::string>& k_text)
{
    return with_session(id, [&](Session& s) {
        std::size_t k = default_k_;
        if (k_text) {
            auto [ptr, ec] = std::from_chars(k_text->data(), k_text->data() + k_text->size(), k);
            if (ec != std::errc() || ptr != k_text->data() + k_text->size() || k == 0)
                return error(400, "bad_request", "k must be a positive integer");
        }
        json list = json::array();
        for (const auto& r : s.recommendations(k)) list.push_back(to_json(r));
        return ApiResponse{200, json{{"facet", s.facet()}, {"recommendations", std::move(list)}}};
    });
}

ApiResponse Service::post_apply(const std::string& id, const std::string& body)
{
    return with_session(id, [&](Session& s) {
        auto request = parse_body(body);
        auto config_id = request ? string_field(*request, "config_id") : std::nullopt;
        if (!config_id) return error(400, "bad_request", "expected string field 'config_id'");
        PropagationResult result = s.apply_recommendation(*config_id);
        json out = to_json(s);
        json delta = to_json(result, s.model());
        out["outcome"] = delta["outcome"];
        out["derived"] = delta["derived"];
        out["violations"] = delta["violations"];
        return ApiResponse{result.consistent() ? 200 : 409, std::move(out)};
    });
}

void mount(httplib::Server& server, Service& service)
{
    auto reply = [](httplib::Response& res, const ApiResponse& api) {
        res.status = api.status;
        res.set_content(api.body.dump(), "application/json");
    };

    server.Get("/model", [&service, reply](const httplib::Request&, httplib::Response& res) {
        reply(res, service.get_model());
    });
    server.Post("/sessions", [&service, reply](const httplib::Request&, httplib::Response& res) {
        reply(res, service.create_session());
    });
    server.Get(R"(/sessions/([^/]+))", [&service, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, service.get_session(req.matches[1]));
    });
    server.Post(R"(/sessions/([^/]+)/decisions)",
                [&service, reply](const httplib::Request& req, httplib::Response& res) {
                    reply(res, service.post_decision(req.matches[1], req.body));
                });
    server.Delete(R"(/sessions/([^/]+)/decisions/([^/]+))",
                  [&service, reply](const httplib::Request& req, httplib::Response& res) {
                      reply(res, service.delete_decision(req.matches[1], req.matches[2]));
                  });
    server.Get(R"(/sessions/([^/]+)/recommendations)",
               [&service, reply](const httplib::Request& req, httplib::Response& res) {
                   std::optional<std::string> k;
                   if (req.has_param("k")) k = req.get_param_value("k");
                   reply(res, service.get_recommendations(req.matches[1], k));
               });
    server.Post(R"(/sessions/([^/]+)/apply)", [&service, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, service.post_apply(req.matches[1], req.body));
    });
}

int serve(const ServiceConfig& config)
{
    auto service = Service::load(config);
    httplib::Server server;
    server.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
    });
    mount(server, *service);
    if (!server.bind_to_port(config.host, config.port)) return 1;
    std::cerr << "listening on " << config.host << ':' << config.port << std::endl;
    return server.listen_after_bind() ? 0 : 1;
}

}  // namespace fmconf
