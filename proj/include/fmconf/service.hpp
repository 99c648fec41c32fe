/**
 * @file service.hpp
 * @brief HTTP/JSON front end over sessions sharing one model and catalog.
 *
 * Endpoints:
 *   GET    /model
 *   POST   /sessions
 *   GET    /sessions/{id}
 *   POST   /sessions/{id}/decisions            {"feature": ..., "choice": "selected"|"rejected"}
 *   DELETE /sessions/{id}/decisions/{feature}
 *   GET    /sessions/{id}/recommendations?k=K
 *   POST   /sessions/{id}/apply                {"config_id": ...}
 *
 * Each handler is also callable directly, returning status and JSON body.
 */
#ifndef FMCONF_SERVICE_HPP
#define FMCONF_SERVICE_HPP

#include "fmconf/session.hpp"

#include "json.hpp"

#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace httplib {
class Server;
}

namespace fmconf {

struct ServiceConfig {
    std::string model_path;
    std::string catalog_path;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string facet;  ///< empty: default_facet(model)
    std::size_t default_k = 5;
    std::chrono::minutes idle_timeout{60};
};

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

nlohmann::json to_json(const Violation& v);
nlohmann::json to_json(const FeatureModel& model);
nlohmann::json to_json(const Recommendation& r);
/// Snapshot of a session: per-feature state and provenance, status, suggestion.
nlohmann::json to_json(const Session& s);
nlohmann::json to_json(const PropagationResult& r, const FeatureModel& model);

class Service {
public:
    using Clock = std::function<std::chrono::steady_clock::time_point()>;

    Service(ModelPtr model, CatalogPtr catalog, std::string facet, std::size_t default_k,
            std::chrono::steady_clock::duration idle_timeout, Clock clock = std::chrono::steady_clock::now);

    /// Loads and checks the model and catalog named in `config`.
    /// @throws ParseError, ModelError, CatalogError or std::runtime_error
    static std::unique_ptr<Service> load(const ServiceConfig& config);

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    ApiResponse get_model() const;
    ApiResponse create_session();
    ApiResponse get_session(const std::string& id);
    ApiResponse post_decision(const std::string& id, const std::string& body);
    ApiResponse delete_decision(const std::string& id, const std::string& feature);
    ApiResponse get_recommendations(const std::string& id, const std::optional<std::string>& k);
    ApiResponse post_apply(const std::string& id, const std::string& body);

    /// Drops sessions idle for longer than the timeout; returns how many.
    std::size_t evict_idle();
    std::size_t session_count() const;

    const std::string& facet() const noexcept { return facet_; }

private:
    struct Slot {
        explicit Slot(Session s) : session(std::move(s)) {}
        std::mutex mutex;
        Session session;
        std::atomic<std::chrono::steady_clock::rep> last_used;
    };

    /// Runs `fn` under the session's lock, or answers 404.
    ApiResponse with_session(const std::string& id, const std::function<ApiResponse(Session&)>& fn);

    ModelPtr model_;
    CatalogPtr catalog_;
    std::string facet_;
    std::size_t default_k_;
    std::chrono::steady_clock::duration idle_timeout_;
    Clock clock_;

    mutable std::mutex registry_mutex_;
    std::map<std::string, std::shared_ptr<Slot>> sessions_;
    std::uint64_t next_id_ = 1;
};

/// Registers every endpoint of `service` on `server`.
void mount(httplib::Server& server, Service& service);

/// Loads, mounts and serves until the process is stopped. Returns non-zero on bind failure.
int serve(const ServiceConfig& config);

}  // namespace fmconf

#endif  // FMCONF_SERVICE_HPP
