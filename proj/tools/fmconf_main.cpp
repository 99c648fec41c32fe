// fmconf command line: validate, enumerate, recommend, check-catalog, serve.
//
// Exit codes: 0 success, 1 invalid configuration, 2 usage or input errors.

#include "fmconf/configuration.hpp"
#include "fmconf/feature_model.hpp"
#include "fmconf/recommender.hpp"
#include "fmconf/service.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fmconf::ModelPtr load_model(const std::string& path)
{
    return std::make_shared<const fmconf::FeatureModel>(fmconf::parse_model(read_file(path)));
}

fmconf::FeatureSet query_set(const fmconf::FeatureModel& model, const std::string& literal)
{
    auto closed = fmconf::with_ancestors(model, fmconf::split_ids(literal));
    return {closed.begin(), closed.end()};
}

std::string join_violations(const std::vector<fmconf::Violation>& violations)
{
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty()) out += "; ";
        out += v.description();
    }
    return out;
}

std::string format_score(double similarity)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", similarity);
    return buf;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Feature model configurator and configuration recommender"};
    app.require_subcommand(1);

    std::string model_path;
    std::string catalog_path;
    std::string config_literal;
    std::string query_literal;
    std::string facet;
    std::size_t limit = 0;
    std::size_t top_k = 5;
    bool show_invalid = false;
    fmconf::ServiceConfig service;
    int idle_minutes = 60;

    auto* validate = app.add_subcommand("validate", "Check a full configuration against a model");
    validate->add_option("--model", model_path, "Model file")->required();
    validate->add_option("--config", config_literal, "Selected feature ids; ancestors are implied")->required();

    auto* enumerate = app.add_subcommand("enumerate", "List every valid configuration of a small model");
    enumerate->add_option("--model", model_path, "Model file")->required();
    auto* limit_opt = enumerate->add_option("--limit", limit, "Stop after N configurations");

    auto* recommend = app.add_subcommand("recommend", "Rank catalog configurations similar to a query");
    recommend->add_option("--model", model_path, "Model file")->required();
    recommend->add_option("--catalog", catalog_path, "Catalog file")->required();
    recommend->add_option("--query", query_literal, "Feature ids the user chose")->required();
    recommend->add_option("--facet", facet, "Facet used for similarity (default: functional if declared, else all)");
    recommend->add_option("--top-k", top_k, "Number of valid configurations to return")
        ->check(CLI::PositiveNumber);
    recommend->add_flag("--show-invalid", show_invalid, "Also list rejected candidates with their violations");

    auto* check_catalog = app.add_subcommand("check-catalog", "Validate every catalog entry");
    check_catalog->add_option("--model", model_path, "Model file")->required();
    check_catalog->add_option("--catalog", catalog_path, "Catalog file")->required();

    auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
    serve->add_option("--model", service.model_path, "Model file")->required();
    serve->add_option("--catalog", service.catalog_path, "Catalog file")->required();
    serve->add_option("--port", service.port, "Listen port")->envname("FMCONF_PORT")->required();
    serve->add_option("--host", service.host, "Listen address")->capture_default_str();
    serve->add_option("--facet", service.facet, "Recommendation facet");
    serve->add_option("--top-k", service.default_k, "Default number of recommendations")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    serve->add_option("--idle-timeout", idle_minutes, "Minutes before an idle session is dropped")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (validate->parsed()) {
            auto model = load_model(model_path);
            auto selected = fmconf::with_ancestors(*model, fmconf::split_ids(config_literal));
            auto violations = fmconf::check_full(*model, selected);
            if (violations.empty()) {
                std::cout << "valid\n";
                return 0;
            }
            std::cout << "invalid: " << violations.size() << " violation(s)\n";
            for (const auto& v : violations) std::cout << "  " << v.description() << '\n';
            return kExitInvalid;
        }

        if (enumerate->parsed()) {
            auto model = load_model(model_path);
            auto configs = fmconf::enumerate_valid(
                *model, limit_opt->count() > 0 ? std::optional<std::size_t>(limit) : std::nullopt);
            for (const auto& config : configs) {
                for (std::size_t i = 0; i < config.size(); ++i) std::cout << (i ? " " : "") << config[i];
                std::cout << '\n';
            }
            std::cout << "# " << configs.size() << " configuration(s)\n";
            return 0;
        }

        if (recommend->parsed()) {
            auto model = load_model(model_path);
            auto catalog = fmconf::parse_catalog(read_file(catalog_path), model);
            if (facet.empty()) facet = fmconf::default_facet(*model);
            auto query = query_set(*model, query_literal);
            std::size_t rank = 0;
            for (const auto& r : fmconf::recommend_valid(query, catalog, facet, top_k))
                std::cout << ++rank << ". " << r.config_id << ' ' << format_score(r.similarity) << '\n';
            if (rank == 0) std::cout << "no valid configuration\n";
            if (show_invalid) {
                for (const auto& r : fmconf::assess_candidates(query, catalog, facet)) {
                    if (!r.valid)
                        std::cout << "rejected " << r.config_id << ' ' << format_score(r.similarity) << ": "
                                  << join_violations(r.violations) << '\n';
                }
            }
            return 0;
        }

        if (check_catalog->parsed()) {
            auto model = load_model(model_path);
            auto catalog = fmconf::parse_catalog(read_file(catalog_path), model);
            bool all_valid = true;
            for (const auto& entry : catalog.entries()) {
                auto violations = fmconf::check_full(
                    *model, std::vector<std::string>(entry.features.begin(), entry.features.end()));
                all_valid = all_valid && violations.empty();
                std::cout << entry.id << ' '
                          << (violations.empty() ? std::string("valid") : "invalid: " + join_violations(violations))
                          << '\n';
            }
            return all_valid ? 0 : kExitInvalid;
        }

        if (serve->parsed()) {
            service.idle_timeout = std::chrono::minutes(idle_minutes);
            if (fmconf::serve(service) != 0) {
                std::cerr << "error: cannot listen on " << service.host << ':' << service.port << '\n';
                return kExitUsage;
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
