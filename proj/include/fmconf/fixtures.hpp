/**
 * @file fixtures.hpp
 * @brief Bundled example models, catalogs and scenario scripts.
 *
 * Fixtures are compiled into the library. Available names: "fig1", "dell".
 *
 * Scenario scripts drive a Session line by line:
 * ```
 * scenario <name>
 * decide <feature> selected|rejected
 * retract <feature>
 * recommend <k>
 * apply <config-id>
 * expect outcome consistent|conflict
 * expect violations <compact-description>...
 * expect state <feature> <state> [<provenance>]
 * expect status open|complete|conflicted
 * expect recommendations <config-id>...
 * expect selected <feature>...
 * expect suggest <feature>|none
 * expect error <code>
 * ```
 * Every `expect` line carries a trailing comment tagged [PAPER], [TRIVIAL]
 * or [DERIVED] naming where the expected value comes from.
 */
#ifndef FMCONF_FIXTURES_HPP
#define FMCONF_FIXTURES_HPP

#include "fmconf/recommender.hpp"
#include "fmconf/session.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fmconf {

class FixtureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ScenarioStep {
    std::size_t line = 0;
    std::string command;            ///< decide, retract, recommend, apply or expect
    std::vector<std::string> args;
    std::string provenance;         ///< PAPER, TRIVIAL or DERIVED; empty if untagged
};

struct ScenarioScript {
    std::string name;
    std::vector<ScenarioStep> steps;
};

struct Fixture {
    std::string name;
    ModelPtr model;
    CatalogPtr catalog;
    std::vector<ScenarioScript> scenarios;
};

/// Raw text of a bundled file such as "dell.fm".
/// @throws FixtureError when no such file is bundled
std::string_view fixture_text(std::string_view file);

/// @throws FixtureError for names other than "fig1" and "dell"
Fixture load_fixture(std::string_view name);

/// @throws FixtureError on unknown commands
std::vector<ScenarioScript> parse_scenarios(std::string_view text);

struct ScenarioReport {
    std::size_t checks = 0;
    std::vector<std::string> failures;
    bool passed() const noexcept { return failures.empty(); }
};

/// Runs a script on a fresh session over the fixture's model and catalog.
ScenarioReport run_scenario(const Fixture& fixture, const ScenarioScript& script);

}  // namespace fmconf

#endif  // FMCONF_FIXTURES_HPP
