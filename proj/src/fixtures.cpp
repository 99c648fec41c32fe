#include "fmconf/fixtures.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <sstream>

namespace fmconf {

namespace detail {
struct BundledFile {
    std::string_view name;
    std::string_view text;
};
extern const BundledFile kBundledFiles[];
extern const std::size_t kBundledFileCount;
}  // namespace detail

std::string_view fixture_text(std::string_view file)
{
    for (std::size_t i = 0; i < detail::kBundledFileCount; ++i) {
        if (detail::kBundledFiles[i].name == file) return detail::kBundledFiles[i].text;
    }
    throw FixtureError("no bundled fixture file '" + std::string(file) + "'");
}

Fixture load_fixture(std::string_view name)
{
    if (name != "fig1" && name != "dell") throw FixtureError("unknown fixture '" + std::string(name) + "'");
    const std::string base(name);
    Fixture fixture;
    fixture.name = base;
    fixture.model = std::make_shared<const FeatureModel>(parse_model(fixture_text(base + ".fm")));
    fixture.catalog = std::make_shared<const Catalog>(parse_catalog(fixture_text(base + ".catalog"), fixture.model));
    fixture.scenarios = parse_scenarios(fixture_text(base + ".scenario"));
    return fixture;
}

namespace {

std::vector<std::string> split_ws(std::string_view text)
{
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    std::string token;
    while (in >> token) out.push_back(token);
    return out;
}

std::string provenance_tag(std::string_view comment)
{
    for (std::string_view tag : {"PAPER", "TRIVIAL", "DERIVED"}) {
        if (comment.find("[" + std::string(tag) + "]") != std::string_view::npos) return std::string(tag);
    }
    return {};
}

template <typename Range>
std::string join(const Range& items)
{
    std::string out;
    for (const auto& item : items) {
        if (!out.empty()) out += ' ';
        out += item;
    }
    return out.empty() ? "(none)" : out;
}

}  // namespace

std::vector<ScenarioScript> parse_scenarios(std::string_view text)
{
    static const std::vector<std::string> commands{"decide", "retract", "recommend", "apply", "expect"};
    std::vector<ScenarioScript> scripts;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view body = line;
        std::string_view comment;
        if (auto hash = body.find('#'); hash != std::string_view::npos) {
            comment = body.substr(hash);
            body = body.substr(0, hash);
        }
        auto tokens = split_ws(body);
        if (tokens.empty()) continue;

        if (tokens[0] == "scenario") {
            if (tokens.size() != 2) throw FixtureError("line " + std::to_string(line_no) + ": scenario needs a name");
            scripts.push_back({tokens[1], {}});
            continue;
        }
        if (std::find(commands.begin(), commands.end(), tokens[0]) == commands.end())
            throw FixtureError("line " + std::to_string(line_no) + ": unknown command '" + tokens[0] + "'");
        if (scripts.empty()) scripts.push_back({"default", {}});
        scripts.back().steps.push_back(
            {line_no, tokens[0], std::vector<std::string>(tokens.begin() + 1, tokens.end()), provenance_tag(comment)});
    }
    return scripts;
}

ScenarioReport run_scenario(const Fixture& fixture, const ScenarioScript& script)
{
    ScenarioReport report;
    Session session(fixture.name + "/" + script.name, fixture.model, fixture.catalog);
    std::optional<PropagationResult> last_result;
    std::vector<Recommendation> last_recommendations;
    std::optional<std::string> pending_error;

    for (const auto& step : script.steps) {
        auto fail = [&](const std::string& what) {
            report.failures.push_back(script.name + " line " + std::to_string(step.line) + ": " + what);
        };
        const auto& args = step.args;

        if (step.command != "expect") {
            if (pending_error) fail("unexpected error " + *pending_error);
            pending_error.reset();
            try {
                if (step.command == "decide" && args.size() == 2) {
                    auto choice = parse_decision_state(args[1]);
                    if (!choice) {
                        fail("bad choice '" + args[1] + "'");
                        continue;
                    }
                    last_result = session.decide(args[0], *choice);
                } else if (step.command == "retract" && args.size() == 1) {
                    last_result = session.retract(args[0]);
                } else if (step.command == "recommend" && args.size() == 1) {
                    last_recommendations = session.recommendations(std::stoul(args[0]));
                } else if (step.command == "apply" && args.size() == 1) {
                    last_result = session.apply_recommendation(args[0]);
                } else {
                    fail("malformed command");
                }
            } catch (const SessionError& e) {
                pending_error = std::string(to_string(e.code()));
            } catch (const std::exception& e) {
                pending_error = std::string("exception: ") + e.what();
            }
            continue;
        }

        ++report.checks;
        if (args.empty()) {
            fail("empty expectation");
            continue;
        }
        const std::string& what = args[0];
        const std::vector<std::string> rest(args.begin() + 1, args.end());

        if (what == "error") {
            const std::string expected = rest.empty() ? "" : rest[0];
            if (!pending_error || *pending_error != expected)
                fail("expected error " + expected + ", got " + pending_error.value_or("none"));
            pending_error.reset();
        } else if (what == "outcome") {
            const std::string got = last_result ? std::string(to_string(last_result->outcome)) : "none";
            if (rest.size() != 1 || got != rest[0]) fail("expected outcome " + join(rest) + ", got " + got);
        } else if (what == "violations") {
            std::vector<std::string> got;
            if (last_result) {
                for (const auto& v : last_result->violations) {
                    std::string d = v.description();
                    std::erase(d, ' ');
                    got.push_back(d);
                }
            }
            if (got != rest) fail("expected violations " + join(rest) + ", got " + join(got));
        } else if (what == "state") {
            if (rest.size() < 2 || !session.model().contains(rest[0])) {
                fail("malformed state expectation");
                continue;
            }
            const auto& config = session.configuration();
            const std::string state(to_string(config.state(rest[0])));
            const std::string provenance(to_string(config.provenance(rest[0])));
            if (state != rest[1] || (rest.size() > 2 && provenance != rest[2]))
                fail("expected " + rest[0] + " " + join(std::vector(rest.begin() + 1, rest.end())) + ", got " +
                     state + " " + provenance);
        } else if (what == "status") {
            const std::string got(to_string(session.status()));
            if (rest.size() != 1 || got != rest[0]) fail("expected status " + join(rest) + ", got " + got);
        } else if (what == "recommendations") {
            std::vector<std::string> got;
            for (const auto& r : last_recommendations) got.push_back(r.config_id);
            if (got != rest) fail("expected recommendations " + join(rest) + ", got " + join(got));
        } else if (what == "selected") {
            auto got = session.configuration().selected_ids();
            auto expected = rest;
            std::sort(got.begin(), got.end());
            std::sort(expected.begin(), expected.end());
            if (got != expected) fail("expected selected " + join(expected) + ", got " + join(got));
        } else if (what == "suggest") {
            const std::string got = session.suggest_next().value_or("none");
            if (rest.size() != 1 || got != rest[0]) fail("expected suggestion " + join(rest) + ", got " + got);
        } else {
            fail("unknown expectation '" + what + "'");
        }
    }
    if (pending_error) report.failures.push_back(script.name + ": unchecked error " + *pending_error);
    return report;
}

}  // namespace fmconf
