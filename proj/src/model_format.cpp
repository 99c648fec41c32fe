#include "fmconf/feature_model.hpp"

#include <charconv>
#include <set>
#include <sstream>

namespace fmconf {

namespace {

std::vector<std::string> tokenize(std::string_view line)
{
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) tokens.emplace_back(line.substr(start, i - start));
    }
    return tokens;
}

template <typename Int>
Int parse_int(std::size_t line, const std::string& token)
{
    Int value{};
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) throw ParseError(line, token, "expected an integer");
    return value;
}

const std::string& expect_id(std::size_t line, const std::string& token)
{
    if (!is_valid_token(token)) throw ParseError(line, token, "invalid identifier");
    return token;
}

void expect_arity(std::size_t line, const std::vector<std::string>& tokens, std::size_t n)
{
    if (tokens.size() != n)
        throw ParseError(line, tokens.front(),
                         "expected " + std::to_string(n - 1) + " argument(s), got " + std::to_string(tokens.size() - 1));
}

Variability parse_variability(std::size_t line, const std::string& token)
{
    if (token == "mandatory") return Variability::Mandatory;
    if (token == "optional") return Variability::Optional;
    if (token == "grouped") return Variability::Grouped;
    throw ParseError(line, token, "expected mandatory, optional or grouped");
}

struct PendingAttribute {
    std::size_t line;
    std::string feature;
    Attribute attribute;
};

}  // namespace

ModelDraft parse_model_draft(std::string_view text)
{
    ModelDraft draft;
    std::vector<PendingAttribute> attributes;
    bool header_seen = false;
    std::size_t line_no = 0;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        auto tokens = tokenize(line);
        if (tokens.empty()) continue;
        const std::string& keyword = tokens.front();

        if (!header_seen) {
            if (keyword != "fm") throw ParseError(line_no, keyword, "expected header 'fm 1'");
            if (tokens.size() != 2 || tokens[1] != "1")
                throw ParseError(line_no, tokens.size() > 1 ? tokens[1] : keyword, "unsupported format version");
            header_seen = true;
            continue;
        }

        if (keyword == "feature") {
            if (tokens.size() == 3 && tokens[2] == "root") {
                draft.features.push_back({expect_id(line_no, tokens[1]), std::nullopt, Variability::Root, {}});
            } else {
                expect_arity(line_no, tokens, 4);
                draft.features.push_back({expect_id(line_no, tokens[1]), expect_id(line_no, tokens[2]),
                                          parse_variability(line_no, tokens[3]), {}});
            }
        } else if (keyword == "group") {
            if (tokens.size() < 4) throw ParseError(line_no, keyword, "group needs a parent and two bounds");
            Group g;
            g.parent = expect_id(line_no, tokens[1]);
            g.lower = parse_int<int>(line_no, tokens[2]);
            g.upper = parse_int<int>(line_no, tokens[3]);
            for (std::size_t i = 4; i < tokens.size(); ++i) g.members.push_back(expect_id(line_no, tokens[i]));
            draft.groups.push_back(std::move(g));
        } else if (keyword == "requires" || keyword == "excludes") {
            expect_arity(line_no, tokens, 3);
            draft.constraints.push_back({keyword == "requires" ? ConstraintKind::Requires : ConstraintKind::Excludes,
                                         expect_id(line_no, tokens[1]), expect_id(line_no, tokens[2])});
        } else if (keyword == "facet") {
            if (tokens.size() < 2) throw ParseError(line_no, keyword, "facet needs a name");
            Facet f;
            f.name = expect_id(line_no, tokens[1]);
            std::set<std::string> seen;
            for (std::size_t i = 2; i < tokens.size(); ++i) {
                if (!seen.insert(tokens[i]).second) throw ParseError(line_no, tokens[i], "duplicate facet member");
                f.members.push_back(expect_id(line_no, tokens[i]));
            }
            draft.facets.push_back(std::move(f));
        } else if (keyword == "attr") {
            if (tokens.size() < 4) throw ParseError(line_no, keyword, "attr needs a feature, a name and a domain");
            PendingAttribute pending{line_no, expect_id(line_no, tokens[1]), {expect_id(line_no, tokens[2]), {}}};
            if (tokens[3] == "int") {
                expect_arity(line_no, tokens, 6);
                pending.attribute.domain =
                    IntRange{parse_int<long long>(line_no, tokens[4]), parse_int<long long>(line_no, tokens[5])};
            } else if (tokens[3] == "enum") {
                EnumDomain e;
                for (std::size_t i = 4; i < tokens.size(); ++i) e.values.push_back(expect_id(line_no, tokens[i]));
                pending.attribute.domain = std::move(e);
            } else {
                throw ParseError(line_no, tokens[3], "expected attribute domain 'int' or 'enum'");
            }
            attributes.push_back(std::move(pending));
        } else if (keyword == "fm") {
            throw ParseError(line_no, keyword, "duplicate header");
        } else {
            throw ParseError(line_no, keyword, "unknown keyword");
        }
    }
    if (!header_seen) throw ParseError(line_no, "", "missing header 'fm 1'");

    // Attribute lines may precede the feature they decorate.
    std::vector<Diagnostic> unresolved;
    for (auto& pending : attributes) {
        Feature* target = nullptr;
        for (auto& f : draft.features) {
            if (f.id == pending.feature) {
                target = &f;
                break;
            }
        }
        if (target == nullptr) {
            unresolved.push_back({DiagnosticCode::UnknownAttributeFeature, "attribute on unknown feature",
                                  {pending.feature, pending.attribute.name}});
            continue;
        }
        target->attributes.push_back(std::move(pending.attribute));
    }
    if (!unresolved.empty()) throw ModelError(std::move(unresolved));
    return draft;
}

FeatureModel parse_model(std::string_view text)
{
    return FeatureModel(parse_model_draft(text));
}

std::string serialize_model(const ModelDraft& draft)
{
    std::ostringstream os;
    os << "fm 1\n";
    for (const auto& f : draft.features) {
        os << "feature " << f.id;
        if (f.variability == Variability::Root) {
            os << " root\n";
        } else {
            os << ' ' << f.parent.value_or("") << ' ' << to_string(f.variability) << '\n';
        }
    }
    for (const auto& g : draft.groups) {
        os << "group " << g.parent << ' ' << g.lower << ' ' << g.upper;
        for (const auto& m : g.members) os << ' ' << m;
        os << '\n';
    }
    for (const auto& c : draft.constraints) os << to_string(c.kind) << ' ' << c.a << ' ' << c.b << '\n';
    for (const auto& facet : draft.facets) {
        os << "facet " << facet.name;
        for (const auto& m : facet.members) os << ' ' << m;
        os << '\n';
    }
    for (const auto& f : draft.features) {
        for (const auto& attr : f.attributes) {
            os << "attr " << f.id << ' ' << attr.name;
            if (const auto* range = std::get_if<IntRange>(&attr.domain)) {
                os << " int " << range->lo << ' ' << range->hi;
            } else {
                os << " enum";
                for (const auto& v : std::get<EnumDomain>(attr.domain).values) os << ' ' << v;
            }
            os << '\n';
        }
    }
    return os.str();
}

std::string serialize_model(const FeatureModel& model)
{
    return serialize_model(model.draft());
}

}  // namespace fmconf
