#include "fmconf/recommender.hpp"

#include <set>

namespace fmconf {

Catalog::Catalog(ModelPtr model, std::vector<std::pair<std::string, std::vector<std::string>>> entries)
    : model_(std::move(model))
{
    std::set<std::string> ids;
    for (auto& [id, listed] : entries) {
        if (!ids.insert(id).second) throw CatalogError("duplicate configuration id '" + id + "'");
        for (const auto& f : listed) {
            if (!model_->contains(f))
                throw CatalogError("configuration '" + id + "' references unknown feature '" + f + "'");
        }
        auto closed = with_ancestors(*model_, listed);
        entries_.push_back({id, std::move(listed), FeatureSet(closed.begin(), closed.end())});
    }
}

const CatalogEntry* Catalog::find(std::string_view id) const
{
    for (const auto& e : entries_) {
        if (e.id == id) return &e;
    }
    return nullptr;
}

Catalog parse_catalog(std::string_view text, ModelPtr model)
{
    std::vector<std::pair<std::string, std::vector<std::string>>> entries;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto tokens = split_ids(line);
        if (tokens.empty()) continue;
        if (tokens[0] != "config") throw ParseError(line_no, tokens[0], "expected 'config'");
        if (tokens.size() < 2) throw ParseError(line_no, tokens[0], "config needs an id");
        for (std::size_t i = 1; i < tokens.size(); ++i) {
            if (!is_valid_token(tokens[i])) throw ParseError(line_no, tokens[i], "invalid identifier");
        }
        entries.emplace_back(tokens[1], std::vector<std::string>(tokens.begin() + 2, tokens.end()));
    }
    return Catalog(std::move(model), std::move(entries));
}

}  // namespace fmconf
