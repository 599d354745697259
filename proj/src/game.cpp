#include "spe/game.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spe {

std::string profile_str(const CostProfile& c) {
    std::string out = "(";
    for (size_t i = 0; i < c.size(); ++i) {
        if (i) out += ",";
        out += c[i].str();
    }
    return out + ")";
}

Lasso suffix_lasso(const Lasso& l, size_t n) {
    if (l.cycle.empty()) throw std::invalid_argument("lasso has empty cycle");
    if (n <= l.stem.size()) {
        Lasso s;
        s.stem.assign(l.stem.begin() + static_cast<long>(n), l.stem.end());
        s.cycle = l.cycle;
        return s;
    }
    size_t r = (n - l.stem.size()) % l.cycle.size();
    Lasso s;
    s.cycle.reserve(l.cycle.size());
    s.cycle.insert(s.cycle.end(), l.cycle.begin() + static_cast<long>(r), l.cycle.end());
    s.cycle.insert(s.cycle.end(), l.cycle.begin(), l.cycle.begin() + static_cast<long>(r));
    return s;
}

Lasso normalized(const Lasso& l) {
    if (l.cycle.empty()) throw std::invalid_argument("lasso has empty cycle");
    Lasso out = l;
    // primitive period of the cycle
    size_t len = out.cycle.size();
    for (size_t d = 1; d <= len / 2; ++d) {
        if (len % d != 0) continue;
        bool periodic = true;
        for (size_t i = d; i < len && periodic; ++i)
            periodic = out.cycle[i] == out.cycle[i - d];
        if (periodic) {
            out.cycle.resize(d);
            break;
        }
    }
    // minimal stem: absorb stem tail into the cycle phase
    while (!out.stem.empty() && out.stem.back() == out.cycle.back()) {
        out.stem.pop_back();
        std::rotate(out.cycle.begin(), out.cycle.end() - 1, out.cycle.end());
    }
    return out;
}

ReachabilityGame::ReachabilityGame(int players) : players_(players) {
    if (players < 1) throw std::invalid_argument("player count must be >= 1");
    targets_.resize(static_cast<size_t>(players));
}

int ReachabilityGame::add_vertex(const std::string& id, PlayerId owner) {
    if (index_of(id)) throw std::invalid_argument("duplicate vertex id '" + id + "'");
    if (owner < 1 || owner > players_)
        throw std::invalid_argument("vertex '" + id + "': owner " + std::to_string(owner) +
                                    " out of range 1.." + std::to_string(players_));
    ids_.push_back(id);
    owners_.push_back(owner);
    succ_.emplace_back();
    for (auto& t : targets_) t.push_back(false);
    return static_cast<int>(ids_.size()) - 1;
}

void ReachabilityGame::add_edge(int from, int to) {
    if (from < 0 || from >= vertex_count() || to < 0 || to >= vertex_count())
        throw std::invalid_argument("edge endpoint out of range");
    if (has_edge(from, to)) return;  // keep first occurrence
    succ_[from].push_back(to);
    edges_.emplace_back(from, to);
}

void ReachabilityGame::add_target(PlayerId i, int v) {
    if (i < 1 || i > players_) throw std::invalid_argument("target player out of range");
    if (v < 0 || v >= vertex_count()) throw std::invalid_argument("target vertex out of range");
    targets_[i - 1][v] = true;
}

void ReachabilityGame::set_init(int v) {
    if (v < 0 || v >= vertex_count()) throw std::invalid_argument("init vertex out of range");
    init_ = v;
}

std::optional<int> ReachabilityGame::index_of(const std::string& id) const {
    for (size_t v = 0; v < ids_.size(); ++v)
        if (ids_[v] == id) return static_cast<int>(v);
    return std::nullopt;
}

int ReachabilityGame::require_vertex(const std::string& id) const {
    auto v = index_of(id);
    if (!v) throw std::invalid_argument("undeclared vertex '" + id + "'");
    return *v;
}

bool ReachabilityGame::has_edge(int from, int to) const {
    const auto& s = succ_[from];
    return std::find(s.begin(), s.end(), to) != s.end();
}

std::vector<int> ReachabilityGame::target_vertices(PlayerId i) const {
    std::vector<int> out;
    for (int v = 0; v < vertex_count(); ++v)
        if (targets_[i - 1][v]) out.push_back(v);
    return out;
}

uint64_t ReachabilityGame::target_mask(int v) const {
    uint64_t m = 0;
    for (int i = 1; i <= players_ && i <= 64; ++i)
        if (targets_[i - 1][v]) m |= uint64_t{1} << (i - 1);
    return m;
}

ReachabilityGame ReachabilityGame::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("game: expected a JSON object");
    if (!j.contains("players") || !j["players"].is_number_integer())
        throw std::invalid_argument("game: missing integer field 'players'");
    ReachabilityGame g(j["players"].get<int>());
    if (!j.contains("vertices") || !j["vertices"].is_array())
        throw std::invalid_argument("game: missing array field 'vertices'");
    for (const auto& jv : j["vertices"]) {
        if (!jv.contains("id") || !jv.contains("owner"))
            throw std::invalid_argument("game: vertex needs 'id' and 'owner'");
        g.add_vertex(jv["id"].get<std::string>(), jv["owner"].get<int>());
    }
    if (!j.contains("edges") || !j["edges"].is_array())
        throw std::invalid_argument("game: missing array field 'edges'");
    for (const auto& je : j["edges"]) {
        if (!je.is_array() || je.size() != 2)
            throw std::invalid_argument("game: edge must be a [from,to] pair");
        g.add_edge(g.require_vertex(je[0].get<std::string>()),
                   g.require_vertex(je[1].get<std::string>()));
    }
    if (j.contains("targets")) {
        for (auto it = j["targets"].begin(); it != j["targets"].end(); ++it) {
            int player = std::stoi(it.key());
            if (player < 1 || player > g.player_count())
                throw std::invalid_argument("game: target player '" + it.key() + "' out of range");
            for (const auto& jt : it.value())
                g.add_target(player, g.require_vertex(jt.get<std::string>()));
        }
    }
    if (j.contains("init") && !j["init"].is_null())
        g.set_init(g.require_vertex(j["init"].get<std::string>()));
    return g;
}

ReachabilityGame ReachabilityGame::parse(const std::string& text) {
    return from_json(nlohmann::json::parse(text));
}

ReachabilityGame ReachabilityGame::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open game file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

nlohmann::ordered_json ReachabilityGame::to_json() const {
    nlohmann::ordered_json j;
    j["players"] = players_;
    auto vs = nlohmann::ordered_json::array();
    for (int v = 0; v < vertex_count(); ++v)
        vs.push_back({{"id", ids_[v]}, {"owner", owners_[v]}});
    j["vertices"] = vs;
    auto es = nlohmann::ordered_json::array();
    for (const auto& [a, b] : edges_) es.push_back({ids_[a], ids_[b]});
    j["edges"] = es;
    auto ts = nlohmann::ordered_json::object();
    for (int i = 1; i <= players_; ++i) {
        auto arr = nlohmann::ordered_json::array();
        for (int v : target_vertices(i)) arr.push_back(ids_[v]);
        ts[std::to_string(i)] = arr;
    }
    j["targets"] = ts;
    if (init_) j["init"] = ids_[*init_];
    return j;
}

std::string ReachabilityGame::to_canonical_string() const {
    return to_json().dump(2) + "\n";
}

ValidationReport validate_game(const ReachabilityGame& g) {
    ValidationReport r;
    auto flag = [&r](std::string msg) {
        r.ok = false;
        r.violations.push_back(std::move(msg));
    };
    if (g.vertex_count() < 2) flag("|V| >= 2 violated: game has " +
                                   std::to_string(g.vertex_count()) + " vertex(es)");
    if (g.player_count() > g.vertex_count())
        flag("player count " + std::to_string(g.player_count()) + " exceeds |V| = " +
             std::to_string(g.vertex_count()));
    if (g.player_count() > 64)
        flag("player count " + std::to_string(g.player_count()) +
             " exceeds the supported limit of 64");
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.successors(v).empty()) flag("vertex '" + g.id(v) + "' has no outgoing edge");
    if (g.init() && (*g.init() < 0 || *g.init() >= g.vertex_count()))
        flag("init vertex out of range");
    return r;
}

bool lasso_edge_valid(const ReachabilityGame& g, const Lasso& l) {
    if (l.cycle.empty()) return false;
    auto ok = [&g](int a, int b) { return g.has_edge(a, b); };
    for (size_t i = 0; i + 1 < l.stem.size(); ++i)
        if (!ok(l.stem[i], l.stem[i + 1])) return false;
    if (!l.stem.empty() && !ok(l.stem.back(), l.cycle.front())) return false;
    for (size_t i = 0; i + 1 < l.cycle.size(); ++i)
        if (!ok(l.cycle[i], l.cycle[i + 1])) return false;
    return ok(l.cycle.back(), l.cycle.front());
}

CostProfile cost_of_lasso(const ReachabilityGame& g, const Lasso& l) {
    if (!lasso_edge_valid(g, l))
        throw std::invalid_argument("lasso is not edge-valid in the arena");
    CostProfile c(static_cast<size_t>(g.player_count()), ExtCost::inf());
    // one cycle unrolling past the stem covers every first visit
    size_t horizon = l.stem.size() + l.cycle.size();
    for (size_t n = 0; n < horizon; ++n) {
        int v = l.at(n);
        for (PlayerId i = 1; i <= g.player_count(); ++i)
            if (c[i - 1].is_inf() && g.in_target(i, v)) c[i - 1] = ExtCost(static_cast<uint32_t>(n));
    }
    return c;
}

CostProfile suffix_cost(const ReachabilityGame& g, const Lasso& l, size_t n) {
    return cost_of_lasso(g, suffix_lasso(l, n));
}

Lasso parse_lasso(const ReachabilityGame& g, const std::string& text) {
    auto bar = text.find('|');
    if (bar == std::string::npos)
        throw std::invalid_argument("lasso must be written as 'stem | cycle'");
    auto split = [&g](const std::string& part) {
        std::vector<int> out;
        std::string tok;
        std::istringstream is(part);
        while (std::getline(is, tok, ',')) {
            std::istringstream ws(tok);
            std::string w;
            while (ws >> w) out.push_back(g.require_vertex(w));
        }
        return out;
    };
    Lasso l;
    l.stem = split(text.substr(0, bar));
    l.cycle = split(text.substr(bar + 1));
    if (l.cycle.empty()) throw std::invalid_argument("lasso cycle must be nonempty");
    return l;
}

}  // namespace spe
