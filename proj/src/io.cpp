#include "incmatch/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"

namespace incmatch {

namespace {

using json = nlohmann::json;

const std::set<std::string> kReserved = {"agents", "bipartition", "profile", "matching", "k", "forced", "color", "edge"};

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ParseError("line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Line {
    int number;
    std::string text;
};

std::vector<Line> content_lines(const std::string& text) {
    std::vector<Line> out;
    std::istringstream in(text);
    std::string raw;
    for (int no = 1; std::getline(in, raw); ++no) {
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::string t = trim(raw);
        if (!t.empty()) out.push_back({no, t});
    }
    return out;
}

// Whitespace split, with > ( ) as tokens of their own.
std::vector<std::string> tokenize(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&]() {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
    };
    for (char ch : s) {
        if (ch == ' ' || ch == '\t' || ch == '\r') {
            flush();
        } else if (ch == '>' || ch == '(' || ch == ')') {
            flush();
            out.emplace_back(1, ch);
        } else {
            cur += ch;
        }
    }
    flush();
    return out;
}

bool valid_name(const std::string& s) {
    if (s.empty() || kReserved.count(s)) return false;
    return s.find_first_of(" \t-<>():|#") == std::string::npos;
}

// "key: rest" split; nullopt when there is no colon.
std::optional<std::pair<std::string, std::string>> split_key(const std::string& t) {
    auto colon = t.find(':');
    if (colon == std::string::npos) return std::nullopt;
    return std::pair{trim(t.substr(0, colon)), trim(t.substr(colon + 1))};
}

class Names {
  public:
    explicit Names(const std::vector<std::string>& names) {
        for (size_t i = 0; i < names.size(); ++i) index_[names[i]] = static_cast<AgentId>(i);
    }
    AgentId at(const std::string& name, int line) const {
        auto it = index_.find(name);
        if (it == index_.end()) fail(line, "unknown agent '" + name + "'");
        return it->second;
    }

  private:
    std::map<std::string, AgentId> index_;
};

std::vector<Pair> parse_pairs(const std::string& rest, const Names& names, int line) {
    std::vector<Pair> out;
    std::istringstream in(rest);
    std::string tok;
    while (in >> tok) {
        auto dash = tok.find('-');
        if (dash == std::string::npos || dash == 0 || dash + 1 == tok.size())
            fail(line, "expected a pair like a-b, got '" + tok + "'");
        AgentId a = names.at(tok.substr(0, dash), line), b = names.at(tok.substr(dash + 1), line);
        if (a == b) fail(line, "agent paired with itself");
        out.emplace_back(a, b);
    }
    return out;
}

Matching matching_from(const std::vector<Pair>& pairs, int n, int line) {
    Matching m(n);
    for (auto [a, b] : pairs) {
        if (m.matched(a) || m.matched(b)) fail(line, "agent appears in two pairs");
        m.add(a, b);
    }
    return m;
}

Tiers parse_list(const std::string& rest, const Names& names, AgentId self, int line) {
    auto toks = tokenize(rest);
    Tiers tiers;
    std::set<AgentId> seen;
    size_t i = 0;
    auto add = [&](const std::string& tok, std::vector<AgentId>& tier) {
        AgentId b = names.at(tok, line);
        if (b == self) fail(line, "agent lists itself");
        if (!seen.insert(b).second) fail(line, "duplicate agent '" + tok + "' in list");
        tier.push_back(b);
    };
    while (i < toks.size()) {
        std::vector<AgentId> tier;
        if (toks[i] == "(") {
            ++i;
            while (i < toks.size() && toks[i] != ")") {
                if (toks[i] == "(" || toks[i] == ">") fail(line, "unexpected '" + toks[i] + "' inside a tie");
                add(toks[i++], tier);
            }
            if (i == toks.size()) fail(line, "unclosed '('");
            if (tier.empty()) fail(line, "empty tie");
            ++i;
        } else if (toks[i] == ">" || toks[i] == ")") {
            fail(line, "unexpected '" + toks[i] + "'");
        } else {
            add(toks[i++], tier);
        }
        tiers.push_back(std::move(tier));
        if (i < toks.size()) {
            if (toks[i] != ">") fail(line, "expected '>' between tiers");
            ++i;
            if (i == toks.size()) fail(line, "list ends with '>'");
        }
    }
    return tiers;
}

std::string format_tiers(const Tiers& tiers, const std::vector<std::string>& names) {
    std::string out;
    for (size_t i = 0; i < tiers.size(); ++i) {
        if (i) out += " > ";
        if (tiers[i].size() == 1) {
            out += names[tiers[i][0]];
        } else {
            out += "(";
            for (AgentId b : tiers[i]) out += " " + names[b];
            out += " )";
        }
    }
    return out;
}

json pairs_json(const Matching& m, const std::vector<std::string>& names) {
    json arr = json::array();
    for (auto& [a, b] : named_pairs(m, names)) arr.push_back({a, b});
    return arr;
}

}  // namespace

Instance parse_instance(const std::string& text) {
    Instance inst;
    std::optional<Names> names;
    std::optional<Profile> profiles[2];
    std::optional<std::vector<int>> side;
    bool have_m1 = false, have_k = false, have_forced = false;
    std::vector<std::vector<char>> listed(2);
    int section = -1;  // profile being read
    int last_line = 0;

    auto need_agents = [&](int line) {
        if (!names) fail(line, "'agents:' must come first");
    };
    for (const auto& [no, t] : content_lines(text)) {
        last_line = no;
        auto kv = split_key(t);
        if (!kv) fail(no, "expected 'key: value'");
        const auto& [key, rest] = *kv;
        if (section >= 0 && !kReserved.count(key) && key.rfind("profile ", 0) != 0 && key.rfind("matching ", 0) != 0) {
            AgentId a = names->at(key, no);
            if (listed[section][a]) fail(no, "second list for agent '" + key + "'");
            listed[section][a] = 1;
            profiles[section]->set_list(a, parse_list(rest, *names, a, no));
            continue;
        }
        section = -1;
        if (key == "agents") {
            if (names) fail(no, "repeated 'agents:'");
            std::istringstream in(rest);
            std::string tok;
            std::set<std::string> seen;
            while (in >> tok) {
                if (!valid_name(tok)) fail(no, "invalid agent name '" + tok + "'");
                if (!seen.insert(tok).second) fail(no, "duplicate agent '" + tok + "'");
                inst.names.push_back(tok);
            }
            names.emplace(inst.names);
            for (auto& l : listed) l.assign(inst.names.size(), 0);
        } else if (key == "bipartition") {
            need_agents(no);
            if (side) fail(no, "repeated 'bipartition:'");
            auto bar = rest.find('|');
            if (bar == std::string::npos) fail(no, "bipartition needs '|' between the sides");
            std::vector<int> s(inst.names.size(), -1);
            for (int part = 0; part < 2; ++part) {
                std::istringstream in(part == 0 ? rest.substr(0, bar) : rest.substr(bar + 1));
                std::string tok;
                while (in >> tok) {
                    AgentId a = names->at(tok, no);
                    if (s[a] != -1) fail(no, "agent '" + tok + "' on both or the same side twice");
                    s[a] = part;
                }
            }
            for (size_t a = 0; a < s.size(); ++a)
                if (s[a] < 0) fail(no, "agent '" + inst.names[a] + "' missing from the bipartition");
            side = s;
        } else if (key == "profile P1" || key == "profile P2") {
            need_agents(no);
            if (!rest.empty()) fail(no, "nothing may follow '" + key + ":'");
            int which = key == "profile P1" ? 0 : 1;
            if (profiles[which]) fail(no, "repeated '" + key + "'");
            profiles[which].emplace(static_cast<int>(inst.names.size()));
            section = which;
        } else if (key == "matching M1") {
            need_agents(no);
            if (have_m1) fail(no, "repeated 'matching M1:'");
            inst.m1 = matching_from(parse_pairs(rest, *names, no), static_cast<int>(inst.names.size()), no);
            have_m1 = true;
        } else if (key == "k") {
            if (have_k) fail(no, "repeated 'k:'");
            try {
                size_t used = 0;
                inst.k = std::stoi(rest, &used);
                if (used != rest.size() || inst.k < 0) throw std::invalid_argument("k");
            } catch (const std::exception&) {
                fail(no, "k must be a non-negative integer");
            }
            have_k = true;
        } else if (key == "forced") {
            need_agents(no);
            if (have_forced) fail(no, "repeated 'forced:'");
            inst.forced = parse_pairs(rest, *names, no);
            have_forced = true;
        } else {
            fail(no, "unknown key '" + key + "'");
        }
    }
    if (!names) fail(last_line, "missing 'agents:'");
    if (!profiles[0] || !profiles[1]) fail(last_line, "both 'profile P1:' and 'profile P2:' are required");
    if (!have_m1) fail(last_line, "missing 'matching M1:'");
    if (!have_k) fail(last_line, "missing 'k:'");
    inst.p1 = std::move(*profiles[0]);
    inst.p2 = std::move(*profiles[1]);
    if (side) {
        inst.p1.set_bipartition(*side);
        inst.p2.set_bipartition(*side);
    }
    return inst;
}

std::string serialize_instance(const Instance& inst) {
    std::ostringstream out;
    out << "agents:";
    for (const auto& nm : inst.names) out << ' ' << nm;
    out << '\n';
    if (inst.p2.bipartite()) {
        out << "bipartition:";
        for (int part = 0; part < 2; ++part) {
            if (part) out << " |";
            for (AgentId a = 0; a < inst.size(); ++a)
                if (inst.p2.side(a) == part) out << ' ' << inst.names[a];
        }
        out << '\n';
    }
    for (int which = 0; which < 2; ++which) {
        const Profile& p = which == 0 ? inst.p1 : inst.p2;
        out << "profile P" << which + 1 << ":\n";
        for (AgentId a = 0; a < inst.size(); ++a) {
            std::string l = format_tiers(p.tiers(a), inst.names);
            out << inst.names[a] << ':' << (l.empty() ? "" : " ") << l << '\n';
        }
    }
    out << "matching M1:" << (inst.m1.pair_count() ? " " : "") << format_matching(inst.m1, inst.names) << '\n';
    out << "k: " << inst.k << '\n';
    if (!inst.forced.empty()) {
        out << "forced:";
        for (auto [a, b] : inst.forced) out << ' ' << inst.names[a] << '-' << inst.names[b];
        out << '\n';
    }
    return out.str();
}

ColoredGraph parse_graph(const std::string& text) {
    ColoredGraph g;
    std::map<std::string, VertexRef> where;
    std::set<std::string> labels;
    for (const auto& [no, t] : content_lines(text)) {
        auto kv = split_key(t);
        if (!kv) fail(no, "expected 'color C: ...' or 'edge: u v'");
        const auto& [key, rest] = *kv;
        std::istringstream in(rest);
        std::vector<std::string> toks;
        for (std::string tok; in >> tok;) toks.push_back(tok);
        if (key.rfind("color ", 0) == 0) {
            std::string label = trim(key.substr(6));
            if (!labels.insert(label).second) fail(no, "repeated color '" + label + "'");
            int c = g.colors();
            g.classes.emplace_back();
            for (const auto& v : toks) {
                if (!valid_name(v)) fail(no, "invalid vertex name '" + v + "'");
                if (where.count(v)) fail(no, "vertex '" + v + "' listed twice");
                where[v] = VertexRef{c, static_cast<int>(g.classes[c].size())};
                g.classes[c].push_back(v);
            }
        } else if (key == "edge") {
            if (toks.size() != 2) fail(no, "an edge needs exactly two vertices");
            VertexRef ends[2];
            for (int i = 0; i < 2; ++i) {
                auto it = where.find(toks[i]);
                if (it == where.end()) fail(no, "unknown vertex '" + toks[i] + "'");
                ends[i] = it->second;
            }
            g.edges.push_back({ends[0], ends[1]});
        } else {
            fail(no, "unknown key '" + key + "'");
        }
    }
    return g;
}

std::string serialize_graph(const ColoredGraph& g) {
    std::ostringstream out;
    for (int c = 0; c < g.colors(); ++c) {
        out << "color " << c + 1 << ':';
        for (const auto& v : g.classes[c]) out << ' ' << v;
        out << '\n';
    }
    for (const auto& [x, y] : g.edges)
        out << "edge: " << g.classes[x.color][x.index] << ' ' << g.classes[y.color][y.index] << '\n';
    return out.str();
}

Matching parse_matching(const std::string& text, const std::vector<std::string>& names) {
    Names idx(names);
    std::vector<Pair> pairs;
    int last = 0;
    for (const auto& [no, t] : content_lines(text)) {
        std::string rest = t;
        if (auto kv = split_key(t)) {
            if (kv->first.rfind("matching", 0) != 0) fail(no, "unknown key '" + kv->first + "'");
            rest = kv->second;
        }
        for (auto p : parse_pairs(rest, idx, no)) pairs.push_back(p);
        last = no;
    }
    return matching_from(pairs, static_cast<int>(names.size()), last);
}

std::string format_matching(const Matching& m, const std::vector<std::string>& names) {
    std::string out;
    for (auto [a, b] : m.pairs()) {
        if (!out.empty()) out += ' ';
        out += names[a] + "-" + names[b];
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write '" + path + "'");
    out << text;
    if (!out) throw std::invalid_argument("write to '" + path + "' failed");
}

std::vector<std::pair<std::string, std::string>> named_pairs(const Matching& m, const std::vector<std::string>& names) {
    std::vector<std::pair<std::string, std::string>> out;
    for (auto [a, b] : m.pairs()) out.push_back(std::minmax(names[a], names[b]));
    std::sort(out.begin(), out.end());
    return out;
}

bool feasible_within_budget(const Instance& inst, const Outcome& out) { return out && out->diff <= inst.k; }

std::string result_json(const Instance& inst, const Outcome& out, const std::string& algorithm, long elapsed_ms) {
    json doc;
    doc["feasible"] = feasible_within_budget(inst, out);
    doc["matching"] = out ? pairs_json(out->matching, inst.names) : json(nullptr);
    doc["symmetric_difference"] = out ? json(out->diff) : json(nullptr);
    doc["algorithm"] = algorithm;
    doc["elapsed_ms"] = elapsed_ms;
    return doc.dump(2) + "\n";
}

std::string enumerate_json(const Instance& inst, const std::vector<Matching>& all) {
    json doc;
    doc["count"] = all.size();
    json list = json::array();
    for (const auto& m : all) {
        json entry;
        entry["matching"] = pairs_json(m, inst.names);
        entry["symmetric_difference"] = diff_count(inst.m1, m);
        list.push_back(entry);
    }
    doc["matchings"] = list;
    return doc.dump(2) + "\n";
}

std::string verify_json(const Instance& inst, const Matching& m2) {
    json doc;
    doc["valid"] = valid_in(inst.p2, m2);
    json blocking = json::array();
    for (auto [a, b] : blocking_pairs(inst.p2, m2)) blocking.push_back(std::vector<std::string>{inst.names[a], inst.names[b]});
    doc["stable"] = blocking.empty() && valid_in(inst.p2, m2);
    doc["blocking_pairs"] = blocking;
    int d = diff_count(inst.m1, m2);
    doc["symmetric_difference"] = d;
    doc["within_budget"] = d <= inst.k;
    bool forced_ok = std::all_of(inst.forced.begin(), inst.forced.end(),
                                 [&](const Pair& q) { return m2.contains(q.first, q.second); });
    doc["forced_pairs_kept"] = forced_ok;
    return doc.dump(2) + "\n";
}

}  // namespace incmatch
