#pragma once

#include <string>
#include <vector>

#include "incmatch/model.hpp"

namespace incmatch {

// ---------------------------------------------------------------------------
// Multicolored clique -> roommates

struct VertexRef {
    int color = 0;  // 0-based
    int index = 0;  // 0-based inside the color class
    bool operator==(const VertexRef&) const = default;
};

struct ColoredGraph {
    std::vector<std::vector<std::string>> classes;  // vertex names per color
    std::vector<std::pair<VertexRef, VertexRef>> edges;

    int colors() const { return static_cast<int>(classes.size()); }
    int per_color() const { return classes.empty() ? 0 : static_cast<int>(classes[0].size()); }
};

// Checks equal class sizes, no edges inside a class, no repeated edges and
// regularity. Returns the common degree.
int validate_graph(const ColoredGraph& g);

struct CliqueGadget {
    ColoredGraph graph;
    int degree = 0;
    Instance inst;

    // Agent ids; colors, vertices and edges are 0-based, j runs 1..4.
    AgentId s(int c) const { return block(c); }
    AgentId s_bar(int c) const { return block(c) + 1; }
    AgentId t(int c) const { return block(c) + 2; }
    AgentId t_bar(int c) const { return block(c) + 3; }
    AgentId u(int c) const { return block(c) + 4; }
    AgentId u_bar(int c) const { return block(c) + 5; }
    AgentId a(int c, int i, int j) const { return block(c) + 6 + 4 * i + (j - 1); }
    AgentId a_bar(int c, int i, int j) const { return block(c) + 6 + 4 * graph.per_color() + 4 * i + (j - 1); }
    AgentId edge(int e, int j) const { return graph.colors() * block_size() + 4 * e + (j - 1); }

    int block_size() const { return 8 * graph.per_color() + 6; }

  private:
    AgentId block(int c) const { return c * block_size(); }
};

CliqueGadget gen_isr_from_clique(const ColoredGraph& g);

// The constructed M2 for a clique given as one vertex index per color.
Matching certify_clique_solution(const CliqueGadget& gadget, const std::vector<int>& clique);

struct CharacterizationReport {
    bool tu_pairs = false;      // item 1
    bool vertex_gadget = false; // item 2
    bool edge_gadget = false;   // item 3
    bool consistency = false;   // item 4
    std::vector<int> selected;  // per color, -1 when item 2 fails there
    bool holds() const { return tu_pairs && vertex_gadget && edge_gadget && consistency; }
};

CharacterizationReport check_stable_characterization(const CliqueGadget& gadget, const Matching& m);

// ---------------------------------------------------------------------------
// Forced pairs

struct ForcedGadget {
    Instance inst;
    int original_agents = 0;
    std::vector<Pair> replaced;      // the forced pairs, as given
    std::vector<Pair> chain_pairs;   // union of the bold matchings

    // M2 containing every forced pair -> (M2 minus forced) plus the chains.
    Matching forward(const Matching& m2) const;
};

// Replaces every forced pair {v, w} by a chain of k+1 six-agent copies.
// Both endpoints must accept each other in P1 and P2.
ForcedGadget apply_forced_pair_gadget(const Instance& inst);

// ---------------------------------------------------------------------------
// Forbidden pairs

struct ForbiddenGadget {
    Instance inst;
    int original_agents = 0;
    int copies = 0;                 // s
    std::vector<Pair> forbidden;    // (v_i, w_i)
    Profile original_p2;

    enum Role { kLeftTop, kLeftMid, kLeftBottom, kRightTop, kRightMid, kRightBottom };
    AgentId agent(Role role, int i, int j) const { return original_agents + (i * copies + j) * 6 + role; }

    // Stable M2 of the original avoiding every forbidden pair -> stable M2'.
    Matching forward(const Matching& m2) const;
};

// Pairs are (v_i, w_i) in the order that fixes the nesting condition.
ForbiddenGadget apply_forbidden_pairs_gadget(const Instance& inst, const std::vector<Pair>& forbidden);

}  // namespace incmatch
