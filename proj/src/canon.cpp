#include "gsr/canon.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>

namespace gsr {

namespace {

std::string base_attr(const BaseOrbifold& b) {
    std::string s = b.orientable ? "o" : "n";
    s += "g" + std::to_string(b.genus);
    s += "b" + std::to_string(b.boundary_count);
    s += "e" + std::to_string(b.end_count);
    s += "c";
    for (std::size_t i = 0; i < b.cone_orders.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(b.cone_orders[i]);
    }
    return s;
}

std::string ray_signature(const PeriodicRay& r) {
    std::vector<std::string> segs;
    for (const auto& seg : r.period)
        segs.push_back(base_attr(seg.base) + "#" +
                       std::to_string(fiber_intersection(seg.matrix)));
    // reduce to the shortest repeating unit: the infinite object does not see
    // how many times its period was written out
    std::size_t k = segs.size();
    for (std::size_t d = 1; d <= k; ++d) {
        if (k % d) continue;
        bool rep = true;
        for (std::size_t i = d; i < k && rep; ++i) rep = segs[i] == segs[i % d];
        if (rep) { segs.resize(d); break; }
    }
    std::string out = "[";
    for (const auto& s : segs) out += s + ";";
    return out + "]";
}

struct CanonGraph {
    std::vector<std::string> piece_ids;           // index -> id
    std::vector<std::string> vertex_attr;         // per index
    // adjacency: per vertex, list of (edge attr, other vertex, edge index)
    struct Inc {
        std::string attr;
        int other;
        int edge;
    };
    std::vector<std::vector<Inc>> adj;
    std::vector<std::string> loop_attr_of_vertex; // concatenated sorted loop attrs
    struct E {
        int u, v;
        std::string attr;
        bool loop;
        std::string id;
    };
    std::vector<E> edge_list;
};

CanonGraph build(const GraphStructure& g) {
    CanonGraph c;
    std::map<std::string, int> index;
    for (const auto& [pid, p] : g.pieces) {
        index[pid] = (int)c.piece_ids.size();
        c.piece_ids.push_back(pid);
    }
    c.adj.resize(c.piece_ids.size());
    c.loop_attr_of_vertex.resize(c.piece_ids.size());

    std::vector<std::vector<std::string>> rays_of(c.piece_ids.size());
    for (const auto& [rid, r] : g.rays)
        rays_of[index.at(g.slot_owner(r.attach))].push_back(ray_signature(r));

    for (std::size_t i = 0; i < c.piece_ids.size(); ++i) {
        const Piece& p = g.pieces.at(c.piece_ids[i]);
        std::string a;
        if (auto* f = std::get_if<FiberedPiece>(&p.data)) a = "F" + base_attr(f->base);
        else if (std::holds_alternative<SolidTorusPiece>(p.data)) a = "V";
        else a = "K";
        std::sort(rays_of[i].begin(), rays_of[i].end());
        for (const auto& rs : rays_of[i]) a += "R" + rs;
        c.vertex_attr[i] = std::move(a);
    }

    std::vector<std::vector<std::string>> loops(c.piece_ids.size());
    for (const auto& [eid, e] : g.edges) {
        int u = index.at(g.slot_owner(e.a));
        int v = index.at(g.slot_owner(e.b));
        std::string attr = std::to_string(fiber_intersection(e.matrix));
        bool loop = u == v;
        c.edge_list.push_back({u, v, attr, loop, eid});
        if (loop) {
            loops[u].push_back(attr);
        } else {
            int ei = (int)c.edge_list.size() - 1;
            c.adj[u].push_back({attr, v, ei});
            c.adj[v].push_back({attr, u, ei});
        }
    }
    for (std::size_t i = 0; i < loops.size(); ++i) {
        std::sort(loops[i].begin(), loops[i].end());
        for (const auto& l : loops[i]) c.loop_attr_of_vertex[i] += "L" + l + ";";
    }
    return c;
}

// One round of color refinement; returns the new coloring (ranks are assigned
// by sorted signature, so they do not depend on input labels).
std::vector<int> refine_once(const CanonGraph& c, const std::vector<int>& color) {
    std::vector<std::string> sig(c.piece_ids.size());
    for (std::size_t v = 0; v < sig.size(); ++v) {
        std::vector<std::string> nb;
        for (const auto& inc : c.adj[v])
            nb.push_back(inc.attr + ":" + std::to_string(color[inc.other]));
        std::sort(nb.begin(), nb.end());
        std::string s = std::to_string(color[v]) + "|";
        for (const auto& x : nb) s += x + ",";
        sig[v] = s;
    }
    std::vector<std::string> sorted = sig;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> out(sig.size());
    for (std::size_t v = 0; v < sig.size(); ++v)
        out[v] = (int)(std::lower_bound(sorted.begin(), sorted.end(), sig[v]) -
                       sorted.begin());
    return out;
}

std::vector<int> refine(const CanonGraph& c, std::vector<int> color) {
    int classes = (int)*std::max_element(color.begin(), color.end()) + 1;
    for (;;) {
        std::vector<int> next = refine_once(c, color);
        int nclasses = (int)*std::max_element(next.begin(), next.end()) + 1;
        color = std::move(next);
        if (nclasses == classes) return color;
        classes = nclasses;
    }
}

std::vector<int> initial_colors(const CanonGraph& c) {
    std::vector<std::string> sig(c.piece_ids.size());
    for (std::size_t v = 0; v < sig.size(); ++v)
        sig[v] = c.vertex_attr[v] + "|" + c.loop_attr_of_vertex[v] + "|deg" +
                 std::to_string(c.adj[v].size());
    std::vector<std::string> sorted = sig;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> color(sig.size());
    for (std::size_t v = 0; v < sig.size(); ++v)
        color[v] = (int)(std::lower_bound(sorted.begin(), sorted.end(), sig[v]) -
                         sorted.begin());
    return color;
}

// Serialize the graph under a discrete coloring (labels = colors).
std::string leaf_string(const CanonGraph& c, const std::vector<int>& color) {
    std::vector<int> of_label(color.size());
    for (std::size_t v = 0; v < color.size(); ++v) of_label[color[v]] = (int)v;
    std::string out;
    for (std::size_t l = 0; l < of_label.size(); ++l) {
        int v = of_label[l];
        out += c.vertex_attr[v] + "|" + c.loop_attr_of_vertex[v] + "\n";
    }
    std::vector<std::string> es;
    for (const auto& e : c.edge_list) {
        int lu = color[e.u], lv = color[e.v];
        if (lu > lv) std::swap(lu, lv);
        es.push_back(std::to_string(lu) + "-" + std::to_string(lv) + "#" + e.attr);
    }
    std::sort(es.begin(), es.end());
    for (const auto& e : es) out += e + "\n";
    return out;
}

struct Canonizer {
    const CanonGraph& c;
    std::string best;
    std::vector<int> best_color;
    bool have = false;

    void search(std::vector<int> color) {
        color = refine(c, std::move(color));
        // find the first non-singleton cell in color order
        int n = (int)color.size();
        std::vector<int> count(n, 0);
        for (int v = 0; v < n; ++v) count[color[v]]++;
        int target = -1;
        for (int cl = 0; cl < n; ++cl)
            if (count[cl] > 1) { target = cl; break; }
        if (target < 0) {
            std::string s = leaf_string(c, color);
            if (!have || s < best) {
                best = std::move(s);
                best_color = color;
                have = true;
            }
            return;
        }
        for (int v = 0; v < n; ++v) {
            if (color[v] != target) continue;
            // individualize v: split it off below its cell
            std::vector<int> next(n);
            for (int u = 0; u < n; ++u)
                next[u] = 2 * color[u] + (u == v ? 0 : 1);
            search(std::move(next));
        }
    }
};

std::uint64_t fnv1a(const std::string& s, std::uint64_t h) {
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t x) {
    static const char* d = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = d[x & 0xf];
        x >>= 4;
    }
    return s;
}

// Canonical labeling: piece id -> canonical index.
std::pair<std::string, std::map<std::string, int>> canonize(const GraphStructure& g) {
    CanonGraph c = build(g);
    if (c.piece_ids.empty()) return {"", {}};
    Canonizer cz{c};
    cz.search(initial_colors(c));
    std::map<std::string, int> labeling;
    for (std::size_t v = 0; v < c.piece_ids.size(); ++v)
        labeling[c.piece_ids[v]] = cz.best_color[v];
    return {cz.best, std::move(labeling)};
}

} // namespace

std::string canonical_form(const GraphStructure& g) { return canonize(g).first; }

std::string signature(const GraphStructure& g) {
    std::string form = canonical_form(g);
    return hex64(fnv1a(form, 0xcbf29ce484222325ULL)) +
           hex64(fnv1a(form, 0x9ae16a3b2f90404fULL));
}

std::optional<IsoWitness> isomorphic(const GraphStructure& g1, const GraphStructure& g2) {
    auto [form1, lab1] = canonize(g1);
    auto [form2, lab2] = canonize(g2);
    if (form1 != form2) return std::nullopt;

    IsoWitness w;
    std::map<int, std::string> inv2;
    for (const auto& [pid, l] : lab2) inv2[l] = pid;
    for (const auto& [pid, l] : lab1) w.piece_map[pid] = inv2.at(l);

    // canonical key -> available matching ids on the g2 side
    auto edge_key = [](const GraphStructure& g, const TorusEdge& e,
                       const std::map<std::string, int>& lab) {
        int u = lab.at(g.slot_owner(e.a));
        int v = lab.at(g.slot_owner(e.b));
        if (u > v) std::swap(u, v);
        return std::to_string(u) + "-" + std::to_string(v) + "#" +
               std::to_string(fiber_intersection(e.matrix));
    };
    std::map<std::string, std::vector<std::string>> pool;
    for (const auto& [eid, e] : g2.edges) pool[edge_key(g2, e, lab2)].push_back(eid);
    for (const auto& [eid, e] : g1.edges) {
        auto& v = pool[edge_key(g1, e, lab1)];
        if (v.empty()) throw std::logic_error("isomorphic: edge pools out of sync");
        w.edge_map[eid] = v.back();
        v.pop_back();
    }

    auto ray_key = [](const GraphStructure& g, const PeriodicRay& r,
                      const std::map<std::string, int>& lab) {
        return std::to_string(lab.at(g.slot_owner(r.attach))) + "@" + ray_signature(r);
    };
    std::map<std::string, std::vector<std::string>> rpool;
    for (const auto& [rid, r] : g2.rays) rpool[ray_key(g2, r, lab2)].push_back(rid);
    for (const auto& [rid, r] : g1.rays) {
        auto& v = rpool[ray_key(g1, r, lab1)];
        if (v.empty()) throw std::logic_error("isomorphic: ray pools out of sync");
        w.ray_map[rid] = v.back();
        v.pop_back();
    }
    return w;
}

} // namespace gsr
