#include "gsr/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace gsr {

bool PeriodicRay::all_t2xi() const {
    for (const auto& seg : period) {
        const BaseOrbifold& b = seg.base;
        if (!(b.orientable && b.genus == 0 && b.boundary_count == 2 &&
              b.end_count == 0 && b.cone_orders.empty()))
            return false;
    }
    return true;
}

SlotId GraphStructure::make_slot(const std::string& piece_id) {
    auto it = pieces.find(piece_id);
    if (it == pieces.end()) throw std::logic_error("make_slot: no such piece");
    SlotId s = next_slot_++;
    it->second.slots.push_back(s);
    owner_[s] = piece_id;
    return s;
}

void GraphStructure::drop_slot(SlotId s) {
    if (use_.count(s)) throw std::logic_error("drop_slot: slot still in use");
    auto it = owner_.find(s);
    if (it == owner_.end()) throw std::logic_error("drop_slot: unknown slot");
    auto& v = pieces.at(it->second).slots;
    v.erase(std::find(v.begin(), v.end(), s));
    owner_.erase(it);
}

void GraphStructure::move_slot(SlotId s, const std::string& to_piece_id) {
    auto it = owner_.find(s);
    if (it == owner_.end()) throw std::logic_error("move_slot: unknown slot");
    auto& from = pieces.at(it->second).slots;
    from.erase(std::find(from.begin(), from.end(), s));
    pieces.at(to_piece_id).slots.push_back(s);
    it->second = to_piece_id;
}

void GraphStructure::add_piece(Piece p) {
    if (pieces.count(p.id)) throw std::logic_error("add_piece: duplicate id");
    if (!p.slots.empty()) throw std::logic_error("add_piece: populate slots via make_slot");
    pieces.emplace(p.id, std::move(p));
}

void GraphStructure::remove_piece(const std::string& id) {
    auto it = pieces.find(id);
    if (it == pieces.end()) throw std::logic_error("remove_piece: no such piece");
    if (!it->second.slots.empty())
        throw std::logic_error("remove_piece: piece still owns slots");
    pieces.erase(it);
}

void GraphStructure::add_edge(TorusEdge e) {
    if (edges.count(e.id)) throw std::logic_error("add_edge: duplicate id");
    if (use_.count(e.a) || use_.count(e.b)) throw std::logic_error("add_edge: slot in use");
    use_[e.a] = {SlotUse::EdgeEndA, e.id};
    use_[e.b] = {SlotUse::EdgeEndB, e.id};
    edges.emplace(e.id, std::move(e));
}

void GraphStructure::remove_edge(const std::string& id) {
    auto it = edges.find(id);
    if (it == edges.end()) throw std::logic_error("remove_edge: no such edge");
    use_.erase(it->second.a);
    use_.erase(it->second.b);
    edges.erase(it);
}

void GraphStructure::add_ray(PeriodicRay r) {
    if (rays.count(r.id)) throw std::logic_error("add_ray: duplicate id");
    if (use_.count(r.attach)) throw std::logic_error("add_ray: slot in use");
    use_[r.attach] = {SlotUse::RayAttach, r.id};
    rays.emplace(r.id, std::move(r));
}

void GraphStructure::remove_ray(const std::string& id) {
    auto it = rays.find(id);
    if (it == rays.end()) throw std::logic_error("remove_ray: no such ray");
    use_.erase(it->second.attach);
    rays.erase(it);
}

const std::string& GraphStructure::slot_owner(SlotId s) const {
    auto it = owner_.find(s);
    if (it == owner_.end()) throw std::logic_error("slot_owner: unknown slot");
    return it->second;
}

std::optional<SlotUse> GraphStructure::slot_use(SlotId s) const {
    auto it = use_.find(s);
    if (it == use_.end()) return std::nullopt;
    return it->second;
}

int GraphStructure::slot_index(SlotId s) const {
    const auto& v = pieces.at(slot_owner(s)).slots;
    return (int)(std::find(v.begin(), v.end(), s) - v.begin());
}

std::string GraphStructure::fresh_id(const std::string& prefix) {
    for (;;) {
        std::string id = prefix + std::to_string(fresh_counter_++);
        if (!pieces.count(id) && !edges.count(id) && !rays.count(id)) return id;
    }
}

void GraphStructure::reindex() {
    owner_.clear();
    use_.clear();
    next_slot_ = 0;
    for (const auto& [pid, p] : pieces)
        for (SlotId s : p.slots) {
            if (owner_.count(s)) throw std::logic_error("reindex: slot owned twice");
            owner_[s] = pid;
            next_slot_ = std::max(next_slot_, s + 1);
        }
    for (const auto& [eid, e] : edges) {
        if (use_.count(e.a) || use_.count(e.b))
            throw std::logic_error("reindex: slot used twice");
        use_[e.a] = {SlotUse::EdgeEndA, eid};
        use_[e.b] = {SlotUse::EdgeEndB, eid};
    }
    for (const auto& [rid, r] : rays) {
        if (use_.count(r.attach)) throw std::logic_error("reindex: slot used twice");
        use_[r.attach] = {SlotUse::RayAttach, rid};
    }
}

ThinType piece_type(const Piece& p) { return classify_piece(p.data); }

int total_ends(const GraphStructure& g) {
    int n = (int)g.rays.size();
    for (const auto& [id, p] : g.pieces)
        if (const BaseOrbifold* b = p.base()) n += b->end_count;
    return n;
}

std::vector<Violation> validate(const GraphStructure& g) {
    std::vector<Violation> out;
    auto bad = [&](std::string code, std::string detail) {
        out.push_back({std::move(code), std::move(detail)});
    };

    if (g.pieces.empty()) {
        bad("empty", "structure has no pieces");
        return out;
    }

    std::map<SlotId, std::string> owner;
    for (const auto& [pid, p] : g.pieces) {
        if (p.id != pid) bad("id-mismatch", "piece key vs id: " + pid);
        for (SlotId s : p.slots) {
            if (owner.count(s))
                bad("slot-reused", "slot owned by " + owner[s] + " and " + pid);
            owner[s] = pid;
        }
        if (auto* f = std::get_if<FiberedPiece>(&p.data)) {
            try {
                check_base(f->base);
            } catch (const std::exception& e) {
                bad("bad-base", pid + ": " + e.what());
                continue;
            }
            if ((int)p.slots.size() != f->base.boundary_count)
                bad("slot-count", pid + ": slots vs boundary_count");
            if (banned_fibered_base(f->base))
                bad("ambiguous solid torus encoding",
                    pid + ": disk/plane with <= 1 cone point must be a solidtorus record");
        } else if (auto* v = std::get_if<SolidTorusPiece>(&p.data)) {
            if (p.slots.size() != 1) bad("slot-count", pid + ": solid torus needs exactly 1 slot");
            if (!primitive(v->meridian))
                bad("meridian", pid + ": meridian must be a primitive pair");
        } else {
            if (p.slots.size() != 1) bad("slot-count", pid + ": k2xi needs exactly 1 slot");
        }
    }

    std::map<SlotId, std::string> used;
    auto use = [&](SlotId s, const std::string& what) {
        if (!owner.count(s)) {
            bad("unknown-slot", what + " references a slot owned by no piece");
            return;
        }
        if (used.count(s))
            bad("slot-reused", what + " reuses a slot already used by " + used[s]);
        used[s] = what;
    };
    for (const auto& [eid, e] : g.edges) {
        use(e.a, "edge " + eid);
        use(e.b, "edge " + eid);
        if (e.a == e.b) bad("loop-slots", "edge " + eid + ": both ends on one slot");
        try {
            if (e.matrix.det() != -1)
                bad("orientation convention", "edge " + eid + ": determinant must be -1");
        } catch (const std::exception& ex) {
            bad("overflow", "edge " + eid + ": " + ex.what());
        }
    }
    for (const auto& [rid, r] : g.rays) {
        use(r.attach, "ray " + rid);
        if (r.period.empty()) bad("ray period", "ray " + rid + ": empty period");
        for (const auto& seg : r.period) {
            try {
                check_base(seg.base);
            } catch (const std::exception& e) {
                bad("ray period", "ray " + rid + ": " + e.what());
                continue;
            }
            if (seg.base.boundary_count != 2 || seg.base.end_count != 0)
                bad("ray period", "ray " + rid + ": period pieces need boundary=2, ends=0");
            if (seg.matrix.det() != -1)
                bad("orientation convention", "ray " + rid + ": determinant must be -1");
        }
    }
    for (const auto& [s, pid] : owner)
        if (!used.count(s))
            bad("dangling slot",
                "piece " + pid + " slot " + std::to_string(s) + " is glued to nothing");

    // connectivity over edges (rays only touch one piece)
    if (out.empty() && g.pieces.size() > 1) {
        std::map<std::string, std::vector<const std::string*>> adj;
        for (const auto& [eid, e] : g.edges) {
            const std::string& pa = owner.at(e.a);
            const std::string& pb = owner.at(e.b);
            adj[pa].push_back(&pb);
            adj[pb].push_back(&pa);
        }
        std::set<std::string> seen{g.pieces.begin()->first};
        std::deque<std::string> work{g.pieces.begin()->first};
        while (!work.empty()) {
            std::string cur = work.front();
            work.pop_front();
            for (const std::string* nb : adj[cur])
                if (seen.insert(*nb).second) work.push_back(*nb);
        }
        if (seen.size() != g.pieces.size())
            bad("disconnected", "graph structure must be connected");
    }
    return out;
}

T2xISubgraph dual_subgraph_t2xi(const GraphStructure& g) {
    T2xISubgraph h;
    std::set<std::string> in_h;
    for (const auto& [pid, p] : g.pieces) {
        auto* f = std::get_if<FiberedPiece>(&p.data);
        if (f && !banned_fibered_base(f->base) && !f->base.closed() &&
            classify_base(f->base) == ThinBaseKind::FiniteAnnulus) {
            h.vertices.push_back(pid);
            in_h.insert(pid);
        }
    }
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& [eid, e] : g.edges) {
        const std::string& pa = g.slot_owner(e.a);
        const std::string& pb = g.slot_owner(e.b);
        if (in_h.count(pa) && in_h.count(pb)) {
            h.edges.push_back(eid);
            adj[pa].push_back(pb);
            adj[pb].push_back(pa);
        }
    }
    std::set<std::string> seen;
    for (const auto& v : h.vertices) {
        if (seen.count(v)) continue;
        T2xISubgraph::Component comp;
        std::deque<std::string> work{v};
        seen.insert(v);
        while (!work.empty()) {
            std::string cur = work.front();
            work.pop_front();
            comp.pieces.push_back(cur);
            for (const auto& nb : adj[cur])
                if (!seen.count(nb)) { seen.insert(nb); work.push_back(nb); }
        }
        std::sort(comp.pieces.begin(), comp.pieces.end());
        // cycle iff every slot of every component piece stays inside the component
        bool cycle = true, ray_ext = false;
        for (const auto& pid : comp.pieces) {
            for (SlotId s : g.pieces.at(pid).slots) {
                auto u = g.slot_use(s);
                if (!u) continue;
                if (u->kind == SlotUse::RayAttach) {
                    cycle = false;
                    if (g.rays.at(u->id).all_t2xi()) ray_ext = true;
                } else {
                    const TorusEdge& e = g.edges.at(u->id);
                    SlotId other = (u->kind == SlotUse::EdgeEndA) ? e.b : e.a;
                    if (!in_h.count(g.slot_owner(other))) cycle = false;
                }
            }
        }
        comp.kind = cycle        ? ComponentKind::Cycle
                    : ray_ext    ? ComponentKind::RayExtending
                                 : ComponentKind::FinitePath;
        h.components.push_back(std::move(comp));
    }
    return h;
}

} // namespace gsr
