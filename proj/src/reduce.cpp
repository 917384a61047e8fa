#include "gsr/reduce.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace gsr {

const char* to_string(MoveKind k) {
    switch (k) {
    case MoveKind::AbsorbSolidTorus: return "AbsorbSolidTorus";
    case MoveKind::MergeT2xIChain: return "MergeT2xIChain";
    case MoveKind::CollapseRay: return "CollapseRay";
    case MoveKind::ResolveK2xI: return "ResolveK2xI";
    case MoveKind::MergeMatchingTorus: return "MergeMatchingTorus";
    }
    return "?";
}

const char* to_string(DiagnosisKind k) {
    switch (k) {
    case DiagnosisKind::ExhaustionBySolidTori: return "ExhaustionBySolidTori";
    case DiagnosisKind::PlainR3Like: return "PlainR3Like";
    case DiagnosisKind::S1xR2Like: return "S1xR2Like";
    case DiagnosisKind::ClosedSeifert: return "ClosedSeifert";
    case DiagnosisKind::ClosedNonSeifert: return "ClosedNonSeifert";
    case DiagnosisKind::ReducibleWitness: return "ReducibleWitness";
    case DiagnosisKind::UnderdeterminedSolidTorus: return "UnderdeterminedSolidTorus";
    }
    return "?";
}

namespace {

// ---------------------------------------------------------------------------
// policy ordering

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t policy_key(const ReducePolicy& p, const std::string& id) {
    if (p.seed == 0) return 0; // fall through to id order
    std::uint64_t h = p.seed;
    for (char c : id) h = splitmix64(h ^ (unsigned char)c);
    return h;
}

std::vector<std::string> policy_order(const ReducePolicy& p, std::vector<std::string> ids) {
    std::sort(ids.begin(), ids.end(), [&](const std::string& x, const std::string& y) {
        auto kx = policy_key(p, x), ky = policy_key(p, y);
        return kx != ky ? kx < ky : x < y;
    });
    return ids;
}

// ---------------------------------------------------------------------------
// small graph helpers

// Matrix of edge e read from the `from` slot's side towards the other side,
// plus the slot on the other side.
struct OrientedEdge {
    GluingMatrix m;
    SlotId other;
};

OrientedEdge oriented(const TorusEdge& e, SlotId from) {
    if (e.a == from) return {e.matrix, e.b};
    if (e.b == from) return {e.matrix.inverse(), e.a};
    throw std::logic_error("oriented: slot not on edge");
}

ThinType fibered_type(const FiberedPiece& f) {
    return thin_type_of_base(classify_base(f.base));
}

bool is_t2xi(const Piece& p) {
    const BaseOrbifold* b = p.base();
    return b && !b->closed() && !banned_fibered_base(*b) &&
           classify_base(*b) == ThinBaseKind::FiniteAnnulus;
}

bool is_thick(const Piece& p) {
    const BaseOrbifold* b = p.base();
    return b && !b->closed() && !banned_fibered_base(*b) &&
           classify_base(*b) == ThinBaseKind::NotThin;
}

void post_move_check(const GraphStructure& g, const ReduceOptions& opts) {
    if (!opts.validate_each_move) return;
    auto v = validate(g);
    if (!v.empty())
        throw std::logic_error("move broke structural validity: " + v.front().code +
                               ": " + v.front().detail);
}

BaseOrbifold moebius_base() { return {false, 1, 1, 0, {}}; }
BaseOrbifold disk22_base() { return {true, 0, 1, 0, {2, 2}}; }

// Pop the first period segment of a ray into the core as an ordinary piece
// and rotate the period. The infinite object is unchanged.
std::string unroll_ray_head(GraphStructure& g, const std::string& ray_id) {
    PeriodicRay r = g.rays.at(ray_id);
    RaySegment head = r.period.front();
    g.remove_ray(ray_id);

    std::string pid = g.fresh_id("u");
    g.add_piece({pid, FiberedPiece{head.base}, {}});
    SlotId s0 = g.make_slot(pid);
    SlotId s1 = g.make_slot(pid);
    g.add_edge({g.fresh_id("e"), r.attach, s0, head.matrix, false});

    std::rotate(r.period.begin(), r.period.begin() + 1, r.period.end());
    r.attach = s1;
    g.add_ray(std::move(r));
    return pid;
}

// ---------------------------------------------------------------------------
// diagnoses

Diagnosis diagnose_two_solid_tori(const GraphStructure& g, const std::string& v1,
                                  const std::string& v2, const TorusEdge& e) {
    const auto& t1 = std::get<SolidTorusPiece>(g.pieces.at(v1).data);
    const auto& t2 = std::get<SolidTorusPiece>(g.pieces.at(v2).data);
    SlotId s1 = g.pieces.at(v1).slots[0];
    Vec2 m2_at_1 = oriented(e, s1).m.inverse().apply(t2.meridian);
    long long w = wedge(t1.meridian, m2_at_1);
    if (w == 0)
        return {DiagnosisKind::ReducibleWitness,
                {v1, v2, e.id},
                "two solid tori glued with matching meridians: the meridian disks close "
                "up to a nonseparating sphere (S^2 x S^1 pattern)"};
    return {DiagnosisKind::ClosedSeifert,
            {v1, v2, e.id},
            "two solid tori glued along their boundaries form a closed lens-space "
            "pattern; the manifold is closed, not open"};
}

Diagnosis diagnose_closed(const GraphStructure& g) {
    if (g.pieces.size() == 1)
        return {DiagnosisKind::ClosedSeifert,
                {g.pieces.begin()->first},
                "single closed Seifert piece: the manifold is closed, not open"};
    if (g.pieces.size() == 2) {
        auto it = g.pieces.begin();
        const Piece& p1 = it->second;
        const Piece& p2 = std::next(it)->second;
        bool solid1 = std::holds_alternative<SolidTorusPiece>(p1.data);
        bool solid2 = std::holds_alternative<SolidTorusPiece>(p2.data);
        if (solid1 && solid2)
            return diagnose_two_solid_tori(g, p1.id, p2.id, g.edges.begin()->second);
        if ((solid1 && std::holds_alternative<K2IPiece>(p2.data)) ||
            (solid2 && std::holds_alternative<K2IPiece>(p1.data)))
            return {DiagnosisKind::ClosedSeifert,
                    {p1.id, p2.id},
                    "K^2 x~ I filled by a solid torus: one of its two fibrations "
                    "always extends, so the manifold is a closed Seifert manifold"};
    }
    bool all_tubes = true;
    for (const auto& [pid, p] : g.pieces)
        if (!is_t2xi(p)) { all_tubes = false; break; }
    if (all_tubes)
        return {DiagnosisKind::ClosedNonSeifert,
                {},
                "cycle of T^2 x I pieces: a closed torus bundle, not an open manifold"};
    return {DiagnosisKind::ClosedNonSeifert,
            {},
            "structure has no ends and no boundary: the manifold is closed, not open"};
}

// The endgame of compressible-torus removal: the fiber of P bounds a meridian
// disk of V and cannot be absorbed. Reports which hypothesis breaks.
Diagnosis diagnose_alpha_zero(const GraphStructure& g, const std::string& vid,
                              const std::string& pid, const std::string& eid) {
    const Piece& p = g.pieces.at(pid);
    const BaseOrbifold& o = *p.base();
    std::vector<std::string> wit{vid, pid, eid};

    if (!o.orientable || o.genus > 0)
        return {DiagnosisKind::ReducibleWitness, wit,
                "fiber bounds a meridian disk and the base is nonplanar: a vertical "
                "annulus over a nonseparating arc caps off to a nonseparating sphere"};

    for (SlotId s : p.slots) {
        auto u = g.slot_use(s);
        if (!u || u->kind == SlotUse::RayAttach) continue;
        const TorusEdge& e = g.edges.at(u->id);
        if (e.id == eid) continue;
        const Piece& q = g.pieces.at(g.slot_owner(oriented(e, s).other));
        if (std::holds_alternative<SolidTorusPiece>(q.data))
            return {DiagnosisKind::ReducibleWitness, wit,
                    "fiber bounds meridian disks of two adjacent solid tori: an arc "
                    "between them caps off to a nonseparating sphere"};
    }

    int other_boundary = (int)p.slots.size() - 1;
    if (o.end_count >= 2)
        return {DiagnosisKind::ReducibleWitness, wit,
                "fiber bounds a meridian disk and the base has two ends: the sphere "
                "over an admissible arc separates ends, so it bounds no ball"};
    if (o.end_count == 1) {
        if (other_boundary > 0)
            return {DiagnosisKind::ReducibleWitness, wit,
                    "fiber bounds a meridian disk on a one-ended base with extra "
                    "boundary: the sphere over an admissible arc bounds no ball"};
        if (!o.cone_orders.empty())
            return {DiagnosisKind::ReducibleWitness, wit,
                    "fiber bounds a meridian disk and a singular fiber is trapped in "
                    "a ball (van Kampen contradiction): input is not irreducible"};
        return {DiagnosisKind::S1xR2Like, wit,
                "solid torus capped onto a cone-free planar one-ended piece: the "
                "manifold is S^1 x R^2"};
    }
    if (other_boundary >= 2)
        return {DiagnosisKind::ReducibleWitness, wit,
                "fiber bounds a meridian disk on a compact planar base with two "
                "incompressible boundary components: essential sphere found"};
    if (other_boundary == 1 && !o.cone_orders.empty())
        return {DiagnosisKind::ReducibleWitness, wit,
                "fiber bounds a meridian disk with a singular fiber trapped in a "
                "ball (van Kampen contradiction): input is not irreducible"};
    return {DiagnosisKind::ClosedNonSeifert, wit,
            "fiber-killing filling closes the structure up: the manifold is closed"};
}

} // namespace

Rational chi_ledger(const GraphStructure& g) {
    Rational sum(0);
    for (const auto& [pid, p] : g.pieces)
        if (const BaseOrbifold* b = p.base()) sum += euler_char_compactified(*b);
    return sum;
}

// ---------------------------------------------------------------------------
// stage A

StageResult stage_a_absorb_solid_tori(GraphStructure& g, std::vector<Move>& trace,
                                      const ReduceOptions& opts) {
    StageResult res;
    for (;;) {
        std::vector<std::string> solids;
        for (const auto& [pid, p] : g.pieces)
            if (std::holds_alternative<SolidTorusPiece>(p.data)) solids.push_back(pid);
        if (solids.empty()) return res;

        for (const std::string& vid : policy_order(opts.policy, std::move(solids))) {
            auto vit = g.pieces.find(vid);
            if (vit == g.pieces.end()) continue; // consumed earlier this sweep
            const SolidTorusPiece v = std::get<SolidTorusPiece>(vit->second.data);
            SlotId vslot = vit->second.slots[0];
            auto use = g.slot_use(vslot);
            if (!use) throw std::logic_error("stage A: dangling solid torus slot");

            if (use->kind == SlotUse::RayAttach) {
                const PeriodicRay& r = g.rays.at(use->id);
                if (r.all_t2xi()) {
                    res.diagnosis = Diagnosis{
                        DiagnosisKind::ExhaustionBySolidTori,
                        {vid, r.id},
                        "a solid torus capped by an infinite T^2 x I tail: the manifold "
                        "is an increasing union of solid tori (S^1 x R^2 or a fake one)"};
                    return res;
                }
                unroll_ray_head(g, use->id);
                res.changed = true;
                continue;
            }

            const TorusEdge e = g.edges.at(use->id);
            OrientedEdge from_v = oriented(e, vslot);
            const std::string pid = g.slot_owner(from_v.other);
            const Piece& p = g.pieces.at(pid);

            if (std::holds_alternative<SolidTorusPiece>(p.data)) {
                res.diagnosis = diagnose_two_solid_tori(g, vid, pid, e);
                return res;
            }
            if (std::holds_alternative<K2IPiece>(p.data)) {
                res.diagnosis = Diagnosis{
                    DiagnosisKind::ClosedSeifert,
                    {vid, pid, e.id},
                    "K^2 x~ I filled by a solid torus: the manifold is closed"};
                return res;
            }

            const FiberedPiece f = std::get<FiberedPiece>(p.data);
            ThinType t = fibered_type(f);
            if (t == ThinType::T2xI) {
                // V u (T^2 x I) is again a solid torus; push the meridian through.
                Vec2 mu = t2xi_transit().apply(from_v.m.apply(v.meridian));
                SlotId far = p.slots[0] == from_v.other ? p.slots[1] : p.slots[0];
                std::string nid = g.fresh_id("v");
                g.remove_edge(e.id);
                g.add_piece({nid, SolidTorusPiece{mu}, {}});
                g.move_slot(far, nid);
                g.drop_slot(from_v.other);
                g.drop_slot(vslot);
                g.remove_piece(vid);
                g.remove_piece(pid);
                trace.push_back({MoveKind::MergeT2xIChain, {vid, pid, e.id}, {nid}, 0});
                post_move_check(g, opts);
                res.changed = true;
                continue;
            }
            if (t == ThinType::T2xRPlus) {
                res.diagnosis = Diagnosis{
                    DiagnosisKind::S1xR2Like,
                    {vid, pid, e.id},
                    "solid torus glued to a T^2 x [0,inf) piece: the manifold is an "
                    "open solid torus, S^1 x R^2"};
                return res;
            }
            if (t == ThinType::K2xI) {
                res.diagnosis = Diagnosis{
                    DiagnosisKind::ClosedSeifert,
                    {vid, pid, e.id},
                    "K^2 x~ I filled by a solid torus: the manifold is closed"};
                return res;
            }

            // Thick neighbor: try to extend the fibration over V. The meridian
            // pulled back to P's basis is the inverse of the P->V matrix applied
            // to it, i.e. the V->P matrix we already hold.
            Vec2 mu = from_v.m.apply(v.meridian);
            long long alpha = mu.s < 0 ? -mu.s : mu.s;
            if (alpha == 0) {
                res.diagnosis = diagnose_alpha_zero(g, vid, pid, e.id);
                return res;
            }
            BaseOrbifold capped =
                cap_with_cone(f.base, g.slot_index(from_v.other), (int)alpha);
            if (banned_fibered_base(capped)) {
                if (capped.boundary_count == 0) {
                    res.diagnosis = Diagnosis{
                        DiagnosisKind::S1xR2Like,
                        {vid, pid, e.id},
                        "absorption flattens the structure onto a Seifert fibration over "
                        "a plane with at most one cone point: the manifold is S^1 x R^2"};
                } else {
                    res.diagnosis = Diagnosis{
                        DiagnosisKind::UnderdeterminedSolidTorus,
                        {vid, pid, e.id},
                        "absorbing this solid torus flattens the piece to a disk with at "
                        "most one cone point; the meridian of the combined solid torus is "
                        "not determined by the stored data. Re-encode the region as an "
                        "explicit solidtorus record"};
                }
                return res;
            }
            g.remove_edge(e.id);
            g.drop_slot(from_v.other);
            g.drop_slot(vslot);
            g.remove_piece(vid);
            std::get<FiberedPiece>(g.pieces.at(pid).data).base = std::move(capped);
            trace.push_back({MoveKind::AbsorbSolidTorus, {vid, pid, e.id}, {pid}, alpha});
            post_move_check(g, opts);
            res.changed = true;
        }
    }
}

// ---------------------------------------------------------------------------
// stage B

namespace {

struct ChainEnd {
    bool is_ray = false;
    std::string id;    // edge id or ray id
    SlotId chain_slot; // slot on the chain piece holding the attachment
};

// Walk a path component of H from one free end to the other.
struct ChainWalk {
    std::vector<std::string> pieces;
    std::vector<std::string> inner_edges;
    ChainEnd front, back;
};

} // namespace

StageResult stage_b_collapse_t2xi(GraphStructure& g, std::vector<Move>& trace,
                                  const ReduceOptions& opts) {
    StageResult res;
    for (;;) {
        bool progressed = false;
        T2xISubgraph h = dual_subgraph_t2xi(g);
        if (h.vertices.empty()) return res;

        std::set<std::string> in_h(h.vertices.begin(), h.vertices.end());
        std::vector<std::string> firsts;
        std::map<std::string, const T2xISubgraph::Component*> by_first;
        for (const auto& comp : h.components) {
            firsts.push_back(comp.pieces.front());
            by_first[comp.pieces.front()] = &comp;
        }

        for (const std::string& first : policy_order(opts.policy, std::move(firsts))) {
            const auto& comp = *by_first.at(first);
            if (comp.kind == ComponentKind::Cycle) {
                res.diagnosis = Diagnosis{
                    DiagnosisKind::ClosedNonSeifert, comp.pieces,
                    "cycle of T^2 x I pieces: a closed torus bundle, not an open manifold"};
                return res;
            }

            // locate the free attachments of the component
            std::vector<ChainEnd> ends;
            bool has_general_ray = false;
            std::string general_ray_id;
            for (const auto& pid : comp.pieces) {
                for (SlotId s : g.pieces.at(pid).slots) {
                    auto u = g.slot_use(s);
                    if (!u) continue;
                    if (u->kind == SlotUse::RayAttach) {
                        ends.push_back({true, u->id, s});
                        if (!g.rays.at(u->id).all_t2xi()) {
                            has_general_ray = true;
                            general_ray_id = u->id;
                        }
                    } else {
                        const TorusEdge& e = g.edges.at(u->id);
                        SlotId other = (u->kind == SlotUse::EdgeEndA) ? e.b : e.a;
                        if (!in_h.count(g.slot_owner(other)))
                            ends.push_back({false, u->id, s});
                    }
                }
            }
            if (has_general_ray) {
                // expose a head piece of the eventually-periodic tail so the
                // chain gets an honest anchor, then rescan
                unroll_ray_head(g, general_ray_id);
                progressed = true;
                res.changed = true;
                break;
            }
            if (ends.size() != 2)
                throw std::logic_error("stage B: path component without two free ends");

            int ray_ends = (ends[0].is_ray ? 1 : 0) + (ends[1].is_ray ? 1 : 0);
            if (ray_ends == 2) {
                std::vector<std::string> wit = comp.pieces;
                wit.push_back(ends[0].id);
                wit.push_back(ends[1].id);
                res.diagnosis = Diagnosis{
                    DiagnosisKind::ClosedSeifert, wit,
                    "bi-infinite chain of T^2 x I pieces: the manifold is T^2 x R, a "
                    "single Seifert manifold; the graph structure is degenerate"};
                return res;
            }
            if (ray_ends == 1) continue; // ray-extending: stage C absorbs it

            // both ends anchored by edges: collapse the chain into one gluing
            const TorusEdge e_front = g.edges.at(ends[0].id);
            SlotId anchor_a = oriented(e_front, ends[0].chain_slot).other;
            GluingMatrix m_total = oriented(e_front, anchor_a).m;

            std::vector<std::string> chain_pieces, chain_edges{e_front.id};
            SlotId at = ends[0].chain_slot;
            for (;;) {
                const std::string& pid = g.slot_owner(at);
                chain_pieces.push_back(pid);
                const Piece& p = g.pieces.at(pid);
                SlotId out = p.slots[0] == at ? p.slots[1] : p.slots[0];
                m_total = t2xi_transit() * m_total;
                auto u = g.slot_use(out);
                const TorusEdge& e = g.edges.at(u->id);
                OrientedEdge oe = oriented(e, out);
                m_total = oe.m * m_total;
                chain_edges.push_back(e.id);
                if (!in_h.count(g.slot_owner(oe.other))) {
                    // reached the far anchor
                    bool rev = false;
                    for (const auto& eid : chain_edges)
                        rev ^= g.edges.at(eid).base_reversing;
                    SlotId anchor_b = oe.other;
                    std::string nid = g.fresh_id("e");
                    std::vector<std::string> affected = chain_pieces;
                    affected.insert(affected.end(), chain_edges.begin(), chain_edges.end());
                    for (const auto& eid : chain_edges) g.remove_edge(eid);
                    for (const auto& cp : chain_pieces) {
                        for (SlotId s : std::vector<SlotId>(g.pieces.at(cp).slots))
                            g.drop_slot(s);
                        g.remove_piece(cp);
                    }
                    g.add_edge({nid, anchor_a, anchor_b, m_total, rev});
                    trace.push_back({MoveKind::MergeT2xIChain, affected, {nid}, 0});
                    post_move_check(g, opts);
                    break;
                }
                at = oe.other;
            }
            progressed = true;
            res.changed = true;
            break; // H is stale; rescan
        }
        if (!progressed) return res;
    }
}

// ---------------------------------------------------------------------------
// stage C

StageResult stage_c_collapse_rays(GraphStructure& g, std::vector<Move>& trace,
                                  const ReduceOptions& opts) {
    StageResult res;
    for (;;) {
        bool progressed = false;

        std::vector<std::string> ray_ids;
        for (const auto& [rid, r] : g.rays)
            if (r.all_t2xi()) ray_ids.push_back(rid);
        for (const std::string& rid : policy_order(opts.policy, std::move(ray_ids))) {
            if (!g.rays.count(rid)) continue;
            const PeriodicRay& r = g.rays.at(rid);
            SlotId s = r.attach;
            const std::string pid = g.slot_owner(s);
            Piece& p = g.pieces.at(pid);
            if (auto* f = std::get_if<FiberedPiece>(&p.data)) {
                BaseOrbifold nb = boundary_to_end(f->base, g.slot_index(s));
                g.remove_ray(rid);
                g.drop_slot(s);
                f->base = std::move(nb);
            } else if (std::holds_alternative<K2IPiece>(p.data)) {
                // K^2 x~ I with an infinite tail is the open manifold K^2 x~ R
                g.remove_ray(rid);
                g.drop_slot(s);
                p.data = FiberedPiece{BaseOrbifold{false, 1, 0, 1, {}}};
            } else {
                continue; // solid torus: stage A owns this configuration
            }
            trace.push_back({MoveKind::CollapseRay, {rid, pid}, {pid}, 0});
            post_move_check(g, opts);
            progressed = true;
            res.changed = true;
        }

        std::vector<std::string> plus_ids;
        for (const auto& [pid, p] : g.pieces) {
            const BaseOrbifold* b = p.base();
            if (b && !b->closed() && !banned_fibered_base(*b) &&
                classify_base(*b) == ThinBaseKind::HalfInfiniteAnnulus)
                plus_ids.push_back(pid);
        }
        for (const std::string& pid : policy_order(opts.policy, std::move(plus_ids))) {
            if (!g.pieces.count(pid)) continue;
            const Piece& p = g.pieces.at(pid);
            const BaseOrbifold* pb = p.base();
            if (!pb || pb->closed() || banned_fibered_base(*pb) ||
                classify_base(*pb) != ThinBaseKind::HalfInfiniteAnnulus)
                continue; // absorbed something since the sweep started
            SlotId s = p.slots[0];
            auto u = g.slot_use(s);
            if (!u) continue;
            if (u->kind == SlotUse::RayAttach) {
                // an eventually periodic tail with thick segments: expose its
                // head so the piece gets an honest edge neighbor
                unroll_ray_head(g, u->id);
                progressed = true;
                res.changed = true;
                continue;
            }
            const TorusEdge e = g.edges.at(u->id);
            SlotId other = oriented(e, s).other;
            const std::string qid = g.slot_owner(other);
            Piece& q = g.pieces.at(qid);
            if (auto* f = std::get_if<FiberedPiece>(&q.data)) {
                BaseOrbifold nb = boundary_to_end(f->base, g.slot_index(other));
                g.remove_edge(e.id);
                g.drop_slot(other);
                g.drop_slot(s);
                g.remove_piece(pid);
                f->base = std::move(nb);
            } else if (std::holds_alternative<K2IPiece>(q.data)) {
                g.remove_edge(e.id);
                g.drop_slot(other);
                g.drop_slot(s);
                g.remove_piece(pid);
                q.data = FiberedPiece{BaseOrbifold{false, 1, 0, 1, {}}};
            } else {
                continue; // solid torus neighbor: stage A diagnoses
            }
            trace.push_back({MoveKind::CollapseRay, {pid, e.id, qid}, {qid}, 0});
            post_move_check(g, opts);
            progressed = true;
            res.changed = true;
        }

        if (!progressed) return res;
    }
}

// ---------------------------------------------------------------------------
// stage D

StageResult stage_d_resolve_k2xi(GraphStructure& g, std::vector<Move>& trace,
                                 const ReduceOptions& opts) {
    StageResult res;
    std::vector<std::string> xs;
    for (const auto& [pid, p] : g.pieces) {
        if (std::holds_alternative<K2IPiece>(p.data)) xs.push_back(pid);
        else if (const BaseOrbifold* b = p.base(); b && k2xi_class_base(*b))
            xs.push_back(pid);
    }
    for (const std::string& xid : policy_order(opts.policy, std::move(xs))) {
        if (!g.pieces.count(xid)) continue;
        const Piece& x = g.pieces.at(xid);
        SlotId s = x.slots[0];
        auto u = g.slot_use(s);
        if (!u || u->kind == SlotUse::RayAttach) continue; // general ray stays
        const TorusEdge e = g.edges.at(u->id);
        OrientedEdge toward_y = oriented(e, s);
        const std::string yid = g.slot_owner(toward_y.other);
        if (yid == xid) throw std::logic_error("stage D: loop on a one-slot piece");
        Piece& y = g.pieces.at(yid);
        auto* yf = std::get_if<FiberedPiece>(&y.data);
        if (!yf || fibered_type(*yf) != ThinType::Thick)
            throw std::logic_error("stage D: K^2 x~ I neighbor is not thick");

        const bool explicit_k2i = std::holds_alternative<K2IPiece>(x.data);
        BaseOrbifold x_base;
        bool merge = false;
        if (fibrations_match(toward_y.m, {0, 1})) {
            // fiber of the piece's own (F1) fibration matches Y's fiber
            x_base = explicit_k2i ? moebius_base() : *x.base();
            merge = true;
        } else if (explicit_k2i && fibrations_match(toward_y.m, {1, 0})) {
            // the disk{2,2} fibration matches instead
            x_base = disk22_base();
            merge = true;
        }
        if (!merge) continue; // kept edge; the piece keeps its F1 convention

        BaseOrbifold nb = merge_bases(yf->base, g.slot_index(toward_y.other), x_base, 0,
                                      e.base_reversing);
        g.remove_edge(e.id);
        g.drop_slot(toward_y.other);
        g.drop_slot(s);
        g.remove_piece(xid);
        yf->base = std::move(nb);
        trace.push_back({MoveKind::ResolveK2xI, {xid, e.id, yid}, {yid}, 0});
        post_move_check(g, opts);
        res.changed = true;
    }
    return res;
}

// ---------------------------------------------------------------------------
// stage E

StageResult stage_e_merge_matching(GraphStructure& g, std::vector<Move>& trace,
                                   const ReduceOptions& opts) {
    StageResult res;
    for (;;) {
        std::vector<std::string> candidates;
        for (const auto& [eid, e] : g.edges) {
            if (fiber_intersection(e.matrix) != 0) continue;
            if (is_thick(g.pieces.at(g.slot_owner(e.a))) &&
                is_thick(g.pieces.at(g.slot_owner(e.b))))
                candidates.push_back(eid);
        }
        if (candidates.empty()) return res;
        const std::string eid = policy_order(opts.policy, std::move(candidates)).front();
        const TorusEdge e = g.edges.at(eid);
        const std::string pid = g.slot_owner(e.a);
        const std::string qid = g.slot_owner(e.b);

        if (pid == qid) {
            Piece& p = g.pieces.at(pid);
            auto& f = std::get<FiberedPiece>(p.data);
            BaseOrbifold nb = self_merge(f.base, g.slot_index(e.a), g.slot_index(e.b),
                                         e.base_reversing);
            g.remove_edge(eid);
            g.drop_slot(e.a);
            g.drop_slot(e.b);
            f.base = std::move(nb);
            trace.push_back({MoveKind::MergeMatchingTorus, {eid, pid}, {pid}, 0});
        } else {
            const auto& fp = std::get<FiberedPiece>(g.pieces.at(pid).data);
            const auto& fq = std::get<FiberedPiece>(g.pieces.at(qid).data);
            BaseOrbifold nb = merge_bases(fp.base, g.slot_index(e.a), fq.base,
                                          g.slot_index(e.b), e.base_reversing);
            g.remove_edge(eid);
            g.drop_slot(e.a);
            g.drop_slot(e.b);
            std::string nid = g.fresh_id("m");
            g.add_piece({nid, FiberedPiece{std::move(nb)}, {}});
            for (SlotId s : std::vector<SlotId>(g.pieces.at(pid).slots)) g.move_slot(s, nid);
            for (SlotId s : std::vector<SlotId>(g.pieces.at(qid).slots)) g.move_slot(s, nid);
            g.remove_piece(pid);
            g.remove_piece(qid);
            trace.push_back({MoveKind::MergeMatchingTorus, {eid, pid, qid}, {nid}, 0});
        }
        post_move_check(g, opts);
        res.changed = true;
    }
}

// ---------------------------------------------------------------------------
// reducedness and the pipeline

bool is_reduced(const GraphStructure& g) {
    for (const auto& [pid, p] : g.pieces) {
        if (std::holds_alternative<SolidTorusPiece>(p.data)) return false;
        if (std::holds_alternative<K2IPiece>(p.data)) {
            auto u = g.slot_use(p.slots[0]);
            if (u && u->kind != SlotUse::RayAttach) {
                OrientedEdge oe = oriented(g.edges.at(u->id), p.slots[0]);
                if (fibrations_match(oe.m, {0, 1}) || fibrations_match(oe.m, {1, 0}))
                    return false;
            }
            continue;
        }
        const BaseOrbifold& b = *p.base();
        if (b.closed()) continue;
        ThinBaseKind k = classify_base(b);
        ThinType t = thin_type_of_base(k);
        if (t == ThinType::T2xI || t == ThinType::T2xRPlus) return false;
        if (k2xi_class_base(b)) {
            auto u = g.slot_use(p.slots[0]);
            if (u && u->kind != SlotUse::RayAttach) {
                OrientedEdge oe = oriented(g.edges.at(u->id), p.slots[0]);
                if (fibrations_match(oe.m, {0, 1})) return false;
            }
        }
    }
    for (const auto& [rid, r] : g.rays)
        if (r.all_t2xi()) return false;
    for (const auto& [eid, e] : g.edges) {
        if (fiber_intersection(e.matrix) != 0) continue;
        if (is_thick(g.pieces.at(g.slot_owner(e.a))) &&
            is_thick(g.pieces.at(g.slot_owner(e.b))))
            return false;
    }
    return true;
}

ReductionOutcome reduce(const GraphStructure& input, const ReduceOptions& opts) {
    {
        auto v = validate(input);
        if (!v.empty())
            throw std::invalid_argument("reduce: invalid input: " + v.front().code +
                                        ": " + v.front().detail);
    }
    GraphStructure g = input;
    g.reindex();
    std::vector<Move> trace;

    if (total_ends(g) == 0) return diagnose_closed(g);

    std::size_t period_total = 0;
    for (const auto& [rid, r] : g.rays) period_total += r.period.size();
    const std::size_t limit =
        4 * (g.pieces.size() + g.edges.size() + g.rays.size() + period_total) + 64;

    using Stage = StageResult (*)(GraphStructure&, std::vector<Move>&,
                                  const ReduceOptions&);
    static constexpr Stage stages[] = {
        stage_a_absorb_solid_tori, stage_b_collapse_t2xi, stage_c_collapse_rays,
        stage_d_resolve_k2xi, stage_e_merge_matching};

    for (std::size_t iter = 0;; ++iter) {
        if (iter > limit) throw std::logic_error("reduce: pipeline did not stabilize");
        bool changed = false;
        for (Stage s : stages) {
            StageResult r = s(g, trace, opts);
            if (r.diagnosis) return *r.diagnosis;
            changed |= r.changed;
        }
        if (!changed) break;
    }
    if (!is_reduced(g))
        throw std::logic_error("reduce: fixpoint is not reduced");
    return Reduced{std::move(g), std::move(trace)};
}

} // namespace gsr
