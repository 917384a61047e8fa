#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gsr/seifert.hpp"

namespace gsr {

// Every boundary torus in a structure gets a globally unique slot id, owned by
// exactly one piece. Edges and rays reference slots, not boundary indices, so
// rewrites that move slots between pieces never have to touch the incident
// edges. A piece's boundary order is the order of its `slots` vector.
using SlotId = int;

struct Piece {
    std::string id;
    PieceData data;
    std::vector<SlotId> slots;

    const BaseOrbifold* base() const {
        auto* f = std::get_if<FiberedPiece>(&data);
        return f ? &f->base : nullptr;
    }
};

// Gluing torus. `matrix` rewrites (section, fiber) coordinates on the `a` side
// into coordinates on the `b` side; determinant -1. Endpoints may share a
// piece (loop edge) but never a slot.
struct TorusEdge {
    std::string id;
    SlotId a = -1;
    SlotId b = -1;
    GluingMatrix matrix;
    bool base_reversing = false;
};

// One repeating unit of a half-line: a two-boundary fibered piece plus the
// gluing onto whatever precedes it. The period's first matrix also glues the
// first copy onto the attachment slot.
struct RaySegment {
    BaseOrbifold base;
    GluingMatrix matrix;
};

// An infinite chain of pieces, eventually periodic: attach -> B1 -> B2 -> ...
// cycling through the period forever.
struct PeriodicRay {
    std::string id;
    SlotId attach = -1;
    std::vector<RaySegment> period;

    bool all_t2xi() const;
};

struct SlotUse {
    enum Kind { EdgeEndA, EdgeEndB, RayAttach } kind;
    std::string id;
};

class GraphStructure {
public:
    std::map<std::string, Piece> pieces;
    std::map<std::string, TorusEdge> edges;
    std::map<std::string, PeriodicRay> rays;

    // --- slot bookkeeping -------------------------------------------------
    // Structural edits must go through these so the slot index stays coherent.

    SlotId make_slot(const std::string& piece_id);           // appends to the piece
    void drop_slot(SlotId s);                                 // slot must be unused
    void move_slot(SlotId s, const std::string& to_piece_id); // keeps uses intact

    void add_piece(Piece p); // slots vector must be empty; use make_slot after
    void remove_piece(const std::string& id); // all slots must be dropped/moved first

    void add_edge(TorusEdge e);
    void remove_edge(const std::string& id);
    void add_ray(PeriodicRay r);
    void remove_ray(const std::string& id);

    const std::string& slot_owner(SlotId s) const;
    std::optional<SlotUse> slot_use(SlotId s) const;
    int slot_index(SlotId s) const; // position in the owner's boundary order

    std::string fresh_id(const std::string& prefix);

    // Rebuild owner/use maps from the public containers (used after bulk
    // construction, e.g. by the parser).
    void reindex();

private:
    std::map<SlotId, std::string> owner_;
    std::map<SlotId, SlotUse> use_;
    SlotId next_slot_ = 0;
    long long fresh_counter_ = 0;
};

struct Violation {
    std::string code;
    std::string detail;
};

// Full structural check: slot coverage (every slot used by exactly one edge
// end or ray attachment), determinant convention, base invariants, the
// disk/plane encoding ban, ray well-formedness, connectivity.
// Returns an empty list when the structure is valid; never throws.
std::vector<Violation> validate(const GraphStructure& g);

// Total end count: base ends plus rays.
int total_ends(const GraphStructure& g);

enum class ComponentKind { FinitePath, Cycle, RayExtending };

struct T2xISubgraph {
    std::vector<std::string> vertices; // T^2 x I piece ids
    std::vector<std::string> edges;    // edges with both ends on those pieces
    struct Component {
        std::vector<std::string> pieces;
        ComponentKind kind;
    };
    std::vector<Component> components;
};

// The subgraph H of the dual graph spanned by T^2 x I pieces. A component is
// RayExtending when one of its free slots holds an all-T^2xI ray.
T2xISubgraph dual_subgraph_t2xi(const GraphStructure& g);

// Classification helper: the thin type of a piece in graph context.
ThinType piece_type(const Piece& p);

} // namespace gsr
