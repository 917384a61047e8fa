#include "gsr/seifert.hpp"

#include <stdexcept>

namespace gsr {

const char* to_string(ThinType t) {
    switch (t) {
    case ThinType::SolidTorus: return "SolidTorus";
    case ThinType::T2xI: return "T2xI";
    case ThinType::K2xI: return "K2xI";
    case ThinType::S1xR2: return "S1xR2";
    case ThinType::T2xR: return "T2xR";
    case ThinType::K2xR: return "K2xR";
    case ThinType::T2xRPlus: return "T2xRPlus";
    case ThinType::Thick: return "Thick";
    }
    return "?";
}

bool banned_fibered_base(const BaseOrbifold& o) {
    return o.orientable && o.genus == 0 && o.cone_orders.size() <= 1 &&
           o.boundary_count + o.end_count == 1;
}

bool k2xi_class_base(const BaseOrbifold& o) {
    if (o.boundary_count != 1 || o.end_count != 0) return false;
    if (!o.orientable)
        return o.genus == 1 && o.cone_orders.empty();
    return o.genus == 0 && o.cone_orders.size() == 2 && o.cone_orders[0] == 2 &&
           o.cone_orders[1] == 2;
}

ThinType thin_type_of_base(ThinBaseKind k) {
    switch (k) {
    case ThinBaseKind::DiskLeqOneCone: return ThinType::SolidTorus;
    case ThinBaseKind::PlaneLeqOneCone: return ThinType::S1xR2;
    case ThinBaseKind::DiskTwoCones2: return ThinType::K2xI;
    case ThinBaseKind::PlaneTwoCones2: return ThinType::K2xR;
    case ThinBaseKind::Moebius: return ThinType::K2xI;
    case ThinBaseKind::OpenMoebius: return ThinType::K2xR;
    case ThinBaseKind::FiniteAnnulus: return ThinType::T2xI;
    case ThinBaseKind::HalfInfiniteAnnulus: return ThinType::T2xRPlus;
    case ThinBaseKind::BiInfiniteAnnulus: return ThinType::T2xR;
    case ThinBaseKind::NotThin: return ThinType::Thick;
    }
    throw std::logic_error("thin_type_of_base: bad kind");
}

ThinType classify_piece(const PieceData& p) {
    if (std::holds_alternative<SolidTorusPiece>(p)) return ThinType::SolidTorus;
    if (std::holds_alternative<K2IPiece>(p)) return ThinType::K2xI;
    const auto& fp = std::get<FiberedPiece>(p);
    if (banned_fibered_base(fp.base))
        throw std::invalid_argument(
            "classify_piece: disk/plane with <= 1 cone point must be a solidtorus piece");
    return thin_type_of_base(classify_base(fp.base));
}

bool fibrations_match(const GluingMatrix& m, const Vec2& fiber_a, const Vec2& fiber_b) {
    Vec2 w = m.apply(fiber_a);
    return w == fiber_b || w == -fiber_b;
}

long long fiber_intersection(const GluingMatrix& m) {
    return m.b < 0 ? -m.b : m.b;
}

std::variant<FiberedPiece, NoExtension>
extend_over_solid_torus(const FiberedPiece& p, int slot, const SolidTorusPiece& v,
                        const GluingMatrix& piece_to_v) {
    if (!primitive(v.meridian))
        throw std::invalid_argument("extend_over_solid_torus: meridian not primitive");
    Vec2 m = piece_to_v.inverse().apply(v.meridian);
    long long alpha = m.s < 0 ? -m.s : m.s;
    if (alpha == 0) return NoExtension{};
    return FiberedPiece{cap_with_cone(p.base, slot, (int)alpha)};
}

FiberedPiece merge_across(const FiberedPiece& a, int slot_a,
                          const FiberedPiece& b, int slot_b, bool base_reversing) {
    return FiberedPiece{merge_bases(a.base, slot_a, b.base, slot_b, base_reversing)};
}

FiberedPiece merge_self(const FiberedPiece& p, int slot_a, int slot_b,
                        bool base_reversing) {
    return FiberedPiece{self_merge(p.base, slot_a, slot_b, base_reversing)};
}

} // namespace gsr
