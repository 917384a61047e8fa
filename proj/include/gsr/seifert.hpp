#pragma once

#include <optional>
#include <variant>

#include "gsr/gluing.hpp"
#include "gsr/orbifold.hpp"

namespace gsr {

// A Seifert-fibered piece over its base orbifold. On every boundary torus the
// coordinates are (section, fiber) with the fiber class equal to (0, 1);
// sections are induced by one global section of the piece, with all Seifert
// beta-invariants normalized into the boundary data. Bases that are a disk or
// a plane with at most one cone point are not allowed here: such a piece is a
// solid torus and its meridian slope is not determined by the base, so it has
// to be encoded as SolidTorusPiece.
struct FiberedPiece {
    BaseOrbifold base;
};

// An explicit solid torus. The meridian is a primitive class in the piece's
// own boundary (section, fiber)-style basis. Exactly one boundary slot.
struct SolidTorusPiece {
    Vec2 meridian;
};

// The twisted I-bundle over the Klein bottle, which carries exactly two
// Seifert fibrations. In the piece's boundary basis, fibration F1 (over the
// Moebius band) has fiber class (0, 1) and fibration F2 (over the disk with
// two cone points of order 2) has fiber class (1, 0); the two classes meet
// once. Exactly one boundary slot.
struct K2IPiece {};

using PieceData = std::variant<FiberedPiece, SolidTorusPiece, K2IPiece>;

enum class ThinType { SolidTorus, T2xI, K2xI, S1xR2, T2xR, K2xR, T2xRPlus, Thick };

const char* to_string(ThinType t);

// True for a disk or plane with at most one cone point: banned as the base of
// a FiberedPiece (ambiguous solid torus encoding).
bool banned_fibered_base(const BaseOrbifold& o);

// True for the two K^2 x~ I bases a fibered piece may legitimately carry:
// the Moebius band without cones and the disk with cones {2,2}.
bool k2xi_class_base(const BaseOrbifold& o);

ThinType thin_type_of_base(ThinBaseKind k);

// Throws std::invalid_argument on a FiberedPiece with a banned or closed base.
ThinType classify_piece(const PieceData& p);

// True iff m sends fiber_a to +-fiber_b. With the default fiber convention
// (0,1) on both sides this is just m.b == 0.
bool fibrations_match(const GluingMatrix& m, const Vec2& fiber_a = {0, 1},
                      const Vec2& fiber_b = {0, 1});

// Geometric intersection number of the two fiber classes on the gluing torus:
// |m * (0,1) ∧ (0,1)| = |m.b|. Zero exactly when the fibrations match.
long long fiber_intersection(const GluingMatrix& m);

struct NoExtension {};

// Fill boundary `slot` of the piece with solid torus v, glued by `piece_to_v`
// mapping the piece's (section, fiber) coordinates at that slot to v's basis.
// The meridian pulled back to the piece reads (m_s, m_f); alpha = |m_s| is
// the multiplicity of the new exceptional fiber. alpha = 0 means the fiber
// bounds a meridian disk and the fibration does not extend.
std::variant<FiberedPiece, NoExtension>
extend_over_solid_torus(const FiberedPiece& p, int slot, const SolidTorusPiece& v,
                        const GluingMatrix& piece_to_v);

// Remove a gluing torus with matching fibrations between two distinct pieces.
FiberedPiece merge_across(const FiberedPiece& a, int slot_a,
                          const FiberedPiece& b, int slot_b, bool base_reversing);

// Same, for a torus with both sides on one piece.
FiberedPiece merge_self(const FiberedPiece& p, int slot_a, int slot_b,
                        bool base_reversing);

} // namespace gsr
