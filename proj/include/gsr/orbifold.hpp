#pragma once

#include <string>
#include <vector>

#include "gsr/rational.hpp"

namespace gsr {

// Finite-type, locally orientable 2-orbifold: a surface with cone points.
// `genus` counts handles when orientable, crosscaps otherwise. Boundary
// circles are compact gluing slots; ends are punctures of the underlying
// surface (they compactify to extra boundary circles).
struct BaseOrbifold {
    bool orientable = true;
    int genus = 0;
    int boundary_count = 0;
    int end_count = 0;
    std::vector<int> cone_orders; // sorted, every entry >= 2

    bool closed() const { return boundary_count == 0 && end_count == 0; }

    friend bool operator==(const BaseOrbifold&, const BaseOrbifold&) = default;
};

// The nine nonclosed bases with nonnegative orbifold Euler characteristic,
// plus the catch-all for everything hyperbolic-like.
enum class ThinBaseKind {
    DiskLeqOneCone,
    PlaneLeqOneCone,
    DiskTwoCones2,
    PlaneTwoCones2,
    Moebius,
    OpenMoebius,
    FiniteAnnulus,
    HalfInfiniteAnnulus,
    BiInfiniteAnnulus,
    NotThin,
};

const char* to_string(ThinBaseKind k);

// Throws std::invalid_argument when a type invariant fails.
void check_base(const BaseOrbifold& o);

// Orbifold Euler characteristic of the compactification: ends count as
// boundary circles, each cone of order q contributes -(1 - 1/q).
Rational euler_char_compactified(const BaseOrbifold& o);

// Only defined for nonclosed bases; NotThin exactly when the characteristic
// above is negative.
ThinBaseKind classify_base(const BaseOrbifold& o);

// Fill boundary circle `slot` with a disk; alpha >= 2 leaves a cone point of
// that order behind. Raises the characteristic by exactly 1/alpha.
BaseOrbifold cap_with_cone(const BaseOrbifold& o, int slot, int alpha);

// Trade a boundary circle for an end. Characteristic of the compactification
// is unchanged.
BaseOrbifold boundary_to_end(const BaseOrbifold& o, int slot);

// Glue boundary `slot1` of o1 to boundary `slot2` of o2. Characteristics add.
// With two orientable bases the handles add; any nonorientable input converts
// orientable genus at one handle = two crosscaps. `base_reversing` only
// affects orientability bookkeeping for self-gluings, see self_merge.
BaseOrbifold merge_bases(const BaseOrbifold& o1, int slot1,
                         const BaseOrbifold& o2, int slot2,
                         bool base_reversing);

// Glue two boundary circles of the same base together. On an orientable base
// this adds a handle when base_reversing is false and two crosscaps when it
// is true; a nonorientable base gains two crosscaps either way.
// Characteristic of the compactification is unchanged.
BaseOrbifold self_merge(const BaseOrbifold& o, int slot_a, int slot_b,
                        bool base_reversing);

} // namespace gsr
