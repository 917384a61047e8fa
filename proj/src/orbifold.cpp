#include "gsr/orbifold.hpp"

#include <algorithm>
#include <stdexcept>

namespace gsr {

const char* to_string(ThinBaseKind k) {
    switch (k) {
    case ThinBaseKind::DiskLeqOneCone: return "DiskLeqOneCone";
    case ThinBaseKind::PlaneLeqOneCone: return "PlaneLeqOneCone";
    case ThinBaseKind::DiskTwoCones2: return "DiskTwoCones2";
    case ThinBaseKind::PlaneTwoCones2: return "PlaneTwoCones2";
    case ThinBaseKind::Moebius: return "Moebius";
    case ThinBaseKind::OpenMoebius: return "OpenMoebius";
    case ThinBaseKind::FiniteAnnulus: return "FiniteAnnulus";
    case ThinBaseKind::HalfInfiniteAnnulus: return "HalfInfiniteAnnulus";
    case ThinBaseKind::BiInfiniteAnnulus: return "BiInfiniteAnnulus";
    case ThinBaseKind::NotThin: return "NotThin";
    }
    return "?";
}

void check_base(const BaseOrbifold& o) {
    if (o.genus < 0 || o.boundary_count < 0 || o.end_count < 0)
        throw std::invalid_argument("orbifold: negative count");
    if (!o.orientable && o.genus < 1)
        throw std::invalid_argument("orbifold: nonorientable base needs genus >= 1");
    for (int q : o.cone_orders)
        if (q < 2) throw std::invalid_argument("orbifold: cone order < 2");
    if (!std::is_sorted(o.cone_orders.begin(), o.cone_orders.end()))
        throw std::invalid_argument("orbifold: cone orders not sorted");
}

Rational euler_char_compactified(const BaseOrbifold& o) {
    long long holes = o.boundary_count + o.end_count;
    long long surface = o.orientable ? 2 - 2LL * o.genus - holes : 2 - (long long)o.genus - holes;
    Rational chi(surface);
    for (int q : o.cone_orders) chi -= Rational(q - 1, q);
    return chi;
}

ThinBaseKind classify_base(const BaseOrbifold& o) {
    check_base(o);
    if (o.closed())
        throw std::invalid_argument("classify_base: thinness is undefined for closed bases");
    if (euler_char_compactified(o) < Rational(0)) return ThinBaseKind::NotThin;

    const std::size_t k = o.cone_orders.size();
    const bool cones22 = k == 2 && o.cone_orders[0] == 2 && o.cone_orders[1] == 2;
    if (o.orientable && o.genus == 0) {
        if (o.boundary_count == 1 && o.end_count == 0) {
            if (k <= 1) return ThinBaseKind::DiskLeqOneCone;
            if (cones22) return ThinBaseKind::DiskTwoCones2;
        } else if (o.boundary_count == 0 && o.end_count == 1) {
            if (k <= 1) return ThinBaseKind::PlaneLeqOneCone;
            if (cones22) return ThinBaseKind::PlaneTwoCones2;
        } else if (k == 0) {
            if (o.boundary_count == 2 && o.end_count == 0) return ThinBaseKind::FiniteAnnulus;
            if (o.boundary_count == 1 && o.end_count == 1) return ThinBaseKind::HalfInfiniteAnnulus;
            if (o.boundary_count == 0 && o.end_count == 2) return ThinBaseKind::BiInfiniteAnnulus;
        }
    } else if (!o.orientable && o.genus == 1 && k == 0) {
        if (o.boundary_count == 1 && o.end_count == 0) return ThinBaseKind::Moebius;
        if (o.boundary_count == 0 && o.end_count == 1) return ThinBaseKind::OpenMoebius;
    }
    // chi >= 0 for a nonclosed base forces one of the nine shapes above.
    throw std::logic_error("classify_base: nonnegative characteristic outside the nine thin kinds");
}

static void check_slot(const BaseOrbifold& o, int slot) {
    if (slot < 0 || slot >= o.boundary_count)
        throw std::invalid_argument("orbifold: boundary slot out of range");
}

BaseOrbifold cap_with_cone(const BaseOrbifold& o, int slot, int alpha) {
    check_base(o);
    check_slot(o, slot);
    if (alpha < 1) throw std::invalid_argument("cap_with_cone: alpha must be >= 1");
    BaseOrbifold r = o;
    r.boundary_count -= 1;
    if (alpha >= 2) {
        r.cone_orders.push_back(alpha);
        std::sort(r.cone_orders.begin(), r.cone_orders.end());
    }
    return r;
}

BaseOrbifold boundary_to_end(const BaseOrbifold& o, int slot) {
    check_base(o);
    check_slot(o, slot);
    BaseOrbifold r = o;
    r.boundary_count -= 1;
    r.end_count += 1;
    return r;
}

BaseOrbifold merge_bases(const BaseOrbifold& o1, int slot1,
                         const BaseOrbifold& o2, int slot2,
                         bool /*base_reversing*/) {
    check_base(o1);
    check_base(o2);
    check_slot(o1, slot1);
    check_slot(o2, slot2);
    BaseOrbifold r;
    r.orientable = o1.orientable && o2.orientable;
    if (r.orientable) {
        r.genus = o1.genus + o2.genus;
    } else {
        // orientable genus converts at one handle = two crosscaps
        r.genus = (o1.orientable ? 2 * o1.genus : o1.genus) +
                  (o2.orientable ? 2 * o2.genus : o2.genus);
    }
    r.boundary_count = o1.boundary_count + o2.boundary_count - 2;
    r.end_count = o1.end_count + o2.end_count;
    r.cone_orders = o1.cone_orders;
    r.cone_orders.insert(r.cone_orders.end(), o2.cone_orders.begin(), o2.cone_orders.end());
    std::sort(r.cone_orders.begin(), r.cone_orders.end());
    return r;
}

BaseOrbifold self_merge(const BaseOrbifold& o, int slot_a, int slot_b,
                        bool base_reversing) {
    check_base(o);
    check_slot(o, slot_a);
    check_slot(o, slot_b);
    if (slot_a == slot_b)
        throw std::invalid_argument("self_merge: slots must be distinct");
    BaseOrbifold r = o;
    r.boundary_count -= 2;
    if (!o.orientable) {
        r.genus += 2; // adding a handle to a nonorientable surface = two crosscaps
    } else if (base_reversing) {
        r.orientable = false;
        r.genus = 2 * o.genus + 2;
    } else {
        r.genus += 1;
    }
    return r;
}

} // namespace gsr
