#pragma once

#include <map>
#include <optional>
#include <string>

#include "gsr/graph.hpp"

namespace gsr {

// Relabeling-invariant encoding of the decorated dual graph. Vertex
// decorations: piece kind, orientability, genus, boundary/end counts, sorted
// cone orders, and the period signatures of attached rays. Edge decorations:
// fiber intersection number and the loop flag. Gluing matrices beyond the
// fiber intersection are deliberately not part of the signature: they are only
// well defined up to section changes, which the model does not normalize, so
// signature equality captures the decorated graph, not full diffeomorphism.
std::string canonical_form(const GraphStructure& g);

// Lowercase hex digest of the canonical form; stable across runs.
std::string signature(const GraphStructure& g);

struct IsoWitness {
    std::map<std::string, std::string> piece_map;
    std::map<std::string, std::string> edge_map;
    std::map<std::string, std::string> ray_map;
};

// Decorated-graph isomorphism: present exactly when the canonical forms agree;
// the witness is a decoration-preserving bijection.
std::optional<IsoWitness> isomorphic(const GraphStructure& g1, const GraphStructure& g2);

} // namespace gsr
