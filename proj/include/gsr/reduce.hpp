#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "gsr/graph.hpp"

namespace gsr {

enum class MoveKind {
    AbsorbSolidTorus,   // fibration of a piece extended over an adjacent solid torus
    MergeT2xIChain,     // a finite T^2 x I chain collapsed into a single gluing
    CollapseRay,        // an infinite T^2-tail traded for an end
    ResolveK2xI,        // a K^2 x~ I piece merged into its thick neighbor
    MergeMatchingTorus, // a matching torus between thick pieces removed
};

const char* to_string(MoveKind k);

struct Move {
    MoveKind kind;
    std::vector<std::string> affected; // ids that existed before the move
    std::vector<std::string> result;   // ids that exist after it
    long long alpha = 0;               // exceptional-fiber order for absorptions
};

enum class DiagnosisKind {
    ExhaustionBySolidTori,
    PlainR3Like,
    S1xR2Like,
    ClosedSeifert,
    ClosedNonSeifert,
    ReducibleWitness,
    // The structure collapsed onto a solid torus whose meridian is not
    // determined by the stored data (the model does not carry Seifert beta
    // invariants); re-encode the offending region as an explicit solidtorus.
    UnderdeterminedSolidTorus,
};

const char* to_string(DiagnosisKind k);

struct Diagnosis {
    DiagnosisKind kind;
    std::vector<std::string> witnesses;
    std::string message;
};

// Deterministic move-selection policy. Seed 0 orders candidates by id
// (smallest first); any other seed orders them by a seeded hash of the id.
struct ReducePolicy {
    std::uint64_t seed = 0;
};

struct ReduceOptions {
    ReducePolicy policy;
    bool validate_each_move = false; // test hook: revalidate after every move
};

struct Reduced {
    GraphStructure graph;
    std::vector<Move> trace;
};

using ReductionOutcome = std::variant<Reduced, Diagnosis>;

// True when no solid torus, T^2 x I or T^2 x [0,inf) piece or all-T^2xI ray
// remains, no torus between thick pieces carries matching fibrations, and
// every surviving K^2 x~ I piece matches neither of its fibrations across its
// gluing. Expects a structurally valid graph.
bool is_reduced(const GraphStructure& g);

// Run the full pipeline (stages A..E iterated to a global fixpoint) and
// return either the reduced structure with its rewrite trace or a diagnosis
// naming the hypothesis the input violates. The input must pass validate().
ReductionOutcome reduce(const GraphStructure& g, const ReduceOptions& opts = {});

// Individual stages, exposed for tests. Each mutates the graph, appends to
// the trace, and reports whether it changed anything; a diagnosis aborts the
// stage. Stage preconditions follow the pipeline order.
struct StageResult {
    bool changed = false;
    std::optional<Diagnosis> diagnosis;
};

StageResult stage_a_absorb_solid_tori(GraphStructure& g, std::vector<Move>& trace,
                                      const ReduceOptions& opts = {});
StageResult stage_b_collapse_t2xi(GraphStructure& g, std::vector<Move>& trace,
                                  const ReduceOptions& opts = {});
StageResult stage_c_collapse_rays(GraphStructure& g, std::vector<Move>& trace,
                                  const ReduceOptions& opts = {});
StageResult stage_d_resolve_k2xi(GraphStructure& g, std::vector<Move>& trace,
                                 const ReduceOptions& opts = {});
StageResult stage_e_merge_matching(GraphStructure& g, std::vector<Move>& trace,
                                   const ReduceOptions& opts = {});

// Sum of euler_char_compactified over fibered pieces (solid tori and K^2 x~ I
// pieces count as zero). The reduction ledger: this changes by exactly
// +1/alpha at each AbsorbSolidTorus move and is otherwise conserved.
Rational chi_ledger(const GraphStructure& g);

} // namespace gsr
