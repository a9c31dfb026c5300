#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "degseq/params.hpp"
#include "degseq/rng.hpp"

namespace degseq {

using VertexId = std::uint32_t;

struct Edge {
    VertexId u;
    VertexId v;
    bool operator==(const Edge&) const = default;
};

// The evolving loopy multigraph. Vertices are dense ids in insertion order;
// a loop contributes 2 to its endpoint's degree. Vertices are never removed.
struct MultigraphState {
    std::int64_t step = 1;  // time t
    std::vector<Edge> edges;
    std::vector<std::uint64_t> degree;  // indexed by vertex id

    std::uint64_t vertex_count() const { return degree.size(); }
    std::uint64_t edge_count() const { return edges.size(); }
    std::uint64_t max_degree() const;
    std::uint64_t degree_sum() const;
    bool degree_sum_consistent() const { return degree_sum() == 2 * edge_count(); }

    // Test/debug helper: a fixed graph on n vertices at step 1.
    static MultigraphState from_edges(std::size_t n_vertices, const std::vector<Edge>& edges);

    void dump_edges(std::ostream& os) const;  // one "u v" line per edge
};

struct StepOutcome {
    enum class Kind { VertexAdded, EdgesAdded, EdgesDeleted, NoOp };
    Kind kind = Kind::NoOp;
    int count = 0;  // edges attached / added / deleted
};

struct SimOptions {
    // Edges attached when a vertex arrives while the graph has no edges
    // ("cold start"); either 1 (default) or m, all to one uniform vertex.
    int cold_start_edges = 1;
    // Trajectory cadence: record every this many steps; 0 records at powers
    // of two. The horizon is always recorded.
    std::int64_t trajectory_stride = 0;
};

struct DegreeHistogram {
    std::int64_t t = 0;
    std::int64_t trial_id = 0;
    std::vector<std::uint64_t> counts;  // counts[k] = number of vertices of degree k

    std::uint64_t vertex_total() const;
    std::uint64_t degree_mass() const;  // sum_k k*counts[k] = 2*e_t
};

struct TrajectorySample {
    std::int64_t t = 0;
    std::uint64_t edges = 0;
    std::uint64_t vertices = 0;
    std::uint64_t max_degree = 0;
};

struct TrialResult {
    std::int64_t trial_id = 0;
    std::vector<DegreeHistogram> histograms;   // one per requested snapshot time
    std::vector<TrajectorySample> trajectory;  // powers of two and the horizon
};

// Time-step 1: a single isolated vertex, no edges.
MultigraphState init();

// One draw from P(w) = degree[w] / (2 e). Throws EmptyGraph when e = 0.
VertexId sample_preferential(const MultigraphState& state, RngStream& rng);

// Executes one time-step: with probability alpha1 a vertex plus m
// preferential edges, with probability alpha-alpha1 m preferential edges,
// otherwise min(m, e) uniform deletions. Endpoint draws within a step use
// the start-of-step edge list (degrees frozen; new edges buffered).
StepOutcome advance(MultigraphState& state, const ModelParams& params, RngStream& rng,
                    const SimOptions& opts = {});

DegreeHistogram histogram_of(const MultigraphState& state, std::int64_t trial_id = 0);

// Runs one trial to time T, recording histograms at the given snapshot times
// (times outside [1, T] are ignored) and trajectory samples at powers of two
// plus T.
TrialResult run_trial(const ModelParams& params, std::int64_t horizon, RngStream rng,
                      const std::vector<std::int64_t>& snapshot_times, const SimOptions& opts = {},
                      std::int64_t trial_id = 0);

// Seed-deterministic parallel trials: trial i uses RngStream(seed, i), and
// the result vector is ordered by trial id regardless of scheduling.
std::vector<TrialResult> run_trials(const ModelParams& params, std::int64_t horizon, int trials,
                                    std::uint64_t seed,
                                    const std::vector<std::int64_t>& snapshot_times,
                                    const SimOptions& opts = {}, int threads = 0);

}  // namespace degseq
