#include "degseq/multigraph.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <ostream>
#include <thread>

#include "degseq/errors.hpp"

namespace degseq {

std::uint64_t MultigraphState::max_degree() const {
    std::uint64_t best = 0;
    for (const auto d : degree) best = std::max(best, d);
    return best;
}

std::uint64_t MultigraphState::degree_sum() const {
    std::uint64_t s = 0;
    for (const auto d : degree) s += d;
    return s;
}

MultigraphState MultigraphState::from_edges(std::size_t n_vertices,
                                            const std::vector<Edge>& edges) {
    MultigraphState s;
    s.degree.assign(n_vertices, 0);
    s.edges = edges;
    for (const auto& e : edges) {
        s.degree.at(e.u) += 1;
        s.degree.at(e.v) += 1;
    }
    return s;
}

void MultigraphState::dump_edges(std::ostream& os) const {
    for (const auto& e : edges) os << e.u << ' ' << e.v << '\n';
}

MultigraphState init() {
    MultigraphState s;
    s.step = 1;
    s.degree.assign(1, 0);
    return s;
}

namespace {

// Uniform endpoint slot: edge j covers slots 2j and 2j+1, so vertex w is hit
// with probability degree[w]/(2e) exactly.
inline VertexId draw_endpoint(const MultigraphState& state, RngStream& rng) {
    const std::uint64_t slot = rng.uniform_below(2 * state.edge_count());
    const Edge& e = state.edges[slot >> 1];
    return (slot & 1) ? e.v : e.u;
}

inline void add_edge(MultigraphState& state, VertexId u, VertexId v) {
    state.edges.push_back({u, v});
    state.degree[u] += 1;
    state.degree[v] += 1;
}

inline void delete_edge_at(MultigraphState& state, std::size_t idx) {
    const Edge e = state.edges[idx];
    state.degree[e.u] -= 1;
    state.degree[e.v] -= 1;
    state.edges[idx] = state.edges.back();
    state.edges.pop_back();
}

}  // namespace

VertexId sample_preferential(const MultigraphState& state, RngStream& rng) {
    if (state.edge_count() == 0)
        throw EmptyGraph("preferential draw undefined on a graph with no edges");
    return draw_endpoint(state, rng);
}

StepOutcome advance(MultigraphState& state, const ModelParams& params, RngStream& rng,
                    const SimOptions& opts) {
    const double u = rng.uniform01();
    const std::uint64_t e0 = state.edge_count();
    StepOutcome out;

    if (u < params.alpha1) {
        // add a vertex with preferential edges
        const VertexId born = static_cast<VertexId>(state.vertex_count());
        if (e0 > 0) {
            // Draw all m neighbours against the frozen start-of-step state,
            // then commit.
            thread_local std::vector<VertexId> targets;
            targets.clear();
            for (int i = 0; i < params.m; ++i) targets.push_back(draw_endpoint(state, rng));
            state.degree.push_back(0);
            for (const VertexId w : targets) add_edge(state, born, w);
            out = {StepOutcome::Kind::VertexAdded, params.m};
        } else {
            const VertexId w = static_cast<VertexId>(rng.uniform_below(state.vertex_count()));
            state.degree.push_back(0);
            for (int i = 0; i < opts.cold_start_edges; ++i) add_edge(state, born, w);
            out = {StepOutcome::Kind::VertexAdded, opts.cold_start_edges};
        }
    } else if (u < params.alpha) {
        // add m edges between existing vertices
        if (e0 > 0) {
            thread_local std::vector<Edge> buffered;
            buffered.clear();
            for (int i = 0; i < params.m; ++i)
                buffered.push_back({draw_endpoint(state, rng), draw_endpoint(state, rng)});
            for (const Edge& e : buffered) add_edge(state, e.u, e.v);
            out = {StepOutcome::Kind::EdgesAdded, params.m};
        } else {
            out = {StepOutcome::Kind::NoOp, 0};
        }
    } else {
        // delete min(m, e) edges, uniform without replacement
        const int del = static_cast<int>(std::min<std::uint64_t>(params.m, e0));
        for (int i = 0; i < del; ++i)
            delete_edge_at(state, static_cast<std::size_t>(rng.uniform_below(state.edge_count())));
        out = {StepOutcome::Kind::EdgesDeleted, del};
    }

    state.step += 1;
    assert(state.degree_sum_consistent());
    return out;
}

std::uint64_t DegreeHistogram::vertex_total() const {
    std::uint64_t s = 0;
    for (const auto c : counts) s += c;
    return s;
}

std::uint64_t DegreeHistogram::degree_mass() const {
    std::uint64_t s = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) s += k * counts[k];
    return s;
}

DegreeHistogram histogram_of(const MultigraphState& state, std::int64_t trial_id) {
    DegreeHistogram h;
    h.t = state.step;
    h.trial_id = trial_id;
    h.counts.assign(state.max_degree() + 1, 0);
    for (const auto d : state.degree) h.counts[d] += 1;
    return h;
}

TrialResult run_trial(const ModelParams& params, std::int64_t horizon, RngStream rng,
                      const std::vector<std::int64_t>& snapshot_times, const SimOptions& opts,
                      std::int64_t trial_id) {
    TrialResult result;
    result.trial_id = trial_id;

    std::vector<std::int64_t> snaps = snapshot_times;
    std::sort(snaps.begin(), snaps.end());
    snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());

    MultigraphState state = init();

    auto observe = [&](std::int64_t t) {
        if (!state.degree_sum_consistent())
            throw Error("degree-sum invariant violated at t=" + std::to_string(t));
        result.trajectory.push_back({t, state.edge_count(), state.vertex_count(),
                                     state.max_degree()});
    };
    auto on_cadence = [&](std::int64_t t) {
        if (opts.trajectory_stride > 0) return t % opts.trajectory_stride == 0;
        return (t & (t - 1)) == 0;  // powers of two
    };

    std::size_t next_snap = 0;
    while (next_snap < snaps.size() && snaps[next_snap] < 1) ++next_snap;

    for (std::int64_t t = 1; t <= horizon; ++t) {
        if (t > 1) advance(state, params, rng, opts);
        if (on_cadence(t) || t == horizon) observe(t);
        if (next_snap < snaps.size() && snaps[next_snap] == t) {
            result.histograms.push_back(histogram_of(state, trial_id));
            ++next_snap;
        }
    }
    return result;
}

std::vector<TrialResult> run_trials(const ModelParams& params, std::int64_t horizon, int trials,
                                    std::uint64_t seed,
                                    const std::vector<std::int64_t>& snapshot_times,
                                    const SimOptions& opts, int threads) {
    std::vector<TrialResult> results(static_cast<std::size_t>(trials));
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, trials));

    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int i = next.fetch_add(1); i < trials; i = next.fetch_add(1))
            results[static_cast<std::size_t>(i)] =
                run_trial(params, horizon, RngStream(seed, static_cast<std::uint64_t>(i)),
                          snapshot_times, opts, i);
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return results;
}

}  // namespace degseq
