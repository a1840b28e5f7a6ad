#include "noc3d/scheduler.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

namespace noc3d {

void ClusterSet::validate(int task_count) const {
    if (static_cast<int>(cluster_of.size()) != task_count)
        throw std::logic_error("cluster_of does not cover every task");
    std::vector<int> seen(task_count, 0);
    for (int k = 0; k < size(); ++k) {
        if (clusters[k].empty())
            throw std::logic_error(fmt::format("cluster {} is empty", k));
        for (CoreId t : clusters[k]) {
            if (t < 0 || t >= task_count || seen[t]++ || cluster_of[t] != k)
                throw std::logic_error(fmt::format("task {} misfiled in cluster {}", t, k));
        }
    }
    if (std::count(seen.begin(), seen.end(), 0) != 0)
        throw std::logic_error("some task belongs to no cluster");
}

Schedule::Schedule(const Mesh3D& mesh, int task_count)
    : placement_(task_count, -1), slots_(mesh.tile_count()) {}

void Schedule::assign(CoreId task, TileId tile) {
    if (task < 0 || task >= task_count())
        throw std::out_of_range(fmt::format("task {} outside schedule", task));
    if (placement_[task] != -1)
        throw std::logic_error(fmt::format("task {} already placed", task));
    placement_[task] = tile;
    slots_.at(tile).push_back(task);
}

int Schedule::max_depth() const {
    std::size_t d = 0;
    for (const auto& s : slots_)
        d = std::max(d, s.size());
    return static_cast<int>(d);
}

bool Schedule::complete() const {
    return std::find(placement_.begin(), placement_.end(), -1) == placement_.end();
}

Schedule dynamic_schedule(const TaskGraph& g, const Mesh3D& mesh) {
    if (g.core_count() == 0)
        throw std::invalid_argument("dynamic_schedule: empty graph");
    Schedule sched(mesh, g.core_count());

    std::vector<CoreId> remaining(g.core_count());
    for (CoreId c = 0; c < g.core_count(); ++c)
        remaining[c] = c;

    while (!remaining.empty()) {
        // Priorities are recomputed on the residual graph every round.
        const auto residual = induced_subgraph(g, remaining);
        const auto prio = priority_order(residual).order;
        const auto take = std::min<std::size_t>(prio.size(), mesh.tile_count());

        std::vector<CoreId> round;
        for (std::size_t i = 0; i < take; ++i)
            round.push_back(remaining[prio[i]]);
        std::sort(round.begin(), round.end());

        const auto placed = ddmap(induced_subgraph(g, round), mesh);
        for (std::size_t i = 0; i < round.size(); ++i)
            sched.assign(round[i], placed.tile_of(static_cast<CoreId>(i)));

        std::vector<CoreId> rest;
        std::set_difference(remaining.begin(), remaining.end(), round.begin(), round.end(),
                            std::back_inserter(rest));
        remaining = std::move(rest);
    }
    return sched;
}

ClusterSet cluster_tasks(const TaskGraph& g, int max_clusters) {
    if (max_clusters < 1)
        throw std::invalid_argument("max_clusters must be >= 1");
    const int n = g.core_count();
    const auto pv = pair_volume_matrix(g);
    const auto vol = [&](CoreId i, CoreId j) { return pv[static_cast<std::size_t>(i) * n + j]; };
    std::vector<char> linked(static_cast<std::size_t>(n) * n, 0);
    for (const auto& a : g.arcs()) {
        linked[static_cast<std::size_t>(a.src) * n + a.dst] = 1;
        linked[static_cast<std::size_t>(a.dst) * n + a.src] = 1;
    }
    const auto partners = [&](CoreId i, CoreId j) { return linked[static_cast<std::size_t>(i) * n + j] != 0; };

    ClusterSet cs;
    cs.cluster_of.assign(n, -1);
    std::vector<char> scheduled(n, 0);

    for (CoreId start = 0; start < n; ++start) {
        if (scheduled[start])
            continue;
        const int k = cs.size();
        cs.clusters.push_back({start});
        cs.cluster_of[start] = k;
        scheduled[start] = 1;

        CoreId cur = start;
        for (;;) {
            CoreId best = -1;
            for (CoreId j = 0; j < n; ++j) {
                if (scheduled[j] || !partners(cur, j))
                    continue;
                if (best == -1 || vol(cur, j) > vol(cur, best))
                    best = j;
            }
            if (best == -1)
                break;
            cs.clusters[k].push_back(best);
            cs.cluster_of[best] = k;
            scheduled[best] = 1;

            // Reaching back to a scheduled task other than the one we came
            // from closes a loop: keep the task, end the chain.
            bool loop = false;
            for (CoreId j = 0; j < n && !loop; ++j)
                loop = j != cur && j != best && scheduled[j] && partners(best, j);
            cur = best;
            if (loop)
                break;
        }
    }

    while (cs.size() > max_clusters) {
        // Fold the oldest surplus cluster into its heaviest partner among
        // the first max_clusters clusters.
        const int victim = max_clusters;
        std::vector<std::int64_t> exchange(max_clusters, 0);
        for (CoreId t : cs.clusters[victim]) {
            for (CoreId o = 0; o < n; ++o) {
                const int ko = cs.cluster_of[o];
                if (ko < max_clusters)
                    exchange[ko] += vol(t, o);
            }
        }
        const int target = static_cast<int>(
            std::max_element(exchange.begin(), exchange.end()) - exchange.begin());
        for (CoreId t : cs.clusters[victim]) {
            cs.clusters[target].push_back(t);
            cs.cluster_of[t] = target;
        }
        cs.clusters.erase(cs.clusters.begin() + victim);
        for (int k = victim; k < cs.size(); ++k) {
            for (CoreId t : cs.clusters[k])
                cs.cluster_of[t] = k;
        }
    }
    return cs;
}

TaskGraph cluster_graph(const TaskGraph& g, const ClusterSet& cs) {
    cs.validate(g.core_count());
    std::map<std::pair<int, int>, std::pair<std::int64_t, std::int64_t>> crossing;
    for (const auto& a : g.arcs()) {
        const int p = cs.cluster_of[a.src];
        const int q = cs.cluster_of[a.dst];
        if (p == q)
            continue;
        auto& w = crossing[{p, q}];
        w.first += a.volume;
        w.second += a.bandwidth;
    }
    TaskGraph out(cs.size());
    for (const auto& [pq, w] : crossing)
        out.add_arc(pq.first, pq.second, w.first, w.second);
    return out;
}

Schedule expand_cluster_mapping(const ClusterSet& cs, const Mesh3D& mesh,
                                const Mapping& cluster_mapping) {
    if (cluster_mapping.size() != static_cast<std::size_t>(cs.size()))
        throw std::invalid_argument("cluster mapping does not cover every cluster");
    Schedule sched(mesh, static_cast<int>(cs.cluster_of.size()));
    for (int k = 0; k < cs.size(); ++k) {
        for (CoreId t : cs.clusters[k])
            sched.assign(t, cluster_mapping.tile_of(k));
    }
    return sched;
}

ClusterSchedule cluster_schedule(const TaskGraph& g, const Mesh3D& mesh, MapperKind mapper) {
    auto cs = cluster_tasks(g, mesh.tile_count());
    auto cg = cluster_graph(g, cs);
    auto cm = map_cores(cg, mesh, mapper);
    auto sched = expand_cluster_mapping(cs, mesh, cm);
    return ClusterSchedule{std::move(cs), std::move(cg), std::move(cm), std::move(sched)};
}

} // namespace noc3d
