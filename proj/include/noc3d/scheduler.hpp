#pragma once

#include <vector>

#include "noc3d/mappers.hpp"
#include "noc3d/metrics.hpp"
#include "noc3d/taskgraph.hpp"
#include "noc3d/topology.hpp"

namespace noc3d {

// Partition of tasks into virtual processing elements.
struct ClusterSet {
    std::vector<std::vector<CoreId>> clusters;  // members in the order they joined
    std::vector<int> cluster_of;                // task -> cluster index

    int size() const noexcept { return static_cast<int>(clusters.size()); }
    // Throws std::logic_error unless clusters partition 0..task_count-1.
    void validate(int task_count) const;
};

// Many-to-one task placement. slots[t] lists the tasks on tile t in the
// order they were assigned.
class Schedule {
public:
    explicit Schedule(const Mesh3D& mesh, int task_count = 0);

    void assign(CoreId task, TileId tile);

    Mapping placement() const { return Mapping(placement_); }
    const std::vector<CoreId>& slot(TileId t) const { return slots_.at(t); }
    int task_count() const noexcept { return static_cast<int>(placement_.size()); }
    int max_depth() const;
    bool complete() const;

    friend bool operator==(const Schedule&, const Schedule&) = default;

private:
    std::vector<TileId> placement_;
    std::vector<std::vector<CoreId>> slots_;
};

// Round-based DDMap: fill every tile once, then start over with the
// remaining tasks until none are left.
Schedule dynamic_schedule(const TaskGraph& g, const Mesh3D& mesh);

// Greedy chain clustering over bidirectional volume, with surplus clusters
// folded into their heaviest-communicating partner.
ClusterSet cluster_tasks(const TaskGraph& g, int max_clusters);

// One node per cluster; crossing arcs summed, internal arcs dropped.
TaskGraph cluster_graph(const TaskGraph& g, const ClusterSet& cs);

Schedule expand_cluster_mapping(const ClusterSet& cs, const Mesh3D& mesh,
                                const Mapping& cluster_mapping);

struct ClusterSchedule {
    ClusterSet clusters;
    TaskGraph cluster_level;   // cluster_graph(g, clusters)
    Mapping cluster_mapping;   // cluster -> tile, injective
    Schedule schedule;         // task-level expansion
};

ClusterSchedule cluster_schedule(const TaskGraph& g, const Mesh3D& mesh,
                                 MapperKind mapper = MapperKind::ddmap);

} // namespace noc3d
