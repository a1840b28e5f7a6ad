#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "noc3d/metrics.hpp"
#include "noc3d/taskgraph.hpp"
#include "noc3d/topology.hpp"

namespace noc3d {

enum class Objective { energy, cost };

Objective parse_objective(std::string_view name);
std::string_view to_string(Objective obj);

// Restart count from the reference parameter table. Runs default to a single
// simulation; set PsoParams::max_simulations to this for the full protocol.
inline constexpr int kReferenceSimulations = 100;

struct PsoParams {
    double c1 = 1.2;
    double c2 = 1.3;
    double w = 0.721348;
    int swarm_size = 200;
    int max_simulations = 1;
    std::int64_t max_evals = 150000;  // per simulation, initial swarm included
    std::uint64_t seed = 0;
    int threads = 1;                  // fitness workers; results do not depend on it

    void validate() const;
};

// position[i] is the tile of the i-th core in priority order; slots past the
// core count are padding and never evaluated.
struct Particle {
    std::vector<int> position;
    std::vector<double> velocity;
    std::vector<int> pbest_position;
    double pbest_fitness = 0.0;
};

struct Swarm {
    std::vector<Particle> particles;
    std::vector<int> gbest_position;
    double gbest_fitness = 0.0;
};

struct TracePoint {
    int iteration = 0;
    std::int64_t evals = 0;
    double gbest_fitness = 0.0;
};

struct PsoResult {
    Mapping mapping;
    double fitness = 0.0;
    std::vector<TracePoint> trace;  // one point per iteration, all simulations
    std::int64_t evaluations = 0;
};

// v' = w v + r1 (pbest - x) + r2 (gbest - x) per component with explicit
// coefficients, clamped to [-D, D] where D = position length.
std::vector<double> velocity_update(const Particle& p, std::span<const int> gbest, double w,
                                    std::span<const double> r1, std::span<const double> r2);

// Same, drawing r1 ~ U[0, c1] and r2 ~ U[0, c2] per component.
std::vector<double> velocity_update(const Particle& p, std::span<const int> gbest,
                                    const PsoParams& params, std::mt19937_64& rng);

// x + floor(v), clamped to [0, dimension-1].
std::vector<int> position_update(std::span<const int> x, std::span<const double> v, int dimension);

// Keeps the first occurrence of each value; later duplicates take the unused
// ids of 0..dimension-1 in ascending order.
std::vector<int> repair_permutation(std::span<const int> raw, int dimension);

// Fitness of core->tile assignments, evaluated through the same integer
// traffic totals as the metrics module.
class MappingObjective {
public:
    MappingObjective(const TaskGraph& g, const Mesh3D& mesh, Objective obj, const EnergyModel& m);

    double operator()(std::span<const int> position) const;
    Mapping decode(std::span<const int> position) const;
    // Priority-slot encoding of a mapping, padded with unused tiles ascending.
    std::vector<int> encode(const Mapping& map) const;
    int dimension() const noexcept { return dimension_; }

private:
    struct SlotArc {
        int src_slot;
        int dst_slot;
        std::int64_t volume;
        std::int64_t bandwidth;
    };
    std::vector<CoreId> priority_;
    std::vector<SlotArc> arcs_;
    std::vector<int> hops_;  // dimension x dimension
    int dimension_;
    Objective objective_;
    EnergyModel model_;
};

// Throws std::invalid_argument when the graph has more cores than tiles or
// the seed mapping is not injective over the graph.
PsoResult pso_optimize(const TaskGraph& g, const Mesh3D& mesh, const PsoParams& params,
                       Objective objective = Objective::energy, const EnergyModel& model = {},
                       const std::optional<Mapping>& seed_mapping = std::nullopt);

} // namespace noc3d
