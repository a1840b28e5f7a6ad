#include "noc3d/pso.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

namespace noc3d {

Objective parse_objective(std::string_view name) {
    if (name == "energy")
        return Objective::energy;
    if (name == "cost")
        return Objective::cost;
    throw std::invalid_argument(fmt::format("unknown objective '{}'", name));
}

std::string_view to_string(Objective obj) {
    return obj == Objective::energy ? "energy" : "cost";
}

void PsoParams::validate() const {
    if (!(c1 >= 0.0) || !(c2 >= 0.0) || !(w >= 0.0))
        throw std::invalid_argument("PSO coefficients must be non-negative");
    if (swarm_size < 1 || max_simulations < 1 || threads < 1)
        throw std::invalid_argument("swarm size, simulations and threads must be positive");
    if (max_evals < swarm_size)
        throw std::invalid_argument("evaluation budget smaller than one swarm");
}

std::vector<double> velocity_update(const Particle& p, std::span<const int> gbest, double w,
                                    std::span<const double> r1, std::span<const double> r2) {
    const std::size_t d = p.position.size();
    if (p.velocity.size() != d || p.pbest_position.size() != d || gbest.size() != d ||
        r1.size() != d || r2.size() != d)
        throw std::invalid_argument("velocity_update: vector length mismatch");
    const double limit = static_cast<double>(d);
    std::vector<double> v(d);
    for (std::size_t i = 0; i < d; ++i) {
        const double x = p.position[i];
        const double next = w * p.velocity[i] + r1[i] * (p.pbest_position[i] - x) +
                            r2[i] * (gbest[i] - x);
        v[i] = std::clamp(next, -limit, limit);
    }
    return v;
}

std::vector<double> velocity_update(const Particle& p, std::span<const int> gbest,
                                    const PsoParams& params, std::mt19937_64& rng) {
    const std::size_t d = p.position.size();
    std::uniform_real_distribution<double> u1(0.0, params.c1);
    std::uniform_real_distribution<double> u2(0.0, params.c2);
    std::vector<double> r1(d), r2(d);
    for (std::size_t i = 0; i < d; ++i) {
        r1[i] = u1(rng);
        r2[i] = u2(rng);
    }
    return velocity_update(p, gbest, params.w, r1, r2);
}

std::vector<int> position_update(std::span<const int> x, std::span<const double> v, int dimension) {
    if (x.size() != v.size())
        throw std::invalid_argument("position_update: length mismatch");
    std::vector<int> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double moved = x[i] + std::floor(v[i]);
        out[i] = static_cast<int>(std::clamp(moved, 0.0, static_cast<double>(dimension - 1)));
    }
    return out;
}

std::vector<int> repair_permutation(std::span<const int> raw, int dimension) {
    if (raw.size() > static_cast<std::size_t>(dimension))
        throw std::invalid_argument("repair_permutation: more slots than ids");
    std::vector<char> used(dimension, 0);
    std::vector<int> out(raw.begin(), raw.end());
    std::vector<std::size_t> dup;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i] < 0 || out[i] >= dimension)
            throw std::out_of_range(fmt::format("id {} outside 0..{}", out[i], dimension - 1));
        if (used[out[i]])
            dup.push_back(i);
        else
            used[out[i]] = 1;
    }
    int next_free = 0;
    for (std::size_t i : dup) {
        while (used[next_free])
            ++next_free;
        out[i] = next_free;
        used[next_free] = 1;
    }
    return out;
}

MappingObjective::MappingObjective(const TaskGraph& g, const Mesh3D& mesh, Objective obj,
                                   const EnergyModel& m)
    : dimension_(mesh.tile_count()), objective_(obj), model_(m) {
    if (g.core_count() > dimension_)
        throw std::invalid_argument(fmt::format("{} cores exceed {} tiles", g.core_count(),
                                                dimension_));
    if (g.core_count() > 0)
        priority_ = priority_order(g).order;
    std::vector<int> slot_of(g.core_count());
    for (std::size_t i = 0; i < priority_.size(); ++i)
        slot_of[priority_[i]] = static_cast<int>(i);
    for (const auto& a : g.arcs())
        arcs_.push_back(SlotArc{slot_of[a.src], slot_of[a.dst], a.volume, a.bandwidth});
    hops_.resize(static_cast<std::size_t>(dimension_) * dimension_);
    for (TileId a = 0; a < dimension_; ++a)
        for (TileId b = 0; b < dimension_; ++b)
            hops_[static_cast<std::size_t>(a) * dimension_ + b] = mesh.hops(a, b);
}

double MappingObjective::operator()(std::span<const int> position) const {
    TrafficTotals t;
    for (const auto& a : arcs_) {
        const int links =
            hops_[static_cast<std::size_t>(position[a.src_slot]) * dimension_ + position[a.dst_slot]];
        if (links == 0)
            continue;
        t.switch_bits += a.volume * (links + 1);
        t.link_bits += a.volume * links;
        t.cost += a.bandwidth * links;
    }
    return objective_ == Objective::energy ? energy_from_totals(t, model_)
                                           : static_cast<double>(t.cost);
}

Mapping MappingObjective::decode(std::span<const int> position) const {
    std::vector<TileId> tiles(priority_.size());
    for (std::size_t i = 0; i < priority_.size(); ++i)
        tiles[priority_[i]] = position[i];
    return Mapping(std::move(tiles));
}

std::vector<int> MappingObjective::encode(const Mapping& map) const {
    if (map.size() != priority_.size())
        throw std::invalid_argument("seed mapping does not cover the graph");
    std::vector<int> pos(dimension_);
    std::vector<char> used(dimension_, 0);
    for (std::size_t i = 0; i < priority_.size(); ++i) {
        const TileId t = map.tile_of(priority_[i]);
        if (t < 0 || t >= dimension_ || used[t])
            throw std::invalid_argument("seed mapping must be injective and on the mesh");
        used[t] = 1;
        pos[i] = t;
    }
    int next_free = 0;
    for (std::size_t i = priority_.size(); i < pos.size(); ++i) {
        while (used[next_free])
            ++next_free;
        pos[i] = next_free;
        used[next_free] = 1;
    }
    return pos;
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent stream per (simulation, iteration, particle).
std::mt19937_64 stream(std::uint64_t seed, int sim, int iter, int particle) {
    std::uint64_t s = splitmix(seed);
    s = splitmix(s ^ static_cast<std::uint64_t>(sim));
    s = splitmix(s ^ static_cast<std::uint64_t>(iter));
    s = splitmix(s ^ static_cast<std::uint64_t>(particle));
    return std::mt19937_64(s);
}

template <typename Fn>
void for_each_particle(int count, int threads, Fn&& fn) {
    if (threads <= 1 || count < 2 * threads) {
        for (int p = 0; p < count; ++p)
            fn(p);
        return;
    }
    std::vector<std::jthread> pool;
    const int chunk = (count + threads - 1) / threads;
    for (int begin = 0; begin < count; begin += chunk) {
        const int end = std::min(count, begin + chunk);
        pool.emplace_back([&fn, begin, end] {
            for (int p = begin; p < end; ++p)
                fn(p);
        });
    }
}

// Deterministic fold in particle-index order; only strict improvements win.
void update_gbest(Swarm& swarm) {
    for (const auto& p : swarm.particles) {
        if (swarm.gbest_position.empty() || p.pbest_fitness < swarm.gbest_fitness) {
            swarm.gbest_fitness = p.pbest_fitness;
            swarm.gbest_position = p.pbest_position;
        }
    }
}

} // namespace

PsoResult pso_optimize(const TaskGraph& g, const Mesh3D& mesh, const PsoParams& params,
                       Objective objective, const EnergyModel& model,
                       const std::optional<Mapping>& seed_mapping) {
    params.validate();
    const MappingObjective fitness(g, mesh, objective, model);
    const int dim = fitness.dimension();
    std::optional<std::vector<int>> seeded;
    if (seed_mapping)
        seeded = fitness.encode(*seed_mapping);

    PsoResult result;
    std::vector<int> best_position;
    double best_fitness = 0.0;
    int global_iter = 0;

    for (int sim = 0; sim < params.max_simulations; ++sim) {
        Swarm swarm;
        swarm.particles.resize(params.swarm_size);
        for_each_particle(params.swarm_size, params.threads, [&](int idx) {
            auto rng = stream(params.seed, sim, 0, idx);
            auto& p = swarm.particles[idx];
            if (idx == 0 && seeded) {
                p.position = *seeded;
            } else {
                p.position.resize(dim);
                std::iota(p.position.begin(), p.position.end(), 0);
                std::shuffle(p.position.begin(), p.position.end(), rng);
            }
            std::uniform_real_distribution<double> v0(-1.0, 1.0);
            p.velocity.resize(dim);
            for (auto& v : p.velocity)
                v = v0(rng);
            p.pbest_position = p.position;
            p.pbest_fitness = fitness(p.position);
        });
        std::int64_t evals = params.swarm_size;
        update_gbest(swarm);

        auto record = [&] {
            if (best_position.empty() || swarm.gbest_fitness < best_fitness) {
                best_fitness = swarm.gbest_fitness;
                best_position = swarm.gbest_position;
            }
            result.trace.push_back(TracePoint{global_iter, result.evaluations + evals, best_fitness});
        };
        record();

        for (int iter = 1; evals + params.swarm_size <= params.max_evals; ++iter) {
            const std::vector<int> gbest = swarm.gbest_position;
            for_each_particle(params.swarm_size, params.threads, [&](int idx) {
                auto rng = stream(params.seed, sim, iter, idx);
                auto& p = swarm.particles[idx];
                p.velocity = velocity_update(p, gbest, params, rng);
                p.position = repair_permutation(position_update(p.position, p.velocity, dim), dim);
                const double f = fitness(p.position);
                if (f < p.pbest_fitness) {
                    p.pbest_fitness = f;
                    p.pbest_position = p.position;
                }
            });
            evals += params.swarm_size;
            ++global_iter;
            update_gbest(swarm);
            record();
        }
        result.evaluations += evals;
        ++global_iter;
    }

    result.fitness = best_fitness;
    result.mapping = fitness.decode(best_position);
    return result;
}

} // namespace noc3d
