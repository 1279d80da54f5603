#include "hyperbc/sampling.hpp"

#include <cmath>

namespace hyperbc {

void grid_walk(const Box& box, int per_dim,
               const std::function<bool(std::span<const double>)>& visit) {
    const std::size_t d = box.dim();
    if (d == 0) {
        visit({});
        return;
    }
    std::vector<int> counts(d);
    std::vector<double> step(d);
    for (std::size_t i = 0; i < d; ++i) {
        auto [lo, hi] = box.range[i];
        if (hi <= lo) {
            counts[i] = 1;
            step[i] = 0.0;
        } else {
            counts[i] = std::max(2, per_dim);
            step[i] = (hi - lo) / (counts[i] - 1);
        }
    }
    std::vector<int> idx(d, 0);
    std::vector<double> pt(d);
    for (;;) {
        for (std::size_t i = 0; i < d; ++i) pt[i] = box.range[i].first + idx[i] * step[i];
        if (!visit(pt)) return;
        std::size_t i = 0;
        while (i < d && ++idx[i] >= counts[i]) idx[i++] = 0;
        if (i == d) return;
    }
}

ClauseSampler::ClauseSampler(const BasicSet& clause, Box box, std::uint64_t seed)
    : clause_(clause), box_(std::move(box)), rng_(seed) {
    for (const auto& g : clause.gs) gs_.emplace_back(g, box_.vars);
}

bool ClauseSampler::accepted(std::span<const double> pt) const {
    for (const auto& g : gs_)
        if (g(pt) < 0.0) return false;
    return true;
}

long ClauseSampler::run(int grid_per_dim, long random_count,
                        const std::function<bool(std::span<const double>)>& visit) {
    long hits = 0;
    bool stop = false;
    grid_walk(box_, grid_per_dim, [&](std::span<const double> pt) {
        if (accepted(pt)) {
            ++hits;
            if (!visit(pt)) {
                stop = true;
                return false;
            }
        }
        return true;
    });
    if (stop) return hits;
    std::vector<double> pt(box_.dim());
    for (long k = 0; k < random_count; ++k) {
        for (std::size_t i = 0; i < pt.size(); ++i) {
            auto [lo, hi] = box_.range[i];
            pt[i] = lo == hi ? lo : std::uniform_real_distribution<double>(lo, hi)(rng_);
        }
        if (accepted(pt)) {
            ++hits;
            if (!visit(pt)) break;
        }
    }
    return hits;
}

std::optional<std::map<std::string, double>> region_overlap_witness(
    const SemialgebraicRegion& r1, const SemialgebraicRegion& r2, long budget,
    std::uint64_t seed) {
    for (const auto& c1 : r1.clauses) {
        for (const auto& c2 : r2.clauses) {
            BasicSet meet = c1.merged_with(c2);
            if (meet.provably_empty()) continue;
            auto box = meet.bounding_box();
            if (!box)
                throw PolynomialError(
                    "overlap check needs bounded regions; declare explicit bounds");
            auto to_point = [&](std::span<const double> pt) {
                std::map<std::string, double> point;
                for (std::size_t i = 0; i < box->vars.size(); ++i) point[box->vars[i]] = pt[i];
                return point;
            };
            // box center first: identical sets resolve in one probe
            auto center = box->center();
            if (meet.contains(to_point(center))) return to_point(center);

            std::optional<std::map<std::string, double>> found;
            ClauseSampler sampler(meet, *box, seed);
            long grid = std::max(2L, static_cast<long>(std::floor(
                                         std::pow(static_cast<double>(budget),
                                                  1.0 / std::max<std::size_t>(1, box->dim())))));
            sampler.run(static_cast<int>(std::min<long>(grid, 6)), budget,
                        [&](std::span<const double> pt) {
                            found = to_point(pt);
                            return false;
                        });
            if (found) return found;
        }
    }
    return std::nullopt;
}

}  // namespace hyperbc
