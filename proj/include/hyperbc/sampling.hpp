/*
 * sampling.hpp
 * ------------
 * Deterministic grid plus seeded uniform sampling of basic sets within
 * their bounding boxes, and the numeric overlap witness search used to
 * pre-filter transition pairs that cannot admit a certificate.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>

#include "hyperbc/region.hpp"

namespace hyperbc {

struct SampleConfig {
    int grid_per_dim = 20;
    long random_samples = 10000;
    std::uint64_t seed = 0x5eed;
    double tol = 1e-8;
};

// Visit grid points (per-dimension count, endpoints included) of a box.
// Callback returns false to stop early.
void grid_walk(const Box& box, int per_dim,
               const std::function<bool(std::span<const double>)>& visit);

// Rejection sampler for one basic set: caller supplies the box (usually the
// clause's own bounding box).
class ClauseSampler {
public:
    ClauseSampler(const BasicSet& clause, Box box, std::uint64_t seed);

    // feeds accepted points (inside the clause) to `visit` until the grid
    // and `random_count` random draws are exhausted or `visit` returns
    // false; returns how many points were accepted.
    long run(int grid_per_dim, long random_count,
             const std::function<bool(std::span<const double>)>& visit);

    const Box& box() const { return box_; }

private:
    const BasicSet& clause_;
    Box box_;
    std::mt19937_64 rng_;
    std::vector<CompiledPoly> gs_;
    bool accepted(std::span<const double> pt) const;
};

// Searches r1 ∩ r2 by sampling every clause pair; a returned point is an
// exact witness of overlap (both memberships re-checkable by eval). The
// clause boxes' centers are tried first.
std::optional<std::map<std::string, double>> region_overlap_witness(
    const SemialgebraicRegion& r1, const SemialgebraicRegion& r2, long budget,
    std::uint64_t seed);

}  // namespace hyperbc
