#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace twinbounds {

/// A point (pi, r0, r1) of the open unit cube: exposure propensity and the
/// outcome probabilities without and with exposure.
struct CubePoint {
    double pi = 0.5;
    double r0 = 0.5;
    double r1 = 0.5;

    /// (1-pi) r0 + pi r1.
    double expected_risk() const noexcept { return (1.0 - pi) * r0 + pi * r1; }
};

/// Regular partition of (0,1)^3 represented by its cell centroids.
///
/// Cell (i, j, l) has centroid ((i+0.5)/n_pi, (j+0.5)/n_r0, (l+0.5)/n_r1) and
/// flat index i + n_pi * (j + n_r0 * l): pi varies fastest, then r0, then r1.
class Grid {
public:
    Grid(std::size_t n_pi, std::size_t n_r0, std::size_t n_r1);

    std::size_t n_pi() const noexcept { return n_pi_; }
    std::size_t n_r0() const noexcept { return n_r0_; }
    std::size_t n_r1() const noexcept { return n_r1_; }
    std::size_t size() const noexcept { return cells_.size(); }

    const CubePoint& operator[](std::size_t k) const { return cells_[k]; }
    std::span<const CubePoint> cells() const noexcept { return cells_; }

    std::size_t index(std::size_t i, std::size_t j, std::size_t l) const noexcept {
        return i + n_pi_ * (j + n_r0_ * l);
    }

private:
    std::size_t n_pi_;
    std::size_t n_r0_;
    std::size_t n_r1_;
    std::vector<CubePoint> cells_;
};

/// Throws InvalidInput if any axis count is zero.
Grid build_grid(std::size_t n_pi, std::size_t n_r0, std::size_t n_r1);

inline Grid build_grid(std::size_t n) { return build_grid(n, n, n); }

/// Multiplies every axis count by an odd factor >= 3 so that each coarse
/// centroid is also a fine centroid.
Grid refine(const Grid& grid, std::size_t factor);

/// Flat index in `fine` of the centroid that coincides with coarse cell k,
/// where fine = refine(coarse, factor).
std::size_t refined_index(const Grid& coarse, std::size_t k, std::size_t factor);

/// Point masses at the centroids of a shared grid.
class DiscreteDistribution {
public:
    /// Throws InvalidInput on a length mismatch, a negative mass, or a total
    /// mass further than 1e-8 from one.
    DiscreteDistribution(std::shared_ptr<const Grid> grid, std::vector<double> masses);

    static DiscreteDistribution uniform(std::shared_ptr<const Grid> grid);

    const Grid& grid() const noexcept { return *grid_; }
    const std::shared_ptr<const Grid>& grid_ptr() const noexcept { return grid_; }
    std::span<const double> masses() const noexcept { return masses_; }

    /// Sum over cells of mass * f(centroid).
    double integrate(const std::function<double(const CubePoint&)>& f) const;

    /// Same distribution expressed on refine(grid(), factor).
    DiscreteDistribution embed(std::shared_ptr<const Grid> fine, std::size_t factor) const;

private:
    std::shared_ptr<const Grid> grid_;
    std::vector<double> masses_;
};

/// Sum_k masses[k] * f(grid[k]); throws InvalidInput on length mismatch.
double integrate(const Grid& grid, std::span<const double> masses,
                 const std::function<double(const CubePoint&)>& f);

}  // namespace twinbounds
