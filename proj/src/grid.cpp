#include "twinbounds/grid.hpp"

#include "twinbounds/error.hpp"

#include <cmath>
#include <string>

namespace twinbounds {

Grid::Grid(std::size_t n_pi, std::size_t n_r0, std::size_t n_r1)
    : n_pi_(n_pi), n_r0_(n_r0), n_r1_(n_r1) {
    if (n_pi == 0 || n_r0 == 0 || n_r1 == 0) {
        throw Error(ErrorKind::InvalidInput, "grid axis counts must be >= 1");
    }
    cells_.reserve(n_pi * n_r0 * n_r1);
    for (std::size_t l = 0; l < n_r1; ++l) {
        const double r1 = (static_cast<double>(l) + 0.5) / static_cast<double>(n_r1);
        for (std::size_t j = 0; j < n_r0; ++j) {
            const double r0 = (static_cast<double>(j) + 0.5) / static_cast<double>(n_r0);
            for (std::size_t i = 0; i < n_pi; ++i) {
                const double pi = (static_cast<double>(i) + 0.5) / static_cast<double>(n_pi);
                cells_.push_back({pi, r0, r1});
            }
        }
    }
}

Grid build_grid(std::size_t n_pi, std::size_t n_r0, std::size_t n_r1) {
    return Grid(n_pi, n_r0, n_r1);
}

Grid refine(const Grid& grid, std::size_t factor) {
    if (factor < 3 || factor % 2 == 0) {
        throw Error(ErrorKind::InvalidInput,
                    "refinement factor must be an odd integer >= 3, got " + std::to_string(factor));
    }
    return Grid(grid.n_pi() * factor, grid.n_r0() * factor, grid.n_r1() * factor);
}

std::size_t refined_index(const Grid& coarse, std::size_t k, std::size_t factor) {
    const std::size_t i = k % coarse.n_pi();
    const std::size_t j = (k / coarse.n_pi()) % coarse.n_r0();
    const std::size_t l = k / (coarse.n_pi() * coarse.n_r0());
    const std::size_t mid = (factor - 1) / 2;
    const std::size_t fine_pi = coarse.n_pi() * factor;
    const std::size_t fine_r0 = coarse.n_r0() * factor;
    return (i * factor + mid) + fine_pi * ((j * factor + mid) + fine_r0 * (l * factor + mid));
}

DiscreteDistribution::DiscreteDistribution(std::shared_ptr<const Grid> grid, std::vector<double> masses)
    : grid_(std::move(grid)), masses_(std::move(masses)) {
    if (!grid_ || masses_.size() != grid_->size()) {
        throw Error(ErrorKind::InvalidInput, "distribution mass count does not match grid size");
    }
    double total = 0.0;
    for (double m : masses_) {
        if (!(m >= 0.0)) {
            throw Error(ErrorKind::InvalidInput, "distribution masses must be nonnegative");
        }
        total += m;
    }
    if (std::abs(total - 1.0) > 1e-8) {
        throw Error(ErrorKind::InvalidInput, "distribution masses must sum to 1");
    }
}

DiscreteDistribution DiscreteDistribution::uniform(std::shared_ptr<const Grid> grid) {
    const std::size_t n = grid->size();
    return DiscreteDistribution(std::move(grid), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double DiscreteDistribution::integrate(const std::function<double(const CubePoint&)>& f) const {
    return twinbounds::integrate(*grid_, masses_, f);
}

DiscreteDistribution DiscreteDistribution::embed(std::shared_ptr<const Grid> fine,
                                                 std::size_t factor) const {
    if (fine->n_pi() != grid_->n_pi() * factor || fine->n_r0() != grid_->n_r0() * factor ||
        fine->n_r1() != grid_->n_r1() * factor) {
        throw Error(ErrorKind::InvalidInput, "embed: fine grid is not a refinement by the given factor");
    }
    std::vector<double> fine_masses(fine->size(), 0.0);
    for (std::size_t k = 0; k < masses_.size(); ++k) {
        fine_masses[refined_index(*grid_, k, factor)] = masses_[k];
    }
    return DiscreteDistribution(std::move(fine), std::move(fine_masses));
}

double integrate(const Grid& grid, std::span<const double> masses,
                 const std::function<double(const CubePoint&)>& f) {
    if (masses.size() != grid.size()) {
        throw Error(ErrorKind::InvalidInput, "integrate: mass count does not match grid size");
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < masses.size(); ++k) {
        if (masses[k] != 0.0) acc += masses[k] * f(grid[k]);
    }
    return acc;
}

}  // namespace twinbounds
