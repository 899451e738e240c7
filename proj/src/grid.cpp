#include "nlc/grid.hpp"

#include <cmath>

#include <fmt/format.h>

#include "nlc/errors.hpp"

namespace nlc {

Grid::Grid(int nx, int ny, double lx) : nx_(nx), ny_(ny), h_(lx / nx) {
    if (nx < 4 || ny < 4)
        throw ConfigError(fmt::format("grid needs nx, ny >= 4 (got {} x {})", nx, ny));
    if (!(lx > 0.0) || !std::isfinite(lx))
        throw ConfigError(fmt::format("domain length must be positive (got {})", lx));
}

Grid::Grid(int nx, int ny, double lx, double ly) : Grid(nx, ny, lx) {
    const double hy = ly / ny;
    if (!(ly > 0.0) || std::abs(hy - h_) > 1e-12 * h_)
        throw ConfigError(fmt::format("cells must be square: lx/nx = {} but ly/ny = {}", h_, hy));
}

}  // namespace nlc
