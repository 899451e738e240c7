#pragma once

#include <cstddef>

namespace nlc {

/// Uniform square-cell grid on [0, lx] x [0, ly]. Cell (i, j) has its center
/// at ((i + 1/2) h, (j + 1/2) h); arrays are stored y-outer, x-inner.
class Grid {
public:
    Grid(int nx, int ny, double lx);
    /// Checks that lx / nx and ly / ny agree (square cells).
    Grid(int nx, int ny, double lx, double ly);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double h() const { return h_; }
    double lx() const { return h_ * nx_; }
    double ly() const { return h_ * ny_; }
    double cell_area() const { return h_ * h_; }
    double area() const { return lx() * ly(); }

    std::size_t cells() const { return static_cast<std::size_t>(nx_) * ny_; }
    std::size_t xfaces() const { return static_cast<std::size_t>(nx_ + 1) * ny_; }
    std::size_t yfaces() const { return static_cast<std::size_t>(nx_) * (ny_ + 1); }

    std::size_t cell(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }
    std::size_t xface(int i, int j) const { return static_cast<std::size_t>(j) * (nx_ + 1) + i; }
    std::size_t yface(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }

    double xc(int i) const { return (i + 0.5) * h_; }
    double yc(int j) const { return (j + 0.5) * h_; }
    double xn(int i) const { return i * h_; }
    double yn(int j) const { return j * h_; }

    bool operator==(const Grid& o) const { return nx_ == o.nx_ && ny_ == o.ny_ && h_ == o.h_; }

    /// Refined grid with twice the cells per axis on the same domain.
    Grid refined() const { return Grid(2 * nx_, 2 * ny_, lx()); }

private:
    int nx_;
    int ny_;
    double h_;
};

}  // namespace nlc
