#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace bondsym {

/// Tensor grid: strictly increasing positive x nodes, uniform t nodes.
struct Grid {
    std::vector<double> x_nodes;
    std::vector<double> t_nodes;

    static Grid uniform(double x_lo, double x_hi, std::size_t nx, double t_lo, double t_hi,
                        std::size_t nt);
    static Grid log_uniform(double x_lo, double x_hi, std::size_t nx, double t_lo,
                            double t_hi, std::size_t nt);

    std::size_t nx() const { return x_nodes.size(); }
    std::size_t nt() const { return t_nodes.size(); }
    double dt() const;
    void validate() const;
};

/// Values u[i][n] at (x_i, t_n) with a validity mask (row-major over t then x:
/// index = n*nx + i, matching the CSV layout).
struct Surface {
    Grid grid;
    std::vector<double> values;
    std::vector<std::uint8_t> mask;

    explicit Surface(Grid g);
    Surface() = default;

    std::size_t index(std::size_t i, std::size_t n) const { return n * grid.nx() + i; }
    double& at(std::size_t i, std::size_t n) { return values[index(i, n)]; }
    double at(std::size_t i, std::size_t n) const { return values[index(i, n)]; }
    bool valid(std::size_t i, std::size_t n) const { return mask[index(i, n)] != 0; }
    void set_valid(std::size_t i, std::size_t n, bool v) { mask[index(i, n)] = v ? 1 : 0; }
};

} // namespace bondsym
