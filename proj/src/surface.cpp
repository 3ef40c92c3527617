#include "bondsym/surface.hpp"

#include <cmath>

namespace bondsym {

Grid Grid::uniform(double x_lo, double x_hi, std::size_t nx, double t_lo, double t_hi,
                   std::size_t nt) {
    Grid g;
    g.x_nodes.resize(nx);
    g.t_nodes.resize(nt);
    for (std::size_t i = 0; i < nx; ++i)
        g.x_nodes[i] = x_lo + (x_hi - x_lo) * double(i) / double(nx - 1);
    for (std::size_t n = 0; n < nt; ++n)
        g.t_nodes[n] = t_lo + (t_hi - t_lo) * double(n) / double(nt - 1);
    g.validate();
    return g;
}

Grid Grid::log_uniform(double x_lo, double x_hi, std::size_t nx, double t_lo, double t_hi,
                       std::size_t nt) {
    if (x_lo <= 0.0) throw std::invalid_argument("log grid needs x_lo > 0");
    Grid g;
    g.x_nodes.resize(nx);
    g.t_nodes.resize(nt);
    double l_lo = std::log(x_lo), l_hi = std::log(x_hi);
    for (std::size_t i = 0; i < nx; ++i)
        g.x_nodes[i] = std::exp(l_lo + (l_hi - l_lo) * double(i) / double(nx - 1));
    for (std::size_t n = 0; n < nt; ++n)
        g.t_nodes[n] = t_lo + (t_hi - t_lo) * double(n) / double(nt - 1);
    g.validate();
    return g;
}

double Grid::dt() const {
    if (t_nodes.size() < 2) throw std::invalid_argument("grid needs at least 2 t nodes");
    return t_nodes[1] - t_nodes[0];
}

void Grid::validate() const {
    if (x_nodes.size() < 3 || t_nodes.size() < 3)
        throw std::invalid_argument("grid needs at least 3 nodes per axis");
    if (x_nodes.front() <= 0.0) throw std::invalid_argument("grid needs x_min > 0");
    for (std::size_t i = 1; i < x_nodes.size(); ++i)
        if (x_nodes[i] <= x_nodes[i - 1])
            throw std::invalid_argument("x nodes must be strictly increasing");
    double h = t_nodes[1] - t_nodes[0];
    for (std::size_t n = 1; n < t_nodes.size(); ++n)
        if (std::fabs((t_nodes[n] - t_nodes[n - 1]) - h) > 1e-9 * std::fabs(h))
            throw std::invalid_argument("t nodes must be uniform");
}

Surface::Surface(Grid g) : grid(std::move(g)) {
    grid.validate();
    values.assign(grid.nx() * grid.nt(), 0.0);
    mask.assign(grid.nx() * grid.nt(), 1);
}

} // namespace bondsym
