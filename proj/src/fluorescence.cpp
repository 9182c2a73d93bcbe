#include "mollow/fluorescence.hpp"

#include <cmath>
#include <vector>

namespace mollow {
namespace {

constexpr int min_points_above_half = 20;

std::vector<std::size_t> local_maxima(std::vector<double> const& g) {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i + 1 < g.size(); ++i)
        if (g[i] > g[i - 1] && g[i] >= g[i + 1])
            out.push_back(i);
    return out;
}

double crossing(std::vector<double> const& x, std::vector<double> const& g, std::size_t i, std::size_t j, double h) {
    return x[i] + (h - g[i]) * (x[j] - x[i]) / (g[j] - g[i]);
}

} // namespace

double linewidth(Spectrum<double> const& s, Peak peak) {
    auto const& x = s.nu;
    auto const& g = s.values;
    auto const maxima = local_maxima(g);
    if (maxima.empty())
        throw Error{ErrorKind::PeakNotFound, "linewidth: spectrum has no local maximum"};

    std::size_t central = maxima.front();
    for (auto i : maxima)
        if (std::abs(x[i]) < std::abs(x[central]))
            central = i;

    std::size_t p = central;
    if (peak != Peak::Central) {
        bool found = false;
        for (auto i : maxima) {
            bool const side = peak == Peak::Red ? i < central : i > central;
            if (side && (!found || g[i] > g[p])) {
                p = i;
                found = true;
            }
        }
        if (!found)
            throw Error{ErrorKind::PeakNotFound,
                        std::string{"linewidth: no "} + (peak == Peak::Red ? "red" : "blue") + " side peak"};
    }

    auto const h = g[p] / 2;
    std::size_t lo = p, hi = p;
    while (lo > 0 && g[lo] > h)
        --lo;
    while (hi + 1 < g.size() && g[hi] > h)
        ++hi;
    if (g[lo] > h || g[hi] > h)
        throw Error{ErrorKind::PeakNotFound, "linewidth: half maximum not reached inside the grid"};
    if (static_cast<int>(hi - lo) - 1 < min_points_above_half)
        throw Error{ErrorKind::PeakNotFound, "linewidth: peak under-resolved (fewer than 20 points above half maximum)"};
    return crossing(x, g, hi - 1, hi, h) - crossing(x, g, lo, lo + 1, h);
}

} // namespace mollow
