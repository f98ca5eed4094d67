#include "hcb/lattice.hpp"

#include <algorithm>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

#include "hcb/errors.hpp"

namespace hcb {

namespace {

int wrap(int v, int L) {
    v %= L;
    return v < 0 ? v + L : v;
}

void build_csr(std::size_t n, const std::vector<TestGraph::Bond>& bonds,
               std::vector<std::size_t>& off, std::vector<SiteIndex>& adj) {
    std::vector<std::vector<SiteIndex>> lists(n);
    for (auto [i, j] : bonds) {
        lists[static_cast<std::size_t>(i)].push_back(j);
        lists[static_cast<std::size_t>(j)].push_back(i);
    }
    off.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) off[i + 1] = off[i] + lists[i].size();
    adj.clear();
    for (auto& l : lists) adj.insert(adj.end(), l.begin(), l.end());
}

void validate_bonds(std::size_t n, const std::vector<TestGraph::Bond>& bonds, const char* kind) {
    std::set<std::pair<SiteIndex, SiteIndex>> seen;
    for (auto [i, j] : bonds) {
        if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= n || static_cast<std::size_t>(j) >= n)
            throw std::invalid_argument(std::string(kind) + " bond endpoint out of range");
        if (i == j) throw std::invalid_argument(std::string(kind) + " self-bond");
        if (!seen.insert({std::min(i, j), std::max(i, j)}).second)
            throw std::invalid_argument(std::string(kind) + " duplicate bond");
    }
}

}  // namespace

LatticeGeom::LatticeGeom(int L) : L_(L) {
    if (L < 3 || L % 3 != 0)
        throw IncommensurateSize("L=" + std::to_string(L) +
                                 " is incommensurate with three-sublattice order (need a positive multiple of 3)");
    n_sites_ = static_cast<std::size_t>(L) * L * L;
    hop_.resize(n_sites_ * hop_degree);
    sublattice_.resize(n_sites_);

    static constexpr int dx[6] = {1, -1, 0, 0, 1, -1};
    static constexpr int dy[6] = {0, 0, 1, -1, -1, 1};
    for (int z = 0; z < L; ++z) {
        for (int y = 0; y < L; ++y) {
            for (int x = 0; x < L; ++x) {
                const auto i = index(x, y, z);
                auto* nb = hop_.data() + i * hop_degree;
                for (int k = 0; k < 6; ++k)
                    nb[k] = static_cast<SiteIndex>(index(wrap(x + dx[k], L), wrap(y + dy[k], L), z));
                nb[6] = static_cast<SiteIndex>(index(x, y, wrap(z - 1, L)));
                nb[7] = static_cast<SiteIndex>(index(x, y, wrap(z + 1, L)));
                sublattice_[i] = static_cast<Sublattice>(wrap(x - y, 3));
            }
        }
    }
}

std::size_t LatticeGeom::index(int x, int y, int z) const noexcept {
    return static_cast<std::size_t>(x) +
           static_cast<std::size_t>(L_) * (static_cast<std::size_t>(y) + static_cast<std::size_t>(L_) * z);
}

std::array<int, 3> LatticeGeom::coords(std::size_t i) const noexcept {
    const auto L = static_cast<std::size_t>(L_);
    return {static_cast<int>(i % L), static_cast<int>((i / L) % L), static_cast<int>(i / (L * L))};
}

std::size_t LatticeGeom::displacement_index(std::size_t i, int r, Axis axis) const noexcept {
    auto [x, y, z] = coords(i);
    if (axis == Axis::in_plane_a1)
        x = wrap(x + r, L_);
    else
        z = wrap(z + r, L_);
    return index(x, y, z);
}

const std::array<std::complex<double>, 3>& LatticeGeom::omega_powers() noexcept {
    static const std::array<std::complex<double>, 3> w = {
        std::complex<double>(1.0, 0.0),
        std::polar(1.0, 2.0 * std::numbers::pi / 3.0),
        std::polar(1.0, 4.0 * std::numbers::pi / 3.0),
    };
    return w;
}

TestGraph::TestGraph(std::size_t site_count, std::vector<Bond> hop_bonds, std::vector<Bond> rep_bonds)
    : site_count_(site_count), hop_bonds_(std::move(hop_bonds)), rep_bonds_(std::move(rep_bonds)) {
    validate_bonds(site_count_, hop_bonds_, "hop");
    validate_bonds(site_count_, rep_bonds_, "rep");
    build_csr(site_count_, hop_bonds_, hop_off_, hop_adj_);
    build_csr(site_count_, rep_bonds_, rep_off_, rep_adj_);
}

}  // namespace hcb
