#pragma once

#include <array>
#include <complex>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace hcb {

using SiteIndex = std::int32_t;

/// Anything with per-site hopping and repulsion neighbor lists. Each list
/// holds every undirected bond once per endpoint.
template <class G>
concept BondGraph = requires(const G& g, std::size_t i) {
    { g.size() } -> std::convertible_to<std::size_t>;
    { g.hop_neighbors(i) };
    { g.rep_neighbors(i) };
};

enum class Axis { in_plane_a1, stacking };

enum class Sublattice : std::uint8_t { A = 0, B = 1, C = 2 };

/// Stacked triangular lattice of L x L x L sites with periodic boundaries.
///
/// Layers use oblique coordinates (x, y) with primitive vectors at 60 degrees;
/// the six in-plane neighbors of (x, y) are (x+-1, y), (x, y+-1), (x+1, y-1)
/// and (x-1, y+1). Layers are stacked in registry: (x, y, z) bonds to
/// (x, y, z+-1). The sublattice label is (x - y) mod 3, so one step along a1
/// cycles A -> B -> C.
class LatticeGeom {
public:
    static constexpr std::size_t hop_degree = 8;
    static constexpr std::size_t rep_degree = 6;

    /// Throws IncommensurateSize unless L >= 3 and L % 3 == 0.
    explicit LatticeGeom(int L);

    int L() const noexcept { return L_; }
    std::size_t size() const noexcept { return n_sites_; }
    std::size_t layer_size() const noexcept { return static_cast<std::size_t>(L_) * L_; }

    /// The first six entries are the in-plane neighbors (identical to
    /// rep_neighbors), the last two the stacking neighbors (z-1, z+1).
    std::span<const SiteIndex, hop_degree> hop_neighbors(std::size_t i) const noexcept {
        return std::span<const SiteIndex, hop_degree>(hop_.data() + i * hop_degree, hop_degree);
    }
    std::span<const SiteIndex, rep_degree> rep_neighbors(std::size_t i) const noexcept {
        return std::span<const SiteIndex, rep_degree>(hop_.data() + i * hop_degree, rep_degree);
    }

    Sublattice sublattice(std::size_t i) const noexcept { return sublattice_[i]; }
    int layer(std::size_t i) const noexcept { return static_cast<int>(i / layer_size()); }
    /// omega^s(i) with omega = exp(2 pi i / 3).
    std::complex<double> omega_phase(std::size_t i) const noexcept {
        return omega_powers()[static_cast<std::size_t>(sublattice_[i])];
    }

    std::size_t index(int x, int y, int z) const noexcept;
    std::array<int, 3> coords(std::size_t i) const noexcept;

    /// Site reached from i by r steps along the given primitive direction.
    std::size_t displacement_index(std::size_t i, int r, Axis axis) const noexcept;

    static const std::array<std::complex<double>, 3>& omega_powers() noexcept;

private:
    int L_;
    std::size_t n_sites_;
    std::vector<SiteIndex> hop_;
    std::vector<Sublattice> sublattice_;
};

/// Tiny explicit graph used to check the sampler against quadrature.
class TestGraph {
public:
    using Bond = std::pair<SiteIndex, SiteIndex>;

    /// Throws std::invalid_argument on self-bonds, duplicates or
    /// out-of-range endpoints.
    TestGraph(std::size_t site_count, std::vector<Bond> hop_bonds, std::vector<Bond> rep_bonds);

    std::size_t size() const noexcept { return site_count_; }
    const std::vector<Bond>& hop_bonds() const noexcept { return hop_bonds_; }
    const std::vector<Bond>& rep_bonds() const noexcept { return rep_bonds_; }

    std::span<const SiteIndex> hop_neighbors(std::size_t i) const noexcept {
        return {hop_adj_.data() + hop_off_[i], hop_off_[i + 1] - hop_off_[i]};
    }
    std::span<const SiteIndex> rep_neighbors(std::size_t i) const noexcept {
        return {rep_adj_.data() + rep_off_[i], rep_off_[i + 1] - rep_off_[i]};
    }

private:
    std::size_t site_count_;
    std::vector<Bond> hop_bonds_;
    std::vector<Bond> rep_bonds_;
    std::vector<std::size_t> hop_off_, rep_off_;
    std::vector<SiteIndex> hop_adj_, rep_adj_;
};

}  // namespace hcb
