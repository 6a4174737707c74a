#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ccbif/errors.hpp"
#include "ccbif/euler_ring.hpp"
#include "ccbif/families.hpp"
#include "ccbif/parallel.hpp"
#include "ccbif/spectral.hpp"

namespace ccbif {

/// Degree of an equivariant gradient map at a nondegenerate free orbit:
/// a single Euler-ring coordinate carrying (-1)^(Morse index of B).
struct DegreeValue {
    EulerRingElement element;
};

namespace detail {

inline EulerRingElement degree_from_morse(int morse_b) {
    return EulerRingElement::single(kFreeOrbitLabel, (morse_b % 2 == 0) ? 1 : -1);
}

} // namespace detail

/// Degree at a family point. Requires the full Hessian kernel to be exactly
/// the orbit tangent and the isotropy to be trivial.
inline DegreeValue degree_at(const FamilyPoint& point, double tau_zero = kTauZero) {
    const AugmentedPotentialContext ctx(point.masses, point.lambda);
    const Eigen::MatrixXd hessian = augmented_hessian(point.configuration, ctx);
    const SpectralReport full = spectral_report(hessian, tau_zero);
    if (full.kernel_dim != 1)
        throw DegenerateOrbit("degree undefined: Hessian kernel dimension " +
                              std::to_string(full.kernel_dim) + ", expected 1");
    if (!has_trivial_isotropy(point.configuration))
        throw Error("degree implemented only for orbits with trivial isotropy");
    const RestrictedHessian restricted =
        restrict_to_orbit_complement(hessian, orbit_tangent(point.configuration));
    const SpectralReport reduced = spectral_report(restricted.b, tau_zero);
    return {detail::degree_from_morse(reduced.morse_index)};
}

/// Bifurcation index of a parameter segment: degree at the right endpoint
/// minus degree at the left. Nonzero forces a global bifurcation inside.
inline EulerRingElement bifurcation_index(const FamilyPoint& left, const FamilyPoint& right,
                                          double tau_zero = kTauZero) {
    return degree_at(right, tau_zero).element - degree_at(left, tau_zero).element;
}

enum class EventClass { Local, Global, Candidate };

inline const char* to_string(EventClass c) {
    switch (c) {
        case EventClass::Local: return "local";
        case EventClass::Global: return "global";
        case EventClass::Candidate: return "candidate";
    }
    return "?";
}

/// A localized degeneracy of the family, bracketed between nondegenerate
/// parameters, with the Morse data that classifies it.
struct BifurcationEvent {
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    int left_morse = 0;  // Morse index of B at bracket_lo
    int right_morse = 0; // Morse index of B at bracket_hi
    int kernel_jump = 1; // max full-Hessian kernel dimension observed inside
    EventClass classification = EventClass::Candidate;
    EulerRingElement bif_index;
    bool merged = false; // events below refinement resolution were merged
};

/// Spectral data at one scan grid point. The family point is kept so grid
/// dumps can reproduce the configuration exactly.
struct ScanSample {
    FamilyPoint point;
    int morse_b = 0;
    int kernel_dim = 0;
    double det_b = 0.0;
    double min_abs_eig = 0.0;
};

using Family1D = std::function<FamilyPoint(double)>;

struct ScanOptions {
    int n_steps = 256; // grid intervals; n_steps+1 evaluations
    double tau_zero = kTauZero;
    int refine_bits = 20; // brackets refined to range/2^refine_bits
    int threads = 0;      // 0 = CC_BIF_THREADS or hardware
};

struct ScanResult {
    std::vector<ScanSample> grid;
    std::vector<BifurcationEvent> events;
    std::vector<std::string> warnings;
    bool grid_too_coarse = false;
};

namespace detail {

inline ScanSample evaluate_scan_sample(const Family1D& family, double parameter,
                                       double tau_zero) {
    FamilyPoint point = family(parameter);
    const AugmentedPotentialContext ctx(point.masses, point.lambda);
    const Eigen::MatrixXd hessian = augmented_hessian(point.configuration, ctx);
    const SpectralReport full = spectral_report(hessian, tau_zero);
    const RestrictedHessian restricted =
        restrict_to_orbit_complement(hessian, orbit_tangent(point.configuration));
    const Eigen::VectorXd wb = symmetric_eigenvalues(restricted.b);
    const double thr = tau_zero * std::max(1.0, wb.cwiseAbs().maxCoeff());
    ScanSample s{std::move(point), 0, full.kernel_dim, 1.0, 0.0};
    for (Eigen::Index i = 0; i < wb.size(); ++i) {
        s.det_b *= wb[i];
        if (wb[i] < -thr) ++s.morse_b;
    }
    double min_abs = std::numeric_limits<double>::infinity();
    for (double v : full.eigenvalues) min_abs = std::min(min_abs, std::abs(v));
    s.min_abs_eig = min_abs;
    return s;
}

inline int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

inline bool samples_differ(const ScanSample& a, const ScanSample& b) {
    return a.morse_b != b.morse_b || sign_of(a.det_b) != sign_of(b.det_b);
}

} // namespace detail

/// Scans a one-parameter family for degeneracies: evaluates spectra on the
/// grid, brackets every det(B) sign change and every Morse-index change by
/// bisection (leftmost change), and classifies each bracket.
///
///   parity change        -> global  (degree changes)
///   index change, same parity -> local (Conley-type index change)
///   kernel growth only   -> candidate (necessary condition alone)
inline ScanResult scan_family(const Family1D& family, double lo, double hi,
                              const ScanOptions& options = {}) {
    if (!(lo < hi)) throw Error("scan range is empty");
    if (options.n_steps < 2) throw Error("scan needs at least two steps");
    const int n = options.n_steps;
    const double step = (hi - lo) / n;
    const double resolution = (hi - lo) / std::ldexp(1.0, options.refine_bits);

    ScanResult result;
    result.grid.resize(n + 1);
    std::vector<ScanSample>& grid = result.grid;
    parallel_for_index(n + 1, options.threads, [&](int k) {
        grid[k] = detail::evaluate_scan_sample(family, lo + k * step, options.tau_zero);
    });

    auto param_of = [&](const ScanSample& s) { return s.point.parameter[0]; };

    std::vector<char> interval_changed(n, 0);
    for (int k = 0; k < n; ++k) {
        const int dm = grid[k + 1].morse_b - grid[k].morse_b;
        if (std::abs(dm) >= 2 && (dm % 2 != 0)) {
            result.grid_too_coarse = true;
            result.warnings.push_back(
                "grid too coarse: Morse index jumps by " + std::to_string(dm) + " with a parity "
                "change across [" + std::to_string(param_of(grid[k])) + ", " +
                std::to_string(param_of(grid[k + 1])) + "]; a pair of events may be unresolved");
        }
        interval_changed[k] = detail::samples_differ(grid[k], grid[k + 1]);
    }

    std::vector<BifurcationEvent> events;
    for (int k = 0; k < n; ++k) {
        if (!interval_changed[k]) continue;
        double a = param_of(grid[k]);
        double b = param_of(grid[k + 1]);
        ScanSample sa = grid[k];
        ScanSample sb = grid[k + 1];
        int kernel_seen = std::max(sa.kernel_dim, sb.kernel_dim);
        while (b - a > resolution) {
            const double mid = 0.5 * (a + b);
            ScanSample sm = detail::evaluate_scan_sample(family, mid, options.tau_zero);
            kernel_seen = std::max(kernel_seen, sm.kernel_dim);
            if (detail::samples_differ(sa, sm)) {
                b = mid;
                sb = std::move(sm);
            } else {
                a = mid;
                sa = std::move(sm);
            }
        }
        // endpoints of the reported bracket must be nondegenerate; back off
        // within the grid interval if the threshold classifies them otherwise
        double widen = resolution;
        while (sa.kernel_dim != 1 && a - widen >= param_of(grid[k])) {
            a -= widen;
            widen *= 2.0;
            sa = detail::evaluate_scan_sample(family, a, options.tau_zero);
        }
        widen = resolution;
        while (sb.kernel_dim != 1 && b + widen <= param_of(grid[k + 1])) {
            b += widen;
            widen *= 2.0;
            sb = detail::evaluate_scan_sample(family, b, options.tau_zero);
        }

        BifurcationEvent event;
        event.bracket_lo = a;
        event.bracket_hi = b;
        event.left_morse = sa.morse_b;
        event.right_morse = sb.morse_b;
        event.kernel_jump = kernel_seen;
        const bool parity_flip = ((sa.morse_b ^ sb.morse_b) & 1) != 0;
        if (parity_flip)
            event.classification = EventClass::Global;
        else if (sa.morse_b != sb.morse_b)
            event.classification = EventClass::Local;
        else
            event.classification = EventClass::Candidate;
        event.bif_index = detail::degree_from_morse(sb.morse_b) -
                          detail::degree_from_morse(sa.morse_b);
        events.push_back(std::move(event));
    }

    // degenerate grid points away from any bracketed change are candidates:
    // the necessary condition holds but no index moved
    for (int k = 0; k <= n; ++k) {
        if (grid[k].kernel_dim <= 1) continue;
        const bool covered = (k > 0 && interval_changed[k - 1]) || (k < n && interval_changed[k]);
        if (covered) continue;
        if (k == 0 || k == n) {
            result.warnings.push_back("degenerate orbit at scan endpoint " +
                                      std::to_string(param_of(grid[k])));
            continue;
        }
        BifurcationEvent event;
        event.bracket_lo = param_of(grid[k - 1]);
        event.bracket_hi = param_of(grid[k + 1]);
        event.left_morse = grid[k - 1].morse_b;
        event.right_morse = grid[k + 1].morse_b;
        event.kernel_jump = grid[k].kernel_dim;
        event.classification = EventClass::Candidate;
        events.push_back(std::move(event));
    }
    std::sort(events.begin(), events.end(),
              [](const BifurcationEvent& x, const BifurcationEvent& y) {
                  return x.bracket_lo < y.bracket_lo;
              });

    // merge events indistinguishable at the refinement resolution
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (result.events.empty() ||
            events[i].bracket_lo - result.events.back().bracket_hi > resolution) {
            result.events.push_back(events[i]);
            continue;
        }
        BifurcationEvent& merged = result.events.back();
        result.warnings.push_back("merged events closer than the refinement resolution near " +
                                  std::to_string(merged.bracket_hi));
        merged.bracket_hi = events[i].bracket_hi;
        merged.right_morse = events[i].right_morse;
        merged.kernel_jump = std::max(merged.kernel_jump, events[i].kernel_jump);
        merged.merged = true;
        const bool parity_flip = ((merged.left_morse ^ merged.right_morse) & 1) != 0;
        merged.classification = parity_flip ? EventClass::Global
                                : merged.left_morse != merged.right_morse ? EventClass::Local
                                                                          : EventClass::Candidate;
        merged.bif_index = detail::degree_from_morse(merged.right_morse) -
                           detail::degree_from_morse(merged.left_morse);
    }
    return result;
}

/// Componentwise sum of the bifurcation indices of a scan. Reported as a
/// diagnostic; closed windows with fully tracked components would sum to
/// zero, which a finite scan cannot certify.
inline EulerRingElement index_sum(const std::vector<BifurcationEvent>& events) {
    EulerRingElement total;
    for (const auto& e : events) total += e.bif_index;
    return total;
}

// ---------------------------------------------------------------------------
// Two-parameter region maps.
// ---------------------------------------------------------------------------

using Family2D = std::function<FamilyPoint(double, double)>;

struct MapOptions {
    int nx = 64;
    int ny = 64;
    double tau_zero = kTauZero;
    int threads = 0;
};

struct MapCell {
    double m0 = 0.0;
    double m1 = 0.0;
    bool excluded = false;   // family undefined here (invalid masses)
    int morse_index = -1;    // of the full Hessian
    bool kernel_flag = false; // full-Hessian kernel dimension > 1
    double det_b = 0.0;
    int region = -1;
};

struct MapRegion {
    int id = -1;
    int morse_index = 0;
    int cell_count = 0;
    double sample_m0 = 0.0; // an interior cell when one exists
    double sample_m1 = 0.0;
};

/// Aggregated boundary between two Morse-index values; edges whose indices
/// differ in parity carry a degree change, hence a global bifurcation.
struct MapBoundary {
    int morse_low = 0;
    int morse_high = 0;
    int edge_count = 0;
    bool parity_flip = false;
    bool global_flag = false;
};

struct RegionMap {
    int nx = 0, ny = 0;
    double lo0 = 0.0, hi0 = 0.0, lo1 = 0.0, hi1 = 0.0;
    std::vector<MapCell> cells; // row-major, index = j * nx + i
    std::vector<MapRegion> regions;
    std::vector<MapBoundary> boundaries;
};

/// Evaluates the Morse index over an (m0, m1) grid, labels connected
/// constant-index regions, and flags the boundaries whose index parity
/// changes. Cells where the family is undefined are excluded, not fatal.
inline RegionMap map_parameter_plane(const Family2D& family, double lo0, double hi0, double lo1,
                                     double hi1, const MapOptions& options = {}) {
    if (!(lo0 < hi0) || !(lo1 < hi1)) throw Error("map bounds are empty");
    if (options.nx < 2 || options.ny < 2) throw Error("map grid must be at least 2x2");
    RegionMap map;
    map.nx = options.nx;
    map.ny = options.ny;
    map.lo0 = lo0;
    map.hi0 = hi0;
    map.lo1 = lo1;
    map.hi1 = hi1;
    map.cells.resize(static_cast<std::size_t>(options.nx) * options.ny);

    const double d0 = (hi0 - lo0) / (options.nx - 1);
    const double d1 = (hi1 - lo1) / (options.ny - 1);
    parallel_for_index(options.nx * options.ny, options.threads, [&](int idx) {
        const int i = idx % options.nx;
        const int j = idx / options.nx;
        MapCell& cell = map.cells[idx];
        cell.m0 = lo0 + i * d0;
        cell.m1 = lo1 + j * d1;
        std::optional<FamilyPoint> point;
        try {
            point = family(cell.m0, cell.m1);
        } catch (const InvalidMasses&) {
            cell.excluded = true;
            return;
        }
        const AugmentedPotentialContext ctx(point->masses, point->lambda);
        const Eigen::MatrixXd hessian = augmented_hessian(point->configuration, ctx);
        const SpectralReport full = spectral_report(hessian, options.tau_zero);
        cell.morse_index = full.morse_index;
        cell.kernel_flag = full.kernel_dim > 1;
        const RestrictedHessian restricted =
            restrict_to_orbit_complement(hessian, orbit_tangent(point->configuration));
        const Eigen::VectorXd wb = symmetric_eigenvalues(restricted.b);
        cell.det_b = 1.0;
        for (Eigen::Index t = 0; t < wb.size(); ++t) cell.det_b *= wb[t];
    });

    // connected constant-index regions over the 4-neighborhood
    auto at = [&](int i, int j) -> MapCell& { return map.cells[j * options.nx + i]; };
    auto labelable = [](const MapCell& c) { return !c.excluded && !c.kernel_flag; };
    for (int j = 0; j < options.ny; ++j) {
        for (int i = 0; i < options.nx; ++i) {
            MapCell& seed = at(i, j);
            if (!labelable(seed) || seed.region >= 0) continue;
            const int id = static_cast<int>(map.regions.size());
            MapRegion region;
            region.id = id;
            region.morse_index = seed.morse_index;
            std::vector<std::pair<int, int>> stack{{i, j}};
            seed.region = id;
            bool have_interior = false;
            while (!stack.empty()) {
                const auto [ci, cj] = stack.back();
                stack.pop_back();
                ++region.cell_count;
                const std::pair<int, int> nb[4] = {
                    {ci - 1, cj}, {ci + 1, cj}, {ci, cj - 1}, {ci, cj + 1}};
                bool interior = true;
                for (const auto& [ni, nj] : nb) {
                    if (ni < 0 || nj < 0 || ni >= options.nx || nj >= options.ny) {
                        interior = false;
                        continue;
                    }
                    MapCell& next = at(ni, nj);
                    if (!labelable(next) || next.morse_index != region.morse_index) {
                        interior = false;
                        continue;
                    }
                    if (next.region < 0) {
                        next.region = id;
                        stack.emplace_back(ni, nj);
                    }
                }
                if (interior && !have_interior) {
                    have_interior = true;
                    region.sample_m0 = at(ci, cj).m0;
                    region.sample_m1 = at(ci, cj).m1;
                }
            }
            if (!have_interior) {
                region.sample_m0 = seed.m0;
                region.sample_m1 = seed.m1;
            }
            map.regions.push_back(region);
        }
    }

    // aggregate boundary edges by index pair
    std::map<std::pair<int, int>, int> edge_counts;
    for (int j = 0; j < options.ny; ++j) {
        for (int i = 0; i < options.nx; ++i) {
            const MapCell& c = at(i, j);
            if (!labelable(c)) continue;
            const std::pair<int, int> nb[2] = {{i + 1, j}, {i, j + 1}};
            for (const auto& [ni, nj] : nb) {
                if (ni >= options.nx || nj >= options.ny) continue;
                const MapCell& d = at(ni, nj);
                if (!labelable(d) || d.morse_index == c.morse_index) continue;
                ++edge_counts[{std::min(c.morse_index, d.morse_index),
                               std::max(c.morse_index, d.morse_index)}];
            }
        }
    }
    for (const auto& [pair, count] : edge_counts) {
        MapBoundary boundary;
        boundary.morse_low = pair.first;
        boundary.morse_high = pair.second;
        boundary.edge_count = count;
        boundary.parity_flip = ((pair.first ^ pair.second) & 1) != 0;
        boundary.global_flag = boundary.parity_flip;
        map.boundaries.push_back(boundary);
    }
    return map;
}

} // namespace ccbif
