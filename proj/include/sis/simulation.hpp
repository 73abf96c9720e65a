#pragma once

#include "sis/types.hpp"

#include <cstdint>
#include <tuple>

namespace sis {

/// Synthetic whitened forward problem with planted block-sparse sources.
/// Sensors sit on a unit sphere; sources live on a spherical patch grid with
/// positions in millimeters; nearby source columns are spatially correlated.
struct SimulationSpec {
    int N = 50;
    int S = 200;
    int O = 3;
    int T = 20;
    int n_active = 2;
    double amplitude = 1.0;
    double sigma = 1.0;
    std::uint64_t seed = 0;       // structure: G, positions, truth
    std::uint64_t noise_seed = 1; // noise matrix E only
    double min_separation_mm = 0.0;
    double correlation_mm = 20.0; // Gaussian kernel length scale

    void validate() const;
};

struct SimulationTruth {
    std::vector<int> active_indices;
    std::vector<Point3> positions; // of the planted sources
    Matrix X_true;                 // P x T
    Matrix M_clean;                // N x T, G * X_true
};

/// Fully seeded generation of (design, measurements, truth).
std::tuple<BlockDesign, Measurements, SimulationTruth>
simulate(const SimulationSpec& spec);

/// Desk-scale default: N=50, S=200, O=3, T=20, two planted sources at least
/// 60 mm apart, sigma = 1.
SimulationSpec default_scenario();

} // namespace sis
