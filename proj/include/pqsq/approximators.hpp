#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pqsq/data.hpp"
#include "pqsq/majorant.hpp"
#include "pqsq/potential.hpp"

namespace pqsq {

// Sum over coordinates of u(x^k - y^k).
double pqsq_error(const std::vector<double>& x, const std::vector<double>& y,
                  const PotentialSpec& spec);

struct MeanOptions {
    std::vector<double> init;  // empty: arithmetic mean
    double tol = 1e-10;        // infinity-norm change between iterates
    int max_iter = 1000;
};

struct MeanResult {
    std::vector<double> point;
    std::vector<double> objective_trace;
    int iterations = 0;
    // Coordinates whose update denominator vanished in the final pass
    // (every point trimmed there); the previous value was retained.
    std::vector<std::size_t> stalled_coordinates;
};

// Reweighting fixed-point iteration for the potential-minimizing center.
// Converges to a local minimum that depends on the initial point.
MeanResult pqsq_mean(const DataMatrix& data, const PotentialSpec& spec,
                     const MeanOptions& opts = {});

struct KMeansOptions {
    // Used by the first restart when nonempty; further restarts seed
    // centroids at randomly chosen distinct data points.
    std::vector<std::vector<double>> init_centroids;
    int restarts = 5;
    std::uint64_t seed = 0;
    int max_iter = 500;
    MeanOptions mean;  // inner centroid solve; init is ignored (warm start)
};

struct ClusterModel {
    std::vector<std::vector<double>> centroids;
    std::vector<int> labels;  // 1-based cluster ids
    double total_error = 0.0;
    std::vector<double> objective_trace;  // assignment/update interleaved
    int iterations = 0;
    int chosen_restart = 0;
    std::uint64_t seed = 0;
};

// Alternating assignment (smallest potential error, lowest index on ties)
// and centroid update (pqsq_mean warm-started at the current centroid, so
// the total error never increases). Empty clusters are reseeded at the
// point with the largest error to its centroid.
ClusterModel pqsq_kmeans(const DataMatrix& data, std::size_t k, const PotentialSpec& spec,
                         const KMeansOptions& opts = {});

struct Pc1Options {
    std::vector<double> init_v;   // empty: L2 first principal component
    std::vector<double> center;   // empty: pqsq_mean of the data
    double tol = 1e-8;            // infinity-norm change of the direction
    int max_iter = 1000;
    // Update order within one pass. With the simultaneous order the
    // direction update reads the projections of the previous pass; the
    // sequential order feeds the fresh projections into it, which keeps
    // the objective provably nonincreasing. Fixed points are identical.
    bool sequential_updates = true;
};

struct Pc1Result {
    std::vector<double> v;       // unit direction
    std::vector<double> center;  // the center actually used
    std::vector<double> nu;      // per-point projections onto v
    double error = 0.0;          // potential objective at the fit
    std::vector<double> objective_trace;
    int iterations = 0;
};

// One principal direction: alternate interval assignment, projection
// update and direction update until the direction stalls or the interval
// assignments repeat. Point weights are not used here.
Pc1Result fit_pc1(const DataMatrix& data, const PotentialSpec& spec,
                  const Pc1Options& opts = {});

struct PcaOptions {
    int restarts = 5;
    std::uint64_t seed = 0;
    double tol = 1e-8;
    int max_iter = 1000;
    bool sequential_updates = true;
    // Rebuild the interval thresholds from the residual columns before
    // each component (ignored when the config pins explicit thresholds).
    bool recompute_intervals = true;
    bool keep_projections = true;
};

struct PcaModel {
    std::vector<std::vector<double>> components;   // unit vectors
    std::vector<double> center;
    std::vector<std::vector<double>> projections;  // per component, length N
    std::vector<double> component_error;           // objective after each component
    std::vector<int> chosen_restart;
    std::uint64_t seed = 0;
    // config echo
    std::string majorant_name;
    double majorant_param = 0.0;
    IntervalConfig interval_config;
    int restarts = 0;
    bool recompute_intervals = true;

    std::size_t n_components() const { return components.size(); }
    std::size_t dim() const { return center.size(); }
};

// Deflation: fit one direction on the residuals, subtract its
// projections, repeat. Per component the best of `restarts` starts is
// kept (first start: L2 PC1 of the residuals; the rest: data vectors
// drawn by the seeded generator). Components are not orthogonal in
// general for non-quadratic potentials.
PcaModel fit_pca(const DataMatrix& data, std::size_t n_components, const Majorant& majorant,
                 const IntervalConfig& cfg, const PcaOptions& opts = {});

// Same with a frozen spec for every component.
PcaModel fit_pca(const DataMatrix& data, std::size_t n_components, const PotentialSpec& spec,
                 const PcaOptions& opts = {});

// P(x_i) = sum_j nu_ij V_j + center. The model must carry projections;
// n_rows is only needed for a model with zero components.
DataMatrix reconstruct(const PcaModel& model);
DataMatrix reconstruct(const PcaModel& model, const std::vector<double>& center);
DataMatrix reconstruct(const PcaModel& model, const std::vector<double>& center,
                       std::size_t n_rows);

// Thresholds for every column of the data under one interval config.
PotentialSpec build_potential_for_data(const Majorant& majorant, const DataMatrix& data,
                                       const IntervalConfig& cfg);

}  // namespace pqsq
