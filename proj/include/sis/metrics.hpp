#pragma once

#include "sis/types.hpp"

namespace sis {

/// Active-set recovery statistics within a Euclidean radius (mm).
struct RecoveryStats {
    double delta_mm = 7.0;
    double precision = 0.0;
    double recall = 0.0;
    int n_estimated = 0;
    int n_true = 0;
};

/// Per-run numbers feeding the aggregate summary.
struct RunResult {
    double lambda_ratio = 0.0;      // lambda / lambda_max
    double explained_variance = 0.0;
    int n_sources = 0;              // |active_set|
};

struct AggregateSummary {
    double mean_lambda_ratio = 0.0;
    double mean_explained_variance = 0.0;
    double mean_n_sources = 0.0;
    double pct_zero = 0.0;
    double pct_one = 0.0;
    double pct_two = 0.0;
    double pct_more = 0.0; // > 2 sources
};

/// precision: fraction of estimated positions within delta_mm of some true
/// position; recall: fraction of true positions matched by some estimate.
/// Empty estimate -> precision 1 (vacuous), recall 0; empty truth -> recall 1
/// and precision 0 unless the estimate is also empty (then 1, 1).
RecoveryStats delta_stats(const std::vector<Point3>& est_positions,
                          const std::vector<Point3>& true_positions,
                          double delta_mm);

AggregateSummary summarize(const std::vector<RunResult>& runs);

} // namespace sis
