#include "sis/metrics.hpp"

namespace sis {

RecoveryStats delta_stats(const std::vector<Point3>& est,
                          const std::vector<Point3>& truth, double delta_mm) {
    if (!(delta_mm > 0)) throw ConfigError("delta_stats: delta_mm must be > 0");
    RecoveryStats stats;
    stats.delta_mm = delta_mm;
    stats.n_estimated = static_cast<int>(est.size());
    stats.n_true = static_cast<int>(truth.size());

    if (est.empty() && truth.empty()) {
        stats.precision = 1.0;
        stats.recall = 1.0;
        return stats;
    }
    if (est.empty()) {
        stats.precision = 1.0;
        stats.recall = 0.0;
        return stats;
    }
    if (truth.empty()) {
        stats.precision = 0.0;
        stats.recall = 1.0;
        return stats;
    }

    const auto matched = [delta_mm](const Point3& p, const std::vector<Point3>& set) {
        for (const auto& q : set)
            if ((p - q).norm() <= delta_mm) return true;
        return false;
    };
    int hits = 0;
    for (const auto& p : est)
        if (matched(p, truth)) ++hits;
    stats.precision = static_cast<double>(hits) / est.size();
    hits = 0;
    for (const auto& q : truth)
        if (matched(q, est)) ++hits;
    stats.recall = static_cast<double>(hits) / truth.size();
    return stats;
}

AggregateSummary summarize(const std::vector<RunResult>& runs) {
    if (runs.empty()) throw ConfigError("summarize: empty run list");
    AggregateSummary out;
    int zero = 0, one = 0, two = 0, more = 0;
    for (const auto& run : runs) {
        out.mean_lambda_ratio += run.lambda_ratio;
        out.mean_explained_variance += run.explained_variance;
        out.mean_n_sources += run.n_sources;
        if (run.n_sources == 0) ++zero;
        else if (run.n_sources == 1) ++one;
        else if (run.n_sources == 2) ++two;
        else ++more;
    }
    const double n = static_cast<double>(runs.size());
    out.mean_lambda_ratio /= n;
    out.mean_explained_variance /= n;
    out.mean_n_sources /= n;
    out.pct_zero = 100.0 * zero / n;
    out.pct_one = 100.0 * one / n;
    out.pct_two = 100.0 * two / n;
    out.pct_more = 100.0 * more / n;
    return out;
}

} // namespace sis
