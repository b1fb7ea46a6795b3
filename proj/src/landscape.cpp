#include "ingrape/landscape.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace ingrape {

void LandscapeConfig::validate() const {
    if (launches < 1 || bins < 1) {
        throw Error(ErrorCode::DomainInvalid, "landscape requires launches >= 1 and bins >= 1");
    }
    optimizer.validate();
}

namespace {

std::vector<double> sorted_values(const std::vector<double>& values) {
    std::vector<double> s = values;
    std::sort(s.begin(), s.end());
    return s;
}

struct Split {
    bool found = false;
    std::size_t index = 0;  // split between s[index] and s[index+1]
    double gap = 0.0;
};

Split best_split(const std::vector<double>& sorted, std::size_t lo, std::size_t hi,
                 std::size_t min_side, double gap_factor) {
    Split out;
    const std::size_t n = hi - lo;
    if (n < 2 * min_side) return out;
    std::vector<double> gaps;
    gaps.reserve(n - 1);
    for (std::size_t i = lo; i + 1 < hi; ++i) {
        gaps.push_back(sorted[i + 1] - sorted[i]);
    }
    std::vector<double> med = gaps;
    std::nth_element(med.begin(), med.begin() + med.size() / 2, med.end());
    const double median_gap = med[med.size() / 2];

    double largest = -1.0;
    std::size_t at = 0;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        if (gaps[i] > largest) {
            largest = gaps[i];
            at = lo + i;
        }
    }
    const double floor = 1e-12 * (1.0 + std::abs(sorted[hi - 1]));
    if (largest <= std::max(gap_factor * median_gap, floor)) return out;
    const std::size_t left_count = at + 1 - lo;
    const std::size_t right_count = hi - (at + 1);
    if (left_count < min_side || right_count < min_side) return out;
    out.found = true;
    out.index = at;
    out.gap = largest;
    return out;
}

Cluster make_cluster(const std::vector<double>& sorted, std::size_t lo, std::size_t hi) {
    Cluster c;
    c.count = static_cast<int>(hi - lo);
    c.min = sorted[lo];
    c.max = sorted[hi - 1];
    c.mean = std::accumulate(sorted.begin() + static_cast<std::ptrdiff_t>(lo),
                             sorted.begin() + static_cast<std::ptrdiff_t>(hi), 0.0) /
             static_cast<double>(c.count);
    return c;
}

}  // namespace

std::vector<Cluster> detect_peaks(const std::vector<double>& values, double gap_factor) {
    if (values.empty()) {
        throw Error(ErrorCode::DomainInvalid, "detect_peaks requires a nonempty sample");
    }
    const std::vector<double> s = sorted_values(values);
    const std::size_t min_side =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.05 * s.size())));

    // Greedy: first the dominant split, then at most one more among the parts.
    std::vector<std::pair<std::size_t, std::size_t>> parts{{0, s.size()}};
    for (int round = 0; round < 2 && parts.size() < 3; ++round) {
        Split best;
        std::size_t which = 0;
        for (std::size_t p = 0; p < parts.size(); ++p) {
            const Split sp = best_split(s, parts[p].first, parts[p].second, min_side, gap_factor);
            if (sp.found && sp.gap > best.gap) {
                best = sp;
                which = p;
            }
        }
        if (!best.found) break;
        const auto [lo, hi] = parts[which];
        parts[which] = {lo, best.index + 1};
        parts.insert(parts.begin() + static_cast<std::ptrdiff_t>(which) + 1, {best.index + 1, hi});
    }

    std::vector<Cluster> clusters;
    clusters.reserve(parts.size());
    for (const auto& [lo, hi] : parts) {
        clusters.push_back(make_cluster(s, lo, hi));
    }
    return clusters;
}

LandscapeResult run_landscape_with(const std::function<RunResult(std::uint64_t seed)>& runner,
                                   const LandscapeConfig& config, int workers) {
    config.validate();
    if (workers <= 0) {
        workers = static_cast<int>(std::thread::hardware_concurrency());
        if (workers < 1) workers = 1;
    }
    workers = std::min(workers, config.launches);

    LandscapeResult result;
    result.runs.resize(static_cast<std::size_t>(config.launches));

    // Indexed slots make aggregation order-independent; each run depends only
    // on its derived seed.
    std::atomic<int> next{0};
    auto work = [&] {
        for (;;) {
            const int i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= config.launches) return;
            result.runs[static_cast<std::size_t>(i)] =
                runner(derive_run_seed(config.master_seed, static_cast<std::uint64_t>(i)));
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    std::vector<double> values;
    values.reserve(result.runs.size());
    for (int i = 0; i < config.launches; ++i) {
        const auto& run = result.runs[static_cast<std::size_t>(i)];
        if (run.aborted()) {
            ++result.n_aborted;
        } else {
            values.push_back(run.final_value);
            result.sorted_by_value.push_back(i);
        }
    }
    std::sort(result.sorted_by_value.begin(), result.sorted_by_value.end(), [&](int a, int b) {
        const double va = result.runs[static_cast<std::size_t>(a)].final_value;
        const double vb = result.runs[static_cast<std::size_t>(b)].final_value;
        return va != vb ? va < vb : a < b;
    });

    if (!values.empty()) {
        const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
        const double lo = *mn;
        const double width = *mx - lo;
        result.histogram.resize(static_cast<std::size_t>(config.bins));
        for (int b = 0; b < config.bins; ++b) {
            result.histogram[static_cast<std::size_t>(b)].left =
                lo + width * b / static_cast<double>(config.bins);
            result.histogram[static_cast<std::size_t>(b)].right =
                lo + width * (b + 1) / static_cast<double>(config.bins);
        }
        for (double v : values) {
            int b = width == 0.0 ? 0
                                 : std::min(config.bins - 1,
                                            static_cast<int>((v - lo) / width * config.bins));
            result.histogram[static_cast<std::size_t>(b)].count += 1;
        }
        result.clusters = detect_peaks(values);
    }
    return result;
}

LandscapeResult run_landscape(const ObjectiveSpec& obj, const ControlledSystem& system,
                              const TimeGrid& grid, const LandscapeConfig& config, int workers) {
    auto runner = [&](std::uint64_t seed) {
        InitSpec init = config.init;
        init.seed = seed;
        RunResult run = optimize(obj, system, init_random_controls(system, grid, init),
                                 config.optimizer);
        run.seed = seed;
        return run;
    };
    return run_landscape_with(runner, config, workers);
}

RobustnessReport robustness_scan(const ObjectiveSpec& obj, const ControlledSystem& system,
                                 const PWCControls& controls, const std::vector<double>& levels,
                                 int samples, std::uint64_t seed) {
    if (samples < 1) {
        throw Error(ErrorCode::DomainInvalid, "robustness_scan requires samples >= 1");
    }
    for (double eps : levels) {
        if (eps < 0.0 || !std::isfinite(eps)) {
            throw Error(ErrorCode::DomainInvalid, "perturbation levels must be >= 0");
        }
    }
    RobustnessReport report;
    report.samples = samples;
    report.unperturbed_value = evaluate(obj, system, controls);

    CounterRng rng(seed);
    for (double eps : levels) {
        // Mean and spread computed on deltas from the unperturbed value, so
        // eps = 0 reports exactly (mean = value, std = 0).
        double delta_sum = 0.0;
        double delta_sq_sum = 0.0;
        for (int s = 0; s < samples; ++s) {
            PWCControls perturbed = controls;
            for (Eigen::Index i = 0; i < perturbed.u.size(); ++i) {
                perturbed.u.data()[i] *= 1.0 + eps * rng.uniform(-1.0, 1.0);
            }
            for (Eigen::Index i = 0; i < perturbed.w.size(); ++i) {
                perturbed.w.data()[i] *= 1.0 + eps * rng.uniform(-1.0, 1.0);
            }
            const double delta = evaluate(obj, system, perturbed) - report.unperturbed_value;
            delta_sum += delta;
            delta_sq_sum += delta * delta;
        }
        const double mean_delta = delta_sum / samples;
        const double var = std::max(0.0, delta_sq_sum / samples - mean_delta * mean_delta);
        report.levels.push_back({eps, report.unperturbed_value + mean_delta, std::sqrt(var)});
    }
    return report;
}

}  // namespace ingrape
