#ifndef DIVEVO_STATS_HPP
#define DIVEVO_STATS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace divevo {

    struct SampleSummary {
        std::size_t n = 0;
        double mean = 0;
        double std = 0; // n - 1 denominator; 0 when n == 1
        std::size_t successes = 0;
    };

    /// Mean and sample standard deviation. Empty input yields nullopt (no successes).
    std::optional<SampleSummary> summarize(std::span<const double> values);

    /// Summary over the successful runs only, in 1-based generation counts.
    struct RunSummary {
        std::size_t runs = 0;
        std::size_t successes = 0;
        std::optional<SampleSummary> generations;
        std::vector<double> values; // 1-based generations of the successful runs
    };

    RunSummary summarize_runs(std::span<const std::optional<std::size_t>> generations_to_solve);

    struct TTestResult {
        double t = 0;
        double df = 0;
        double p = 1;
    };

    /// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
    double incomplete_beta(double x, double a, double b);

    /// Two-sided p-value of Student's t with `df` degrees of freedom.
    double student_t_two_sided_p(double t, double df);

    /// Two-sample t-test. Pooled variance by default, Welch's unequal-variance form on request.
    /// Needs at least two values per sample.
    TTestResult t_test(std::span<const double> a, std::span<const double> b, bool welch = false);

} // namespace divevo

#endif
