#include <divevo/stats.hpp>

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace divevo {

    std::optional<SampleSummary> summarize(std::span<const double> values)
    {
        if (values.empty())
            return std::nullopt;
        SampleSummary s;
        s.n = values.size();
        s.successes = s.n;
        s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.n);
        if (s.n > 1) {
            double ss = 0;
            for (double v : values)
                ss += (v - s.mean) * (v - s.mean);
            s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
        }
        return s;
    }

    RunSummary summarize_runs(std::span<const std::optional<std::size_t>> generations_to_solve)
    {
        RunSummary r;
        r.runs = generations_to_solve.size();
        for (const auto& g : generations_to_solve)
            if (g)
                r.values.push_back(static_cast<double>(*g + 1));
        r.successes = r.values.size();
        r.generations = summarize(r.values);
        return r;
    }

    namespace {
        // Modified Lentz evaluation of the incomplete beta continued fraction.
        double beta_continued_fraction(double x, double a, double b)
        {
            constexpr int max_iter = 10000;
            constexpr double eps = 1e-16;
            constexpr double tiny = 1e-300;
            const double qab = a + b, qap = a + 1, qam = a - 1;
            double c = 1;
            double d = 1 - qab * x / qap;
            if (std::abs(d) < tiny)
                d = tiny;
            d = 1 / d;
            double h = d;
            for (int m = 1; m <= max_iter; ++m) {
                const int m2 = 2 * m;
                double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
                d = 1 + aa * d;
                if (std::abs(d) < tiny)
                    d = tiny;
                c = 1 + aa / c;
                if (std::abs(c) < tiny)
                    c = tiny;
                d = 1 / d;
                h *= d * c;
                aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
                d = 1 + aa * d;
                if (std::abs(d) < tiny)
                    d = tiny;
                c = 1 + aa / c;
                if (std::abs(c) < tiny)
                    c = tiny;
                d = 1 / d;
                const double del = d * c;
                h *= del;
                if (std::abs(del - 1) < eps)
                    return h;
            }
            return h;
        }
    } // namespace

    double incomplete_beta(double x, double a, double b)
    {
        if (!(a > 0 && b > 0))
            throw std::domain_error("incomplete_beta: a and b must be positive");
        if (!(x >= 0 && x <= 1))
            throw std::domain_error("incomplete_beta: x must lie in [0,1]");
        if (x == 0 || x == 1)
            return x;
        const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
        const double front = std::exp(log_front);
        if (x < (a + 1) / (a + b + 2))
            return front * beta_continued_fraction(x, a, b) / a;
        return 1 - front * beta_continued_fraction(1 - x, b, a) / b;
    }

    double student_t_two_sided_p(double t, double df)
    {
        if (std::isinf(t))
            return 0;
        return incomplete_beta(df / (df + t * t), df / 2, 0.5);
    }

    TTestResult t_test(std::span<const double> a, std::span<const double> b, bool welch)
    {
        if (a.size() < 2 || b.size() < 2)
            throw std::invalid_argument("t_test: each sample needs at least two values");
        const auto sa = *summarize(a);
        const auto sb = *summarize(b);
        const double na = static_cast<double>(sa.n), nb = static_cast<double>(sb.n);
        const double va = sa.std * sa.std, vb = sb.std * sb.std;
        const double diff = sa.mean - sb.mean;

        TTestResult r;
        double se2;
        if (welch) {
            se2 = va / na + vb / nb;
            const double num = se2 * se2;
            const double den = (va / na) * (va / na) / (na - 1) + (vb / nb) * (vb / nb) / (nb - 1);
            r.df = den > 0 ? num / den : na + nb - 2;
        }
        else {
            r.df = na + nb - 2;
            const double pooled = ((na - 1) * va + (nb - 1) * vb) / r.df;
            se2 = pooled * (1 / na + 1 / nb);
        }
        if (se2 == 0) {
            if (diff == 0)
                return {0, r.df, 1};
            return {diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity(), r.df, 0};
        }
        r.t = diff / std::sqrt(se2);
        r.p = student_t_two_sided_p(r.t, r.df);
        return r;
    }

} // namespace divevo
