// Brute-force reference implementations used only by the tests.
#ifndef DIVEVO_TEST_ORACLES_HPP
#define DIVEVO_TEST_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include <divevo/maze.hpp>

namespace oracle {

    using divevo::Vec2;

    inline double seg_dist(const Vec2& p, const Vec2& a, const Vec2& b)
    {
        const Vec2 ab = b - a;
        const double len2 = ab.squaredNorm();
        double t = len2 == 0 ? 0 : (p - a).dot(ab) / len2;
        t = std::max(0.0, std::min(1.0, t));
        return (p - (a + t * ab)).norm();
    }

    /// Walks the ray in 0.01 steps; stops at the first sample within half a step of a wall
    /// or outside the bounds.
    inline double ray_march(const divevo::MazeMap& map, const Vec2& origin, const Vec2& dir)
    {
        constexpr double step = 0.01;
        for (long i = 0;; ++i) {
            const double t = i * step;
            const Vec2 p = origin + t * dir;
            if (p.x() < -1e-9 || p.x() > map.width + 1e-9 || p.y() < -1e-9 || p.y() > map.height + 1e-9)
                return std::max(0.0, t - step);
            for (const auto& w : map.walls)
                if (seg_dist(p, w.a, w.b) <= step / 2)
                    return t;
        }
    }

    /// Full-sort k-NN novelty.
    inline std::vector<double> novelty(std::span<const Vec2> pop, std::span<const Vec2> archive, std::size_t k)
    {
        std::vector<double> out;
        for (std::size_t i = 0; i < pop.size(); ++i) {
            std::vector<double> d;
            for (std::size_t j = 0; j < pop.size(); ++j)
                if (j != i)
                    d.push_back((pop[i] - pop[j]).norm());
            for (const auto& a : archive)
                d.push_back((pop[i] - a).norm());
            std::sort(d.begin(), d.end());
            const std::size_t n = std::min(k, d.size());
            double s = 0;
            for (std::size_t j = 0; j < n; ++j)
                s += d[j];
            out.push_back(n == 0 ? 0.0 : s / static_cast<double>(n));
        }
        return out;
    }

    /// Separating-axis test of a closed segment against the open box (x0,x1) x (y0,y1).
    inline bool segment_crosses_open_box(const Vec2& a, const Vec2& b, double x0, double y0, double x1, double y1)
    {
        if (std::max(a.x(), b.x()) <= x0 || std::min(a.x(), b.x()) >= x1)
            return false;
        if (std::max(a.y(), b.y()) <= y0 || std::min(a.y(), b.y()) >= y1)
            return false;
        const Vec2 n(a.y() - b.y(), b.x() - a.x());
        const double s = n.dot(a);
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const Vec2& corner : {Vec2(x0, y0), Vec2(x1, y0), Vec2(x0, y1), Vec2(x1, y1)}) {
            lo = std::min(lo, n.dot(corner));
            hi = std::max(hi, n.dot(corner));
        }
        return lo < s && s < hi;
    }

    /// Random 200x150 map with horizontal, vertical and 45-degree walls. Shallower
    /// crossings would put the march oracle outside its one-step tolerance.
    inline divevo::MazeMap random_map(std::mt19937_64& rng, int walls)
    {
        divevo::MazeMap m;
        m.name = "random";
        m.width = 200;
        m.height = 150;
        std::uniform_real_distribution<double> ux(0, 200), uy(0, 150);
        for (int i = 0; i < walls; ++i) {
            Vec2 a(ux(rng), uy(rng)), b(ux(rng), uy(rng));
            switch (i % 3) {
            case 0: b.y() = a.y(); break;
            case 1: b.x() = a.x(); break;
            default: {
                const double len = std::uniform_real_distribution<double>(10, 80)(rng);
                b = a + Vec2(len, (i & 1) ? len : -len) / std::sqrt(2.0);
                break;
            }
            }
            m.walls.push_back({a, b});
        }
        return m;
    }

    inline bool off_walls(const divevo::MazeMap& m, const Vec2& p, double eps = 0)
    {
        return std::all_of(m.walls.begin(), m.walls.end(), [&](const auto& w) { return seg_dist(p, w.a, w.b) > eps; });
    }

} // namespace oracle

#endif
