#include <divevo/strategies.hpp>

#include <algorithm>
#include <cmath>

#include <divevo/errors.hpp>

namespace divevo {

    std::string to_string(Strategy s)
    {
        switch (s) {
        case Strategy::Fitness: return "fitness";
        case Strategy::Novelty: return "novelty";
        case Strategy::Sugar: return "sugar";
        case Strategy::Weighted: return "weighted";
        case Strategy::Pixel: return "pixel";
        case Strategy::Random: return "random";
        }
        return "?";
    }

    Strategy parse_strategy(const std::string& s)
    {
        for (auto v : {Strategy::Fitness, Strategy::Novelty, Strategy::Sugar, Strategy::Weighted, Strategy::Pixel, Strategy::Random})
            if (s == to_string(v))
                return v;
        throw ConfigError("unknown strategy '" + s + "'");
    }

    bool needs_lockstep(Strategy s) { return s == Strategy::Sugar || s == Strategy::Weighted || s == Strategy::Pixel; }

    namespace {
        // Does the segment pass through the open interior of the box?
        bool crosses_interior(const Segment& s, double x0, double y0, double x1, double y1)
        {
            double t0 = 0, t1 = 1;
            const Vec2 d = s.b - s.a;
            const double p[4] = {-d.x(), d.x(), -d.y(), d.y()};
            const double q[4] = {s.a.x() - x0, x1 - s.a.x(), s.a.y() - y0, y1 - s.a.y()};
            for (int i = 0; i < 4; ++i) {
                if (p[i] == 0) {
                    if (q[i] < 0)
                        return false;
                    continue;
                }
                const double r = q[i] / p[i];
                if (p[i] < 0)
                    t0 = std::max(t0, r);
                else
                    t1 = std::min(t1, r);
                if (t0 > t1)
                    return false;
            }
            if (!(t0 < t1))
                return false;
            const Vec2 m = s.a + 0.5 * (t0 + t1) * d;
            return m.x() > x0 && m.x() < x1 && m.y() > y0 && m.y() < y1;
        }
    } // namespace

    SugarLattice::SugarLattice(const MazeMap& map, double cs) : cell_size(cs)
    {
        if (!(cs > 0))
            throw ConfigError("sugar cell size must be > 0");
        cols = static_cast<std::size_t>(std::ceil(map.width / cs));
        rows = static_cast<std::size_t>(std::ceil(map.height / cs));
        free.assign(cols * rows, 1);
        for (const auto& w : map.walls) {
            // Only cells in the wall's bounding box can be crossed.
            const auto lo_c = static_cast<std::size_t>(std::max(0.0, std::floor(std::min(w.a.x(), w.b.x()) / cs) - 1));
            const auto hi_c = std::min(cols - 1, static_cast<std::size_t>(std::max(0.0, std::floor(std::max(w.a.x(), w.b.x()) / cs) + 1)));
            const auto lo_r = static_cast<std::size_t>(std::max(0.0, std::floor(std::min(w.a.y(), w.b.y()) / cs) - 1));
            const auto hi_r = std::min(rows - 1, static_cast<std::size_t>(std::max(0.0, std::floor(std::max(w.a.y(), w.b.y()) / cs) + 1)));
            for (std::size_t r = lo_r; r <= hi_r; ++r)
                for (std::size_t c = lo_c; c <= hi_c; ++c)
                    if (crosses_interior(w, c * cs, r * cs, (c + 1) * cs, (r + 1) * cs))
                        free[r * cols + c] = 0;
        }
    }

    std::size_t SugarLattice::free_count() const { return static_cast<std::size_t>(std::count(free.begin(), free.end(), 1)); }

    std::size_t SugarLattice::cell_of(const Vec2& p) const
    {
        const auto c = std::min(cols - 1, static_cast<std::size_t>(std::max(0.0, std::floor(p.x() / cell_size))));
        const auto r = std::min(rows - 1, static_cast<std::size_t>(std::max(0.0, std::floor(p.y() / cell_size))));
        return r * cols + c;
    }

    SugarField::SugarField(std::shared_ptr<const SugarLattice> lattice, double density, Rng& rng)
        : lattice_(std::move(lattice)), density_(density)
    {
        if (!(density >= 0 && density <= 1))
            throw ConfigError("sugar density must lie in [0,1]");
        const auto n = lattice_->free.size();
        state_.assign(n, CellState::Empty);
        collector_.assign(n, no_agent);
        step_.assign(n, -1);
        std::bernoulli_distribution coin(density);
        for (std::size_t i = 0; i < n; ++i)
            if (lattice_->free[i] && coin(rng)) {
                state_[i] = CellState::Sugar;
                ++initial_;
            }
    }

    bool SugarField::try_collect(std::size_t agent, const Vec2& pos, std::size_t step)
    {
        const auto cell = lattice_->cell_of(pos);
        if (state_[cell] != CellState::Sugar)
            return false;
        state_[cell] = CellState::Collected;
        collector_[cell] = static_cast<std::int32_t>(agent);
        step_[cell] = static_cast<std::int32_t>(step);
        if (per_agent_.size() <= agent)
            per_agent_.resize(agent + 1, 0);
        ++per_agent_[agent];
        ++collected_;
        return true;
    }

    SugarField sample_sugar_field(const MazeMap& map, double cell_size, double density, Rng& rng)
    {
        return SugarField(std::make_shared<const SugarLattice>(map, cell_size), density, rng);
    }

    std::vector<double> novelty_scores(std::span<const Vec2> behaviors, std::span<const Vec2> archive, std::size_t k)
    {
        if (k == 0)
            throw ConfigError("novelty k must be >= 1");
        const std::size_t n = behaviors.size();
        std::vector<double> scores(n, 0.0);
        std::vector<double> dist;
        dist.reserve(n + archive.size());
        for (std::size_t i = 0; i < n; ++i) {
            dist.clear();
            for (std::size_t j = 0; j < n; ++j)
                if (j != i)
                    dist.push_back((behaviors[i] - behaviors[j]).norm());
            for (const auto& a : archive)
                dist.push_back((behaviors[i] - a).norm());
            if (dist.empty())
                continue;
            const std::size_t m = std::min(k, dist.size());
            std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(m), dist.end());
            double sum = 0;
            for (std::size_t j = 0; j < m; ++j)
                sum += dist[j];
            scores[i] = sum / static_cast<double>(m);
        }
        return scores;
    }

    std::vector<double> score_and_archive(std::span<const Vec2> behaviors, BehaviorArchive& archive)
    {
        auto scores = novelty_scores(behaviors, archive.points, archive.k);
        for (std::size_t i = 0; i < behaviors.size(); ++i)
            if (scores[i] > archive.novelty_threshold)
                archive.points.push_back(behaviors[i]);
        return scores;
    }

    double distance_fitness(const AgentTrace& trace, const MazeMap& map) { return -(trace.final_position - map.goal).norm(); }

    double sugar_fitness(const SugarField& field, std::size_t agent) { return static_cast<double>(field.sugar_fitness(agent)); }

    double weighted_fitness(const AgentTrace& trace, double sugars, double population_max_sugars, const MazeMap& map, double alpha)
    {
        if (!(alpha >= 0 && alpha <= 1))
            throw ConfigError("alpha must lie in [0,1]");
        const double proximity = 1 - (trace.final_position - map.goal).norm() / map.diagonal();
        const double share = sugars / std::max(1.0, population_max_sugars);
        return alpha * proximity + (1 - alpha) * share;
    }

} // namespace divevo
