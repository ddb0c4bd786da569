#ifndef DIVEVO_STRATEGIES_HPP
#define DIVEVO_STRATEGIES_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <divevo/maze.hpp>
#include <divevo/random.hpp>

namespace divevo {

    enum class Strategy { Fitness, Novelty, Sugar, Weighted, Pixel, Random };

    std::string to_string(Strategy s);
    Strategy parse_strategy(const std::string& s);
    /// Strategies whose scores depend on which agent got somewhere first.
    bool needs_lockstep(Strategy s);

    /// Per-agent fitness (higher is better) plus whatever the strategy measured on the way.
    struct FitnessReport {
        std::vector<double> fitness;
        std::vector<double> sugar;    // sugars / grid sugars collected
        std::vector<double> novelty;  // k-NN novelty (novelty strategy)
        std::vector<double> distance; // final distance to the goal (maze)
        std::vector<double> score;    // game score (grid games)
        std::vector<double> screens;  // first-seen screens (pixel strategy)
    };

    /// Cells of a map lattice that a sugar may occupy: those whose interior no wall crosses.
    struct SugarLattice {
        double cell_size = 1;
        std::size_t cols = 0;
        std::size_t rows = 0;
        std::vector<char> free; // row-major, row 0 at y = 0

        SugarLattice() = default;
        SugarLattice(const MazeMap& map, double cell_size);

        std::size_t free_count() const;
        std::size_t cell_of(const Vec2& p) const;
    };

    enum class CellState : std::uint8_t { Empty, Sugar, Collected };

    /// Sugar layout for one generation with first-collector ownership.
    class SugarField {
    public:
        static constexpr std::int32_t no_agent = -1;

        SugarField() = default;
        SugarField(std::shared_ptr<const SugarLattice> lattice, double density, Rng& rng);

        /// Claims the sugar under `pos`, if any. Returns true on a successful claim.
        bool try_collect(std::size_t agent, const Vec2& pos, std::size_t step);

        std::size_t sugar_fitness(std::size_t agent) const { return agent < per_agent_.size() ? per_agent_[agent] : 0; }
        std::size_t collected_count() const { return collected_; }
        std::size_t initial_count() const { return initial_; }
        double density() const { return density_; }

        const SugarLattice& lattice() const { return *lattice_; }
        CellState state(std::size_t cell) const { return state_[cell]; }
        std::int32_t collector(std::size_t cell) const { return collector_[cell]; }
        std::int32_t collected_at(std::size_t cell) const { return step_[cell]; }

    private:
        std::shared_ptr<const SugarLattice> lattice_;
        double density_ = 0;
        std::vector<CellState> state_;
        std::vector<std::int32_t> collector_;
        std::vector<std::int32_t> step_;
        std::vector<std::size_t> per_agent_;
        std::size_t initial_ = 0;
        std::size_t collected_ = 0;
    };

    SugarField sample_sugar_field(const MazeMap& map, double cell_size, double density, Rng& rng);

    struct BehaviorArchive {
        std::vector<Vec2> points;
        double novelty_threshold = 3;
        std::size_t k = 15;
    };

    /// Mean distance to the k nearest of (other population members + archive). When fewer
    /// than k candidates exist the mean runs over all of them; with none the novelty is 0.
    std::vector<double> novelty_scores(std::span<const Vec2> behaviors, std::span<const Vec2> archive, std::size_t k);

    /// Scores the population against the archive, then admits every behavior whose novelty
    /// exceeds the archive threshold.
    std::vector<double> score_and_archive(std::span<const Vec2> behaviors, BehaviorArchive& archive);

    /// Negative euclidean distance from the final position to the goal.
    double distance_fitness(const AgentTrace& trace, const MazeMap& map);

    double sugar_fitness(const SugarField& field, std::size_t agent);

    /// alpha * proximity + (1 - alpha) * sugar share, both in [0,1]:
    /// proximity = 1 - d(final, goal) / diagonal, share = sugars / max(1, best sugars in population).
    double weighted_fitness(const AgentTrace& trace, double sugars, double population_max_sugars, const MazeMap& map, double alpha);

} // namespace divevo

#endif
