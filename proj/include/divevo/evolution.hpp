#ifndef DIVEVO_EVOLUTION_HPP
#define DIVEVO_EVOLUTION_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <divevo/maze.hpp>
#include <divevo/rnn.hpp>
#include <divevo/strategies.hpp>

namespace divevo {

    // InPlace: every non-elite agent is mutated from its own genome.
    // FromElite: every non-elite slot receives a mutated copy of a uniformly drawn elite.
    enum class Reproduction { InPlace, FromElite };
    std::string to_string(Reproduction r);
    Reproduction parse_reproduction(const std::string& s);

    struct EvolutionConfig {
        std::size_t population_size = 250;
        std::size_t max_generations = 1200;
        std::size_t time_frame = 600;
        double elite_fraction = 0.10;
        double mutation_sigma = 0.1;
        double init_sigma = 0.2;
        std::size_t hidden = 32;
        Reproduction reproduce = Reproduction::FromElite;
        std::uint64_t master_seed = 1;

        std::size_t elite_count() const;
        /// Throws ConfigError on an invalid combination.
        void validate() const;
    };

    /// What an environment hands back after playing out one generation.
    struct GenerationEval {
        FitnessReport report;
        std::vector<AgentTrace> traces; // maze only
        std::optional<std::size_t> solver; // lowest-index agent that reached the goal
        std::size_t sugar_collected = 0;
        std::size_t sugar_initial = 0;
        std::size_t archive_size = 0;
    };

    struct GenerationReport {
        std::size_t generation = 0;
        double best_fitness = 0;
        double mean_fitness = 0;
        std::size_t sugar_collected = 0;
        std::size_t sugar_initial = 0;
        std::size_t archive_size = 0;
        bool solved = false;
        /// The solving agent when solved, otherwise the fittest (lowest index on ties).
        std::size_t champion = 0;
        double champion_fitness = 0;
        double champion_distance = std::numeric_limits<double>::quiet_NaN();
        double champion_score = std::numeric_limits<double>::quiet_NaN();
        std::optional<AgentTrace> champion_trace;
    };

    struct RunRecord {
        std::uint64_t seed = 0;
        std::string strategy;
        std::string environment;
        std::optional<std::size_t> generations_to_solve; // 0-based generation index
        std::vector<GenerationReport> reports;
        std::optional<Genome> champion;
    };

    using Evaluator = std::function<GenerationEval(std::span<const Genome> population, std::size_t generation)>;

    /// Indices of the floor(fraction * N) fittest agents, best first; ties go to the lower index.
    std::vector<std::size_t> select_elite(std::span<const double> fitness, double elite_fraction);

    /// Runs the generational loop until an agent solves the task or the budget runs out.
    RunRecord evolve(const EvolutionConfig& config, const NetworkDims& dims, const Evaluator& evaluate);

    enum class SugarLayout { PerGeneration, Fixed };

    struct StrategySettings {
        Strategy strategy = Strategy::Sugar;
        double alpha = 0.5;
        double density = 0.3;
        double cell_size = 1.0;
        std::size_t k = 15;
        double novelty_threshold = 3.0;
        SugarLayout layout = SugarLayout::PerGeneration;

        void validate() const;
    };

    struct MazeTask {
        MazeMap map;
        EpisodeSettings episode;
        StrategySettings strategy;
    };

    /// Plays a maze generation in lockstep and scores it with the configured strategy.
    class MazeEvaluator {
    public:
        using Observer = std::function<void(std::size_t generation, const SugarField* field, const std::vector<AgentTrace>& traces)>;

        MazeEvaluator(MazeTask task, std::uint64_t seed);

        GenerationEval operator()(std::span<const Genome> population, std::size_t generation);

        /// The untouched sugar layout this evaluator uses for `generation`.
        SugarField sugar_field(std::size_t generation) const;
        const BehaviorArchive& archive() const { return archive_; }
        void set_observer(Observer o) { observer_ = std::move(o); }

    private:
        MazeTask task_;
        std::uint64_t seed_;
        std::shared_ptr<const SugarLattice> lattice_;
        BehaviorArchive archive_;
        Observer observer_;
    };

    RunRecord evolve_maze(const EvolutionConfig& config, const MazeTask& task, MazeEvaluator::Observer observer = {});

} // namespace divevo

#endif
