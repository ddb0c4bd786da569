#ifndef DIVEVO_GAME_RUN_HPP
#define DIVEVO_GAME_RUN_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <divevo/evolution.hpp>
#include <divevo/gridgames.hpp>

namespace divevo {

    struct GameTask {
        GameId game = GameId::Collector;
        Strategy strategy = Strategy::Fitness;
        double density = 0.3;
        std::size_t respawn_interval = 5;
    };

    /// Plays one generation of a grid game in lockstep: all agents share the frame clock and
    /// the generation's game seed, so pixel novelty and sugar claims have a well-defined "first".
    class GameEvaluator {
    public:
        using Observer = std::function<void(std::size_t generation, const ScreenArchive&, const GridSugarState*, const FitnessReport&)>;

        GameEvaluator(GameTask task, std::size_t time_frame, std::uint64_t seed);

        GenerationEval operator()(std::span<const Genome> population, std::size_t generation);

        void set_observer(Observer o) { observer_ = std::move(o); }
        /// Game seed used for `generation`.
        std::uint64_t game_seed(std::size_t generation) const;

    private:
        GameTask task_;
        std::size_t time_frame_;
        std::uint64_t seed_;
        ScreenArchive archive_;
        Observer observer_;
    };

    std::size_t game_input_width(GameId game);

    RunRecord evolve_game(const EvolutionConfig& config, const GameTask& task, GameEvaluator::Observer observer = {});

    /// Mean champion game score over the last `window` generations of the record.
    double mean_champion_score(const RunRecord& record, std::size_t window = 100);

    /// Evolves on the game and reports the mean champion score over the last 100 generations.
    double game_episode_battery(const EvolutionConfig& config, const GameTask& task);

    /// Replays one genome on a game and returns every screen (initial one first).
    std::vector<Screen> replay_game(const Genome& genome, GameId game, std::uint64_t game_seed, std::size_t time_frame);

} // namespace divevo

#endif
