#include <divevo/game_run.hpp>

#include <algorithm>
#include <optional>

#include <divevo/errors.hpp>

namespace divevo {

    std::size_t game_input_width(GameId game)
    {
        return (game == GameId::Collector ? CollectorGame::channels : CrossingGame::channels) * 10 * 10;
    }

    GameEvaluator::GameEvaluator(GameTask task, std::size_t time_frame, std::uint64_t seed)
        : task_(task), time_frame_(time_frame), seed_(seed)
    {
        switch (task_.strategy) {
        case Strategy::Fitness:
        case Strategy::Sugar:
        case Strategy::Pixel:
        case Strategy::Random: break;
        default: throw ConfigError("grid games support the fitness, sugar, pixel and random strategies only");
        }
    }

    std::uint64_t GameEvaluator::game_seed(std::size_t generation) const { return derive_seed(seed_, {stream::game, generation}); }

    GenerationEval GameEvaluator::operator()(std::span<const Genome> population, std::size_t generation)
    {
        const std::size_t n = population.size();
        const GameOptions opts{time_frame_, true};
        std::vector<GridGame> games;
        games.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            games.emplace_back(task_.game, game_seed(generation), opts);
        const std::size_t width = game_input_width(task_.game);
        for (const auto& g : population)
            if (g.dims().inputs != width || g.dims().outputs != game_action_count)
                throw ContractViolation("game evaluator: genome dims do not match the game");

        archive_.begin_generation(generation);
        std::optional<GridSugarState> sugar;
        if (task_.strategy == Strategy::Sugar)
            sugar.emplace(10, 10, task_.density, task_.respawn_interval, make_rng(seed_, {stream::field, generation}),
                make_rng(seed_, {stream::respawn, generation}));

        const auto hidden = static_cast<Eigen::Index>(population.empty() ? 0 : population[0].dims().hidden);
        std::vector<Eigen::VectorXd> h(n, Eigen::VectorXd::Zero(hidden)), screens(n);
        Eigen::VectorXd h_next(hidden), y(static_cast<Eigen::Index>(game_action_count));
        for (std::size_t i = 0; i < n; ++i)
            screens[i] = games[i].screen().as_input();

        GenerationEval ev;
        auto& rep = ev.report;
        rep.sugar.assign(n, 0.0);
        rep.screens.assign(n, 0.0);
        std::vector<std::optional<Cell>> positions(n);
        for (std::size_t frame = 1; frame <= time_frame_; ++frame) {
            bool any = false;
            for (std::size_t i = 0; i < n; ++i) {
                positions[i].reset();
                if (games[i].done())
                    continue;
                any = true;
                forward_into(population[i], screens[i], h[i], h_next, y);
                h[i].swap(h_next);
                auto out = games[i].step(static_cast<GameAction>(argmax_action(y)));
                if (task_.strategy == Strategy::Pixel)
                    rep.screens[i] += pixel_novelty_reward(archive_, out.screen);
                screens[i] = out.screen.as_input();
                if (!games[i].done() || games[i].frame() == time_frame_)
                    positions[i] = games[i].player();
            }
            if (!any)
                break;
            if (sugar) {
                const auto r = sugar->tick(frame, positions);
                for (std::size_t i = 0; i < n; ++i)
                    rep.sugar[i] += r[i];
            }
        }

        for (const auto& g : games)
            rep.score.push_back(g.score());
        switch (task_.strategy) {
        case Strategy::Fitness: rep.fitness = rep.score; break;
        case Strategy::Sugar: rep.fitness = rep.sugar; break;
        case Strategy::Pixel: rep.fitness = rep.screens; break;
        default: {
            auto rng = make_rng(seed_, {stream::baseline, generation});
            std::uniform_real_distribution<double> u(0.0, 1.0);
            for (std::size_t i = 0; i < n; ++i)
                rep.fitness.push_back(u(rng));
        }
        }
        if (sugar) {
            ev.sugar_collected = sugar->collected_count();
            ev.sugar_initial = sugar->initial_count();
        }
        ev.archive_size = archive_.size();
        if (observer_)
            observer_(generation, archive_, sugar ? &*sugar : nullptr, rep);
        return ev;
    }

    RunRecord evolve_game(const EvolutionConfig& config, const GameTask& task, GameEvaluator::Observer observer)
    {
        GameEvaluator evaluator(task, config.time_frame, config.master_seed);
        evaluator.set_observer(std::move(observer));
        const NetworkDims dims{game_input_width(task.game), config.hidden, game_action_count};
        RunRecord record = evolve(config, dims, std::ref(evaluator));
        record.strategy = to_string(task.strategy);
        record.environment = to_string(task.game);
        return record;
    }

    double mean_champion_score(const RunRecord& record, std::size_t window)
    {
        if (record.reports.empty())
            return 0;
        const std::size_t m = std::min(window, record.reports.size());
        double sum = 0;
        for (std::size_t i = record.reports.size() - m; i < record.reports.size(); ++i)
            sum += record.reports[i].champion_score;
        return sum / static_cast<double>(m);
    }

    double game_episode_battery(const EvolutionConfig& config, const GameTask& task)
    {
        return mean_champion_score(evolve_game(config, task), 100);
    }

    std::vector<Screen> replay_game(const Genome& genome, GameId game, std::uint64_t game_seed, std::size_t time_frame)
    {
        GridGame g(game, game_seed, GameOptions{time_frame, true});
        std::vector<Screen> out{g.screen()};
        Eigen::VectorXd h = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(genome.dims().hidden));
        Eigen::VectorXd h_next(h.size()), y(static_cast<Eigen::Index>(game_action_count));
        Eigen::VectorXd x = out.back().as_input();
        while (!g.done()) {
            forward_into(genome, x, h, h_next, y);
            h.swap(h_next);
            auto s = g.step(static_cast<GameAction>(argmax_action(y)));
            x = s.screen.as_input();
            out.push_back(std::move(s.screen));
        }
        return out;
    }

} // namespace divevo
