#include <divevo/evolution.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include <divevo/errors.hpp>

namespace divevo {

    std::string to_string(Reproduction r) { return r == Reproduction::InPlace ? "in_place" : "from_elite"; }

    Reproduction parse_reproduction(const std::string& s)
    {
        if (s == "in_place")
            return Reproduction::InPlace;
        if (s == "from_elite")
            return Reproduction::FromElite;
        throw ConfigError("unknown reproduction mode '" + s + "'");
    }

    std::size_t EvolutionConfig::elite_count() const
    {
        return static_cast<std::size_t>(std::floor(elite_fraction * static_cast<double>(population_size)));
    }

    void EvolutionConfig::validate() const
    {
        if (population_size < 10)
            throw ConfigError("population_size must be >= 10");
        if (!(elite_fraction > 0 && elite_fraction < 1))
            throw ConfigError("elite_fraction must lie in (0,1)");
        if (elite_count() < 1)
            throw ConfigError("elite_fraction * population_size must give at least one elite");
        if (!(mutation_sigma > 0))
            throw ConfigError("mutation_sigma must be > 0");
        if (!(init_sigma > 0))
            throw ConfigError("init_sigma must be > 0");
        if (hidden < 1)
            throw ConfigError("hidden must be >= 1");
    }

    std::vector<std::size_t> select_elite(std::span<const double> fitness, double elite_fraction)
    {
        std::vector<std::size_t> order(fitness.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fitness[a] > fitness[b]; });
        order.resize(static_cast<std::size_t>(std::floor(elite_fraction * static_cast<double>(fitness.size()))));
        return order;
    }

    RunRecord evolve(const EvolutionConfig& config, const NetworkDims& dims, const Evaluator& evaluate)
    {
        config.validate();
        const std::size_t n = config.population_size;
        RunRecord record;
        record.seed = config.master_seed;

        std::vector<Genome> population;
        population.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto rng = make_rng(config.master_seed, {stream::init, i});
            population.push_back(init_genome<double>(dims, rng, config.init_sigma));
        }

        for (std::size_t gen = 0; gen < config.max_generations; ++gen) {
            GenerationEval ev = evaluate(population, gen);
            const auto& fit = ev.report.fitness;
            if (fit.size() != n)
                throw ContractViolation("evaluator returned the wrong number of fitness values");
            if (!std::all_of(fit.begin(), fit.end(), [](double f) { return std::isfinite(f); }))
                throw ContractViolation("evaluator returned a non-finite fitness");

            GenerationReport rep;
            rep.generation = gen;
            const auto best = std::max_element(fit.begin(), fit.end()); // first maximum
            rep.best_fitness = *best;
            rep.mean_fitness = std::accumulate(fit.begin(), fit.end(), 0.0) / static_cast<double>(n);
            rep.sugar_collected = ev.sugar_collected;
            rep.sugar_initial = ev.sugar_initial;
            rep.archive_size = ev.archive_size;
            rep.solved = ev.solver.has_value();
            rep.champion = ev.solver ? *ev.solver : static_cast<std::size_t>(best - fit.begin());
            rep.champion_fitness = fit[rep.champion];
            if (!ev.report.distance.empty())
                rep.champion_distance = ev.report.distance[rep.champion];
            if (!ev.report.score.empty())
                rep.champion_score = ev.report.score[rep.champion];
            if (!ev.traces.empty())
                rep.champion_trace = std::move(ev.traces[rep.champion]);
            record.champion = population[rep.champion];
            record.reports.push_back(std::move(rep));

            if (ev.solver) {
                record.generations_to_solve = gen;
                break;
            }
            if (gen + 1 == config.max_generations)
                break;

            const auto elite = select_elite(fit, config.elite_fraction);
            std::vector<char> is_elite(n, 0);
            for (auto e : elite)
                is_elite[e] = 1;
            std::vector<Genome> next;
            next.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
                if (is_elite[i]) {
                    next.push_back(population[i]);
                    continue;
                }
                std::size_t parent = i;
                if (config.reproduce == Reproduction::FromElite) {
                    auto pick = make_rng(config.master_seed, {stream::parent, gen, i});
                    parent = elite[std::uniform_int_distribution<std::size_t>(0, elite.size() - 1)(pick)];
                }
                auto rng = make_rng(config.master_seed, {stream::mutate, gen, i});
                next.push_back(mutate(population[parent], config.mutation_sigma, rng));
            }
            population = std::move(next);
        }
        return record;
    }

    void StrategySettings::validate() const
    {
        if (!(alpha >= 0 && alpha <= 1))
            throw ConfigError("alpha must lie in [0,1]");
        if (!(density >= 0 && density <= 1))
            throw ConfigError("density must lie in [0,1]");
        if (!(cell_size > 0))
            throw ConfigError("cell_size must be > 0");
        if (k < 1)
            throw ConfigError("k must be >= 1");
        if (!(novelty_threshold >= 0))
            throw ConfigError("novelty_threshold must be >= 0");
    }

    MazeEvaluator::MazeEvaluator(MazeTask task, std::uint64_t seed) : task_(std::move(task)), seed_(seed)
    {
        task_.strategy.validate();
        if (task_.strategy.strategy == Strategy::Pixel)
            throw ConfigError("the pixel strategy needs a grid game, not a maze");
        archive_.k = task_.strategy.k;
        archive_.novelty_threshold = task_.strategy.novelty_threshold;
        const auto s = task_.strategy.strategy;
        if (s == Strategy::Sugar || s == Strategy::Weighted)
            lattice_ = std::make_shared<const SugarLattice>(task_.map, task_.strategy.cell_size);
    }

    SugarField MazeEvaluator::sugar_field(std::size_t generation) const
    {
        auto lattice = lattice_ ? lattice_ : std::make_shared<const SugarLattice>(task_.map, task_.strategy.cell_size);
        const std::size_t layout_gen = task_.strategy.layout == SugarLayout::Fixed ? 0 : generation;
        auto rng = make_rng(seed_, {stream::field, layout_gen});
        return SugarField(std::move(lattice), task_.strategy.density, rng);
    }

    GenerationEval MazeEvaluator::operator()(std::span<const Genome> population, std::size_t generation)
    {
        const auto strategy = task_.strategy.strategy;
        const std::size_t n = population.size();
        std::optional<SugarField> field;
        if (lattice_)
            field = sugar_field(generation);

        LockstepHook hook;
        if (field)
            hook = [&](std::size_t step, std::size_t agent, const Vec2& pos) { field->try_collect(agent, pos, step); };
        auto traces = run_lockstep(task_.map, population, task_.episode, hook);

        GenerationEval ev;
        auto& rep = ev.report;
        rep.distance.resize(n);
        rep.sugar.assign(n, 0.0);
        std::vector<Vec2> finals(n);
        for (std::size_t i = 0; i < n; ++i) {
            rep.distance[i] = -distance_fitness(traces[i], task_.map);
            finals[i] = traces[i].final_position;
            if (field)
                rep.sugar[i] = sugar_fitness(*field, i);
            if (traces[i].reached_goal && !ev.solver)
                ev.solver = i;
        }
        if (field) {
            ev.sugar_collected = field->collected_count();
            ev.sugar_initial = field->initial_count();
        }

        switch (strategy) {
        case Strategy::Fitness:
            for (std::size_t i = 0; i < n; ++i)
                rep.fitness.push_back(distance_fitness(traces[i], task_.map));
            break;
        case Strategy::Novelty:
            rep.novelty = score_and_archive(finals, archive_);
            rep.fitness = rep.novelty;
            break;
        case Strategy::Sugar: rep.fitness = rep.sugar; break;
        case Strategy::Weighted: {
            const double top = n ? *std::max_element(rep.sugar.begin(), rep.sugar.end()) : 0.0;
            for (std::size_t i = 0; i < n; ++i)
                rep.fitness.push_back(weighted_fitness(traces[i], rep.sugar[i], top, task_.map, task_.strategy.alpha));
            break;
        }
        case Strategy::Random: {
            auto rng = make_rng(seed_, {stream::baseline, generation});
            std::uniform_real_distribution<double> u(0.0, 1.0);
            for (std::size_t i = 0; i < n; ++i)
                rep.fitness.push_back(u(rng));
            break;
        }
        case Strategy::Pixel: break;
        }
        ev.archive_size = archive_.points.size();
        if (observer_)
            observer_(generation, field ? &*field : nullptr, traces);
        ev.traces = std::move(traces);
        return ev;
    }

    RunRecord evolve_maze(const EvolutionConfig& config, const MazeTask& task, MazeEvaluator::Observer observer)
    {
        MazeTask t = task;
        t.episode.time_frame = config.time_frame;
        MazeEvaluator evaluator(t, config.master_seed);
        evaluator.set_observer(std::move(observer));
        const NetworkDims dims{t.episode.mode.width(), config.hidden, 4};
        RunRecord record = evolve(config, dims, std::ref(evaluator));
        record.strategy = to_string(task.strategy.strategy);
        record.environment = task.map.name;
        return record;
    }

} // namespace divevo
