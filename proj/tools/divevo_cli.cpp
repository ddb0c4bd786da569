// divevo: command-line front end for maze and grid-game experiments.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <divevo/config.hpp>
#include <divevo/errors.hpp>
#include <divevo/game_run.hpp>
#include <divevo/harness.hpp>

using namespace divevo;

namespace {

    struct CommonOptions {
        std::string config;
        std::string profile = "desk";
        std::uint64_t seed = 1;
        bool seed_set = false;
        std::size_t runs = 0;
        std::string strategies;
        std::string map;
        std::string out = "out";
        std::size_t workers = 0;
        std::vector<std::string> sets;
    };

    void add_common(CLI::App* app, CommonOptions& o, bool multi_strategy = true)
    {
        app->add_option("--config", o.config, "config file (key = value lines)");
        app->add_option("--profile", o.profile, "desk or paper defaults")->check(CLI::IsMember({"desk", "paper"}));
        app->add_option("--seed", o.seed, "seed of the first run; run i uses seed + i");
        app->add_option("--runs", o.runs, "runs per arm");
        app->add_option("--strategy", o.strategies,
            multi_strategy ? "strategy or comma-separated list (fitness,novelty,sugar,weighted,pixel,random)" : "strategy");
        app->add_option("--map", o.map, "map file or shipped map name (medium, hard, superhard)");
        app->add_option("--out", o.out, "output directory");
        app->add_option("--workers", o.workers, "parallel runs (default: hardware threads)");
        app->add_option("--set", o.sets, "extra key=value override, repeatable");
    }

    std::vector<std::string> split_list(const std::string& s)
    {
        std::vector<std::string> out;
        std::stringstream in(s);
        std::string item;
        while (std::getline(in, item, ','))
            if (!item.empty())
                out.push_back(item);
        return out;
    }

    RunConfig build_config(const CommonOptions& o, Environment env, const CLI::App& app)
    {
        RunConfig c = make_profile(parse_profile(o.profile), env);
        if (!o.config.empty())
            apply_config_file(c, o.config);
        for (const auto& kv : o.sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw ConfigError("--set expects key=value, got '" + kv + "'");
            apply_setting(c, kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (!o.map.empty())
            c.map = o.map;
        if (o.runs)
            c.runs = o.runs;
        if (app.count("--seed"))
            c.evolution.master_seed = o.seed;
        c.workers = o.workers ? o.workers : std::max(1u, std::thread::hardware_concurrency());
        return c;
    }

    ExperimentSpec make_spec(const RunConfig& c, const std::string& out)
    {
        ExperimentSpec s;
        s.runs = c.runs;
        s.seed_base = c.evolution.master_seed;
        s.out_dir = out;
        s.workers = c.workers;
        s.welch = c.welch;
        s.on_run = [](const std::string& label, const RunRecord& r) {
            std::cerr << "[" << label << "] seed " << r.seed << ": "
                      << (r.generations_to_solve ? "solved at generation " + std::to_string(*r.generations_to_solve + 1)
                                                 : "not solved in " + std::to_string(r.reports.size()) + " generations")
                      << '\n';
        };
        return s;
    }

    void print_summary(const ExperimentResult& r)
    {
        std::ostringstream o;
        write_summary_csv(o, r);
        std::cout << o.str();
    }

    std::vector<Arm> strategy_arms(const RunConfig& c, const std::string& list)
    {
        std::vector<Arm> arms;
        const auto names = list.empty() ? std::vector<std::string>{to_string(c.strategy.strategy)} : split_list(list);
        for (const auto& name : names) {
            RunConfig a = c;
            apply_setting(a, "strategy", name);
            arms.push_back({name, a});
        }
        return arms;
    }

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Divergent neuroevolution: sugar, novelty and objective search on mazes and grid games"};
    app.require_subcommand(1);

    CommonOptions run_o, sweep_o, abl_o, games_o, render_o;
    bool dump_champion = false;
    std::string densities = "0.05,0.3,1.0";
    std::string modes = "sensors,binary_counter,no_input";
    std::string game;
    bool render_frames = false;
    long long render_generation = -1;

    auto* run = app.add_subcommand("run", "run one or more strategies on a maze");
    add_common(run, run_o);
    run->add_flag("--dump-champion", dump_champion, "write each run's final champion genome to <out>/champion_<seed>.bin");

    auto* sweep = app.add_subcommand("sweep-density", "sugar strategy across several sugar densities");
    add_common(sweep, sweep_o, false);
    sweep->add_option("--densities", densities, "comma-separated ascending densities in [0,1]");

    auto* abl = app.add_subcommand("ablation", "sugar strategy with different agent inputs");
    add_common(abl, abl_o, false);
    abl->add_option("--modes", modes, "comma-separated input modes (sensors, binary_counter, no_input)");

    auto* games = app.add_subcommand("games", "evolve agents on a grid game");
    add_common(games, games_o);
    games->add_option("--game", game, "collector or crossing");
    games->add_flag("--render-frames", render_frames, "print the last champion's replay as text frames");

    auto* render = app.add_subcommand("render", "run one seed and draw a generation's champion path as SVG");
    add_common(render, render_o, false);
    render->add_option("--generation", render_generation, "0-based generation (default: last)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const auto c = build_config(run_o, Environment::Maze, *run);
            auto spec = make_spec(c, run_o.out);
            spec.arms = strategy_arms(c, run_o.strategies);
            if (dump_champion) {
                auto progress = spec.on_run;
                const std::string out = run_o.out;
                spec.on_run = [progress, out](const std::string& label, const RunRecord& r) {
                    progress(label, r);
                    if (r.champion) {
                        const auto dir = std::filesystem::path(out) / label;
                        std::filesystem::create_directories(dir);
                        write_genome((dir / ("champion_" + std::to_string(r.seed) + ".bin")).string(), *r.champion);
                    }
                };
            }
            print_summary(run_experiment(spec));
        }
        else if (sweep->parsed()) {
            auto c = build_config(sweep_o, Environment::Maze, *sweep);
            c.strategy.strategy = Strategy::Sugar;
            std::vector<double> ds;
            for (const auto& d : split_list(densities))
                ds.push_back(std::stod(d));
            const auto result = run_density_sweep(make_spec(c, sweep_o.out), c, ds);
            std::ostringstream o;
            write_density_csv(o, ds, result);
            std::cout << o.str();
        }
        else if (abl->parsed()) {
            const auto c = build_config(abl_o, Environment::Maze, *abl);
            std::vector<InputMode> ms;
            for (const auto& m : split_list(modes))
                ms.push_back({parse_input_kind(m), c.input.counter_bits});
            print_summary(run_ablation(make_spec(c, abl_o.out), c, ms));
        }
        else if (games->parsed()) {
            auto c = build_config(games_o, Environment::Game, *games);
            if (!game.empty())
                c.game.game = parse_game(game);
            auto spec = make_spec(c, games_o.out);
            spec.arms = strategy_arms(c, games_o.strategies);
            const auto result = run_experiment(spec);
            print_summary(result);
            if (render_frames) {
                const auto& rec = result.arms.front().records.front();
                const GameEvaluator eval(c.game_task(), c.evolution.time_frame, rec.seed);
                const auto frames = replay_game(*rec.champion, c.game.game, eval.game_seed(rec.reports.size() - 1), c.evolution.time_frame);
                for (std::size_t f = 0; f < frames.size(); ++f)
                    std::cout << "frame " << f << '\n' << frames[f].render() << '\n';
            }
        }
        else if (render->parsed()) {
            auto c = build_config(render_o, Environment::Maze, *render);
            if (!render_o.strategies.empty())
                apply_setting(c, "strategy", render_o.strategies);
            c.validate();
            const auto task = c.maze_task();
            MazeTask t = task;
            t.episode.time_frame = c.evolution.time_frame;
            const auto record = evolve_maze(c.evolution, task);
            const std::size_t gen = render_generation < 0 ? record.reports.size() - 1 : static_cast<std::size_t>(render_generation);
            std::optional<SugarField> field;
            if (c.strategy.strategy == Strategy::Sugar || c.strategy.strategy == Strategy::Weighted)
                field = MazeEvaluator(t, c.evolution.master_seed).sugar_field(gen);
            std::cout << export_trajectory(record, gen, task.map, field ? &*field : nullptr, render_o.out) << '\n';
        }
    }
    catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
