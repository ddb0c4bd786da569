// Acceptance suite: one PASS/FAIL line per criterion, grouped so ctest can schedule
// the slow hard-map job separately.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <divevo/config.hpp>
#include <divevo/game_run.hpp>
#include <divevo/harness.hpp>
#include <divevo/stats.hpp>

#include "oracles.hpp"

using namespace divevo;

namespace {

struct Options {
    std::size_t workers = 1;
    std::size_t runs = 10;
    std::uint64_t seed_base = 1;
    bool verbose = false;
};

int failures = 0;

void verdict(int criterion, bool ok, const std::string& detail)
{
    std::cout << "criterion " << criterion << ": " << (ok ? "PASS" : "FAIL") << "  " << detail << std::endl;
    if (!ok)
        ++failures;
}

std::string fmt(double v)
{
    if (!std::isfinite(v))
        return "NA";
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << v;
    return s.str();
}

// Mean generations over successes; an arm with none ranks behind every arm that has some.
double mean_gens(const ArmResult& a)
{
    return a.summary.generations ? a.summary.generations->mean : std::numeric_limits<double>::infinity();
}

std::string describe_arm(const ArmResult& a)
{
    return a.label + " " + std::to_string(a.summary.successes) + "/" + std::to_string(a.summary.runs) + " mean " + fmt(mean_gens(a));
}

ExperimentSpec spec_for(const Options& o, const std::string& tag)
{
    ExperimentSpec s;
    s.runs = o.runs;
    s.seed_base = o.seed_base;
    s.workers = o.workers;
    if (o.verbose)
        s.on_run = [tag](const std::string& label, const RunRecord& r) {
            std::cerr << "[" << tag << "/" << label << "] seed " << r.seed << ": "
                      << (r.generations_to_solve ? "solved at " + std::to_string(*r.generations_to_solve + 1) : std::string("unsolved")) << '\n';
        };
    return s;
}

RunConfig maze_base(const std::string& map, std::size_t max_generations, Strategy strategy)
{
    RunConfig c = make_profile(Profile::Desk, Environment::Maze);
    c.map = map;
    c.evolution.max_generations = max_generations;
    c.strategy.strategy = strategy;
    return c;
}

const ArmResult& arm(const ExperimentResult& r, const std::string& label)
{
    for (const auto& a : r.arms)
        if (a.label == label)
            return a;
    throw std::logic_error("no arm " + label);
}

void medium_group(const Options& o)
{
    ExperimentSpec s = spec_for(o, "medium");
    for (auto st : {Strategy::Fitness, Strategy::Novelty, Strategy::Sugar})
        s.arms.push_back({to_string(st), maze_base("medium", 400, st)});
    RunConfig weighted = maze_base("medium", 400, Strategy::Weighted);
    weighted.strategy.alpha = 0.5;
    s.arms.push_back({"weighted", weighted});
    const auto main = run_experiment(s);
    const auto& fit = arm(main, "fitness");
    const auto& nov = arm(main, "novelty");
    const auto& sug = arm(main, "sugar");
    const auto& wei = arm(main, "weighted");
    const std::size_t n = o.runs;

    verdict(1, fit.summary.successes == n && nov.summary.successes == n && sug.summary.successes == n,
        describe_arm(fit) + "; " + describe_arm(nov) + "; " + describe_arm(sug));

    const double f = mean_gens(fit), g = mean_gens(sug), v = mean_gens(nov);
    verdict(2, f >= 8 && f <= 40 && g >= 4 && g <= 30 && g <= f && v <= f,
        "fitness " + fmt(f) + " in [8,40], sugar " + fmt(g) + " in [4,30], novelty " + fmt(v) + " <= fitness");

    {
        ExperimentSpec d = spec_for(o, "density");
        const std::vector<double> densities{0.05, 0.3, 1.0};
        const auto r = run_density_sweep(d, maze_base("medium", 400, Strategy::Sugar), densities);
        std::string detail;
        for (const auto& a : r.arms)
            detail += (detail.empty() ? "" : "; ") + describe_arm(a);
        verdict(4, mean_gens(r.arms.back()) <= mean_gens(r.arms.front()), detail);
    }
    {
        ExperimentSpec d = spec_for(o, "ablation");
        std::vector<InputMode> modes(3);
        modes[0].kind = InputKind::Sensors;
        modes[1].kind = InputKind::BinaryCounter;
        modes[2].kind = InputKind::NoInput;
        const auto r = run_ablation(d, maze_base("medium", 400, Strategy::Sugar), modes);
        const double a = mean_gens(r.arms[0]), b = mean_gens(r.arms[1]), c = mean_gens(r.arms[2]);
        verdict(5, a < b && b < c,
            describe_arm(r.arms[0]) + "; " + describe_arm(r.arms[1]) + "; " + describe_arm(r.arms[2]));
    }
    verdict(6, wei.summary.successes == n && mean_gens(wei) <= g, describe_arm(wei) + " vs " + describe_arm(sug));
}

void hard_group(const Options& o)
{
    ExperimentSpec s = spec_for(o, "hard");
    s.arms.push_back({"fitness", maze_base("hard", 1200, Strategy::Fitness)});
    s.arms.push_back({"sugar", maze_base("hard", 1200, Strategy::Sugar)});
    const auto r = run_experiment(s);
    const auto& fit = arm(r, "fitness");
    const auto& sug = arm(r, "sugar");
    verdict(3, fit.summary.successes == 0 && sug.summary.successes >= 4,
        "fitness " + std::to_string(fit.summary.successes) + "/" + std::to_string(fit.summary.runs) + " (want 0), sugar "
            + std::to_string(sug.summary.successes) + "/" + std::to_string(sug.summary.runs) + " (want >= 4)");
}

// Each property returns an empty string on success, otherwise what broke.
using Property = std::pair<std::string, std::function<std::string()>>;

std::string sugar_conservation()
{
    const MazeMap m = load_named_maze("medium");
    MazeTask task{m, {}, {}};
    task.strategy.density = 1.0;
    EvolutionConfig c;
    c.population_size = 60;
    c.max_generations = 5;
    c.time_frame = 600;
    c.reproduce = Reproduction::FromElite;
    c.master_seed = 11;
    std::string err;
    evolve_maze(c, task, [&](std::size_t gen, const SugarField* f, const std::vector<AgentTrace>& traces) {
        // first (tick, agent) to stand in each cell, rebuilt from the traces
        constexpr std::pair<std::size_t, std::size_t> never{SIZE_MAX, SIZE_MAX};
        std::vector<std::pair<std::size_t, std::size_t>> first(f->lattice().free.size(), never);
        for (std::size_t a = 0; a < traces.size(); ++a) {
            const auto& p = traces[a].positions;
            for (std::size_t t = 1; t < p.size(); ++t) {
                auto& slot = first[f->lattice().cell_of(p[t])];
                slot = std::min(slot, std::pair{t - 1, a});
            }
        }
        std::vector<std::size_t> owned(traces.size(), 0);
        std::size_t collected = 0;
        for (std::size_t cell = 0; cell < first.size(); ++cell) {
            if (f->state(cell) == CellState::Sugar && first[cell] != never)
                err = "generation " + std::to_string(gen) + ": a visited sugar was left uncollected";
            if (f->state(cell) != CellState::Collected)
                continue;
            ++collected;
            const auto who = f->collector(cell);
            if (who < 0 || static_cast<std::size_t>(who) >= traces.size()) {
                err = "collected cell without a valid owner";
                continue;
            }
            ++owned[static_cast<std::size_t>(who)];
            const std::pair<std::size_t, std::size_t> claim{static_cast<std::size_t>(f->collected_at(cell)), static_cast<std::size_t>(who)};
            if (claim != first[cell])
                err = "generation " + std::to_string(gen) + ": sugar did not go to the first visitor";
        }
        std::size_t total = 0;
        for (std::size_t a = 0; a < traces.size(); ++a) {
            if (owned[a] != f->sugar_fitness(a))
                err = "per-agent sugar does not match the owned cells";
            total += f->sugar_fitness(a);
        }
        if (total != collected || collected != f->collected_count() || collected > f->initial_count())
            err = "sugar not conserved in generation " + std::to_string(gen);
    });
    return err;
}

std::string novelty_oracle()
{
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> ux(0, 200), uy(0, 150);
    std::uniform_int_distribution<int> size(1, 120), asize(0, 80);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<Vec2> pop(static_cast<std::size_t>(size(rng)));
        std::vector<Vec2> arch(static_cast<std::size_t>(asize(rng)));
        for (auto& p : pop)
            p = {ux(rng), uy(rng)};
        for (auto& p : arch)
            p = {ux(rng), uy(rng)};
        if (novelty_scores(pop, arch, 15) != oracle::novelty(pop, arch, 15))
            return "mismatch in population " + std::to_string(trial);
    }
    return {};
}

std::string raycast_oracle()
{
    std::mt19937_64 rng(555);
    std::uniform_real_distribution<double> ux(0.5, 199.5), uy(0.5, 149.5);
    int checked = 0;
    while (checked < 1000) {
        const MazeMap m = oracle::random_map(rng, 6);
        const Vec2 origin(ux(rng), uy(rng));
        if (!oracle::off_walls(m, origin, 0.05))
            continue;
        const auto dir = static_cast<Direction>(checked % 4);
        const double exact = raycast(m, origin, dir);
        if (std::abs(exact - oracle::ray_march(m, origin, unit_vector(dir))) > 0.01)
            return "raycast and ray march disagree at (" + fmt(origin.x()) + ", " + fmt(origin.y()) + ")";
        ++checked;
    }
    return {};
}

std::string pixel_archive()
{
    EvolutionConfig c;
    c.population_size = 20;
    c.max_generations = 8;
    c.time_frame = 80;
    c.hidden = 16;
    c.reproduce = Reproduction::FromElite;
    std::string err;
    for (auto id : {GameId::Collector, GameId::Crossing}) {
        const GameTask task{id, Strategy::Pixel};
        evolve_game(c, task, [&](std::size_t gen, const ScreenArchive& a, const GridSugarState*, const FitnessReport& r) {
            if (a.generation() != gen)
                err = "archive not reset for generation " + std::to_string(gen);
            double total = 0;
            for (double s : r.screens)
                total += s;
            if (total != static_cast<double>(a.size()))
                err = "a screen was rewarded twice in generation " + std::to_string(gen);
        });
    }
    return err;
}

std::string t_test_reference()
{
    const std::vector<double> a{1, 2, 3, 4, 5}, b{3, 4, 5, 6, 7};
    const auto r = t_test(a, b);
    constexpr double p_ref = 0.08051623795726257;
    if (std::abs(r.t + 2) > 1e-6 || std::abs(r.p - p_ref) > 1e-6)
        return "t " + std::to_string(r.t) + " p " + std::to_string(r.p);
    return {};
}

std::string beta_reflection()
{
    std::mt19937_64 rng(8080);
    std::uniform_real_distribution<double> ux(0, 1), ua(0.05, 80);
    for (int i = 0; i < 10000; ++i) {
        const double x = ux(rng), a = ua(rng), b = ua(rng);
        if (std::abs(incomplete_beta(x, a, b) + incomplete_beta(1 - x, b, a) - 1) > 1e-10)
            return "reflection fails at x=" + std::to_string(x);
    }
    return {};
}

std::string run_replay()
{
    for (auto st : {Strategy::Fitness, Strategy::Novelty, Strategy::Sugar, Strategy::Weighted}) {
        RunConfig c = maze_base("medium", 8, st);
        c.evolution.population_size = 40;
        c.evolution.master_seed = 21;
        const auto a = execute_run(c);
        const auto b = execute_run(c);
        if (run_csv(a) != run_csv(b) || !(*a.champion == *b.champion))
            return to_string(st) + " run does not replay";
    }
    RunConfig g = make_profile(Profile::Desk, Environment::Game);
    g.evolution.max_generations = 6;
    g.evolution.population_size = 20;
    if (run_csv(execute_run(g)) != run_csv(execute_run(g)))
        return "game run does not replay";
    return {};
}

void property_group()
{
    const std::vector<Property> props{
        {"sugar conservation and first-collector exclusivity", sugar_conservation},
        {"novelty equals brute-force k-NN", novelty_oracle},
        {"raycast equals ray march", raycast_oracle},
        {"pixel archive reset, no double reward", pixel_archive},
        {"t-test reference case", t_test_reference},
        {"incomplete-beta reflection", beta_reflection},
        {"run replay from seed", run_replay},
    };
    std::string detail;
    bool ok = true;
    for (const auto& [name, check] : props) {
        std::string err;
        try {
            err = check();
        }
        catch (const std::exception& e) {
            err = e.what();
        }
        if (!err.empty())
            ok = false;
        detail += (detail.empty() ? "" : "; ") + name + (err.empty() ? " ok" : " FAILED (" + err + ")");
    }
    verdict(7, ok, detail);
}

void games_group(const Options& o)
{
    ExperimentSpec s = spec_for(o, "games");
    for (auto st : {Strategy::Fitness, Strategy::Random}) {
        RunConfig c = make_profile(Profile::Desk, Environment::Game);
        c.game.game = GameId::Collector;
        c.evolution.max_generations = 200;
        c.strategy.strategy = st;
        c.game.strategy = st;
        s.arms.push_back({to_string(st), c});
    }
    const auto r = run_experiment(s);
    const auto fit = summarize(arm(r, "fitness").game_scores);
    const auto rnd = summarize(arm(r, "random").game_scores);
    if (!fit || !rnd) {
        verdict(8, false, "no game scores");
        return;
    }
    verdict(8, fit->mean >= rnd->mean, "fitness mean score " + fmt(fit->mean) + " vs random " + fmt(rnd->mean));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"acceptance criteria"};
    std::string group = "all";
    Options o;
    app.add_option("--group", group, "medium, hard, properties, games or all")
        ->check(CLI::IsMember({"medium", "hard", "properties", "games", "all"}));
    app.add_option("--workers", o.workers, "worker threads");
    app.add_option("--runs", o.runs, "runs per arm");
    app.add_flag("-v,--verbose", o.verbose, "per-run progress on stderr");
    CLI11_PARSE(app, argc, argv);

    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (group == "properties" || group == "all")
            property_group();
        if (group == "games" || group == "all")
            games_group(o);
        if (group == "medium" || group == "all")
            medium_group(o);
        if (group == "hard" || group == "all")
            hard_group(o);
    }
    catch (const std::exception& e) {
        std::cout << "acceptance aborted: " << e.what() << '\n';
        return 2;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "elapsed " << fmt(secs) << " s\n";
    return failures == 0 ? 0 : 1;
}
