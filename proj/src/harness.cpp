#include <divevo/harness.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <divevo/errors.hpp>
#include <divevo/game_run.hpp>

namespace divevo {

    namespace {
        std::string num(double v)
        {
            if (std::isnan(v))
                return "NA";
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }

        std::string short_num(double v)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6g", v);
            return buf;
        }

        std::vector<std::string> split(const std::string& s, char sep)
        {
            std::vector<std::string> out;
            std::string cur;
            std::istringstream in(s);
            while (std::getline(in, cur, sep))
                out.push_back(cur);
            if (!s.empty() && s.back() == sep)
                out.emplace_back();
            return out;
        }

        void write_file(const std::filesystem::path& p, const std::string& text)
        {
            std::filesystem::create_directories(p.parent_path().empty() ? "." : p.parent_path());
            std::ofstream f(p, std::ios::binary);
            if (!f)
                throw std::runtime_error("cannot write " + p.string());
            f << text;
        }
    } // namespace

    void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn)
    {
        workers = std::max<std::size_t>(1, std::min(workers, n));
        if (workers == 1) {
            for (std::size_t i = 0; i < n; ++i)
                fn(i);
            return;
        }
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    }
                    catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error)
                            error = std::current_exception();
                    }
                }
            });
        pool.clear();
        if (error)
            std::rethrow_exception(error);
    }

    RunRecord execute_run(const RunConfig& cfg)
    {
        cfg.validate();
        if (cfg.environment == Environment::Game)
            return evolve_game(cfg.evolution, cfg.game_task());
        return evolve_maze(cfg.evolution, cfg.maze_task());
    }

    void write_run_csv(std::ostream& out, const RunRecord& r)
    {
        out << csv_schema_line << '\n';
        out << "# seed=" << r.seed << ",strategy=" << r.strategy << ",environment=" << r.environment
            << ",generations_to_solve=" << (r.generations_to_solve ? std::to_string(*r.generations_to_solve) : "NA") << '\n';
        out << "generation,best_fitness,mean_fitness,sugar_initial,sugar_collected,archive_size,solved,champion,"
               "champion_fitness,champion_distance,champion_score,champion_x,champion_y\n";
        for (const auto& g : r.reports) {
            const double nan = std::nan("");
            const double x = g.champion_trace ? g.champion_trace->final_position.x() : nan;
            const double y = g.champion_trace ? g.champion_trace->final_position.y() : nan;
            out << g.generation << ',' << num(g.best_fitness) << ',' << num(g.mean_fitness) << ',' << g.sugar_initial << ','
                << g.sugar_collected << ',' << g.archive_size << ',' << (g.solved ? 1 : 0) << ',' << g.champion << ','
                << num(g.champion_fitness) << ',' << num(g.champion_distance) << ',' << num(g.champion_score) << ',' << num(x) << ','
                << num(y) << '\n';
        }
    }

    std::string run_csv(const RunRecord& record)
    {
        std::ostringstream o;
        write_run_csv(o, record);
        return o.str();
    }

    RunCsv read_run_csv(std::istream& in)
    {
        RunCsv out;
        std::string line;
        if (!std::getline(in, line) || line != csv_schema_line)
            throw ConfigError("run csv: missing schema line");
        if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
            throw ConfigError("run csv: missing metadata line");
        for (const auto& kv : split(line.substr(2), ',')) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                continue;
            const auto k = kv.substr(0, eq), v = kv.substr(eq + 1);
            if (k == "seed")
                out.seed = std::stoull(v);
            else if (k == "strategy")
                out.strategy = v;
            else if (k == "environment")
                out.environment = v;
            else if (k == "generations_to_solve" && v != "NA")
                out.generations_to_solve = std::stoull(v);
        }
        std::getline(in, line); // column header
        while (std::getline(in, line))
            if (!line.empty())
                out.rows.push_back(split(line, ','));
        return out;
    }

    namespace {
        void slim(RunRecord& r)
        {
            for (std::size_t i = 0; i + 1 < r.reports.size(); ++i)
                r.reports[i].champion_trace.reset();
        }

        std::string csv_label(const std::string& s)
        {
            std::string out;
            for (char c : s)
                out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-') ? c : '_';
            return out;
        }
    } // namespace

    ExperimentResult run_experiment(const ExperimentSpec& spec)
    {
        if (spec.runs < 1)
            throw ConfigError("runs must be >= 1");
        for (const auto& arm : spec.arms)
            arm.config.validate();

        ExperimentResult result;
        result.arms.resize(spec.arms.size());
        const std::size_t total = spec.arms.size() * spec.runs;
        std::vector<RunRecord> records(total);
        std::mutex hook_mutex;
        parallel_for(total, spec.workers, [&](std::size_t job) {
            const auto& arm = spec.arms[job / spec.runs];
            RunConfig cfg = arm.config;
            cfg.evolution.master_seed = run_seed(spec.seed_base, job % spec.runs);
            RunRecord r = execute_run(cfg);
            if (!spec.out_dir.empty())
                write_file(std::filesystem::path(spec.out_dir) / csv_label(arm.label) / ("run_" + std::to_string(r.seed) + ".csv"), run_csv(r));
            slim(r);
            if (spec.on_run) {
                std::lock_guard lock(hook_mutex);
                spec.on_run(arm.label, r);
            }
            records[job] = std::move(r);
        });

        for (std::size_t a = 0; a < spec.arms.size(); ++a) {
            auto& ar = result.arms[a];
            ar.label = spec.arms[a].label;
            std::vector<std::optional<std::size_t>> gens;
            for (std::size_t i = 0; i < spec.runs; ++i) {
                auto& r = records[a * spec.runs + i];
                gens.push_back(r.generations_to_solve);
                if (spec.arms[a].config.environment == Environment::Game)
                    ar.game_scores.push_back(mean_champion_score(r, 100));
                ar.records.push_back(std::move(r));
            }
            ar.summary = summarize_runs(gens);
        }

        const std::size_t m = result.arms.size();
        result.p_values.assign(m, std::vector<std::optional<TTestResult>>(m));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                const bool games = spec.arms[i].config.environment == Environment::Game;
                const auto& a = games ? result.arms[i].game_scores : result.arms[i].summary.values;
                const auto& b = games ? result.arms[j].game_scores : result.arms[j].summary.values;
                if (i != j && a.size() >= 2 && b.size() >= 2)
                    result.p_values[i][j] = t_test(a, b, spec.welch);
            }

        if (!spec.out_dir.empty()) {
            std::ostringstream o;
            write_summary_csv(o, result);
            write_file(std::filesystem::path(spec.out_dir) / "summary.csv", o.str());
        }
        return result;
    }

    void write_summary_csv(std::ostream& out, const ExperimentResult& result)
    {
        out << csv_schema_line << '\n';
        out << "label,strategy,environment,runs,successes,n,mean,std,mean_score,std_score";
        for (const auto& a : result.arms)
            out << ",p_" << csv_label(a.label);
        out << '\n';
        for (std::size_t i = 0; i < result.arms.size(); ++i) {
            const auto& a = result.arms[i];
            const auto& s = a.summary;
            const std::string strategy = a.records.empty() ? "" : a.records.front().strategy;
            const std::string env = a.records.empty() ? "" : a.records.front().environment;
            out << csv_label(a.label) << ',' << strategy << ',' << env << ',' << s.runs << ',' << s.successes << ','
                << (s.generations ? s.generations->n : 0) << ',' << (s.generations ? num(s.generations->mean) : "NA") << ','
                << (s.generations ? num(s.generations->std) : "NA");
            const auto scores = summarize(a.game_scores);
            out << ',' << (scores ? num(scores->mean) : "NA") << ',' << (scores ? num(scores->std) : "NA");
            for (std::size_t j = 0; j < result.arms.size(); ++j)
                out << ',' << (result.p_values[i][j] ? num(result.p_values[i][j]->p) : "NA");
            out << '\n';
        }
    }

    ExperimentResult run_density_sweep(ExperimentSpec spec, const RunConfig& base, const std::vector<double>& densities)
    {
        if (densities.size() < 2)
            throw ConfigError("a density sweep needs at least two densities");
        if (!std::is_sorted(densities.begin(), densities.end()))
            throw ConfigError("sweep densities must be sorted ascending");
        spec.arms.clear();
        for (double d : densities) {
            if (!(d >= 0 && d <= 1))
                throw ConfigError("sweep densities must lie in [0,1]");
            RunConfig c = base;
            c.strategy.density = d;
            c.game.density = d;
            spec.arms.push_back({"density_" + short_num(d), c});
        }
        auto result = run_experiment(spec);
        if (!spec.out_dir.empty()) {
            std::ostringstream o;
            write_density_csv(o, densities, result);
            write_file(std::filesystem::path(spec.out_dir) / "density_sweep.csv", o.str());
        }
        return result;
    }

    void write_density_csv(std::ostream& out, const std::vector<double>& densities, const ExperimentResult& result)
    {
        out << csv_schema_line << '\n' << "density,mean_generations,std,successes\n";
        for (std::size_t i = 0; i < densities.size(); ++i) {
            const auto& s = result.arms[i].summary;
            out << num(densities[i]) << ',' << (s.generations ? num(s.generations->mean) : "NA") << ','
                << (s.generations ? num(s.generations->std) : "NA") << ',' << s.successes << '\n';
        }
    }

    ExperimentResult run_ablation(ExperimentSpec spec, const RunConfig& base, const std::vector<InputMode>& modes)
    {
        spec.arms.clear();
        for (const auto& m : modes) {
            RunConfig c = base;
            c.strategy.strategy = Strategy::Sugar;
            c.input = m;
            spec.arms.push_back({to_string(m.kind), c});
        }
        return run_experiment(spec);
    }

    std::string trajectory_svg(const MazeMap& map, const AgentTrace& trace, const SugarField* sugar)
    {
        const double w = map.width, h = map.height;
        auto X = [](double x) { return short_num(x); };
        auto Y = [h](double y) { return short_num(h - y); };
        std::ostringstream o;
        o << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << short_num(w) << ' ' << short_num(h) << "\" width=\""
          << short_num(4 * w) << "\" height=\"" << short_num(4 * h) << "\">\n";
        o << "<rect x=\"0\" y=\"0\" width=\"" << short_num(w) << "\" height=\"" << short_num(h) << "\" fill=\"white\"/>\n";
        if (sugar) {
            const auto& lat = sugar->lattice();
            o << "<g fill=\"#b0b0b0\">\n";
            for (std::size_t r = 0; r < lat.rows; ++r)
                for (std::size_t c = 0; c < lat.cols; ++c)
                    if (sugar->state(r * lat.cols + c) != CellState::Empty)
                        o << "<rect x=\"" << X(c * lat.cell_size) << "\" y=\"" << Y((r + 1) * lat.cell_size) << "\" width=\""
                          << short_num(lat.cell_size) << "\" height=\"" << short_num(lat.cell_size) << "\"/>\n";
            o << "</g>\n";
        }
        auto line = [&](double x1, double y1, double x2, double y2) {
            o << "<line x1=\"" << X(x1) << "\" y1=\"" << Y(y1) << "\" x2=\"" << X(x2) << "\" y2=\"" << Y(y2)
              << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        };
        line(0, 0, w, 0);
        line(w, 0, w, h);
        line(w, h, 0, h);
        line(0, h, 0, 0);
        for (const auto& s : map.walls)
            line(s.a.x(), s.a.y(), s.b.x(), s.b.y());
        o << "<circle cx=\"" << X(map.start.x()) << "\" cy=\"" << Y(map.start.y()) << "\" r=\"2.5\" fill=\"red\"/>\n";
        o << "<circle cx=\"" << X(map.goal.x()) << "\" cy=\"" << Y(map.goal.y()) << "\" r=\"" << short_num(map.goal_radius)
          << "\" fill=\"green\"/>\n";
        o << "<polyline fill=\"none\" stroke=\"blue\" stroke-width=\"0.6\" points=\"";
        for (std::size_t i = 0; i < trace.positions.size(); ++i)
            o << (i ? " " : "") << X(trace.positions[i].x()) << ',' << Y(trace.positions[i].y());
        o << "\"/>\n</svg>\n";
        return o.str();
    }

    std::string export_trajectory(const RunRecord& record, std::size_t generation, const MazeMap& map, const SugarField* sugar,
        const std::string& out_dir)
    {
        if (generation >= record.reports.size())
            throw ConfigError("generation " + std::to_string(generation) + " is not in the run record");
        const auto& rep = record.reports[generation];
        if (!rep.champion_trace)
            throw ConfigError("generation " + std::to_string(generation) + " has no champion trace");
        const auto path = std::filesystem::path(out_dir) / ("trajectory_" + std::to_string(generation) + ".svg");
        write_file(path, trajectory_svg(map, *rep.champion_trace, sugar));
        return path.string();
    }

} // namespace divevo
