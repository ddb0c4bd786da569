#include <divevo/config.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <divevo/errors.hpp>

#ifndef DIVEVO_DATA_DIR
#define DIVEVO_DATA_DIR "data"
#endif

namespace divevo {

    namespace {
        std::string trim(const std::string& s)
        {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        }

        double to_double(const std::string& key, const std::string& v)
        {
            try {
                std::size_t used = 0;
                const double d = std::stod(v, &used);
                if (used == v.size())
                    return d;
            }
            catch (const std::exception&) {
            }
            throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
        }

        std::uint64_t to_u64(const std::string& key, const std::string& v)
        {
            std::uint64_t out = 0;
            const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
            if (ec != std::errc() || ptr != v.data() + v.size())
                throw ConfigError("'" + key + "' expects a non-negative integer, got '" + v + "'");
            return out;
        }

        bool to_bool(const std::string& key, const std::string& v)
        {
            if (v == "true" || v == "1" || v == "yes")
                return true;
            if (v == "false" || v == "0" || v == "no")
                return false;
            throw ConfigError("'" + key + "' expects true/false, got '" + v + "'");
        }
    } // namespace

    Profile parse_profile(const std::string& s)
    {
        if (s == "desk")
            return Profile::Desk;
        if (s == "paper")
            return Profile::Paper;
        throw ConfigError("unknown profile '" + s + "' (expected desk or paper)");
    }

    RunConfig make_profile(Profile profile, Environment env)
    {
        RunConfig c;
        c.environment = env;
        if (env == Environment::Maze) {
            c.evolution.population_size = 250;
            c.evolution.time_frame = 600;
            c.evolution.max_generations = profile == Profile::Paper ? 1200 : 400;
        }
        else {
            c.evolution.population_size = 75;
            c.evolution.time_frame = 250;
            c.evolution.max_generations = profile == Profile::Paper ? 10000 : 200;
            c.strategy.strategy = Strategy::Fitness;
        }
        c.runs = profile == Profile::Paper ? 50 : 10;
        return c;
    }

    void apply_setting(RunConfig& c, const std::string& key, const std::string& value)
    {
        auto& e = c.evolution;
        auto& s = c.strategy;
        if (key == "environment") {
            if (value == "maze")
                c.environment = Environment::Maze;
            else if (value == "game")
                c.environment = Environment::Game;
            else
                throw ConfigError("environment must be maze or game");
        }
        else if (key == "population_size")
            e.population_size = to_u64(key, value);
        else if (key == "max_generations")
            e.max_generations = to_u64(key, value);
        else if (key == "time_frame")
            e.time_frame = to_u64(key, value);
        else if (key == "elite_fraction")
            e.elite_fraction = to_double(key, value);
        else if (key == "mutation_sigma")
            e.mutation_sigma = to_double(key, value);
        else if (key == "init_sigma")
            e.init_sigma = to_double(key, value);
        else if (key == "hidden")
            e.hidden = to_u64(key, value);
        else if (key == "reproduce")
            e.reproduce = parse_reproduction(value);
        else if (key == "seed")
            e.master_seed = to_u64(key, value);
        else if (key == "strategy") {
            s.strategy = parse_strategy(value);
            c.game.strategy = s.strategy;
        }
        else if (key == "alpha")
            s.alpha = to_double(key, value);
        else if (key == "density") {
            s.density = to_double(key, value);
            c.game.density = s.density;
        }
        else if (key == "cell_size")
            s.cell_size = to_double(key, value);
        else if (key == "k")
            s.k = to_u64(key, value);
        else if (key == "novelty_threshold")
            s.novelty_threshold = to_double(key, value);
        else if (key == "sugar_layout") {
            if (value == "per_generation")
                s.layout = SugarLayout::PerGeneration;
            else if (value == "fixed")
                s.layout = SugarLayout::Fixed;
            else
                throw ConfigError("sugar_layout must be per_generation or fixed");
        }
        else if (key == "map")
            c.map = value;
        else if (key == "input_mode")
            c.input.kind = parse_input_kind(value);
        else if (key == "counter_bits")
            c.input.counter_bits = to_u64(key, value);
        else if (key == "speed")
            c.speed = to_double(key, value);
        else if (key == "collision") {
            if (value == "block")
                c.collision = Collision::Block;
            else if (value == "freeze")
                c.collision = Collision::Freeze;
            else
                throw ConfigError("collision must be block or freeze");
        }
        else if (key == "game")
            c.game.game = parse_game(value);
        else if (key == "respawn_interval")
            c.game.respawn_interval = to_u64(key, value);
        else if (key == "runs")
            c.runs = to_u64(key, value);
        else if (key == "workers")
            c.workers = to_u64(key, value);
        else if (key == "welch")
            c.welch = to_bool(key, value);
        else
            throw ConfigError("unknown config key '" + key + "'");
    }

    void apply_config(RunConfig& cfg, std::istream& in, const std::string& source)
    {
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
            if (body.empty())
                continue;
            const auto eq = body.find('=');
            if (eq == std::string::npos)
                throw ConfigError(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
            try {
                apply_setting(cfg, trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
            }
            catch (const ConfigError& err) {
                throw ConfigError(source + ":" + std::to_string(line_no) + ": " + err.what());
            }
        }
    }

    void apply_config_file(RunConfig& cfg, const std::string& path)
    {
        std::ifstream f(path);
        if (!f)
            throw ConfigError("cannot open config file " + path);
        apply_config(cfg, f, path);
    }

    std::string resolve_map_path(const std::string& name)
    {
        namespace fs = std::filesystem;
        if (fs::exists(name))
            return name;
        for (const auto& candidate : {fs::path(DIVEVO_DATA_DIR) / "mazes" / (name + ".maze"), fs::path(DIVEVO_DATA_DIR) / "mazes" / name})
            if (fs::exists(candidate))
                return candidate.string();
        throw ConfigError("map '" + name + "' not found (neither a file nor a shipped map)");
    }

    MazeMap load_named_maze(const std::string& name)
    {
        auto map = load_maze(resolve_map_path(name));
        map.name = std::filesystem::path(name).stem().string();
        return map;
    }

    void RunConfig::validate() const
    {
        evolution.validate();
        strategy.validate();
        if (runs < 1)
            throw ConfigError("runs must be >= 1");
        if (!(speed > 0))
            throw ConfigError("speed must be > 0");
        if (environment == Environment::Maze) {
            if (strategy.strategy == Strategy::Pixel)
                throw ConfigError("the pixel strategy needs environment = game");
            if (input.kind == InputKind::BinaryCounter
                && (input.counter_bits >= 63 || (std::uint64_t{1} << input.counter_bits) < evolution.time_frame))
                throw ConfigError("counter_bits must cover time_frame steps");
            (void)resolve_map_path(map);
        }
        else {
            if (strategy.strategy == Strategy::Novelty || strategy.strategy == Strategy::Weighted)
                throw ConfigError("grid games support the fitness, sugar, pixel and random strategies");
            if (game.respawn_interval < 1)
                throw ConfigError("respawn_interval must be >= 1");
        }
    }

    MazeTask RunConfig::maze_task() const
    {
        MazeTask t;
        t.map = load_named_maze(map);
        t.episode.mode = input;
        t.episode.time_frame = evolution.time_frame;
        t.episode.speed = speed;
        t.episode.collision = collision;
        t.strategy = strategy;
        return t;
    }

    GameTask RunConfig::game_task() const
    {
        GameTask t = game;
        t.strategy = strategy.strategy;
        t.density = strategy.density;
        return t;
    }

    std::string describe(const RunConfig& c)
    {
        std::ostringstream o;
        o.precision(17);
        const auto& e = c.evolution;
        const auto& s = c.strategy;
        o << "environment = " << (c.environment == Environment::Maze ? "maze" : "game") << '\n'
          << "population_size = " << e.population_size << '\n'
          << "max_generations = " << e.max_generations << '\n'
          << "time_frame = " << e.time_frame << '\n'
          << "elite_fraction = " << e.elite_fraction << '\n'
          << "mutation_sigma = " << e.mutation_sigma << '\n'
          << "init_sigma = " << e.init_sigma << '\n'
          << "hidden = " << e.hidden << '\n'
          << "reproduce = " << to_string(e.reproduce) << '\n'
          << "seed = " << e.master_seed << '\n'
          << "strategy = " << to_string(s.strategy) << '\n'
          << "alpha = " << s.alpha << '\n'
          << "density = " << s.density << '\n'
          << "cell_size = " << s.cell_size << '\n'
          << "k = " << s.k << '\n'
          << "novelty_threshold = " << s.novelty_threshold << '\n'
          << "sugar_layout = " << (s.layout == SugarLayout::Fixed ? "fixed" : "per_generation") << '\n'
          << "map = " << c.map << '\n'
          << "input_mode = " << to_string(c.input.kind) << '\n'
          << "counter_bits = " << c.input.counter_bits << '\n'
          << "speed = " << c.speed << '\n'
          << "collision = " << (c.collision == Collision::Block ? "block" : "freeze") << '\n'
          << "game = " << to_string(c.game.game) << '\n'
          << "respawn_interval = " << c.game.respawn_interval << '\n'
          << "runs = " << c.runs << '\n'
          << "workers = " << c.workers << '\n'
          << "welch = " << (c.welch ? "true" : "false") << '\n';
        return o.str();
    }

} // namespace divevo
