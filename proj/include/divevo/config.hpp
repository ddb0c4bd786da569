#ifndef DIVEVO_CONFIG_HPP
#define DIVEVO_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>

#include <divevo/evolution.hpp>
#include <divevo/game_run.hpp>
#include <divevo/maze.hpp>

namespace divevo {

    enum class Environment { Maze, Game };

    /// Everything one run needs, settable through `key = value` lines.
    struct RunConfig {
        Environment environment = Environment::Maze;
        EvolutionConfig evolution;
        StrategySettings strategy;
        std::string map = "medium";
        InputMode input;
        double speed = 1.5;
        Collision collision = Collision::Block;
        GameTask game;
        std::size_t runs = 10;
        std::size_t workers = 1;
        bool welch = false;

        /// Resolves the map and checks every section. Throws ConfigError.
        void validate() const;
        MazeTask maze_task() const;
        GameTask game_task() const;
    };

    enum class Profile { Desk, Paper };
    Profile parse_profile(const std::string& s);

    /// Defaults for an environment at desk or full scale.
    RunConfig make_profile(Profile profile, Environment env);

    void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
    /// Applies `key = value` lines; `#` starts a comment. Errors name the line.
    void apply_config(RunConfig& cfg, std::istream& in, const std::string& source);
    void apply_config_file(RunConfig& cfg, const std::string& path);

    /// Map lookup: an existing path, or a shipped map name such as "hard".
    std::string resolve_map_path(const std::string& name_or_path);
    MazeMap load_named_maze(const std::string& name_or_path);

    /// One `key = value` line per setting, in a fixed order.
    std::string describe(const RunConfig& cfg);

} // namespace divevo

#endif
