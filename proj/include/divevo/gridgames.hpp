#ifndef DIVEVO_GRIDGAMES_HPP
#define DIVEVO_GRIDGAMES_HPP

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include <divevo/random.hpp>

namespace divevo {

    /// Channel-stacked boolean occupancy grid, MinAtar style.
    struct Screen {
        std::size_t channels = 0;
        std::size_t height = 0;
        std::size_t width = 0;
        std::vector<std::uint8_t> bits; // [channel][row][col]

        Screen() = default;
        Screen(std::size_t c, std::size_t h, std::size_t w) : channels(c), height(h), width(w), bits(c * h * w, 0) {}

        std::size_t index(std::size_t c, std::size_t r, std::size_t col) const { return (c * height + r) * width + col; }
        bool at(std::size_t c, std::size_t r, std::size_t col) const { return bits[index(c, r, col)] != 0; }
        void set(std::size_t c, std::size_t r, std::size_t col, bool v = true) { bits[index(c, r, col)] = v ? 1 : 0; }

        /// Row-major bits per channel in channel order, packed 8 to a byte.
        std::string canonical() const;
        Eigen::VectorXd as_input() const;
        /// One text row per grid row; each cell shows the highest set channel (0-9) or '.'.
        std::string render() const;

        friend bool operator==(const Screen&, const Screen&) = default;
    };

    struct Cell {
        int row = 0;
        int col = 0;
        friend bool operator==(const Cell&, const Cell&) = default;
    };

    enum class GameId { Collector, Crossing };
    std::string to_string(GameId g);
    GameId parse_game(const std::string& s);

    // Action set shared by both games.
    enum class GameAction { Noop = 0, Up = 1, Down = 2, Left = 3, Right = 4 };
    inline constexpr std::size_t game_action_count = 5;

    struct GameOptions {
        std::size_t time_frame = 250;
        bool cars = true; // CROSSING only; false gives an empty road for scripted checks
    };

    struct GameStep {
        Screen screen;
        double score_delta = 0;
        bool done = false;
    };

    /// Ms. Pacman analogue. Channels: player, pellet, enemy. The player eats pellets (+10);
    /// one enemy takes a greedy Manhattan step toward the player every frame, moving along
    /// the axis with the larger gap (horizontal on ties). Contact ends the game, as does
    /// clearing every pellet.
    class CollectorGame {
    public:
        static constexpr int size = 10;
        static constexpr std::size_t channels = 3;

        explicit CollectorGame(std::uint64_t seed);
        CollectorGame(Cell player, Cell enemy, std::vector<Cell> pellets);

        GameStep step(GameAction a);
        Screen screen() const;
        const Cell& player() const { return player_; }
        const Cell& enemy() const { return enemy_; }
        bool done() const { return done_; }

    private:
        Cell player_, enemy_;
        std::vector<std::uint8_t> pellets_;
        std::size_t pellets_left_ = 0;
        bool done_ = false;
    };

    /// Freeway analogue. Channels: player, car. Cars on rows 1-8 slide horizontally with a
    /// fixed per-row period and direction and wrap around. Reaching row 0 scores +1 and
    /// returns the player to the start; a car hit returns the player to the start.
    class CrossingGame {
    public:
        static constexpr int size = 10;
        static constexpr std::size_t channels = 2;
        static constexpr Cell start{9, 5};

        CrossingGame(std::uint64_t seed, bool cars);

        GameStep step(GameAction a, std::size_t frame);
        Screen screen() const;
        const Cell& player() const { return player_; }

    private:
        struct Car {
            int row;
            int col;
            int dir;
            int period;
        };
        bool hit() const;

        Cell player_ = start;
        std::vector<Car> cars_;
    };

    class GridGame {
    public:
        GridGame(GameId id, std::uint64_t seed, GameOptions opts = {});
        GridGame(CollectorGame game, GameOptions opts = {});

        /// Advances one frame. Stepping a finished game is a contract violation.
        GameStep step(GameAction a);

        Screen screen() const;
        GameId id() const { return id_; }
        double score() const { return score_; }
        std::size_t frame() const { return frame_; }
        bool done() const { return done_; }
        Cell player() const;
        std::size_t channels() const;
        std::size_t input_width() const { return channels() * 10 * 10; }

    private:
        GameId id_;
        GameOptions opts_;
        std::variant<CollectorGame, CrossingGame> game_;
        double score_ = 0;
        std::size_t frame_ = 0;
        bool done_ = false;
    };

    /// Screens seen so far in the current generation, shared by the whole population.
    class ScreenArchive {
    public:
        /// Clears the archive when the generation index moves on.
        void begin_generation(std::size_t generation);
        /// 1 if the screen has not been seen this generation (and records it), else 0.
        int submit(const Screen& screen);

        std::size_t size() const { return seen_.size(); }
        std::size_t generation() const { return generation_; }
        bool contains(const Screen& s) const { return seen_.count(s.canonical()) != 0; }

    private:
        std::unordered_set<std::string> seen_;
        std::size_t generation_ = 0;
        std::optional<std::array<std::size_t, 3>> shape_;
    };

    int pixel_novelty_reward(ScreenArchive& archive, const Screen& screen);

    /// Grid sugar with periodic respawn. Sugars start at `density` per cell; one more appears
    /// at a uniformly chosen sugar-free cell on every frame that is a positive multiple of
    /// `respawn_interval`.
    class GridSugarState {
    public:
        struct Collection {
            Cell cell;
            std::size_t agent;
            std::size_t frame;
        };

        GridSugarState(int rows, int cols, double density, std::size_t respawn_interval, Rng field_rng, Rng respawn_rng);

        /// Collects for the given agents in ascending order (nullopt = not on the board), then
        /// respawns if due. Returns per-agent rewards for this frame.
        std::vector<int> tick(std::size_t frame, const std::vector<std::optional<Cell>>& positions);

        bool has_sugar(const Cell& c) const { return sugar_[index(c)] != 0; }
        std::size_t sugar_count() const;
        std::size_t initial_count() const { return initial_; }
        std::size_t respawned_count() const { return respawned_; }
        std::size_t collected_count() const { return log_.size(); }
        std::size_t collected_by(std::size_t agent) const { return agent < per_agent_.size() ? per_agent_[agent] : 0; }
        const std::vector<Collection>& log() const { return log_; }
        /// Places a sugar directly (test setups).
        void place(const Cell& c) { sugar_[index(c)] = 1; }

    private:
        std::size_t index(const Cell& c) const { return static_cast<std::size_t>(c.row * cols_ + c.col); }

        int rows_, cols_;
        std::size_t interval_;
        Rng respawn_rng_;
        std::vector<std::uint8_t> sugar_;
        std::vector<std::size_t> per_agent_;
        std::vector<Collection> log_;
        std::size_t initial_ = 0;
        std::size_t respawned_ = 0;
    };

} // namespace divevo

#endif
