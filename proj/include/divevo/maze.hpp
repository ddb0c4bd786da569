#ifndef DIVEVO_MAZE_HPP
#define DIVEVO_MAZE_HPP

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <divevo/rnn.hpp>

namespace divevo {

    using Vec2 = Eigen::Vector2d;

    struct Segment {
        Vec2 a;
        Vec2 b;
    };

    /// Static world: axis-aligned bounds [0,width] x [0,height] (y up), segment walls,
    /// start and goal. The bounding edges act as walls but are not stored in `walls`.
    struct MazeMap {
        std::string name;
        double width = 0;
        double height = 0;
        Vec2 start = Vec2::Zero();
        Vec2 goal = Vec2::Zero();
        double goal_radius = 5;
        std::vector<Segment> walls;

        double diagonal() const { return std::hypot(width, height); }
        bool strictly_inside(const Vec2& p) const { return p.x() > 0 && p.x() < width && p.y() > 0 && p.y() < height; }
        bool touches_wall(const Vec2& p) const;

        /// Throws ConfigError when a map invariant does not hold.
        void validate() const;
    };

    MazeMap parse_maze(std::istream& in, const std::string& source);
    MazeMap load_maze(const std::string& path);

    double cross(const Vec2& a, const Vec2& b);
    double point_segment_distance(const Vec2& p, const Segment& s);
    /// Closed test: touching endpoints and collinear overlap count as intersections.
    bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2);

    // Rangefinder and radar index order.
    enum class Direction { PosX = 0, NegX = 1, PosY = 2, NegY = 3 };
    // Network output order.
    enum class Action { Up = 0, Down = 1, Left = 2, Right = 3 };

    Vec2 unit_vector(Direction d);
    Direction direction_of(Action a);

    /// Exact distance from `origin` to the first wall or bounding edge along `dir`.
    double raycast(const MazeMap& map, const Vec2& origin, Direction dir);

    using SensorVector = Eigen::Matrix<double, 8, 1>;

    /// Four rangefinders (+x, -x, +y, -y) normalized by the map diagonal, then a
    /// one-hot radar over the same four world-axis quadrants pointing at the goal.
    SensorVector sense(const MazeMap& map, const Vec2& pos);
    int radar_quadrant(const Vec2& pos, const Vec2& goal);

    struct StepOutcome {
        Vec2 position;
        bool blocked = false;
    };

    StepOutcome step_agent(const MazeMap& map, const Vec2& pos, Action action, double speed);

    enum class InputKind { Sensors, NoInput, BinaryCounter };

    struct InputMode {
        InputKind kind = InputKind::Sensors;
        std::size_t counter_bits = 10;

        std::size_t width() const
        {
            switch (kind) {
            case InputKind::Sensors: return 8;
            case InputKind::NoInput: return 0;
            case InputKind::BinaryCounter: return counter_bits;
            }
            return 0;
        }
    };

    std::string to_string(InputKind k);
    InputKind parse_input_kind(const std::string& s);

    Eigen::VectorXd build_input(const InputMode& mode, const MazeMap& map, const Vec2& pos, std::size_t step);

    enum class Collision { Block, Freeze };

    struct EpisodeSettings {
        InputMode mode;
        std::size_t time_frame = 600;
        double speed = 1.5;
        Collision collision = Collision::Block;
    };

    struct AgentTrace {
        std::vector<Vec2> positions; // positions[0] is the start
        Vec2 final_position = Vec2::Zero();
        bool reached_goal = false;
        std::size_t steps_used = 0;
    };

    /// One agent's episode, advanced a step at a time so several agents can share a clock.
    class MazeAgent {
    public:
        MazeAgent(const MazeMap& map, const Genome& genome, const EpisodeSettings& settings);

        /// Moves one step. Returns false once the episode is over (goal reached or time up).
        bool advance();
        bool finished() const { return done_; }
        const Vec2& position() const { return pos_; }
        std::size_t steps() const { return step_; }
        AgentTrace take_trace();

    private:
        const MazeMap* map_;
        const Genome* genome_;
        EpisodeSettings settings_;
        Eigen::VectorXd input_, hidden_, hidden_next_, output_;
        Vec2 pos_;
        std::size_t step_ = 0;
        bool frozen_ = false;
        bool done_ = false;
        AgentTrace trace_;
    };

    using StepHook = std::function<void(std::size_t step, const Vec2& pos)>;
    using LockstepHook = std::function<void(std::size_t step, std::size_t agent, const Vec2& pos)>;

    AgentTrace run_episode(const MazeMap& map, const Genome& genome, const EpisodeSettings& settings, const StepHook& hook = {});

    /// Advances every agent one step per tick. After each tick the hook is called for every
    /// agent that moved, in ascending agent order.
    std::vector<AgentTrace> run_lockstep(const MazeMap& map, std::span<const Genome> population, const EpisodeSettings& settings,
        const LockstepHook& hook = {});

} // namespace divevo

#endif
