#include <divevo/maze.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <divevo/errors.hpp>

namespace divevo {

    double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

    double point_segment_distance(const Vec2& p, const Segment& s)
    {
        const Vec2 ab = s.b - s.a;
        const double len2 = ab.squaredNorm();
        if (len2 == 0)
            return (p - s.a).norm();
        const double t = std::clamp((p - s.a).dot(ab) / len2, 0.0, 1.0);
        return (p - (s.a + t * ab)).norm();
    }

    namespace {
        int orientation(const Vec2& a, const Vec2& b, const Vec2& c)
        {
            const double v = cross(b - a, c - a);
            return (v > 0) - (v < 0);
        }

        bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p)
        {
            return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) && std::min(a.y(), b.y()) <= p.y()
                && p.y() <= std::max(a.y(), b.y());
        }
    } // namespace

    bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2)
    {
        const int o1 = orientation(p1, p2, q1);
        const int o2 = orientation(p1, p2, q2);
        const int o3 = orientation(q1, q2, p1);
        const int o4 = orientation(q1, q2, p2);
        if (o1 != o2 && o3 != o4)
            return true;
        if (o1 == 0 && on_segment(p1, p2, q1))
            return true;
        if (o2 == 0 && on_segment(p1, p2, q2))
            return true;
        if (o3 == 0 && on_segment(q1, q2, p1))
            return true;
        if (o4 == 0 && on_segment(q1, q2, p2))
            return true;
        return false;
    }

    bool MazeMap::touches_wall(const Vec2& p) const
    {
        return std::any_of(walls.begin(), walls.end(), [&](const Segment& s) { return point_segment_distance(p, s) == 0; });
    }

    void MazeMap::validate() const
    {
        if (!(width > 0 && height > 0))
            throw ConfigError("map " + name + ": size must be positive");
        if (!(goal_radius > 0))
            throw ConfigError("map " + name + ": goalradius must be positive");
        if (!strictly_inside(start) || touches_wall(start))
            throw ConfigError("map " + name + ": start must lie strictly inside the bounds and off every wall");
        if (!strictly_inside(goal) || touches_wall(goal))
            throw ConfigError("map " + name + ": goal must lie strictly inside the bounds and off every wall");
        if ((start - goal).norm() <= goal_radius)
            throw ConfigError("map " + name + ": start lies inside the goal radius");
    }

    MazeMap parse_maze(std::istream& in, const std::string& source)
    {
        MazeMap map;
        map.name = source;
        bool have_size = false, have_start = false, have_goal = false;
        std::string line;
        int line_no = 0;
        auto fail = [&](const std::string& what) {
            throw ConfigError(source + ":" + std::to_string(line_no) + ": " + what + " in '" + line + "'");
        };
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            std::istringstream ls(hash == std::string::npos ? line : line.substr(0, hash));
            std::string directive;
            if (!(ls >> directive))
                continue;
            std::vector<double> v;
            double x;
            while (ls >> x)
                v.push_back(x);
            if (!ls.eof())
                fail("non-numeric argument");
            auto want = [&](std::size_t n) {
                if (v.size() != n)
                    fail("'" + directive + "' expects " + std::to_string(n) + " numbers");
            };
            if (directive == "size") {
                want(2);
                map.width = v[0];
                map.height = v[1];
                have_size = true;
            }
            else if (directive == "start") {
                want(2);
                map.start = {v[0], v[1]};
                have_start = true;
            }
            else if (directive == "goal") {
                want(2);
                map.goal = {v[0], v[1]};
                have_goal = true;
            }
            else if (directive == "goalradius") {
                want(1);
                map.goal_radius = v[0];
            }
            else if (directive == "wall") {
                want(4);
                map.walls.push_back({{v[0], v[1]}, {v[2], v[3]}});
            }
            else
                fail("unknown directive '" + directive + "'");
        }
        if (!have_size || !have_start || !have_goal)
            throw ConfigError(source + ": map needs 'size', 'start' and 'goal' directives");
        map.validate();
        return map;
    }

    MazeMap load_maze(const std::string& path)
    {
        std::ifstream f(path);
        if (!f)
            throw ConfigError("cannot open map file " + path);
        return parse_maze(f, path);
    }

    Vec2 unit_vector(Direction d)
    {
        switch (d) {
        case Direction::PosX: return {1, 0};
        case Direction::NegX: return {-1, 0};
        case Direction::PosY: return {0, 1};
        case Direction::NegY: return {0, -1};
        }
        return {0, 0};
    }

    Direction direction_of(Action a)
    {
        switch (a) {
        case Action::Up: return Direction::PosY;
        case Action::Down: return Direction::NegY;
        case Action::Left: return Direction::NegX;
        case Action::Right: return Direction::PosX;
        }
        return Direction::PosX;
    }

    double raycast(const MazeMap& map, const Vec2& origin, Direction dir)
    {
        if (origin.x() < 0 || origin.x() > map.width || origin.y() < 0 || origin.y() > map.height)
            throw ContractViolation("raycast: origin outside map bounds");
        const Vec2 d = unit_vector(dir);
        double best = 0;
        switch (dir) {
        case Direction::PosX: best = map.width - origin.x(); break;
        case Direction::NegX: best = origin.x(); break;
        case Direction::PosY: best = map.height - origin.y(); break;
        case Direction::NegY: best = origin.y(); break;
        }
        for (const auto& w : map.walls) {
            const Vec2 e = w.b - w.a;
            const Vec2 ao = w.a - origin;
            const double denom = cross(d, e);
            double t;
            if (denom != 0) {
                t = cross(ao, e) / denom;
                const double u = cross(ao, d) / denom;
                if (t < 0 || u < 0 || u > 1)
                    continue;
            }
            else {
                if (cross(ao, d) != 0)
                    continue; // parallel, off the ray line
                const double ta = ao.dot(d);
                const double tb = (w.b - origin).dot(d);
                const double lo = std::min(ta, tb), hi = std::max(ta, tb);
                if (hi < 0)
                    continue;
                t = lo <= 0 ? 0 : lo;
            }
            best = std::min(best, t);
        }
        return best;
    }

    int radar_quadrant(const Vec2& pos, const Vec2& goal)
    {
        const Vec2 d = goal - pos;
        const double ax = std::abs(d.x()), ay = std::abs(d.y());
        if (d.x() >= ay)
            return 0;
        if (-d.x() >= ay)
            return 1;
        if (d.y() >= ax)
            return 2;
        return 3;
    }

    SensorVector sense(const MazeMap& map, const Vec2& pos)
    {
        SensorVector s = SensorVector::Zero();
        const double diag = map.diagonal();
        for (int i = 0; i < 4; ++i)
            s(i) = std::clamp(raycast(map, pos, static_cast<Direction>(i)) / diag, 0.0, 1.0);
        s(4 + radar_quadrant(pos, map.goal)) = 1;
        return s;
    }

    StepOutcome step_agent(const MazeMap& map, const Vec2& pos, Action action, double speed)
    {
        const Vec2 candidate = pos + speed * unit_vector(direction_of(action));
        if (!map.strictly_inside(candidate))
            return {pos, true};
        for (const auto& w : map.walls)
            if (segments_intersect(pos, candidate, w.a, w.b))
                return {pos, true};
        return {candidate, false};
    }

    std::string to_string(InputKind k)
    {
        switch (k) {
        case InputKind::Sensors: return "sensors";
        case InputKind::NoInput: return "no_input";
        case InputKind::BinaryCounter: return "binary_counter";
        }
        return "?";
    }

    InputKind parse_input_kind(const std::string& s)
    {
        if (s == "sensors")
            return InputKind::Sensors;
        if (s == "no_input" || s == "none")
            return InputKind::NoInput;
        if (s == "binary_counter" || s == "counter")
            return InputKind::BinaryCounter;
        throw ConfigError("unknown input mode '" + s + "'");
    }

    namespace {
        void fill_input(const InputMode& mode, const MazeMap& map, const Vec2& pos, std::size_t step, Eigen::VectorXd& out)
        {
            switch (mode.kind) {
            case InputKind::Sensors: out = sense(map, pos); break;
            case InputKind::NoInput: break;
            case InputKind::BinaryCounter:
                for (std::size_t b = 0; b < mode.counter_bits; ++b)
                    out(static_cast<Eigen::Index>(b)) = ((step >> b) & 1U) ? 1.0 : 0.0;
                break;
            }
        }
    } // namespace

    Eigen::VectorXd build_input(const InputMode& mode, const MazeMap& map, const Vec2& pos, std::size_t step)
    {
        Eigen::VectorXd out(static_cast<Eigen::Index>(mode.width()));
        fill_input(mode, map, pos, step, out);
        return out;
    }

    MazeAgent::MazeAgent(const MazeMap& map, const Genome& genome, const EpisodeSettings& settings)
        : map_(&map), genome_(&genome), settings_(settings), pos_(map.start)
    {
        const auto dims = genome.dims();
        if (dims.inputs != settings.mode.width() || dims.outputs != 4)
            throw ContractViolation("maze agent: genome dims do not match input mode / 4 actions");
        if (settings.mode.kind == InputKind::BinaryCounter && settings.time_frame > 1
            && (std::size_t{1} << std::min<std::size_t>(settings.mode.counter_bits, 63)) < settings.time_frame)
            throw ContractViolation("maze agent: counter bits cannot cover the time frame");
        input_.resize(static_cast<Eigen::Index>(dims.inputs));
        hidden_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dims.hidden));
        hidden_next_.resize(hidden_.size());
        output_.resize(4);
        trace_.positions.reserve(settings.time_frame + 1);
        trace_.positions.push_back(pos_);
        done_ = settings.time_frame == 0;
    }

    bool MazeAgent::advance()
    {
        if (done_)
            return false;
        if (!frozen_) {
            fill_input(settings_.mode, *map_, pos_, step_, input_);
            forward_into(*genome_, input_, hidden_, hidden_next_, output_);
            hidden_.swap(hidden_next_);
            const auto out = step_agent(*map_, pos_, static_cast<Action>(argmax_action(output_)), settings_.speed);
            pos_ = out.position;
            if (out.blocked && settings_.collision == Collision::Freeze)
                frozen_ = true;
        }
        ++step_;
        trace_.positions.push_back(pos_);
        if ((pos_ - map_->goal).norm() <= map_->goal_radius) {
            trace_.reached_goal = true;
            done_ = true;
        }
        if (step_ >= settings_.time_frame)
            done_ = true;
        return true;
    }

    AgentTrace MazeAgent::take_trace()
    {
        trace_.final_position = pos_;
        trace_.steps_used = step_;
        return std::move(trace_);
    }

    AgentTrace run_episode(const MazeMap& map, const Genome& genome, const EpisodeSettings& settings, const StepHook& hook)
    {
        MazeAgent agent(map, genome, settings);
        while (agent.advance())
            if (hook)
                hook(agent.steps() - 1, agent.position());
        return agent.take_trace();
    }

    std::vector<AgentTrace> run_lockstep(const MazeMap& map, std::span<const Genome> population, const EpisodeSettings& settings,
        const LockstepHook& hook)
    {
        std::vector<MazeAgent> agents;
        agents.reserve(population.size());
        for (const auto& g : population)
            agents.emplace_back(map, g, settings);
        std::vector<char> moved(agents.size());
        for (std::size_t step = 0; step < settings.time_frame; ++step) {
            bool any = false;
            for (std::size_t i = 0; i < agents.size(); ++i) {
                moved[i] = agents[i].advance();
                any = any || moved[i];
            }
            if (!any)
                break;
            if (hook)
                for (std::size_t i = 0; i < agents.size(); ++i)
                    if (moved[i])
                        hook(step, i, agents[i].position());
        }
        std::vector<AgentTrace> traces;
        traces.reserve(agents.size());
        for (auto& a : agents)
            traces.push_back(a.take_trace());
        return traces;
    }

} // namespace divevo
