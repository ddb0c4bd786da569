#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <divevo/config.hpp>
#include <divevo/errors.hpp>
#include <divevo/maze.hpp>

#include "oracles.hpp"

using namespace divevo;

namespace {

MazeMap open_map(double w, double h, Vec2 start, Vec2 goal)
{
    MazeMap m;
    m.name = "open";
    m.width = w;
    m.height = h;
    m.start = start;
    m.goal = goal;
    return m;
}

// Output bias alone decides the action; no inputs, so it never changes.
Genome constant_action(Action a, std::size_t inputs = 8)
{
    Genome g(NetworkDims{inputs, 4, 4});
    g.output_bias(static_cast<int>(a)) = 1;
    return g;
}

} // namespace

TEST_SUITE("maze") {

TEST_CASE("map parsing")
{
    std::istringstream in("# comment\nsize 200 150\nstart 10 10  # trailing\ngoal 190 140\ngoalradius 4\nwall 100 0 100 60\n");
    const MazeMap m = parse_maze(in, "t.maze");
    CHECK(m.width == 200);
    CHECK(m.height == 150);
    CHECK(m.start == Vec2(10, 10));
    CHECK(m.goal == Vec2(190, 140));
    CHECK(m.goal_radius == 4);
    REQUIRE(m.walls.size() == 1);
    CHECK(m.walls[0].b == Vec2(100, 60));
}

TEST_CASE("map parse errors name the line")
{
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return parse_maze(in, "bad.maze");
    };
    CHECK_THROWS_WITH_AS(parse("size 10 10\nstart 1 1\ngoal 8 8\nwal 1 2 3 4\n"), doctest::Contains("bad.maze:4"), ConfigError);
    CHECK_THROWS_WITH_AS(parse("size 10 x\n"), doctest::Contains("bad.maze:1"), ConfigError);
    CHECK_THROWS_WITH_AS(parse("size 10 10 10\n"), doctest::Contains("expects 2"), ConfigError);
    CHECK_THROWS_AS(parse("size 10 10\nstart 1 1\n"), ConfigError);
    // start on a wall, goal out of bounds, start inside the goal disk
    CHECK_THROWS_AS(parse("size 10 10\nstart 5 5\ngoal 8 8\nwall 5 0 5 9\n"), ConfigError);
    CHECK_THROWS_AS(parse("size 10 10\nstart 1 1\ngoal 10 5\n"), ConfigError);
    CHECK_THROWS_AS(parse("size 100 100\nstart 50 50\ngoal 52 50\ngoalradius 5\n"), ConfigError);
    CHECK_THROWS_AS(parse("size 0 10\nstart 1 1\ngoal 8 8\n"), ConfigError);
}

TEST_CASE("shipped maps load and validate")
{
    for (const char* name : {"medium", "hard", "superhard"}) {
        CAPTURE(name);
        const MazeMap m = load_named_maze(name);
        CHECK(m.name == name);
        CHECK(m.width == 200);
        CHECK(m.height == 150);
        CHECK(m.goal_radius == 5);
        CHECK_FALSE(m.walls.empty());
    }
}

TEST_CASE("raycast on an empty map and against a wall")
{
    MazeMap m = open_map(100, 100, {10, 10}, {90, 90});
    CHECK(raycast(m, {50, 50}, Direction::PosX) == 50);
    CHECK(raycast(m, {50, 50}, Direction::NegY) == 50);
    CHECK(raycast(m, {20, 30}, Direction::NegX) == 20);
    CHECK(raycast(m, {20, 30}, Direction::PosY) == 70);
    m.walls.push_back({{60, 0}, {60, 100}});
    CHECK(raycast(m, {50, 50}, Direction::PosX) == doctest::Approx(10));
    CHECK(raycast(m, {50, 50}, Direction::NegX) == 50);
    CHECK_THROWS_AS(raycast(m, {-1, 50}, Direction::PosX), ContractViolation);
}

TEST_CASE("raycast handles collinear walls and endpoint hits")
{
    MazeMap m = open_map(100, 100, {10, 10}, {90, 90});
    m.walls.push_back({{70, 50}, {80, 50}}); // on the ray line
    m.walls.push_back({{40, 10}, {40, 50}}); // endpoint touches the -x ray
    CHECK(raycast(m, {50, 50}, Direction::PosX) == doctest::Approx(20));
    CHECK(raycast(m, {50, 50}, Direction::NegX) == doctest::Approx(10));
}

TEST_CASE("raycast agrees with a 0.01-step ray march")
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ux(0.5, 199.5), uy(0.5, 149.5);
    int checked = 0;
    while (checked < 1000) {
        const MazeMap m = oracle::random_map(rng, 1 + checked % 8);
        const Vec2 origin(ux(rng), uy(rng));
        const auto dir = static_cast<Direction>(checked % 4);
        const Vec2 d = unit_vector(dir);
        if (!oracle::off_walls(m, origin, 0.05))
            continue;
        // A wall endpoint grazing the ray line is ambiguous at sample resolution.
        bool grazing = false;
        for (const auto& w : m.walls)
            for (const Vec2& e : {w.a, w.b}) {
                const Vec2 rel = e - origin;
                if (rel.dot(d) > -0.02 && std::abs(cross(d, rel)) < 0.02)
                    grazing = true;
            }
        if (grazing)
            continue;
        const double exact = raycast(m, origin, dir);
        const double marched = oracle::ray_march(m, origin, d);
        CAPTURE(checked);
        CAPTURE(origin.transpose());
        CHECK(std::abs(exact - marched) <= 0.01);
        ++checked;
    }
}

TEST_CASE("sense on an empty map")
{
    const MazeMap m = open_map(100, 100, {10, 10}, {90, 50});
    const SensorVector s = sense(m, {50, 50});
    for (int i = 0; i < 4; ++i)
        CHECK(s(i) == doctest::Approx(50 / std::sqrt(2.0 * 100 * 100)).epsilon(1e-12));
    CHECK(s.tail<4>() == Eigen::Vector4d(1, 0, 0, 0));
}

TEST_CASE("radar quadrants and tie-breaks")
{
    const Vec2 p(50, 50);
    CHECK(radar_quadrant(p, {80, 55}) == 0);
    CHECK(radar_quadrant(p, {20, 45}) == 1);
    CHECK(radar_quadrant(p, {52, 90}) == 2);
    CHECK(radar_quadrant(p, {48, 10}) == 3);
    // 45-degree boundaries resolve to the lower index
    CHECK(radar_quadrant(p, {60, 60}) == 0);
    CHECK(radar_quadrant(p, {60, 40}) == 0);
    CHECK(radar_quadrant(p, {40, 60}) == 1);
    CHECK(radar_quadrant(p, {40, 40}) == 1);
    CHECK(radar_quadrant(p, p) == 0);
}

TEST_CASE("sensor ranges and radar over random positions")
{
    std::mt19937_64 rng(77);
    const MazeMap base = load_named_maze("hard");
    std::uniform_real_distribution<double> ux(0.01, 199.99), uy(0.01, 149.99);
    for (int i = 0; i < 2000; ++i) {
        MazeMap m = base;
        m.goal = {ux(rng), uy(rng)};
        const SensorVector s = sense(m, {ux(rng), uy(rng)});
        CHECK(s.head<4>().minCoeff() >= 0);
        CHECK(s.head<4>().maxCoeff() <= 1);
        CHECK(s.tail<4>().sum() == 1.0);
        CHECK(((s.tail<4>().array() == 0) || (s.tail<4>().array() == 1)).all());
    }
}

TEST_CASE("step_agent moves or blocks")
{
    MazeMap m = open_map(100, 100, {10, 10}, {90, 90});
    auto r = step_agent(m, {10, 10}, Action::Right, 2);
    CHECK(r.position == Vec2(12, 10));
    CHECK_FALSE(r.blocked);
    CHECK(step_agent(m, {10, 10}, Action::Up, 2).position == Vec2(10, 12));
    CHECK(step_agent(m, {10, 10}, Action::Down, 2).position == Vec2(10, 8));
    CHECK(step_agent(m, {10, 10}, Action::Left, 2).position == Vec2(8, 10));

    m.walls.push_back({{11, 0}, {11, 50}});
    r = step_agent(m, {10, 10}, Action::Right, 2);
    CHECK(r.position == Vec2(10, 10));
    CHECK(r.blocked);
    const auto again = step_agent(m, r.position, Action::Right, 2);
    CHECK(again.blocked);
    CHECK(again.position == Vec2(10, 10));

    // landing exactly on a wall or a bound is blocked too
    CHECK(step_agent(m, {9, 20}, Action::Right, 2).blocked);
    CHECK(step_agent(m, {99, 20}, Action::Right, 1).blocked);
}

TEST_CASE("input modes")
{
    const MazeMap m = load_named_maze("medium");
    const InputMode counter{InputKind::BinaryCounter, 10};
    const Eigen::VectorXd bits = build_input(counter, m, m.start, 5);
    Eigen::VectorXd expect = Eigen::VectorXd::Zero(10);
    expect(0) = 1;
    expect(2) = 1;
    CHECK(bits == expect);
    CHECK(build_input({InputKind::NoInput, 10}, m, m.start, 3).size() == 0);
    const Eigen::VectorXd s = build_input({}, m, m.start, 0);
    REQUIRE(s.size() == 8);
    CHECK(s.tail(4).sum() == 1.0);
    CHECK(parse_input_kind("binary_counter") == InputKind::BinaryCounter);
    CHECK(to_string(InputKind::NoInput) == "no_input");
    CHECK_THROWS_AS(parse_input_kind("pixels"), ConfigError);
}

TEST_CASE("episode with zero time frame")
{
    const MazeMap m = load_named_maze("medium");
    EpisodeSettings es;
    es.time_frame = 0;
    const auto t = run_episode(m, constant_action(Action::Up), es);
    REQUIRE(t.positions.size() == 1);
    CHECK(t.positions[0] == m.start);
    CHECK_FALSE(t.reached_goal);
    CHECK(t.steps_used == 0);
}

TEST_CASE("straight run to a goal due east")
{
    const MazeMap m = open_map(200, 20, {10, 10}, {100, 10});
    EpisodeSettings es;
    const auto t = run_episode(m, constant_action(Action::Right), es);
    CHECK(t.reached_goal);
    // first step whose position is inside the goal disk
    const double d = (m.goal - m.start).norm() - m.goal_radius;
    CHECK(t.steps_used == static_cast<std::size_t>(std::ceil(d / es.speed)));
    CHECK(t.positions.size() == t.steps_used + 1);
    CHECK((t.final_position - m.goal).norm() <= m.goal_radius);
}

TEST_CASE("blocked agent stays live; frozen agent does not")
{
    MazeMap m = open_map(200, 150, {10, 10}, {190, 140});
    m.walls.push_back({{12, 0}, {12, 30}});
    EpisodeSettings es;
    es.time_frame = 20;
    const auto t = run_episode(m, constant_action(Action::Right), es);
    CHECK(t.steps_used == 20);
    CHECK(t.final_position.x() == doctest::Approx(11.5));

    // Hidden unit counts steps: Right for three steps, then Up.
    Genome g(NetworkDims{8, 1, 4});
    g.hidden_bias(0) = 1;
    g.hidden_to_hidden(0, 0) = 1;
    g.hidden_to_output(0, 0) = 1;
    g.output_bias(3) = 3.5;
    const auto live = run_episode(m, g, es);
    CHECK(live.final_position.y() > 10);
    es.collision = Collision::Freeze;
    const auto frozen = run_episode(m, g, es);
    CHECK(frozen.final_position == Vec2(11.5, 10));
    CHECK(frozen.steps_used == 20);
}

TEST_CASE("episodes are deterministic and stay in free space")
{
    const MazeMap m = load_named_maze("hard");
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto rng = make_rng(seed, {stream::init, 0});
        const Genome g = init_genome<double>({8, 32, 4}, rng);
        const auto a = run_episode(m, g, {});
        const auto b = run_episode(m, g, {});
        CHECK(a.positions == b.positions);
        CHECK(a.positions.front() == m.start);
        CHECK(a.steps_used <= 600);
        bool any_in_goal = false;
        for (const auto& p : a.positions) {
            CHECK(m.strictly_inside(p));
            CHECK(oracle::off_walls(m, p));
            any_in_goal = any_in_goal || (p - m.goal).norm() <= m.goal_radius;
        }
        CHECK(any_in_goal == a.reached_goal);
    }
}

TEST_CASE("lockstep traces equal independent episodes")
{
    const MazeMap m = load_named_maze("medium");
    std::vector<Genome> pop;
    for (std::uint64_t i = 0; i < 12; ++i) {
        auto rng = make_rng(9, {stream::init, i});
        pop.push_back(init_genome<double>({8, 32, 4}, rng));
    }
    std::vector<std::pair<std::size_t, std::size_t>> order;
    const auto lock = run_lockstep(m, pop, {}, [&](std::size_t step, std::size_t agent, const Vec2&) { order.emplace_back(step, agent); });
    for (std::size_t i = 0; i < pop.size(); ++i)
        CHECK(lock[i].positions == run_episode(m, pop[i], {}).positions);
    CHECK(std::is_sorted(order.begin(), order.end()));
}

TEST_CASE("genome shape must match the input mode")
{
    const MazeMap m = load_named_maze("medium");
    EpisodeSettings es;
    CHECK_THROWS_AS(run_episode(m, constant_action(Action::Up, 10), es), ContractViolation);
    es.mode = {InputKind::BinaryCounter, 9};
    CHECK_THROWS_AS(run_episode(m, constant_action(Action::Up, 9), es), ContractViolation);
    es.mode = {InputKind::BinaryCounter, 10};
    CHECK_NOTHROW(run_episode(m, constant_action(Action::Up, 10), es));
}

}
