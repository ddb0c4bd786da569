#include <divevo/gridgames.hpp>

#include <algorithm>
#include <cstdlib>

#include <divevo/errors.hpp>

namespace divevo {

    std::string Screen::canonical() const
    {
        std::string out((bits.size() + 7) / 8, '\0');
        for (std::size_t i = 0; i < bits.size(); ++i)
            if (bits[i])
                out[i / 8] = static_cast<char>(out[i / 8] | (1 << (i % 8)));
        return out;
    }

    Eigen::VectorXd Screen::as_input() const
    {
        Eigen::VectorXd v(static_cast<Eigen::Index>(bits.size()));
        for (std::size_t i = 0; i < bits.size(); ++i)
            v(static_cast<Eigen::Index>(i)) = bits[i];
        return v;
    }

    std::string Screen::render() const
    {
        std::string out;
        for (std::size_t r = 0; r < height; ++r) {
            for (std::size_t col = 0; col < width; ++col) {
                char ch = '.';
                for (std::size_t c = 0; c < channels; ++c)
                    if (at(c, r, col))
                        ch = static_cast<char>('0' + c);
                out += ch;
            }
            out += '\n';
        }
        return out;
    }

    std::string to_string(GameId g) { return g == GameId::Collector ? "collector" : "crossing"; }

    GameId parse_game(const std::string& s)
    {
        if (s == "collector")
            return GameId::Collector;
        if (s == "crossing")
            return GameId::Crossing;
        throw ConfigError("unknown game '" + s + "'");
    }

    namespace {
        Cell moved(Cell c, GameAction a, int size)
        {
            switch (a) {
            case GameAction::Noop: break;
            case GameAction::Up: c.row = std::max(0, c.row - 1); break;
            case GameAction::Down: c.row = std::min(size - 1, c.row + 1); break;
            case GameAction::Left: c.col = std::max(0, c.col - 1); break;
            case GameAction::Right: c.col = std::min(size - 1, c.col + 1); break;
            }
            return c;
        }
    } // namespace

    CollectorGame::CollectorGame(std::uint64_t seed) : player_{size - 1, size / 2}
    {
        Rng rng(seed);
        enemy_ = {0, std::uniform_int_distribution<int>(0, size - 1)(rng)};
        pellets_.assign(size * size, 1);
        pellets_[static_cast<std::size_t>(player_.row * size + player_.col)] = 0;
        pellets_left_ = size * size - 1;
    }

    CollectorGame::CollectorGame(Cell player, Cell enemy, std::vector<Cell> pellets) : player_(player), enemy_(enemy)
    {
        pellets_.assign(size * size, 0);
        for (const auto& p : pellets)
            pellets_[static_cast<std::size_t>(p.row * size + p.col)] = 1;
        pellets_left_ = static_cast<std::size_t>(std::count(pellets_.begin(), pellets_.end(), 1));
    }

    GameStep CollectorGame::step(GameAction a)
    {
        GameStep out;
        player_ = moved(player_, a, size);
        auto& pellet = pellets_[static_cast<std::size_t>(player_.row * size + player_.col)];
        if (pellet) {
            pellet = 0;
            --pellets_left_;
            out.score_delta = 10;
        }
        if (player_ == enemy_)
            done_ = true;
        else {
            const int dr = player_.row - enemy_.row;
            const int dc = player_.col - enemy_.col;
            if (std::abs(dc) >= std::abs(dr) && dc != 0)
                enemy_.col += dc > 0 ? 1 : -1;
            else if (dr != 0)
                enemy_.row += dr > 0 ? 1 : -1;
            if (player_ == enemy_)
                done_ = true;
        }
        if (pellets_left_ == 0)
            done_ = true;
        out.done = done_;
        out.screen = screen();
        return out;
    }

    Screen CollectorGame::screen() const
    {
        Screen s(channels, size, size);
        s.set(0, static_cast<std::size_t>(player_.row), static_cast<std::size_t>(player_.col));
        for (int r = 0; r < size; ++r)
            for (int c = 0; c < size; ++c)
                if (pellets_[static_cast<std::size_t>(r * size + c)])
                    s.set(1, static_cast<std::size_t>(r), static_cast<std::size_t>(c));
        s.set(2, static_cast<std::size_t>(enemy_.row), static_cast<std::size_t>(enemy_.col));
        return s;
    }

    CrossingGame::CrossingGame(std::uint64_t seed, bool cars)
    {
        if (!cars)
            return;
        Rng rng(seed);
        std::uniform_int_distribution<int> col(0, size - 1);
        static constexpr int periods[8] = {1, 3, 2, 4, 2, 1, 3, 2};
        for (int r = 1; r <= 8; ++r)
            cars_.push_back({r, col(rng), r % 2 ? 1 : -1, periods[r - 1]});
    }

    bool CrossingGame::hit() const
    {
        return std::any_of(cars_.begin(), cars_.end(), [&](const Car& c) { return c.row == player_.row && c.col == player_.col; });
    }

    GameStep CrossingGame::step(GameAction a, std::size_t frame)
    {
        GameStep out;
        player_ = moved(player_, a, size);
        if (player_.row == 0) {
            out.score_delta = 1;
            player_ = start;
        }
        if (hit())
            player_ = start;
        for (auto& c : cars_)
            if (frame % static_cast<std::size_t>(c.period) == 0)
                c.col = (c.col + c.dir + size) % size;
        if (hit())
            player_ = start;
        out.screen = screen();
        return out;
    }

    Screen CrossingGame::screen() const
    {
        Screen s(channels, size, size);
        s.set(0, static_cast<std::size_t>(player_.row), static_cast<std::size_t>(player_.col));
        for (const auto& c : cars_)
            s.set(1, static_cast<std::size_t>(c.row), static_cast<std::size_t>(c.col));
        return s;
    }

    namespace {
        std::variant<CollectorGame, CrossingGame> make_game(GameId id, std::uint64_t seed, const GameOptions& opts)
        {
            if (id == GameId::Collector)
                return CollectorGame(seed);
            return CrossingGame(seed, opts.cars);
        }
    } // namespace

    GridGame::GridGame(GameId id, std::uint64_t seed, GameOptions opts) : id_(id), opts_(opts), game_(make_game(id, seed, opts))
    {
        done_ = opts_.time_frame == 0;
    }

    GridGame::GridGame(CollectorGame game, GameOptions opts) : id_(GameId::Collector), opts_(opts), game_(std::move(game))
    {
        done_ = opts_.time_frame == 0 || std::get<CollectorGame>(game_).done();
    }

    GameStep GridGame::step(GameAction a)
    {
        if (done_)
            throw ContractViolation("game step on a finished game");
        ++frame_;
        GameStep out = std::visit(
            [&](auto& g) {
                if constexpr (std::is_same_v<std::decay_t<decltype(g)>, CollectorGame>)
                    return g.step(a);
                else
                    return g.step(a, frame_);
            },
            game_);
        score_ += out.score_delta;
        if (frame_ >= opts_.time_frame)
            out.done = true;
        done_ = out.done;
        return out;
    }

    Screen GridGame::screen() const
    {
        return std::visit([](const auto& g) { return g.screen(); }, game_);
    }

    Cell GridGame::player() const
    {
        return std::visit([](const auto& g) { return g.player(); }, game_);
    }

    std::size_t GridGame::channels() const { return id_ == GameId::Collector ? CollectorGame::channels : CrossingGame::channels; }

    void ScreenArchive::begin_generation(std::size_t generation)
    {
        if (generation != generation_ || !seen_.empty())
            seen_.clear();
        generation_ = generation;
    }

    int ScreenArchive::submit(const Screen& screen)
    {
        const std::array<std::size_t, 3> shape{screen.channels, screen.height, screen.width};
        if (shape_ && *shape_ != shape)
            throw ContractViolation("screen archive: screen shape does not match the archive's game");
        shape_ = shape;
        return seen_.insert(screen.canonical()).second ? 1 : 0;
    }

    int pixel_novelty_reward(ScreenArchive& archive, const Screen& screen) { return archive.submit(screen); }

    GridSugarState::GridSugarState(int rows, int cols, double density, std::size_t respawn_interval, Rng field_rng, Rng respawn_rng)
        : rows_(rows), cols_(cols), interval_(respawn_interval), respawn_rng_(respawn_rng)
    {
        if (!(density >= 0 && density <= 1))
            throw ConfigError("sugar density must lie in [0,1]");
        if (respawn_interval == 0)
            throw ConfigError("respawn interval must be >= 1");
        sugar_.assign(static_cast<std::size_t>(rows * cols), 0);
        std::bernoulli_distribution coin(density);
        for (auto& s : sugar_)
            if (coin(field_rng)) {
                s = 1;
                ++initial_;
            }
    }

    std::size_t GridSugarState::sugar_count() const { return static_cast<std::size_t>(std::count(sugar_.begin(), sugar_.end(), 1)); }

    std::vector<int> GridSugarState::tick(std::size_t frame, const std::vector<std::optional<Cell>>& positions)
    {
        std::vector<int> rewards(positions.size(), 0);
        for (std::size_t agent = 0; agent < positions.size(); ++agent) {
            if (!positions[agent])
                continue;
            auto& s = sugar_[index(*positions[agent])];
            if (!s)
                continue;
            s = 0;
            rewards[agent] = 1;
            if (per_agent_.size() <= agent)
                per_agent_.resize(agent + 1, 0);
            ++per_agent_[agent];
            log_.push_back({*positions[agent], agent, frame});
        }
        if (frame > 0 && frame % interval_ == 0) {
            std::vector<std::size_t> empty;
            for (std::size_t i = 0; i < sugar_.size(); ++i)
                if (!sugar_[i])
                    empty.push_back(i);
            if (!empty.empty()) {
                std::uniform_int_distribution<std::size_t> pick(0, empty.size() - 1);
                sugar_[empty[pick(respawn_rng_)]] = 1;
                ++respawned_;
            }
        }
        return rewards;
    }

} // namespace divevo
