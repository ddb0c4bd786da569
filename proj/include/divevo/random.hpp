#ifndef DIVEVO_RANDOM_HPP
#define DIVEVO_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace divevo {

    using Rng = std::mt19937_64;

    // Stream tags. Every stochastic draw in a run comes from a generator
    // seeded with derive_seed(master, {tag, indices...}).
    namespace stream {
        inline constexpr std::uint64_t init = 1;     // {init, agent}
        inline constexpr std::uint64_t mutate = 2;   // {mutate, generation, agent}
        inline constexpr std::uint64_t field = 3;    // {field, generation}
        inline constexpr std::uint64_t game = 4;     // {game, generation}
        inline constexpr std::uint64_t respawn = 5;  // {respawn, generation}
        inline constexpr std::uint64_t parent = 6;   // {parent, generation}
        inline constexpr std::uint64_t baseline = 7; // {baseline, generation}
    } // namespace stream

    inline std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path)
    {
        std::uint64_t h = splitmix64(master);
        for (auto p : path)
            h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
        return h;
    }

    inline Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> path)
    {
        return Rng(derive_seed(master, path));
    }

} // namespace divevo

#endif
