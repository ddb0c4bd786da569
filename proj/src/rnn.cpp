#include <divevo/rnn.hpp>

#include <algorithm>
#include <cstring>
#include <fstream>

namespace divevo {

    std::vector<double> flatten(const Genome& g)
    {
        const NetworkDims d = g.dims();
        std::vector<double> out;
        out.reserve(3 + d.parameter_count());
        out.push_back(static_cast<double>(d.inputs));
        out.push_back(static_cast<double>(d.hidden));
        out.push_back(static_cast<double>(d.outputs));
        g.for_each_block([&](const double* p, Eigen::Index n) { out.insert(out.end(), p, p + n); });
        return out;
    }

    Genome unflatten(std::span<const double> flat)
    {
        if (flat.size() < 3)
            throw ConfigError("genome blob too short");
        for (std::size_t i = 0; i < 3; ++i)
            if (flat[i] < 0 || flat[i] != std::floor(flat[i]))
                throw ConfigError("genome blob: bad dimension header");
        NetworkDims d{static_cast<std::size_t>(flat[0]), static_cast<std::size_t>(flat[1]), static_cast<std::size_t>(flat[2])};
        if (flat.size() != 3 + d.parameter_count())
            throw ConfigError("genome blob: parameter count does not match dims");
        Genome g(d);
        std::size_t at = 3;
        g.for_each_block([&](double* p, Eigen::Index n) {
            std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(at), n, p);
            at += static_cast<std::size_t>(n);
        });
        return g;
    }

    void write_genome(const std::string& path, const Genome& g)
    {
        const auto flat = flatten(g);
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot open " + path + " for writing");
        f.write(reinterpret_cast<const char*>(flat.data()), static_cast<std::streamsize>(flat.size() * sizeof(double)));
    }

    Genome read_genome(const std::string& path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot open " + path);
        std::vector<char> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        if (bytes.size() % sizeof(double) != 0)
            throw ConfigError(path + ": size is not a multiple of 8 bytes");
        std::vector<double> flat(bytes.size() / sizeof(double));
        std::memcpy(flat.data(), bytes.data(), bytes.size());
        return unflatten(flat);
    }

} // namespace divevo
