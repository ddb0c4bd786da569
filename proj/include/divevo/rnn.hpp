#ifndef DIVEVO_RNN_HPP
#define DIVEVO_RNN_HPP

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <divevo/errors.hpp>
#include <divevo/random.hpp>

namespace divevo {

    struct NetworkDims {
        std::size_t inputs = 8;
        std::size_t hidden = 32;
        std::size_t outputs = 4;

        // A zero-width input layer is legal: the blind maze agent runs on recurrence alone.
        bool valid() const { return hidden >= 1 && outputs >= 1; }

        std::size_t parameter_count() const
        {
            return inputs * hidden + hidden * hidden + hidden * outputs + hidden + outputs;
        }

        friend bool operator==(const NetworkDims&, const NetworkDims&) = default;
    };

    /// Weights and biases of a single-hidden-layer Elman network.
    ///
    /// Matrices are row-major so that data() walks parameters in the
    /// serialization order (input->hidden, hidden->hidden, hidden->output,
    /// hidden bias, output bias).
    template <typename Scalar>
    struct ElmanGenome {
        using mat_t = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        using vec_t = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

        mat_t input_to_hidden;  // hidden x inputs
        mat_t hidden_to_hidden; // hidden x hidden
        mat_t hidden_to_output; // outputs x hidden
        vec_t hidden_bias;
        vec_t output_bias;

        ElmanGenome() = default;

        explicit ElmanGenome(const NetworkDims& dims)
            : input_to_hidden(mat_t::Zero(dims.hidden, dims.inputs)),
              hidden_to_hidden(mat_t::Zero(dims.hidden, dims.hidden)),
              hidden_to_output(mat_t::Zero(dims.outputs, dims.hidden)),
              hidden_bias(vec_t::Zero(dims.hidden)),
              output_bias(vec_t::Zero(dims.outputs))
        {
            if (!dims.valid())
                throw ConfigError("network dims: hidden and outputs must be >= 1");
        }

        NetworkDims dims() const
        {
            return {static_cast<std::size_t>(input_to_hidden.cols()),
                static_cast<std::size_t>(hidden_bias.size()),
                static_cast<std::size_t>(output_bias.size())};
        }

        std::size_t parameter_count() const { return dims().parameter_count(); }

        // Visits every parameter block in serialization order.
        template <typename F>
        void for_each_block(F&& f)
        {
            f(input_to_hidden.data(), input_to_hidden.size());
            f(hidden_to_hidden.data(), hidden_to_hidden.size());
            f(hidden_to_output.data(), hidden_to_output.size());
            f(hidden_bias.data(), hidden_bias.size());
            f(output_bias.data(), output_bias.size());
        }

        template <typename F>
        void for_each_block(F&& f) const
        {
            f(input_to_hidden.data(), input_to_hidden.size());
            f(hidden_to_hidden.data(), hidden_to_hidden.size());
            f(hidden_to_output.data(), hidden_to_output.size());
            f(hidden_bias.data(), hidden_bias.size());
            f(output_bias.data(), output_bias.size());
        }

        bool all_finite() const
        {
            bool ok = true;
            for_each_block([&](const Scalar* p, Eigen::Index n) {
                for (Eigen::Index i = 0; i < n; ++i)
                    ok = ok && std::isfinite(p[i]);
            });
            return ok;
        }

        friend bool operator==(const ElmanGenome& a, const ElmanGenome& b)
        {
            return a.dims() == b.dims() && a.input_to_hidden == b.input_to_hidden
                && a.hidden_to_hidden == b.hidden_to_hidden && a.hidden_to_output == b.hidden_to_output
                && a.hidden_bias == b.hidden_bias && a.output_bias == b.output_bias;
        }
    };

    using Genome = ElmanGenome<double>;

    template <typename Scalar>
    using Activations = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    /// Every parameter drawn i.i.d. from N(0, scale^2).
    template <typename Scalar = double>
    ElmanGenome<Scalar> init_genome(const NetworkDims& dims, Rng& rng, Scalar scale = Scalar(1))
    {
        ElmanGenome<Scalar> g(dims);
        std::normal_distribution<Scalar> normal(Scalar(0), scale);
        g.for_each_block([&](Scalar* p, Eigen::Index n) {
            for (Eigen::Index i = 0; i < n; ++i)
                p[i] = normal(rng);
        });
        return g;
    }

    /// Child = parent + N(0, sigma^2) on every weight and bias.
    template <typename Scalar>
    ElmanGenome<Scalar> mutate(const ElmanGenome<Scalar>& parent, Scalar sigma, Rng& rng)
    {
        if (!(sigma > Scalar(0)))
            throw ConfigError("mutation sigma must be > 0");
        ElmanGenome<Scalar> child = parent;
        std::normal_distribution<Scalar> normal(Scalar(0), sigma);
        child.for_each_block([&](Scalar* p, Eigen::Index n) {
            for (Eigen::Index i = 0; i < n; ++i)
                p[i] += normal(rng);
        });
        return child;
    }

    /// In-place step for hot loops. `hidden_next` must not alias `hidden`.
    template <typename Scalar>
    void forward_into(const ElmanGenome<Scalar>& g, const Activations<Scalar>& input, const Activations<Scalar>& hidden,
        Activations<Scalar>& hidden_next, Activations<Scalar>& output)
    {
        hidden_next.noalias() = g.hidden_to_hidden * hidden;
        if (g.input_to_hidden.cols() > 0)
            hidden_next.noalias() += g.input_to_hidden * input;
        hidden_next += g.hidden_bias;
        // NaN (from inf - inf once a recurrent loop saturates) maps to 0 as well.
        hidden_next = hidden_next.unaryExpr([](Scalar v) { return v > Scalar(0) ? v : Scalar(0); });
        output.noalias() = g.hidden_to_output * hidden_next;
        output += g.output_bias;
    }

    template <typename Scalar>
    struct StepResult {
        Activations<Scalar> output;
        Activations<Scalar> hidden;
    };

    template <typename Scalar>
    void check_shapes(const ElmanGenome<Scalar>& g, Eigen::Index input_size, Eigen::Index hidden_size)
    {
        if (input_size != g.input_to_hidden.cols() || hidden_size != g.hidden_bias.size())
            throw ContractViolation("forward: input or hidden size does not match genome dims");
    }

    /// h' = ReLU(W_ih x + W_hh h + b_h), y = W_ho h' + b_o. Outputs are linear.
    template <typename Scalar>
    StepResult<Scalar> forward(const ElmanGenome<Scalar>& g, const Activations<Scalar>& hidden, const Activations<Scalar>& input)
    {
        check_shapes(g, input.size(), hidden.size());
        StepResult<Scalar> r{Activations<Scalar>(g.output_bias.size()), Activations<Scalar>(g.hidden_bias.size())};
        forward_into(g, input, hidden, r.hidden, r.output);
        return r;
    }

    /// Index of the largest output; ties and NaNs resolve to the lowest index.
    template <typename Derived>
    int argmax_action(const Eigen::MatrixBase<Derived>& y)
    {
        int best = 0;
        auto best_v = -std::numeric_limits<typename Derived::Scalar>::infinity();
        bool any = false;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const auto v = y(i);
            if (std::isnan(v))
                continue;
            if (!any || v > best_v) {
                best = static_cast<int>(i);
                best_v = v;
                any = true;
            }
        }
        return best;
    }

    // Flat form: three dims followed by the parameters, all as doubles.
    std::vector<double> flatten(const Genome& g);
    Genome unflatten(std::span<const double> flat);
    void write_genome(const std::string& path, const Genome& g);
    Genome read_genome(const std::string& path);

} // namespace divevo

#endif
