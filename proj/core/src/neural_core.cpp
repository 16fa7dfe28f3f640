// SPDX-License-Identifier: Apache-2.0
//
// rissc: RIS-assisted semantic transmission simulator
// Copyright (C) 2026 The rissc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "rissc/neural_core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

namespace rissc {

namespace {

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

template <typename S>
struct LayerT {
    Mat<S> weight;
    Vec<S> bias;
    Activation activation;
};

template <typename S>
S softplus(S z)
{
    using std::exp;
    using std::log1p;
    return z > 0 ? z + log1p(exp(-z)) : log1p(exp(z));
}

template <typename S>
Vec<S> activate(const Vec<S>& z, Activation act)
{
    using std::exp;
    switch (act) {
    case Activation::relu:
        return z.cwiseMax(S(0));
    case Activation::sigmoid:
        return z.unaryExpr([](S v) { return S(1) / (S(1) + exp(-v)); });
    case Activation::softmax: {
        const Vec<S> e = (z.array() - z.maxCoeff()).exp().matrix();
        return e / e.sum();
    }
    case Activation::linear:
        break;
    }
    return z;
}

// Loss from the final pre-activation z and output y = act(z).
template <typename S>
S loss_from_output(const Vec<S>& z, const Vec<S>& y, Activation act, const Target& target, Loss loss)
{
    using std::exp;
    using std::log;
    switch (loss) {
    case Loss::mse_on_selected_output: {
        if (target.action < 0 || target.action >= y.size())
            throw std::invalid_argument("mse_on_selected_output: action index out of range");
        const S d = y(target.action) - S(target.value);
        return d * d;
    }
    case Loss::binary_cross_entropy: {
        if (target.vector.size() != y.size())
            throw std::invalid_argument("binary_cross_entropy: target length mismatch");
        S total = 0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const S t = S(target.vector(i));
            if (act == Activation::sigmoid) {
                total += softplus(z(i)) - t * z(i);
            } else {
                const S p = std::clamp(y(i), S(1e-12), S(1) - S(1e-12));
                total -= t * log(p) + (S(1) - t) * log(S(1) - p);
            }
        }
        return total / S(y.size());
    }
    case Loss::cross_entropy: {
        if (target.vector.size() != y.size())
            throw std::invalid_argument("cross_entropy: target length mismatch");
        S total = 0;
        if (act == Activation::softmax) {
            const S m = z.maxCoeff();
            const S lse = m + log((z.array() - m).exp().sum());
            for (Eigen::Index i = 0; i < y.size(); ++i)
                total -= S(target.vector(i)) * (z(i) - lse);
        } else {
            for (Eigen::Index i = 0; i < y.size(); ++i)
                total -= S(target.vector(i)) * log(std::max(y(i), S(1e-300)));
        }
        return total;
    }
    }
    return 0;
}

template <typename S>
S evaluate_loss(const std::vector<LayerT<S>>& layers, const Vec<S>& input, const Target& target, Loss loss)
{
    Vec<S> a = input;
    Vec<S> z;
    for (const auto& l : layers) {
        z = l.weight * a + l.bias;
        a = activate(z, l.activation);
    }
    return S(target.weight) * loss_from_output<S>(z, a, layers.back().activation, target, loss);
}

template <typename S>
std::vector<LayerT<S>> convert(const DenseNetwork& net)
{
    std::vector<LayerT<S>> out;
    out.reserve(net.layers.size());
    for (const auto& l : net.layers)
        out.push_back({l.weight.cast<S>(), l.bias.cast<S>(), l.activation});
    return out;
}

void check_finite(const Eigen::VectorXd& v, const char* what)
{
    if (!v.allFinite())
        throw std::runtime_error(std::string("non-finite value in ") + what);
}

struct ForwardCache {
    std::vector<Eigen::VectorXd> a;  // a[0] = input, a[l+1] = output of layer l
    std::vector<Eigen::VectorXd> z;
};

void forward_cached(const DenseNetwork& net, const Eigen::VectorXd& input, ForwardCache& cache)
{
    if (input.size() != net.input_size())
        throw std::invalid_argument("forward: input length " + std::to_string(input.size()) +
                                    " does not match " + std::to_string(net.input_size()));
    const size_t n = net.layers.size();
    cache.a.resize(n + 1);
    cache.z.resize(n);
    cache.a[0] = input;
    for (size_t l = 0; l < n; ++l) {
        const auto& layer = net.layers[l];
        cache.z[l].noalias() = layer.weight * cache.a[l];
        cache.z[l] += layer.bias;
        cache.a[l + 1] = activate<double>(cache.z[l], layer.activation);
        check_finite(cache.a[l + 1], "forward pass");
    }
}

// dL/dz of the final layer.
Eigen::VectorXd output_delta(const Eigen::VectorXd& z, const Eigen::VectorXd& y, Activation act,
                             const Target& target, Loss loss)
{
    const Eigen::Index n = y.size();
    Eigen::VectorXd dy = Eigen::VectorXd::Zero(n);
    switch (loss) {
    case Loss::mse_on_selected_output:
        if (target.action < 0 || target.action >= n)
            throw std::invalid_argument("mse_on_selected_output: action index out of range");
        dy(target.action) = 2.0 * (y(target.action) - target.value);
        break;
    case Loss::binary_cross_entropy:
        if (target.vector.size() != n)
            throw std::invalid_argument("binary_cross_entropy: target length mismatch");
        if (act == Activation::sigmoid)
            return (y - target.vector) / static_cast<double>(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double p = std::clamp(y(i), 1e-12, 1.0 - 1e-12);
            dy(i) = (p - target.vector(i)) / (p * (1.0 - p)) / static_cast<double>(n);
        }
        break;
    case Loss::cross_entropy:
        if (target.vector.size() != n)
            throw std::invalid_argument("cross_entropy: target length mismatch");
        if (act == Activation::softmax)
            return y * target.vector.sum() - target.vector;
        for (Eigen::Index i = 0; i < n; ++i)
            dy(i) = -target.vector(i) / std::max(y(i), 1e-300);
        break;
    }
    switch (act) {
    case Activation::linear:
        return dy;
    case Activation::relu:
        return dy.cwiseProduct((z.array() > 0.0).cast<double>().matrix());
    case Activation::sigmoid:
        return dy.cwiseProduct(y.cwiseProduct(Eigen::VectorXd::Ones(n) - y));
    case Activation::softmax:
        return y.cwiseProduct(dy - Eigen::VectorXd::Constant(n, dy.dot(y)));
    }
    return dy;
}

Gradients zero_like(const DenseNetwork& net)
{
    Gradients g;
    for (const auto& l : net.layers) {
        g.weight.push_back(Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()));
        g.bias.push_back(Eigen::VectorXd::Zero(l.bias.size()));
    }
    return g;
}

std::uint32_t activation_code(Activation a) { return static_cast<std::uint32_t>(a); }

} // namespace

long DenseNetwork::parameter_count() const
{
    long n = 0;
    for (const auto& l : layers)
        n += static_cast<long>(l.weight.size() + l.bias.size());
    return n;
}

std::vector<double> DenseNetwork::parameters() const
{
    std::vector<double> out;
    out.reserve(static_cast<size_t>(parameter_count()));
    for (const auto& l : layers) {
        for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
            for (Eigen::Index c = 0; c < l.weight.cols(); ++c)
                out.push_back(l.weight(r, c));
        for (Eigen::Index r = 0; r < l.bias.size(); ++r)
            out.push_back(l.bias(r));
    }
    return out;
}

void DenseNetwork::set_parameters(std::span<const double> values)
{
    if (static_cast<long>(values.size()) != parameter_count())
        throw std::invalid_argument("set_parameters: wrong parameter count");
    size_t k = 0;
    for (auto& l : layers) {
        for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
            for (Eigen::Index c = 0; c < l.weight.cols(); ++c)
                l.weight(r, c) = values[k++];
        for (Eigen::Index r = 0; r < l.bias.size(); ++r)
            l.bias(r) = values[k++];
    }
}

DenseNetwork init_network(const std::vector<int>& layer_sizes,
                          const std::vector<Activation>& activations, RandomStream& rng,
                          double weight_scale)
{
    if (layer_sizes.size() < 2 || activations.size() != layer_sizes.size() - 1)
        throw std::invalid_argument("init_network: need n+1 sizes for n activations, n >= 1");
    for (int s : layer_sizes)
        if (s <= 0)
            throw std::invalid_argument("init_network: layer sizes must be positive");
    for (size_t l = 0; l + 1 < activations.size(); ++l)
        if (activations[l] == Activation::softmax || activations[l] == Activation::sigmoid)
            throw std::invalid_argument("init_network: softmax/sigmoid allowed on the final layer only");

    DenseNetwork net;
    for (size_t l = 0; l < activations.size(); ++l) {
        const int fan_in = layer_sizes[l];
        const int fan_out = layer_sizes[l + 1];
        const double a = weight_scale * std::sqrt(6.0 / (fan_in + fan_out));
        DenseLayer layer;
        layer.weight.resize(fan_out, fan_in);
        for (int r = 0; r < fan_out; ++r)
            for (int c = 0; c < fan_in; ++c)
                layer.weight(r, c) = a * (2.0 * rng.uniform() - 1.0);
        layer.bias = Eigen::VectorXd::Zero(fan_out);
        layer.activation = activations[l];
        net.layers.push_back(std::move(layer));
    }
    return net;
}

Eigen::VectorXd forward(const DenseNetwork& net, const Eigen::VectorXd& input)
{
    if (net.layers.empty())
        throw std::invalid_argument("forward: empty network");
    ForwardCache cache;
    forward_cached(net, input, cache);
    return cache.a.back();
}

double sample_loss(const DenseNetwork& net, const Eigen::VectorXd& input, const Target& target, Loss loss)
{
    ForwardCache cache;
    forward_cached(net, input, cache);
    return target.weight * loss_from_output<double>(cache.z.back(), cache.a.back(),
                                                    net.layers.back().activation, target, loss);
}

double loss_and_gradients(const DenseNetwork& net, std::span<const Eigen::VectorXd> inputs,
                          std::span<const Target> targets, Loss loss, Gradients& grads)
{
    if (inputs.empty() || inputs.size() != targets.size())
        throw std::invalid_argument("train_batch: batch must be nonempty with one target per input");
    grads = zero_like(net);
    const double inv_n = 1.0 / static_cast<double>(inputs.size());
    const size_t n_layers = net.layers.size();
    double total = 0.0;
    ForwardCache cache;
    for (size_t b = 0; b < inputs.size(); ++b) {
        if (!std::isfinite(targets[b].weight) || targets[b].weight < 0.0)
            throw std::invalid_argument("train_batch: sample weight must be finite and non-negative");
        forward_cached(net, inputs[b], cache);
        const Activation out_act = net.layers.back().activation;
        total += targets[b].weight * loss_from_output<double>(cache.z.back(), cache.a.back(), out_act, targets[b], loss);
        Eigen::VectorXd delta =
            targets[b].weight * output_delta(cache.z.back(), cache.a.back(), out_act, targets[b], loss);
        for (size_t l = n_layers; l-- > 0;) {
            grads.weight[l].noalias() += inv_n * delta * cache.a[l].transpose();
            grads.bias[l] += inv_n * delta;
            if (l == 0)
                break;
            Eigen::VectorXd back = net.layers[l].weight.transpose() * delta;
            // Hidden layers are relu or linear (validated at construction).
            if (net.layers[l - 1].activation == Activation::relu)
                back = back.cwiseProduct((cache.z[l - 1].array() > 0.0).cast<double>().matrix());
            delta = std::move(back);
        }
    }
    return total * inv_n;
}

double train_batch(DenseNetwork& net, std::span<const Eigen::VectorXd> inputs,
                   std::span<const Target> targets, Loss loss, AdamState& opt, double learning_rate)
{
    Gradients g;
    const double value = loss_and_gradients(net, inputs, targets, loss, g);
    for (size_t l = 0; l < g.weight.size(); ++l)
        if (!g.weight[l].allFinite() || !g.bias[l].allFinite())
            throw std::runtime_error("train_batch: non-finite gradient, step aborted");

    if (opt.m.weight.size() != net.layers.size()) {
        opt.m = zero_like(net);
        opt.v = zero_like(net);
        opt.step = 0;
    }
    ++opt.step;
    const double c1 = 1.0 - std::pow(opt.beta1, static_cast<double>(opt.step));
    const double c2 = 1.0 - std::pow(opt.beta2, static_cast<double>(opt.step));
    const double b1 = opt.beta1, b2 = opt.beta2, eps = opt.epsilon;
    auto update = [&](auto& param, const auto& grad, auto& m, auto& v) {
        m = b1 * m + (1.0 - b1) * grad;
        v = b2 * v + (1.0 - b2) * grad.cwiseProduct(grad);
        param.array() -= learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
    };
    for (size_t l = 0; l < net.layers.size(); ++l) {
        update(net.layers[l].weight, g.weight[l], opt.m.weight[l], opt.v.weight[l]);
        update(net.layers[l].bias, g.bias[l], opt.m.bias[l], opt.v.bias[l]);
    }
    return value;
}

double finite_diff_check(const DenseNetwork& net, const Eigen::VectorXd& input, const Target& target,
                         Loss loss, long max_parameters)
{
    if (net.parameter_count() > max_parameters)
        throw std::invalid_argument("finite_diff_check: network exceeds the parameter limit");
    using LD = long double;
    constexpr LD h = 1e-5L;

    Gradients g;
    const Eigen::VectorXd in[1] = {input};
    const Target tg[1] = {target};
    loss_and_gradients(net, in, tg, loss, g);

    auto layers = convert<LD>(net);
    const Vec<LD> x = input.cast<LD>();
    double worst = 0.0;
    auto probe = [&](LD& p, double analytic) {
        const LD saved = p;
        p = saved + h;
        const LD up = evaluate_loss(layers, x, target, loss);
        p = saved - h;
        const LD down = evaluate_loss(layers, x, target, loss);
        p = saved;
        const double numeric = static_cast<double>((up - down) / (2 * h));
        worst = std::max(worst, std::abs(analytic - numeric) / (std::abs(numeric) + 1e-8));
    };
    for (size_t l = 0; l < layers.size(); ++l) {
        auto& layer = layers[l];
        for (Eigen::Index r = 0; r < layer.weight.rows(); ++r)
            for (Eigen::Index c = 0; c < layer.weight.cols(); ++c)
                probe(layer.weight(r, c), g.weight[l](r, c));
        for (Eigen::Index r = 0; r < layer.bias.size(); ++r)
            probe(layer.bias(r), g.bias[l](r));
    }
    return worst;
}

static_assert(std::endian::native == std::endian::little,
              "network serialization assumes a little-endian host");

std::vector<std::uint8_t> save_network(const DenseNetwork& net)
{
    std::vector<std::uint8_t> out;
    auto put = [&out](const void* p, size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        out.insert(out.end(), b, b + n);
    };
    const auto n_layers = static_cast<std::uint32_t>(net.layers.size());
    put(&n_layers, 4);
    for (const auto& l : net.layers) {
        const std::uint32_t hdr[3] = {static_cast<std::uint32_t>(l.weight.cols()),
                                      static_cast<std::uint32_t>(l.weight.rows()),
                                      activation_code(l.activation)};
        put(hdr, sizeof hdr);
    }
    const auto params = net.parameters();
    put(params.data(), params.size() * sizeof(double));
    return out;
}

DenseNetwork load_network(std::span<const std::uint8_t> bytes)
{
    size_t pos = 0;
    auto take = [&](void* p, size_t n) {
        if (pos + n > bytes.size())
            throw std::invalid_argument("load_network: truncated input");
        std::memcpy(p, bytes.data() + pos, n);
        pos += n;
    };
    std::uint32_t n_layers = 0;
    take(&n_layers, 4);
    if (n_layers == 0 || n_layers > 64)
        throw std::invalid_argument("load_network: implausible layer count");
    DenseNetwork net;
    for (std::uint32_t l = 0; l < n_layers; ++l) {
        std::uint32_t hdr[3];
        take(hdr, sizeof hdr);
        if (hdr[2] > activation_code(Activation::linear))
            throw std::invalid_argument("load_network: unknown activation");
        DenseLayer layer;
        layer.weight = Eigen::MatrixXd::Zero(hdr[1], hdr[0]);
        layer.bias = Eigen::VectorXd::Zero(hdr[1]);
        layer.activation = static_cast<Activation>(hdr[2]);
        net.layers.push_back(std::move(layer));
    }
    std::vector<double> params(static_cast<size_t>(net.parameter_count()));
    take(params.data(), params.size() * sizeof(double));
    if (pos != bytes.size())
        throw std::invalid_argument("load_network: trailing bytes");
    net.set_parameters(params);
    return net;
}

} // namespace rissc
