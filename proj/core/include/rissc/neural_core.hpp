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

#ifndef RISSC_NEURAL_CORE_HPP
#define RISSC_NEURAL_CORE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rissc/random.hpp"

namespace rissc {

enum class Activation { relu, softmax, sigmoid, linear };

struct DenseLayer {
    Eigen::MatrixXd weight;  // (out, in)
    Eigen::VectorXd bias;
    Activation activation = Activation::linear;
};

struct DenseNetwork {
    std::vector<DenseLayer> layers;

    int input_size() const { return layers.empty() ? 0 : static_cast<int>(layers.front().weight.cols()); }
    int output_size() const { return layers.empty() ? 0 : static_cast<int>(layers.back().weight.rows()); }
    long parameter_count() const;

    // Parameters flattened layer by layer: weights row-major, then bias.
    std::vector<double> parameters() const;
    void set_parameters(std::span<const double> values);
};

// layer_sizes has one more entry than activations. Weights are uniform in
// [-a, a] with a = weight_scale * sqrt(6 / (fan_in + fan_out)); biases zero.
// Softmax and sigmoid are accepted on the final layer only.
DenseNetwork init_network(const std::vector<int>& layer_sizes,
                          const std::vector<Activation>& activations, RandomStream& rng,
                          double weight_scale = 1.0);

// Throws std::invalid_argument on a length mismatch and std::runtime_error
// when a non-finite value appears.
Eigen::VectorXd forward(const DenseNetwork& net, const Eigen::VectorXd& input);

enum class Loss {
    mse_on_selected_output,  // (y[action] - value)^2
    binary_cross_entropy,    // mean over outputs, targets in [0,1]
    cross_entropy,           // -sum t log y, for probability heads
};

struct Target {
    int action = -1;
    double value = 0.0;
    Eigen::VectorXd vector;
    double weight = 1.0;  // scales this sample's loss and gradient
};

struct Gradients {
    std::vector<Eigen::MatrixXd> weight;
    std::vector<Eigen::VectorXd> bias;
};

struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    long step = 0;
    Gradients m;
    Gradients v;
};

double sample_loss(const DenseNetwork& net, const Eigen::VectorXd& input, const Target& target, Loss loss);

// Mean loss over the batch and its gradient with respect to every parameter.
double loss_and_gradients(const DenseNetwork& net, std::span<const Eigen::VectorXd> inputs,
                          std::span<const Target> targets, Loss loss, Gradients& grads);

// One Adam step on the batch mean loss; returns the loss before the step.
// Throws std::runtime_error (leaving the network untouched) if any gradient
// is non-finite.
double train_batch(DenseNetwork& net, std::span<const Eigen::VectorXd> inputs,
                   std::span<const Target> targets, Loss loss, AdamState& optimizer,
                   double learning_rate);

// Max over parameters of |analytic - numeric| / (|numeric| + 1e-8), numeric
// from central differences with step 1e-5. The numeric side re-evaluates the
// loss in extended precision so rounding noise stays far below the bound.
double finite_diff_check(const DenseNetwork& net, const Eigen::VectorXd& input, const Target& target,
                         Loss loss, long max_parameters = 10000);

// Layer count, then per layer (in, out, activation) as uint32, then weights
// row-major and bias as float64, all little-endian.
std::vector<std::uint8_t> save_network(const DenseNetwork& net);
DenseNetwork load_network(std::span<const std::uint8_t> bytes);

} // namespace rissc

#endif
