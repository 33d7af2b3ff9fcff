#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dom/rng.hpp"

namespace dom {

struct FlowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonFiniteLoss : FlowError {
    using FlowError::FlowError;
};
struct EmptyDataset : FlowError {
    using FlowError::FlowError;
};

inline constexpr int kActionDim = 8;       // 3 position + 4 quaternion + 1 gripper
inline constexpr int kTauEmbedDim = 8;     // sinusoidal features of tau

struct FlowSample {
    std::vector<double> chunk;   // A, dimension D
    std::vector<double> noise;   // epsilon ~ N(0, I)
    double tau = 0.0;
    std::vector<double> noisy;   // A^tau = tau*A + (1-tau)*eps
    std::vector<double> target;  // u = eps - A
};

FlowSample make_flow_sample(const std::vector<double>& chunk, Rng& rng);

// input -> hidden -> hidden -> output, tanh activations, linear output.
// Input is [A^tau, tau embedding, condition]; output dimension D.
struct MlpParams {
    int data_dim = 0;       // D
    int cond_dim = 0;       // condition vector length
    int hidden = 256;
    std::vector<double> w1, b1, w2, b2, w3, b3;  // row-major [out x in]

    int input_dim() const { return data_dim + kTauEmbedDim + cond_dim; }
    size_t size() const {
        return w1.size() + b1.size() + w2.size() + b2.size() + w3.size() + b3.size();
    }

    static MlpParams init(int data_dim, int cond_dim, int hidden, uint64_t seed);
};

std::vector<double> tau_embedding(double tau);

std::vector<double> mlp_forward(const MlpParams& p, const std::vector<double>& noisy,
                                double tau, const std::vector<double>& condition);

struct FlowBatchItem {
    FlowSample sample;
    std::vector<double> condition;
};

// Mean over the batch of ||E(A^tau, cond) - u||^2 with exact reverse-mode
// gradients in the same parameter layout.
std::pair<double, MlpParams> loss_and_grad(const MlpParams& params,
                                           const std::vector<FlowBatchItem>& batch);

struct TrainConfig {
    int steps = 5000;
    int batch = 64;
    double learning_rate = 1e-3;
    uint64_t seed = 0;
};

struct TrainResult {
    MlpParams params;
    std::vector<double> loss_trace;  // sampled every 100 steps
};

struct FlowDatum {
    std::vector<double> chunk;
    std::vector<double> condition;
};

TrainResult train(const std::vector<FlowDatum>& dataset, const MlpParams& init,
                  const TrainConfig& cfg);

// Euler integration of dA/dtau = -E(A^tau, cond) from A^0 = eps, K steps.
std::vector<double> sample_chunk(const MlpParams& params, const std::vector<double>& condition,
                                 int steps, uint64_t seed);

void save_params(const MlpParams& params, const std::string& path, uint64_t train_digest);
MlpParams load_params(const std::string& path);

}  // namespace dom
