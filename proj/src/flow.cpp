#include "dom/flow.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace dom {
namespace {

void matvec(const std::vector<double>& w, const std::vector<double>& x, int rows, int cols,
            const std::vector<double>& b, std::vector<double>& out) {
    out.assign(rows, 0.0);
    for (int r = 0; r < rows; ++r) {
        double acc = b[r];
        const double* wr = w.data() + static_cast<size_t>(r) * cols;
        for (int c = 0; c < cols; ++c) acc += wr[c] * x[c];
        out[r] = acc;
    }
}

struct ForwardTrace {
    std::vector<double> input;   // x0
    std::vector<double> h1;      // tanh(w1 x0 + b1)
    std::vector<double> h2;      // tanh(w2 h1 + b2)
    std::vector<double> out;     // w3 h2 + b3
};

ForwardTrace forward(const MlpParams& p, const std::vector<double>& input) {
    ForwardTrace t;
    t.input = input;
    matvec(p.w1, input, p.hidden, p.input_dim(), p.b1, t.h1);
    for (auto& v : t.h1) v = std::tanh(v);
    matvec(p.w2, t.h1, p.hidden, p.hidden, p.b2, t.h2);
    for (auto& v : t.h2) v = std::tanh(v);
    matvec(p.w3, t.h2, p.data_dim, p.hidden, p.b3, t.out);
    return t;
}

std::vector<double> build_input(const MlpParams& p, const std::vector<double>& noisy,
                                double tau, const std::vector<double>& condition) {
    std::vector<double> x;
    x.reserve(p.input_dim());
    x.insert(x.end(), noisy.begin(), noisy.end());
    std::vector<double> emb = tau_embedding(tau);
    x.insert(x.end(), emb.begin(), emb.end());
    x.insert(x.end(), condition.begin(), condition.end());
    if (static_cast<int>(x.size()) != p.input_dim())
        throw FlowError("input dimension mismatch");
    return x;
}

}  // namespace

std::vector<double> tau_embedding(double tau) {
    std::vector<double> emb(kTauEmbedDim);
    for (int i = 0; i < kTauEmbedDim / 2; ++i) {
        double freq = std::pow(2.0, i) * 3.141592653589793238462643383;
        emb[2 * i] = std::sin(freq * tau);
        emb[2 * i + 1] = std::cos(freq * tau);
    }
    return emb;
}

FlowSample make_flow_sample(const std::vector<double>& chunk, Rng& rng) {
    FlowSample s;
    s.chunk = chunk;
    s.tau = rng.next_double();
    size_t d = chunk.size();
    s.noise.resize(d);
    s.noisy.resize(d);
    s.target.resize(d);
    for (size_t i = 0; i < d; ++i) s.noise[i] = rng.normal();
    for (size_t i = 0; i < d; ++i) {
        s.noisy[i] = s.tau * chunk[i] + (1.0 - s.tau) * s.noise[i];
        s.target[i] = s.noise[i] - chunk[i];
    }
    return s;
}

MlpParams MlpParams::init(int data_dim, int cond_dim, int hidden, uint64_t seed) {
    MlpParams p;
    p.data_dim = data_dim;
    p.cond_dim = cond_dim;
    p.hidden = hidden;
    Rng rng(seed);
    auto fill = [&](std::vector<double>& w, int rows, int cols) {
        double scale = std::sqrt(1.0 / cols);
        w.resize(static_cast<size_t>(rows) * cols);
        for (auto& v : w) v = scale * rng.normal();
    };
    fill(p.w1, hidden, p.input_dim());
    p.b1.assign(hidden, 0.0);
    fill(p.w2, hidden, hidden);
    p.b2.assign(hidden, 0.0);
    fill(p.w3, data_dim, hidden);
    p.b3.assign(data_dim, 0.0);
    return p;
}

std::vector<double> mlp_forward(const MlpParams& p, const std::vector<double>& noisy,
                                double tau, const std::vector<double>& condition) {
    return forward(p, build_input(p, noisy, tau, condition)).out;
}

std::pair<double, MlpParams> loss_and_grad(const MlpParams& p,
                                           const std::vector<FlowBatchItem>& batch) {
    if (batch.empty()) throw FlowError("loss_and_grad: empty batch");

    MlpParams g = p;  // same shape, zeroed
    for (auto* v : {&g.w1, &g.b1, &g.w2, &g.b2, &g.w3, &g.b3}) std::fill(v->begin(), v->end(), 0.0);

    double loss = 0.0;
    double inv_b = 1.0 / batch.size();
    int in_dim = p.input_dim();

    std::vector<double> d_out(p.data_dim), d_h2(p.hidden), d_h1(p.hidden);
    for (const auto& item : batch) {
        std::vector<double> x = build_input(p, item.sample.noisy, item.sample.tau, item.condition);
        ForwardTrace t = forward(p, x);

        double item_loss = 0.0;
        for (int i = 0; i < p.data_dim; ++i) {
            double r = t.out[i] - item.sample.target[i];
            item_loss += r * r;
            d_out[i] = 2.0 * r * inv_b;
        }
        loss += item_loss;  // per-item subtotal, scaled by 1/B once at the end

        // layer 3
        for (int r = 0; r < p.data_dim; ++r) {
            double* gw = g.w3.data() + static_cast<size_t>(r) * p.hidden;
            for (int c = 0; c < p.hidden; ++c) gw[c] += d_out[r] * t.h2[c];
            g.b3[r] += d_out[r];
        }
        for (int c = 0; c < p.hidden; ++c) {
            double acc = 0.0;
            for (int r = 0; r < p.data_dim; ++r)
                acc += p.w3[static_cast<size_t>(r) * p.hidden + c] * d_out[r];
            d_h2[c] = acc * (1.0 - t.h2[c] * t.h2[c]);
        }
        // layer 2
        for (int r = 0; r < p.hidden; ++r) {
            double* gw = g.w2.data() + static_cast<size_t>(r) * p.hidden;
            for (int c = 0; c < p.hidden; ++c) gw[c] += d_h2[r] * t.h1[c];
            g.b2[r] += d_h2[r];
        }
        for (int c = 0; c < p.hidden; ++c) {
            double acc = 0.0;
            for (int r = 0; r < p.hidden; ++r)
                acc += p.w2[static_cast<size_t>(r) * p.hidden + c] * d_h2[r];
            d_h1[c] = acc * (1.0 - t.h1[c] * t.h1[c]);
        }
        // layer 1
        for (int r = 0; r < p.hidden; ++r) {
            double* gw = g.w1.data() + static_cast<size_t>(r) * in_dim;
            for (int c = 0; c < in_dim; ++c) gw[c] += d_h1[r] * x[c];
            g.b1[r] += d_h1[r];
        }
    }
    loss *= inv_b;
    if (!std::isfinite(loss)) throw NonFiniteLoss("training loss is not finite");
    return {loss, std::move(g)};
}

TrainResult train(const std::vector<FlowDatum>& dataset, const MlpParams& init,
                  const TrainConfig& cfg) {
    if (dataset.empty()) throw EmptyDataset("flow training dataset is empty");

    TrainResult result;
    result.params = init;
    MlpParams& p = result.params;

    // Adam state
    MlpParams m = p, v = p;
    for (auto* vec : {&m.w1, &m.b1, &m.w2, &m.b2, &m.w3, &m.b3}) std::fill(vec->begin(), vec->end(), 0.0);
    for (auto* vec : {&v.w1, &v.b1, &v.w2, &v.b2, &v.w3, &v.b3}) std::fill(vec->begin(), vec->end(), 0.0);
    const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

    Rng rng(hash_combine(cfg.seed, 0xf10f10ULL));

    // One (tau, eps) draw per datum, fixed for the whole run: keeps the
    // single-datum objective deterministic (near tau=1 the target is not a
    // Lipschitz function of the noisy chunk, so per-step resampling would
    // leave an irreducible loss floor).
    std::vector<FlowSample> samples;
    samples.reserve(dataset.size());
    for (const FlowDatum& d : dataset) samples.push_back(make_flow_sample(d.chunk, rng));

    for (int step = 1; step <= cfg.steps; ++step) {
        std::vector<FlowBatchItem> batch;
        batch.reserve(cfg.batch);
        for (int b = 0; b < cfg.batch; ++b) {
            size_t idx = rng.uniform_int(0, dataset.size() - 1);
            batch.push_back({samples[idx], dataset[idx].condition});
        }
        auto [loss, grad] = loss_and_grad(p, batch);
        if (step % 100 == 1 || step == cfg.steps) result.loss_trace.push_back(loss);

        if (cfg.learning_rate != 0.0) {
            double bc1 = 1.0 - std::pow(beta1, step);
            double bc2 = 1.0 - std::pow(beta2, step);
            auto update = [&](std::vector<double>& w, std::vector<double>& mw,
                              std::vector<double>& vw, const std::vector<double>& gw) {
                for (size_t i = 0; i < w.size(); ++i) {
                    mw[i] = beta1 * mw[i] + (1.0 - beta1) * gw[i];
                    vw[i] = beta2 * vw[i] + (1.0 - beta2) * gw[i] * gw[i];
                    w[i] -= cfg.learning_rate * (mw[i] / bc1) / (std::sqrt(vw[i] / bc2) + eps);
                }
            };
            update(p.w1, m.w1, v.w1, grad.w1);
            update(p.b1, m.b1, v.b1, grad.b1);
            update(p.w2, m.w2, v.w2, grad.w2);
            update(p.b2, m.b2, v.b2, grad.b2);
            update(p.w3, m.w3, v.w3, grad.w3);
            update(p.b3, m.b3, v.b3, grad.b3);
        }
    }
    return result;
}

std::vector<double> sample_chunk(const MlpParams& params, const std::vector<double>& condition,
                                 int steps, uint64_t seed) {
    if (steps < 1) throw FlowError("sample_chunk: steps must be >= 1");
    Rng rng(seed);
    std::vector<double> a(params.data_dim);
    for (auto& v : a) v = rng.normal();  // A^0 = eps
    double delta = 1.0 / steps;
    for (int k = 0; k < steps; ++k) {
        double tau = k * delta;
        std::vector<double> field = mlp_forward(params, a, tau, condition);
        for (int i = 0; i < params.data_dim; ++i) a[i] -= delta * field[i];
    }
    return a;
}

namespace {
constexpr uint32_t kParamsMagic = 0x444f4d46;  // "DOMF"
constexpr uint32_t kParamsVersion = 1;

void write_block(std::ofstream& out, const std::vector<double>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void read_block(std::ifstream& in, std::vector<double>& v, size_t count) {
    v.resize(count);
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) throw FlowError("truncated parameter file");
}
}  // namespace

void save_params(const MlpParams& p, const std::string& path, uint64_t train_digest) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FlowError("cannot open for write: " + path);
    uint32_t header[4] = {kParamsMagic, kParamsVersion, static_cast<uint32_t>(p.data_dim),
                          static_cast<uint32_t>(p.cond_dim)};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    uint32_t hidden = static_cast<uint32_t>(p.hidden);
    out.write(reinterpret_cast<const char*>(&hidden), sizeof(hidden));
    out.write(reinterpret_cast<const char*>(&train_digest), sizeof(train_digest));
    write_block(out, p.w1);
    write_block(out, p.b1);
    write_block(out, p.w2);
    write_block(out, p.b2);
    write_block(out, p.w3);
    write_block(out, p.b3);
}

MlpParams load_params(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FlowError("cannot open parameter file: " + path);
    uint32_t header[4];
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (!in || header[0] != kParamsMagic) throw FlowError("not a parameter file: " + path);
    if (header[1] != kParamsVersion)
        throw FlowError("unsupported parameter file version " + std::to_string(header[1]));
    MlpParams p;
    p.data_dim = static_cast<int>(header[2]);
    p.cond_dim = static_cast<int>(header[3]);
    uint32_t hidden = 0;
    uint64_t digest = 0;
    in.read(reinterpret_cast<char*>(&hidden), sizeof(hidden));
    in.read(reinterpret_cast<char*>(&digest), sizeof(digest));
    p.hidden = static_cast<int>(hidden);
    read_block(in, p.w1, static_cast<size_t>(p.hidden) * p.input_dim());
    read_block(in, p.b1, p.hidden);
    read_block(in, p.w2, static_cast<size_t>(p.hidden) * p.hidden);
    read_block(in, p.b2, p.hidden);
    read_block(in, p.w3, static_cast<size_t>(p.data_dim) * p.hidden);
    read_block(in, p.b3, p.data_dim);
    return p;
}

}  // namespace dom
