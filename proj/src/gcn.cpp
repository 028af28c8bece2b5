#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "fbnet/classify.hpp"
#include "fbnet/errors.hpp"
#include "fbnet/rng.hpp"
#include "fbnet/simd.hpp"

namespace fbnet {

namespace {

// C (n x out) += A (n x in, row-major) * B (in x out, row-major)
void matmul_add(const double* a, const double* b, double* c, std::size_t n, std::size_t in,
                std::size_t out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double* arow = a + i * in;
        double* crow = c + i * out;
        for (std::size_t k = 0; k < in; ++k) {
            if (arow[k] != 0.0) simd::axpy(arow[k], b + k * out, crow, out);
        }
    }
}

}  // namespace

Gcn Gcn::init(const FollowGraph& graph, const FeatureMatrix& X, const GcnParams& params) {
    Gcn g;
    g.n_nodes = graph.node_count();
    if (X.rows() != g.n_nodes) throw DataError("gcn: feature rows must align with graph nodes");
    for (std::size_t i = 0; i < X.users.size(); ++i) {
        if (X.users[i] != i) throw DataError("gcn: feature rows must align with graph nodes");
    }
    g.f_in = X.cols();
    g.hidden = params.hidden;
    g.relu_hidden = params.relu_hidden;

    // Symmetric-normalized adjacency with self-loops over the undirected
    // (unweighted) projection.
    std::vector<std::vector<NodeId>> und(g.n_nodes);
    graph.for_each_edge([&](NodeId u, NodeId v) {
        und[u].push_back(v);
        und[v].push_back(u);
    });
    std::vector<double> deg(g.n_nodes);
    for (NodeId u = 0; u < g.n_nodes; ++u) {
        auto& list = und[u];
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        deg[u] = static_cast<double>(list.size()) + 1.0;  // self-loop
    }
    g.adj_off.assign(g.n_nodes + 1, 0);
    for (NodeId u = 0; u < g.n_nodes; ++u) g.adj_off[u + 1] = g.adj_off[u] + und[u].size() + 1;
    g.adj_nbr.resize(g.adj_off.back());
    g.adj_w.resize(g.adj_off.back());
    for (NodeId u = 0; u < g.n_nodes; ++u) {
        std::size_t pos = g.adj_off[u];
        g.adj_nbr[pos] = u;
        g.adj_w[pos] = 1.0 / deg[u];
        ++pos;
        for (NodeId v : und[u]) {
            g.adj_nbr[pos] = v;
            g.adj_w[pos] = 1.0 / std::sqrt(deg[u] * deg[v]);
            ++pos;
        }
    }

    // Glorot-uniform init, consumed in a fixed order (w1 then w2).
    Rng rng(params.seed);
    auto glorot = [&](std::vector<double>& w, std::size_t fan_in, std::size_t fan_out) {
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        w.resize(fan_in * fan_out);
        for (auto& x : w) x = rng.next_range(-limit, limit);
    };
    glorot(g.weights.w1, g.f_in, g.hidden);
    g.weights.b1.assign(g.hidden, 0.0);
    glorot(g.weights.w2, g.hidden, 2);
    g.weights.b2.assign(2, 0.0);
    return g;
}

namespace {

struct ForwardPass {
    std::vector<double> q;       // Ahat * (X W1) + b1, pre-activation (n x h)
    std::vector<double> h1;      // activated hidden (n x h)
    std::vector<double> logits;  // Ahat * (H1 W2) + b2 (n x 2)
};

}  // namespace

std::vector<double> Gcn::forward_logits(const FeatureMatrix& X) const {
    const std::size_t n = n_nodes, f = f_in, h = hidden;
    std::vector<double> xw(n * h, 0.0);
    matmul_add(X.values.data(), weights.w1.data(), xw.data(), n, f, h);
    std::vector<double> q(n * h, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t e = adj_off[i]; e < adj_off[i + 1]; ++e) {
            simd::axpy(adj_w[e], xw.data() + adj_nbr[e] * h, q.data() + i * h, h);
        }
        for (std::size_t k = 0; k < h; ++k) q[i * h + k] += weights.b1[k];
    }
    std::vector<double> h1(q);
    if (relu_hidden) {
        for (double& v : h1) v = std::max(0.0, v);
    }
    std::vector<double> hw(n * 2, 0.0);
    matmul_add(h1.data(), weights.w2.data(), hw.data(), n, h, 2);
    std::vector<double> logits(n * 2, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t e = adj_off[i]; e < adj_off[i + 1]; ++e) {
            simd::axpy(adj_w[e], hw.data() + adj_nbr[e] * 2, logits.data() + i * 2, 2);
        }
        logits[i * 2] += weights.b2[0];
        logits[i * 2 + 1] += weights.b2[1];
    }
    return logits;
}

double Gcn::loss(const FeatureMatrix& X, std::span<const int> y) const {
    const std::vector<double> logits = forward_logits(X);
    double total = 0.0;
    std::size_t labeled = 0;
    for (std::size_t i = 0; i < n_nodes; ++i) {
        if (y[i] < 0) continue;
        ++labeled;
        const double a = logits[i * 2], b = logits[i * 2 + 1];
        const double mx = std::max(a, b);
        const double lse = mx + std::log(std::exp(a - mx) + std::exp(b - mx));
        total += lse - (y[i] == 1 ? b : a);
    }
    if (labeled == 0) throw DataError("gcn: no labeled nodes");
    return total / static_cast<double>(labeled);
}

Gcn::Weights Gcn::gradients(const FeatureMatrix& X, std::span<const int> y) const {
    const std::size_t n = n_nodes, f = f_in, h = hidden;

    // Forward, keeping intermediates.
    std::vector<double> xw(n * h, 0.0);
    matmul_add(X.values.data(), weights.w1.data(), xw.data(), n, f, h);
    std::vector<double> q(n * h, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t e = adj_off[i]; e < adj_off[i + 1]; ++e) {
            simd::axpy(adj_w[e], xw.data() + adj_nbr[e] * h, q.data() + i * h, h);
        }
        for (std::size_t k = 0; k < h; ++k) q[i * h + k] += weights.b1[k];
    }
    std::vector<double> h1(q);
    if (relu_hidden) {
        for (double& v : h1) v = std::max(0.0, v);
    }
    std::vector<double> hw(n * 2, 0.0);
    matmul_add(h1.data(), weights.w2.data(), hw.data(), n, h, 2);
    std::vector<double> logits(n * 2, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t e = adj_off[i]; e < adj_off[i + 1]; ++e) {
            simd::axpy(adj_w[e], hw.data() + adj_nbr[e] * 2, logits.data() + i * 2, 2);
        }
        logits[i * 2] += weights.b2[0];
        logits[i * 2 + 1] += weights.b2[1];
    }

    std::size_t labeled = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (y[i] >= 0) ++labeled;
    }
    if (labeled == 0) throw DataError("gcn: no labeled nodes");

    // d logits (softmax cross-entropy, mean over labeled nodes).
    std::vector<double> dlogits(n * 2, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (y[i] < 0) continue;
        const double a = logits[i * 2], b = logits[i * 2 + 1];
        const double mx = std::max(a, b);
        const double ea = std::exp(a - mx), eb = std::exp(b - mx);
        const double z = ea + eb;
        dlogits[i * 2] = (ea / z - (y[i] == 0 ? 1.0 : 0.0)) / static_cast<double>(labeled);
        dlogits[i * 2 + 1] = (eb / z - (y[i] == 1 ? 1.0 : 0.0)) / static_cast<double>(labeled);
    }

    Weights g;
    g.b2.assign(2, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        g.b2[0] += dlogits[i * 2];
        g.b2[1] += dlogits[i * 2 + 1];
    }

    // dHW = Ahat^T dlogits (Ahat symmetric).
    std::vector<double> dhw(n * 2, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t e = adj_off[i]; e < adj_off[i + 1]; ++e) {
            simd::axpy(adj_w[e], dlogits.data() + adj_nbr[e] * 2, dhw.data() + i * 2, 2);
        }
    }

    g.w2.assign(h * 2, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < h; ++k) {
            const double v = h1[i * h + k];
            if (v != 0.0) {
                g.w2[k * 2] += v * dhw[i * 2];
                g.w2[k * 2 + 1] += v * dhw[i * 2 + 1];
            }
        }
    }

    // dH1 = dHW * W2^T, masked by the activation derivative.
    std::vector<double> dq(n * h, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < h; ++k) {
            double v = dhw[i * 2] * weights.w2[k * 2] + dhw[i * 2 + 1] * weights.w2[k * 2 + 1];
            if (relu_hidden && q[i * h + k] <= 0.0) v = 0.0;
            dq[i * h + k] = v;
        }
    }

    g.b1.assign(h, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < h; ++k) g.b1[k] += dq[i * h + k];
    }

    // dXW = Ahat^T dQ; dW1 = X^T dXW.
    std::vector<double> dxw(n * h, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t e = adj_off[i]; e < adj_off[i + 1]; ++e) {
            simd::axpy(adj_w[e], dq.data() + adj_nbr[e] * h, dxw.data() + i * h, h);
        }
    }
    g.w1.assign(f * h, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < f; ++k) {
            const double v = X.values[i * f + k];
            if (v != 0.0) simd::axpy(v, dxw.data() + i * h, g.w1.data() + k * h, h);
        }
    }
    return g;
}

void Gcn::apply_gradients(const Weights& grads, double lr) {
    simd::axpy(-lr, grads.w1.data(), weights.w1.data(), weights.w1.size());
    simd::axpy(-lr, grads.b1.data(), weights.b1.data(), weights.b1.size());
    simd::axpy(-lr, grads.w2.data(), weights.w2.data(), weights.w2.size());
    simd::axpy(-lr, grads.b2.data(), weights.b2.data(), weights.b2.size());
}

Gcn Gcn::train(const FollowGraph& graph, const FeatureMatrix& X, std::span<const int> y,
               const GcnParams& params, std::vector<double>* loss_history) {
    Gcn g = init(graph, X, params);
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        if (loss_history) loss_history->push_back(g.loss(X, y));
        const Weights grads = g.gradients(X, y);
        g.apply_gradients(grads, params.learning_rate);
    }
    if (loss_history) loss_history->push_back(g.loss(X, y));
    return g;
}

std::vector<double> Gcn::predict_proba(const FeatureMatrix& X) const {
    const std::vector<double> logits = forward_logits(X);
    std::vector<double> proba(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
        const double a = logits[i * 2], b = logits[i * 2 + 1];
        const double mx = std::max(a, b);
        const double ea = std::exp(a - mx), eb = std::exp(b - mx);
        proba[i] = eb / (ea + eb);
    }
    return proba;
}

void Gcn::save(const std::string& path) const {
    nlohmann::json header;
    header["format"] = "gcn-weights-v1";
    header["n_nodes"] = n_nodes;
    header["f_in"] = f_in;
    header["hidden"] = hidden;
    header["relu_hidden"] = relu_hidden;
    header["tensors"] = {
        {{"name", "w1"}, {"shape", {f_in, hidden}}},
        {{"name", "b1"}, {"shape", {hidden}}},
        {{"name", "w2"}, {"shape", {hidden, 2}}},
        {{"name", "b2"}, {"shape", {2}}},
    };
    const std::string h = header.dump();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    const std::uint64_t len = h.size();
    out.write(reinterpret_cast<const char*>(&len), sizeof(len));
    out.write(h.data(), static_cast<std::streamsize>(h.size()));
    auto dump = [&](const std::vector<double>& v) {
        out.write(reinterpret_cast<const char*>(v.data()),
                  static_cast<std::streamsize>(v.size() * sizeof(double)));
    };
    dump(weights.w1);
    dump(weights.b1);
    dump(weights.w2);
    dump(weights.b2);
}

Gcn Gcn::load(const std::string& path, const FollowGraph& graph) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::uint64_t len = 0;
    in.read(reinterpret_cast<char*>(&len), sizeof(len));
    std::string h(len, '\0');
    in.read(h.data(), static_cast<std::streamsize>(len));
    nlohmann::json header = nlohmann::json::parse(h, nullptr, false);
    if (header.is_discarded() || header.value("format", "") != "gcn-weights-v1") {
        throw DataError(path + ": not a gcn weights file");
    }
    GcnParams params;
    params.hidden = header.at("hidden").get<std::size_t>();
    params.relu_hidden = header.at("relu_hidden").get<bool>();

    FeatureMatrix dummy;
    dummy.family = "combined";
    const std::size_t f_in = header.at("f_in").get<std::size_t>();
    dummy.users.resize(graph.node_count());
    std::iota(dummy.users.begin(), dummy.users.end(), 0);
    dummy.columns.resize(f_in);
    dummy.values.assign(graph.node_count() * f_in, 0.0);

    Gcn g = init(graph, dummy, params);
    auto slurp = [&](std::vector<double>& v) {
        in.read(reinterpret_cast<char*>(v.data()),
                static_cast<std::streamsize>(v.size() * sizeof(double)));
    };
    slurp(g.weights.w1);
    slurp(g.weights.b1);
    slurp(g.weights.w2);
    slurp(g.weights.b2);
    if (!in) throw DataError(path + ": truncated gcn weights file");
    return g;
}

}  // namespace fbnet
