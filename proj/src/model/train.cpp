#include "gbtpp/model/train.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "gbtpp/error.hpp"
#include "gbtpp/model/bptt.hpp"
#include "gbtpp/numerics/kernels.hpp"

namespace gbtpp {

double mean_gap(const CascadeDataset& ds) {
    double total = 0.0;
    std::size_t n = 0;
    for (const auto& c : ds.cascades) {
        for (std::size_t i = 1; i < c.events.size(); ++i) {
            total += c.events[i].time - c.events[i - 1].time;
            ++n;
        }
    }
    if (n == 0) throw ValidationError("dataset has no inter-event gaps");
    return total / static_cast<double>(n);
}

double mean_nll(const GbtppModel& m, const NodeEmbeddings& emb, const CascadeDataset& ds) {
    double total = 0.0;
    std::size_t n = 0;
    for (const auto& c : ds.cascades) {
        total -= sequence_log_likelihood(m, emb, c);
        n += c.events.size() - 1;
    }
    if (n == 0) throw ValidationError("dataset has no samples");
    return total / static_cast<double>(n);
}

GbtppModel init_model(const CascadeDataset& ds, const NodeEmbeddings& emb, const TrainConfig& cfg, Rng& rng) {
    if (cfg.bptt_len == 0) throw ValidationError("bptt_len must be >= 1");
    if (!(cfg.grad_clip > 0.0)) throw ValidationError("grad_clip must be positive");
    if (!(cfg.learning_rate > 0.0)) throw ValidationError("learning_rate must be positive");
    if (emb.num_nodes != ds.num_nodes) {
        throw ValidationError("embeddings cover " + std::to_string(emb.num_nodes) + " nodes but the dataset has V=" +
                              std::to_string(ds.num_nodes));
    }
    GbtppModel m;
    m.kind = cfg.kind;
    m.time_feature = cfg.time_feature;
    m.time_weight = cfg.time_weight;
    m.time_scale = cfg.time_scale > 0.0 ? cfg.time_scale : mean_gap(ds);
    if (!(m.time_scale > 0.0) || !std::isfinite(m.time_scale)) {
        throw ValidationError("time scale must be positive (all gaps are zero?)");
    }
    m.params = init_params({ds.num_nodes, emb.dim, cfg.hidden, cfg.input_dim}, rng);
    apply_mask(m.kind, m.params);
    m.params.w_t() = std::max(m.params.w_t(), cfg.min_w_t);
    return m;
}

TrainResult train(const CascadeDataset& ds, const NodeEmbeddings& emb, const TrainConfig& cfg) {
    Rng rng(cfg.seed);
    return train(ds, emb, cfg, rng);
}

TrainResult train(const CascadeDataset& ds, const NodeEmbeddings& emb, const TrainConfig& cfg, Rng& rng) {
    if (ds.cascades.empty()) throw ValidationError("no cascades");
    TrainResult out;
    GbtppModel m = init_model(ds, emb, cfg, rng);
    const std::size_t H = m.params.dims().hidden;

    const auto diverged = [](std::size_t epoch, const std::string& why) {
        return NumericalError("divergence at epoch " + std::to_string(epoch) + " (" + why +
                              "); lower learning_rate");
    };

    double best = mean_nll(m, emb, ds);
    if (!std::isfinite(best)) throw diverged(0, "non-finite initial loss");
    out.loss_trace.push_back(best);
    out.model = m;

    std::vector<std::size_t> order(ds.cascades.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        rng.shuffle(std::span<std::size_t>(order));
        try {
            for (std::size_t ci : order) {
                const Cascade& c = ds.cascades[ci];
                Vector h(H, 0.0);
                for (auto& w : make_windows(c, cfg.bptt_len)) {
                    w.h_in = std::move(h);
                    BpttResult r = bptt_gradients(m, emb, w);
                    auto g = r.grad.flat();
                    const double norm = std::sqrt(kernels::sumsq(g));
                    const double scale = norm > cfg.grad_clip ? cfg.grad_clip / norm : 1.0;
                    kernels::axpy(-cfg.learning_rate * scale, g, m.params.flat());
                    m.params.w_t() = std::max(m.params.w_t(), cfg.min_w_t);
                    h = std::move(r.h_next);
                }
            }
        } catch (const NumericalError& e) {
            throw diverged(epoch, e.what());
        }
        double loss = 0.0;
        try {
            loss = mean_nll(m, emb, ds);
        } catch (const NumericalError& e) {
            throw diverged(epoch, e.what());
        }
        if (!std::isfinite(loss)) throw diverged(epoch, "non-finite loss");
        out.loss_trace.push_back(loss);
        if (loss < best) {
            best = loss;
            out.best_epoch = epoch;
            out.model = m;
        }
    }
    return out;
}

}  // namespace gbtpp
