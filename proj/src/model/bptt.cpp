#include "gbtpp/model/bptt.hpp"

#include <cmath>
#include <string>

#include "gbtpp/error.hpp"
#include "gbtpp/model/time_density.hpp"
#include "gbtpp/numerics/activations.hpp"
#include "gbtpp/numerics/kernels.hpp"

namespace gbtpp {
namespace {

struct Step {
    Vector x_em, pre, h, y;
    NodeId node = 0;
    double tfeat = 0.0;
};

void check_window(const GbtppModel& m, const BpttWindow& w) {
    if (w.cascade == nullptr) throw ValidationError("BPTT window has no cascade");
    const std::size_t n = w.cascade->events.size();
    if (w.count == 0 || w.first + w.count > n - 1) throw ValidationError("BPTT window exceeds the cascade");
    if (w.h_in.size() != m.params.dims().hidden) throw ValidationError("BPTT window h_in has the wrong size");
}

// Forward pass over the window. steps[i] holds the state for local sample i;
// steps[0].h is h_in and has no pre-activation.
std::vector<Step> forward(const GbtppModel& m, const NodeEmbeddings& emb, const BpttWindow& w) {
    const auto& p = m.params;
    const auto& d = p.dims();
    const std::span<const Event> ev(w.cascade->events);
    std::vector<Step> steps(w.count);
    steps[0].h = w.h_in;
    for (std::size_t i = 1; i < w.count; ++i) {
        const std::size_t e = w.first + i - 1;
        Step& s = steps[i];
        s.node = ev[e].node;
        s.tfeat = time_feature(ev, e, m.time_feature, m.time_scale);
        s.y = emb.feature(s.node);
        s.x_em.resize(d.input_dim);
        s.pre.resize(d.hidden);
        s.h.resize(d.hidden);
        step_history_into(p, steps[i - 1].h, s.node, s.tfeat, s.y, s.x_em, s.pre, s.h);
    }
    return steps;
}

}  // namespace

std::vector<BpttWindow> make_windows(const Cascade& c, std::size_t len) {
    if (len == 0) throw ValidationError("bptt_len must be >= 1");
    std::vector<BpttWindow> out;
    const std::size_t samples = c.events.size() < 2 ? 0 : c.events.size() - 1;
    for (std::size_t first = 0; first < samples; first += len) {
        out.push_back({&c, first, std::min(len, samples - first), {}});
    }
    return out;
}

double window_loss(const GbtppModel& m, const NodeEmbeddings& emb, const BpttWindow& w) {
    check_window(m, w);
    const auto& p = m.params;
    const std::span<const Event> ev(w.cascade->events);
    const auto steps = forward(m, emb, w);
    const double log_scale = std::log(m.time_scale);
    double loss = 0.0;
    for (std::size_t i = 0; i < w.count; ++i) {
        const std::size_t j = w.first + i;
        const Vector z = node_logits(p, steps[i].h, emb, ev[j].node);
        loss -= z[ev[j + 1].node] - log_sum_exp(z);
        const Vector y = emb.feature(ev[j].node);
        const double c = time_exponent(p, steps[i].h, y);
        const double delta = (ev[j + 1].time - ev[j].time) / m.time_scale;
        loss += m.time_weight * (time_nll(c, p.w_t(), delta).value + log_scale);
    }
    return loss;
}

BpttResult bptt_gradients(const GbtppModel& m, const NodeEmbeddings& emb, const BpttWindow& w) {
    check_window(m, w);
    check_compatible(m, emb);
    const auto& p = m.params;
    const auto& d = p.dims();
    const auto& k = kernels::active();
    const std::size_t V = d.num_nodes, H = d.hidden, D = d.input_dim, Y = d.feature_dim();
    const std::span<const Event> ev(w.cascade->events);
    const double tw = m.time_weight;
    const double log_scale = std::log(m.time_scale);

    BpttResult res;
    res.grad = GbtppParams(d);
    GbtppParams& g = res.grad;

    const auto steps = forward(m, emb, w);
    std::vector<Vector> dh(w.count, Vector(H, 0.0));
    Vector y(Y), prob, prox;

    // Output layers: gradient of each sample's loss w.r.t. its state.
    for (std::size_t i = 0; i < w.count; ++i) {
        const std::size_t j = w.first + i;
        const NodeId cur = ev[j].node;
        const NodeId label = ev[j + 1].node;
        const Vector& h = steps[i].h;

        const double* u_row = p.U_h() + static_cast<std::size_t>(cur) * H;
        const double a = k.dot(u_row, h.data(), H);
        prob = node_logits(p, h, emb, cur);
        res.loss -= prob[label] - log_sum_exp(prob);
        softmax_inplace(prob);
        prob[label] -= 1.0;  // dL/dz

        k.gemv_t_acc(p.V_h(), V, H, prob.data(), dh[i].data());
        k.ger(g.V_h(), V, H, 1.0, prob.data(), h.data());
        k.axpy(1.0, prob.data(), g.b_out(), V);
        if (a > 0.0) {
            prox = proximity_row(emb, cur);
            const double ds = k.dot(prob.data(), prox.data(), V);  // dL/d(scale)
            k.axpy(ds, u_row, dh[i].data(), H);
            k.axpy(ds, h.data(), g.U_h() + static_cast<std::size_t>(cur) * H, H);
        }

        emb.feature_into(cur, y);
        const double c = time_exponent(p, h, y);
        const double delta = (ev[j + 1].time - ev[j].time) / m.time_scale;
        const TimeNll t = time_nll(c, p.w_t(), delta);
        res.loss += tw * (t.value + log_scale);
        const double dc = tw * t.d_c;
        k.axpy(dc, p.v_h(), dh[i].data(), H);
        k.axpy(dc, h.data(), g.v_h(), H);
        k.axpy(dc, y.data(), g.v_y(), Y);
        g.b_t() += dc;
        g.w_t() += tw * t.d_w;
    }

    // Recurrence, newest step first. Step i consumed event first + i - 1.
    Vector du(H), dx(D), back(H);
    for (std::size_t i = w.count; i-- > 1;) {
        const Step& s = steps[i];
        for (std::size_t r = 0; r < H; ++r) du[r] = s.pre[r] > 0.0 ? dh[i][r] : 0.0;
        const Vector& h_prev = steps[i - 1].h;
        k.ger(g.W_v(), D, H, 1.0, s.x_em.data(), du.data());
        k.gemv(p.W_v(), D, H, du.data(), dx.data());
        k.axpy(1.0, dx.data(), g.W_em() + static_cast<std::size_t>(s.node) * D, D);
        k.axpy(1.0, dx.data(), g.b_em(), D);
        k.ger(g.W_y(), Y, H, 1.0, s.y.data(), du.data());
        k.axpy(s.tfeat, du.data(), g.W_t(), H);
        k.ger(g.W_h(), H, H, 1.0, h_prev.data(), du.data());
        k.axpy(1.0, du.data(), g.b_h(), H);
        k.gemv(p.W_h(), H, H, du.data(), back.data());
        k.axpy(1.0, back.data(), dh[i - 1].data(), H);
    }

    apply_mask(m.kind, g);
    if (!g.all_finite() || !std::isfinite(res.loss)) {
        throw NumericalError("non-finite gradient in BPTT window of cascade '" + w.cascade->seq_id + "'");
    }

    const std::size_t next = w.first + w.count;
    if (next + 1 < ev.size()) {
        emb.feature_into(ev[next - 1].node, y);
        const double tf = time_feature(ev, next - 1, m.time_feature, m.time_scale);
        res.h_next = step_history(p, steps[w.count - 1].h, ev[next - 1].node, tf, y);
    }
    return res;
}

}  // namespace gbtpp
