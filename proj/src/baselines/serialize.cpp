#include "gbtpp/baselines/serialize.hpp"

#include <string>

#include "gbtpp/error.hpp"

namespace gbtpp {
namespace {

void expect_kind(const Envelope& env, const std::string& kind) {
    if (env.model_kind != kind) {
        throw ValidationError("model file holds '" + env.model_kind + "', expected '" + kind + "'");
    }
}

template <typename F>
auto guarded(F&& f) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed model file: ") + e.what());
    }
}

}  // namespace

Envelope to_envelope(const MarkovModel& m) {
    nlohmann::json contexts = nlohmann::json::array();
    for (std::size_t len = 1; len <= m.tables.size(); ++len) {
        for (const auto& [key, counts] : m.tables[len - 1]) {
            contexts.push_back({{"context", key}, {"counts", counts}});
        }
    }
    nlohmann::json j = {{"V", m.num_nodes}, {"order", m.order}, {"smoothing", m.smoothing},
                        {"global", m.global}, {"contexts", contexts}};
    return {"mc" + std::to_string(m.order), std::move(j)};
}

MarkovModel markov_from_envelope(const Envelope& env) {
    return guarded([&] {
        const auto& j = env.payload;
        MarkovModel m;
        m.order = j.at("order").get<std::size_t>();
        expect_kind(env, "mc" + std::to_string(m.order));
        m.num_nodes = j.at("V").get<std::size_t>();
        m.smoothing = j.at("smoothing").get<double>();
        m.global = json_doubles(j.at("global"), m.num_nodes, "global counts");
        m.tables.resize(m.order);
        for (const auto& c : j.at("contexts")) {
            auto key = c.at("context").get<std::vector<NodeId>>();
            if (key.empty() || key.size() > m.order) throw ValidationError("bad Markov context length");
            for (NodeId v : key) {
                if (v >= m.num_nodes) throw ValidationError("Markov context node out of range");
            }
            const std::size_t len = key.size();
            m.tables[len - 1][std::move(key)] = json_doubles(c.at("counts"), m.num_nodes, "context counts");
        }
        return m;
    });
}

Envelope to_envelope(const PoissonModel& m) { return {"poisson", {{"lambda0", m.lambda0}}}; }

PoissonModel poisson_from_envelope(const Envelope& env) {
    expect_kind(env, "poisson");
    return guarded([&] { return PoissonModel{env.payload.at("lambda0").get<double>()}; });
}

Envelope to_envelope(const HawkesModel& m) {
    return {"hawkes", {{"gamma0", m.gamma0}, {"alpha", m.alpha}, {"beta", m.beta}}};
}

HawkesModel hawkes_from_envelope(const Envelope& env) {
    expect_kind(env, "hawkes");
    return guarded([&] {
        const auto& j = env.payload;
        return HawkesModel{j.at("gamma0").get<double>(), j.at("alpha").get<double>(), j.at("beta").get<double>()};
    });
}

Envelope to_envelope(const ScpModel& m) { return {"scp", {{"mu", m.mu}, {"alpha", m.alpha}}}; }

ScpModel scp_from_envelope(const Envelope& env) {
    expect_kind(env, "scp");
    return guarded([&] {
        return ScpModel{env.payload.at("mu").get<double>(), env.payload.at("alpha").get<double>()};
    });
}

Envelope to_envelope(const CtmcModel& m) {
    const auto r = m.rates.data();
    return {"ctmc",
            {{"V", m.rates.rows()},
             {"rates", std::vector<double>(r.begin(), r.end())},
             {"global_rates", m.global_rates}}};
}

CtmcModel ctmc_from_envelope(const Envelope& env) {
    expect_kind(env, "ctmc");
    return guarded([&] {
        const auto& j = env.payload;
        const std::size_t V = j.at("V").get<std::size_t>();
        CtmcModel m;
        m.rates = DenseMatrix(V, V, json_doubles(j.at("rates"), V * V, "CTMC rates"));
        m.global_rates = json_doubles(j.at("global_rates"), V, "CTMC global rates");
        return m;
    });
}

}  // namespace gbtpp
