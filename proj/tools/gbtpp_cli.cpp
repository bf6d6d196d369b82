// gbtpp: simulate | embed | train | predict | evaluate
//
// Option values come from (highest first) command-line flags, the --config
// file, then built-in defaults. Each run writes the resolved values as
// <command>.config next to its outputs; passing that file back with --config
// reproduces the run.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gbtpp/core/adjacency.hpp"
#include "gbtpp/core/cascade_io.hpp"
#include "gbtpp/core/kfold.hpp"
#include "gbtpp/embed/embeddings.hpp"
#include "gbtpp/error.hpp"
#include "gbtpp/eval/benchmark.hpp"
#include "gbtpp/eval/report_io.hpp"
#include "gbtpp/model/checkpoint.hpp"
#include "gbtpp/model/gbtpp.hpp"
#include "gbtpp/model/train.hpp"
#include "gbtpp/sim/hawkes_sim.hpp"
#include "gbtpp/util/format.hpp"
#include "gbtpp/util/kvconfig.hpp"

namespace fs = std::filesystem;
using namespace gbtpp;

namespace {

// Shortest text that parses back to the same double.
std::string shortest(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OptSpec {
    std::string key;  // config key; the flag is --key with '_' -> '-'
    std::string def;  // empty + required means no default
    std::string help;
    bool required = false;
};

std::string flag_name(const std::string& key) {
    std::string f = key;
    for (char& c : f) c = c == '_' ? '-' : c;
    return "--" + f;
}

// Keys every command accepts.
const std::vector<OptSpec> kGlobalOpts{
    {"seed", "0", "random seed"},
    {"out_dir", "", "directory for outputs and the resolved config"},
};

struct Command {
    std::string name;
    CLI::App* app = nullptr;
    std::vector<OptSpec> opts;
    std::map<std::string, std::optional<std::string>> flags;
};

void register_command(CLI::App& root, Command& cmd, const std::string& description) {
    cmd.app = root.add_subcommand(cmd.name, description);
    cmd.app->fallthrough();
    for (const auto& o : cmd.opts) {
        auto* opt = cmd.app->add_option(flag_name(o.key), cmd.flags[o.key], o.help);
        if (!o.def.empty()) opt->description(o.help + " (default " + o.def + ")");
    }
}

class Resolved {
public:
    std::string str(const std::string& key) const {
        auto v = cfg_.get(key);
        if (!v) throw UsageError("missing option " + flag_name(key));
        return *v;
    }
    bool has(const std::string& key) const { return cfg_.get(key).has_value() && !cfg_.get(key)->empty(); }
    double real(const std::string& key) const {
        try {
            return parse_double(str(key));
        } catch (const ValidationError&) {
            throw UsageError(flag_name(key) + ": expected a number, got '" + str(key) + "'");
        }
    }
    std::size_t count(const std::string& key) const {
        long long v = 0;
        if (!try_parse_int(str(key), v) || v < 0) {
            throw UsageError(flag_name(key) + ": expected a non-negative integer, got '" + str(key) + "'");
        }
        return static_cast<std::size_t>(v);
    }
    std::uint64_t u64(const std::string& key) const {
        const std::string s = str(key);
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size()) {
            throw UsageError(flag_name(key) + ": expected an unsigned integer, got '" + s + "'");
        }
        return v;
    }
    std::vector<std::string> list(const std::string& key) const {
        std::vector<std::string> out;
        const std::string text = str(key);
        for (auto part : split_csv(text)) {
            auto t = trim(part);
            if (!t.empty()) out.emplace_back(t);
        }
        return out;
    }

    KvConfig cfg_;
};

Resolved resolve(const Command& cmd, const std::vector<OptSpec>& globals,
                 const std::map<std::string, std::optional<std::string>>& global_flags,
                 const std::optional<std::string>& config_path) {
    KvConfig file;
    if (config_path) file = KvConfig::load(*config_path);

    std::vector<OptSpec> all = globals;
    all.insert(all.end(), cmd.opts.begin(), cmd.opts.end());
    for (const auto& [k, v] : file.values()) {
        bool known = false;
        for (const auto& o : all) known |= o.key == k;
        if (!known) throw UsageError("config key '" + k + "' is not an option of '" + cmd.name + "'");
    }

    Resolved r;
    for (const auto& o : all) {
        std::optional<std::string> flag;
        if (auto it = cmd.flags.find(o.key); it != cmd.flags.end()) flag = it->second;
        if (auto it = global_flags.find(o.key); it != global_flags.end() && it->second) flag = it->second;
        if (flag) {
            r.cfg_.set(o.key, *flag);
        } else if (auto v = file.get(o.key)) {
            r.cfg_.set(o.key, *v);
        } else if (!o.def.empty() || !o.required) {
            r.cfg_.set(o.key, o.def);
        }
        if (o.required && !r.has(o.key)) throw UsageError(flag_name(o.key) + " is required");
    }
    return r;
}

// Output paths are taken relative to --out-dir when one is given.
fs::path output_path(const Resolved& r, const std::string& key) {
    fs::path p = r.str(key);
    if (r.has("out_dir") && p.is_relative()) p = fs::path(r.str("out_dir")) / p;
    return p;
}

fs::path config_dir(const Resolved& r, const std::optional<fs::path>& primary) {
    if (r.has("out_dir")) return r.str("out_dir");
    if (primary && primary->has_parent_path()) return primary->parent_path();
    return ".";
}

void ensure_parent(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

void write_text(const fs::path& p, const std::string& text) {
    ensure_parent(p);
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write " + p.string());
    out << text;
    out.close();
    if (!out) throw Error("write failed: " + p.string());
}

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_resolved(const Resolved& r, const std::string& command, const fs::path& dir) {
    std::ostringstream ss;
    ss << "# resolved configuration for: gbtpp " << command << '\n';
    r.cfg_.write(ss);
    write_text(dir / (command + ".config"), ss.str());
}

struct Logger {
    bool quiet = false;
    void operator()(const std::string& line) const {
        if (!quiet) std::cerr << line << '\n';
    }
};

// Verifies that a freshly written file reads back to what was written.
void check_written(const fs::path& p, const std::string& expected) {
    if (read_text(p) != expected) throw Error("output " + p.string() + " did not read back intact");
}

EmbedConfig embed_config(const Resolved& r, const std::string& prefix) {
    EmbedConfig c;
    c.dim = r.count(prefix + "dim");
    c.epochs = r.count(prefix + "epochs");
    c.learning_rate = r.real(prefix + "learning_rate");
    c.l2 = r.real(prefix + "l2");
    c.neg_samples = r.count(prefix + "neg_samples");
    c.min_edge_count = r.u64(prefix + "min_edge_count");
    return c;
}

TrainConfig train_config(const Resolved& r) {
    TrainConfig c;
    c.hidden = r.count("hidden");
    c.input_dim = r.count("input_dim");
    c.bptt_len = r.count("bptt_len");
    c.learning_rate = r.real("learning_rate");
    c.epochs = r.count("epochs");
    c.grad_clip = r.real("grad_clip");
    c.time_feature = parse_time_feature(r.str("time_feature"));
    c.time_weight = r.real("time_weight");
    c.time_scale = r.real("time_scale");
    c.min_w_t = r.real("min_w_t");
    c.seed = r.u64("seed");
    if (c.hidden == 0 || c.input_dim == 0 || c.bptt_len == 0) {
        throw UsageError("--hidden, --input-dim and --bptt-len must be positive");
    }
    return c;
}

std::vector<OptSpec> embed_opts(const std::string& prefix) {
    const EmbedConfig d;
    return {
        {prefix + "dim", std::to_string(d.dim), "embedding dimension d"},
        {prefix + "epochs", std::to_string(d.epochs), "embedding epochs"},
        {prefix + "learning_rate", shortest(d.learning_rate), "embedding learning rate"},
        {prefix + "l2", shortest(d.l2), "L2 penalty"},
        {prefix + "neg_samples", std::to_string(d.neg_samples), "negative samples per edge"},
        {prefix + "min_edge_count", std::to_string(d.min_edge_count), "edge threshold on transition counts"},
    };
}

std::vector<OptSpec> train_opts() {
    const TrainConfig d;
    return {
        {"hidden", std::to_string(d.hidden), "hidden size H"},
        {"input_dim", std::to_string(d.input_dim), "input embedding size"},
        {"bptt_len", std::to_string(d.bptt_len), "truncated BPTT window"},
        {"learning_rate", shortest(d.learning_rate), "SGD step size"},
        {"epochs", std::to_string(d.epochs), "training epochs"},
        {"grad_clip", shortest(d.grad_clip), "global gradient-norm clip"},
        {"time_feature", std::string(time_feature_name(d.time_feature)), "raw_gap | log_gap"},
        {"time_weight", shortest(d.time_weight), "weight of the time term"},
        {"time_scale", shortest(d.time_scale), "time unit; 0 = mean training gap"},
        {"min_w_t", shortest(d.min_w_t), "lower bound on the intensity slope"},
    };
}

// ---------------------------------------------------------------- commands

void cmd_simulate(const Resolved& r, const Logger& log) {
    const std::size_t nodes = r.count("nodes");
    if (nodes == 0) throw UsageError("--nodes must be positive");
    SynthesisConfig syn;
    syn.beta = r.real("beta");
    syn.mu_max = r.real("mu_max");
    syn.spectral_radius = r.real("spectral_radius");
    SimConfig sim;
    sim.n_sequences = r.count("sequences");
    sim.max_events = r.count("max_events");
    sim.horizon = r.real("horizon");
    sim.seed = r.u64("seed");
    if (sim.max_events < 2) throw UsageError("--max-events must be at least 2");
    const std::uint64_t param_seed = r.has("param_seed") ? r.u64("param_seed") : sim.seed;

    const auto params = synthesize_params(nodes, param_seed, syn);
    const auto res = simulate(params, sim);
    log("simulated " + std::to_string(res.dataset.size()) + " sequences, " +
        std::to_string(res.dataset.num_events()) + " events, " + std::to_string(res.regenerated) + " regenerated");

    const fs::path out = output_path(r, "out");
    std::ostringstream data;
    write_cascades_jsonl(res.dataset, data);
    write_text(out, data.str());
    if (parse_cascades(read_text(out), CascadeFormat::jsonl) != res.dataset) {
        throw Error("output " + out.string() + " did not read back intact");
    }

    fs::path sidecar = out;
    sidecar.replace_extension(".params.json");
    std::ostringstream side;
    write_sim_sidecar(params, sim, res, param_seed, side);
    write_text(sidecar, side.str());
    write_resolved(r, "simulate", config_dir(r, out));
}

void cmd_embed(const Resolved& r, const Logger& log) {
    const auto ds = load_cascades(r.str("cascades"));
    EmbedConfig cfg = embed_config(r, "");
    cfg.seed = r.u64("seed");
    const auto adj = estimate_adjacency(ds);
    const auto res = train_embeddings(adj, cfg);
    log("embedding loss " + shortest(res.loss_trace.front()) + " -> " + shortest(res.loss_trace.back()) +
        " (best epoch " + std::to_string(res.best_epoch) + ")");

    const fs::path out = output_path(r, "out");
    std::ostringstream csv;
    write_embeddings_csv(res.embeddings, csv);
    write_text(out, csv.str());
    {
        std::istringstream back(read_text(out));
        if (read_embeddings_csv(back) != res.embeddings) throw Error("output " + out.string() + " did not read back intact");
    }
    if (!ds.node_names.empty()) {
        std::ostringstream map;
        write_node_map(ds, map);
        fs::path node_map = out;
        node_map.replace_extension(".nodes.csv");
        write_text(node_map, map.str());
    }
    write_resolved(r, "embed", config_dir(r, out));
}

void cmd_train(const Resolved& r, const Logger& log) {
    const auto ds = load_cascades(r.str("cascades"));
    const std::string emb_path = r.str("embeddings");
    const auto emb = load_embeddings(emb_path);
    if (emb.num_nodes != ds.num_nodes) {
        throw ValidationError("embeddings have V=" + std::to_string(emb.num_nodes) + " but cascades have V=" +
                              std::to_string(ds.num_nodes));
    }
    TrainConfig cfg = train_config(r);
    cfg.kind = parse_model_kind(r.str("model"));
    const auto res = train(ds, emb, cfg);
    for (std::size_t e = 0; e < res.loss_trace.size(); ++e) {
        log("epoch " + std::to_string(e) + " mean nll " + shortest(res.loss_trace[e]));
    }

    Checkpoint ck;
    ck.model = res.model;
    ck.embeddings_path = emb_path;
    ck.config = train_config_to_json(cfg);
    const fs::path out = output_path(r, "out");
    const std::string text = dump_envelope(checkpoint_envelope(ck));
    write_text(out, text);
    check_written(out, text);
    if (load_checkpoint(out).model.params != ck.model.params) throw Error("checkpoint did not reload intact");

    std::ostringstream trace;
    trace << "epoch,mean_nll\n";
    for (std::size_t e = 0; e < res.loss_trace.size(); ++e) trace << e << ',' << format_double(res.loss_trace[e]) << '\n';
    fs::path trace_path = out;
    trace_path.replace_extension(".loss.csv");
    write_text(trace_path, trace.str());
    write_resolved(r, "train", config_dir(r, out));
}

std::vector<Event> parse_prefix_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError(std::string("--prefix: ") + e.what());
    }
    if (!j.is_array() || j.empty()) throw UsageError("--prefix must be a non-empty array of [node, time]");
    std::vector<Event> out;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number()) {
            throw UsageError("--prefix entries must be [node, time] with a non-negative integer node");
        }
        out.push_back({e[0].get<NodeId>(), e[1].get<double>()});
    }
    return out;
}

void cmd_predict(const Resolved& r, const Logger& log) {
    const Checkpoint ck = load_checkpoint(r.str("checkpoint"));
    const std::size_t V = ck.model.params.dims().num_nodes;
    const std::string emb_path = r.has("embeddings") ? r.str("embeddings") : ck.embeddings_path;
    if (emb_path.empty()) throw UsageError("--embeddings is required (the checkpoint names none)");
    const auto emb = load_embeddings(emb_path);
    check_compatible(ck.model, emb);

    std::vector<Event> prefix;
    if (r.has("prefix") == r.has("cascades")) throw UsageError("give exactly one of --prefix or --cascades");
    if (r.has("prefix")) {
        prefix = parse_prefix_json(r.str("prefix"));
    } else {
        const auto ds = load_cascades(r.str("cascades"));
        if (ds.num_nodes != V) {
            throw ValidationError("cascades have V=" + std::to_string(ds.num_nodes) + " but the checkpoint has V=" +
                                  std::to_string(V));
        }
        const Cascade* c = nullptr;
        if (r.has("seq_id")) {
            for (const auto& x : ds.cascades)
                if (x.seq_id == r.str("seq_id")) c = &x;
            if (!c) throw UsageError("no cascade with seq_id '" + r.str("seq_id") + "'");
        } else {
            c = &ds.cascades.front();
        }
        std::size_t len = r.has("length") ? r.count("length") : c->size();
        if (len == 0 || len > c->size()) {
            throw UsageError("--length must be in [1, " + std::to_string(c->size()) + "]");
        }
        prefix.assign(c->events.begin(), c->events.begin() + static_cast<std::ptrdiff_t>(len));
    }
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (prefix[i].node >= V) {
            throw ValidationError("prefix node " + std::to_string(prefix[i].node) + " >= checkpoint V=" +
                                  std::to_string(V));
        }
        if (i > 0 && !(prefix[i].time > prefix[i - 1].time)) throw ValidationError("prefix times must increase");
    }

    const auto pred = predict_next(ck.model, emb, prefix);
    const std::size_t k = std::min<std::size_t>(r.count("topk"), V);
    std::vector<NodeId> order(V);
    for (std::size_t i = 0; i < V; ++i) order[i] = static_cast<NodeId>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId a, NodeId b) { return pred.probabilities[a] > pred.probabilities[b]; });
    nlohmann::json out;
    out["node"] = pred.node;
    out["time"] = pred.time;
    out["topk"] = nlohmann::json::array();
    for (std::size_t i = 0; i < k; ++i) {
        out["topk"].push_back({{"node", order[i]}, {"probability", pred.probabilities[order[i]]}});
    }
    const std::string text = out.dump(2) + "\n";
    if (r.has("out")) {
        const fs::path p = output_path(r, "out");
        write_text(p, text);
        check_written(p, text);
        write_resolved(r, "predict", config_dir(r, p));
        log("prediction written to " + p.string());
    } else {
        std::cout << text;
        if (r.has("out_dir")) write_resolved(r, "predict", r.str("out_dir"));
    }
}

void cmd_evaluate(const Resolved& r, const Logger& log) {
    const auto ds = load_cascades(r.str("cascades"));
    BenchmarkConfig cfg;
    cfg.models = r.list("models");
    check_model_names(cfg.models);
    cfg.folds = r.count("folds");
    cfg.seed = r.u64("seed");
    cfg.max_topk = r.count("max_topk");
    cfg.markov_smoothing = r.real("markov_smoothing");
    cfg.embed = embed_config(r, "embed_");
    cfg.train = train_config(r);
    cfg.log = [&](const std::string& s) { log(s); };

    const auto res = run_benchmark(ds, cfg);
    const fs::path dir = r.has("out_dir") ? fs::path(r.str("out_dir")) : fs::path(".");

    std::ostringstream records, report, topk, folds;
    write_records_csv(res.records, records);
    write_report_json(res.report, report);
    write_topk_csv(res.report, topk);
    write_fold_assignment(ds, kfold_split(ds, cfg.folds, cfg.seed), folds);
    write_text(dir / "records.csv", records.str());
    write_text(dir / "report.json", report.str());
    write_text(dir / "topk.csv", topk.str());
    write_text(dir / "folds.csv", folds.str());

    // The report must regenerate from the persisted records.
    std::istringstream back(read_text(dir / "records.csv"));
    const auto reloaded = read_records_csv(back);
    std::ostringstream regen;
    write_report_json(aggregate_records(reloaded, cfg.models, cfg.folds, ds.num_nodes, cfg.max_topk, cfg.seed), regen);
    if (regen.str() != report.str()) throw Error("report does not regenerate from records.csv");
    write_resolved(r, "evaluate", dir);

    for (const auto& m : res.report.models) {
        std::string line = m.model;
        if (m.accuracy) line += " accuracy " + shortest(m.accuracy->mean) + " (" + shortest(m.accuracy->std) + ")";
        if (m.rmse) line += " rmse " + shortest(m.rmse->mean) + " (" + shortest(m.rmse->std) + ")";
        log(line);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graph-biased temporal point process toolkit"};
    app.require_subcommand(1);

    std::map<std::string, std::optional<std::string>> global_flags;
    std::optional<std::string> config_path;
    bool quiet = false;
    app.add_option("--seed", global_flags["seed"], "random seed (default 0)");
    app.add_option("--out-dir", global_flags["out_dir"], "directory for outputs and the resolved config");
    app.add_option("--config", config_path, "key = value file; flags override it");
    app.add_flag("--quiet", quiet, "no progress output");

    const SimConfig sim;
    const SynthesisConfig syn;
    std::vector<Command> commands{
        {"simulate",
         nullptr,
         {{"nodes", "20", "number of nodes U"},
          {"sequences", std::to_string(sim.n_sequences), "number of sequences"},
          {"max_events", std::to_string(sim.max_events), "events per sequence at most"},
          {"horizon", shortest(sim.horizon), "time horizon per sequence"},
          {"beta", shortest(syn.beta), "kernel decay"},
          {"mu_max", shortest(syn.mu_max), "base rates drawn from U[0, mu_max]"},
          {"spectral_radius", shortest(syn.spectral_radius), "spectral radius of A"},
          {"param_seed", "", "seed for the parameters (defaults to --seed)"},
          {"out", "", "output cascade file (.jsonl)", true}},
         {}},
        {"embed", nullptr, {}, {}},
        {"train",
         nullptr,
         {{"cascades", "", "training cascades", true},
          {"embeddings", "", "embedding CSV", true},
          {"model", "gbtpp", "gbtpp | nrpp | rmtpp"},
          {"out", "", "checkpoint file", true}},
         {}},
        {"predict",
         nullptr,
         {{"checkpoint", "", "checkpoint file", true},
          {"embeddings", "", "embedding CSV (defaults to the one named in the checkpoint)"},
          {"prefix", "", "JSON array [[node, time], ...]: history then current event"},
          {"cascades", "", "take the prefix from this cascade file instead"},
          {"seq_id", "", "cascade to use (default: the first)"},
          {"length", "", "prefix length (default: whole cascade)"},
          {"topk", "5", "number of ranked nodes to report"},
          {"out", "", "output JSON (default: stdout)"}},
         {}},
        {"evaluate",
         nullptr,
         {{"cascades", "", "cascade file", true},
          {"models", "mc1,mc2,mc3,ctmc,poisson,hawkes,scp,rmtpp,nrpp,gbtpp", "comma-separated model list"},
          {"folds", "10", "cross-validation folds"},
          {"max_topk", "5", "largest K for top-K precision"},
          {"markov_smoothing", "0.1", "additive smoothing of the Markov baselines"}},
         {}},
    };
    auto& embed = commands[1].opts;
    embed = {{"cascades", "", "cascade file", true}};
    for (auto& o : embed_opts("")) embed.push_back(o);
    embed.push_back({"out", "", "embedding CSV", true});
    for (auto& o : train_opts()) commands[2].opts.insert(commands[2].opts.end() - 1, o);
    for (auto& o : embed_opts("embed_")) commands[4].opts.push_back(o);
    for (auto& o : train_opts()) commands[4].opts.push_back(o);

    register_command(app, commands[0], "sample cascades from a synthetic multivariate Hawkes process");
    register_command(app, commands[1], "fit first-order node embeddings");
    register_command(app, commands[2], "train a recurrent model (gbtpp, nrpp or rmtpp)");
    register_command(app, commands[3], "predict the next node and time of a prefix");
    register_command(app, commands[4], "cross-validated benchmark of the model roster");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    const Logger log{quiet};
    for (const auto& cmd : commands) {
        if (!cmd.app->parsed()) continue;
        try {
            const Resolved r = resolve(cmd, kGlobalOpts, global_flags, config_path);
            if (cmd.name == "simulate") cmd_simulate(r, log);
            if (cmd.name == "embed") cmd_embed(r, log);
            if (cmd.name == "train") cmd_train(r, log);
            if (cmd.name == "predict") cmd_predict(r, log);
            if (cmd.name == "evaluate") cmd_evaluate(r, log);
        } catch (const UsageError& e) {
            std::cerr << "usage error: " << e.what() << "\nRun with --help for options.\n";
            return 2;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 1;
        }
    }
    return 0;
}
