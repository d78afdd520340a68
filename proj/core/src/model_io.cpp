#include "boostdet/model_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>

#include "json.hpp"

#include "boostdet/error.hpp"

namespace boostdet {

using nlohmann::json;

std::string digest_hex(std::uint64_t digest) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, digest);
    return buf;
}

namespace {

std::uint64_t digest_from_hex(const std::string& hex) {
    if (hex.size() != 16) throw DataError("pool digest must be 16 hex digits");
    return std::strtoull(hex.c_str(), nullptr, 16);
}

json kernel_to_json(const KernelSpec& k) {
    switch (k.kind) {
        case KernelKind::Rbf: return {{"kind", "rbf"}, {"sigma", k.sigma}};
        case KernelKind::Polynomial: return {{"kind", "poly"}, {"degree", k.degree}};
        case KernelKind::Sigmoid: return {{"kind", "sigmoid"}, {"offset", k.offset}};
    }
    throw DataError("unknown kernel kind");
}

KernelSpec kernel_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "rbf") return KernelSpec::rbf(j.at("sigma").get<double>());
    if (kind == "poly") return KernelSpec::polynomial(j.at("degree").get<int>());
    if (kind == "sigmoid") return KernelSpec::sigmoid(j.at("offset").get<double>());
    throw DataError("unknown kernel kind '" + kind + "'");
}

json svm_model_to_json(const RbfSvmModel& m) {
    json j;
    j["kernel"] = kernel_to_json(m.kernel);
    j["c"] = m.c;
    j["dim"] = m.dim;
    j["bias"] = m.bias;
    j["support_vectors"] = m.support_vectors;
    j["dual_coefs"] = m.dual_coefs;
    j["converged"] = m.converged;
    j["resample_seed"] = m.resample_seed;
    return j;
}

RbfSvmModel svm_model_from_json(const json& j) {
    RbfSvmModel m;
    m.kernel = kernel_from_json(j.at("kernel"));
    m.c = j.at("c").get<double>();
    m.dim = j.at("dim").get<std::size_t>();
    m.bias = j.at("bias").get<double>();
    m.support_vectors = j.at("support_vectors").get<std::vector<std::vector<double>>>();
    m.dual_coefs = j.at("dual_coefs").get<std::vector<double>>();
    m.converged = j.at("converged").get<bool>();
    m.resample_seed = j.at("resample_seed").get<std::uint64_t>();
    if (m.support_vectors.size() != m.dual_coefs.size())
        throw DataError("svm model: support vector and coefficient counts differ");
    for (const auto& sv : m.support_vectors)
        if (sv.size() != m.dim) throw DataError("svm model: support vector dimension mismatch");
    return m;
}

json component_to_json(const ComponentClassifier& h) {
    return std::visit(
        [](const auto& c) -> json {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, Stump>) {
                return {{"type", "stump"},
                        {"feature", c.feature},
                        {"threshold", c.threshold},
                        {"polarity", c.polarity}};
            } else if constexpr (std::is_same_v<T, DecisionTree>) {
                json nodes = json::array();
                for (const TreeNode& n : c.nodes) {
                    if (n.is_leaf()) {
                        nodes.push_back({{"leaf", n.leaf_label}});
                    } else {
                        nodes.push_back({{"feature", n.feature},
                                         {"threshold", n.threshold},
                                         {"left", n.left},
                                         {"right", n.right}});
                    }
                }
                return {{"type", "tree"}, {"nodes", nodes}};
            } else if constexpr (std::is_same_v<T, TinyNet>) {
                return {{"type", "net"},     {"input_dim", c.input_dim},
                        {"hidden", c.hidden}, {"w1", c.w1},
                        {"b1", c.b1},         {"w2", c.w2},
                        {"b2", c.b2},         {"mean", c.feat_mean},
                        {"scale", c.feat_scale}};
            } else {
                return {{"type", "svm"},
                        {"features", c.feature_subset},
                        {"model", svm_model_to_json(c.model)}};
            }
        },
        h);
}

ComponentClassifier component_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "stump") {
        Stump s;
        s.feature = j.at("feature").get<std::size_t>();
        s.threshold = j.at("threshold").get<double>();
        s.polarity = j.at("polarity").get<int>();
        if (s.polarity != 1 && s.polarity != -1) throw DataError("stump polarity must be +-1");
        return s;
    }
    if (type == "tree") {
        DecisionTree t;
        for (const json& n : j.at("nodes")) {
            TreeNode node;
            if (n.contains("leaf")) {
                node.leaf_label = n.at("leaf").get<int>();
            } else {
                node.feature = n.at("feature").get<int>();
                node.threshold = n.at("threshold").get<double>();
                node.left = n.at("left").get<int>();
                node.right = n.at("right").get<int>();
            }
            t.nodes.push_back(node);
        }
        if (t.nodes.empty()) throw DataError("tree component has no nodes");
        return t;
    }
    if (type == "net") {
        TinyNet n;
        n.input_dim = j.at("input_dim").get<std::size_t>();
        n.hidden = j.at("hidden").get<int>();
        n.w1 = j.at("w1").get<std::vector<double>>();
        n.b1 = j.at("b1").get<std::vector<double>>();
        n.w2 = j.at("w2").get<std::vector<double>>();
        n.b2 = j.at("b2").get<double>();
        n.feat_mean = j.at("mean").get<std::vector<double>>();
        n.feat_scale = j.at("scale").get<std::vector<double>>();
        if (n.w1.size() != n.input_dim * static_cast<std::size_t>(n.hidden))
            throw DataError("net component: weight shape mismatch");
        return n;
    }
    if (type == "svm") {
        SvmComponent s;
        s.feature_subset = j.at("features").get<std::vector<std::uint32_t>>();
        s.model = svm_model_from_json(j.at("model"));
        if (s.feature_subset.size() != s.model.dim)
            throw DataError("svm component: subset size does not match model dimension");
        return s;
    }
    throw DataError("unknown component type '" + type + "'");
}

json round_log_to_json(const std::vector<SvmRoundLog>& log) {
    json rows = json::array();
    for (const SvmRoundLog& r : log)
        rows.push_back({r.t, r.sigma, r.epsilon, r.alpha, r.accepted, r.resample_seed});
    return rows;
}

std::vector<SvmRoundLog> round_log_from_json(const json& rows) {
    std::vector<SvmRoundLog> log;
    for (const json& r : rows) {
        SvmRoundLog row;
        row.t = r.at(0).get<int>();
        row.sigma = r.at(1).get<double>();
        row.epsilon = r.at(2).get<double>();
        row.alpha = r.at(3).get<double>();
        row.accepted = r.at(4).get<bool>();
        row.resample_seed = r.at(5).get<std::uint64_t>();
        log.push_back(row);
    }
    return log;
}

}  // namespace

std::string cascade_to_json(const CascadeModel& m) {
    if (m.stages.empty()) throw DataError("cascade model has no stages");
    json j;
    j["format_version"] = 1;
    j["base"] = m.base;
    j["pool_digest"] = digest_hex(m.pool_digest);
    json stages = json::array();
    for (const StrongClassifier& s : m.stages) {
        json rounds = json::array();
        for (const auto& r : s.rounds)
            rounds.push_back({{"alpha", r.alpha}, {"component", component_to_json(r.h)}});
        stages.push_back({{"theta", s.theta}, {"rounds", rounds}});
    }
    j["stages"] = stages;

    json meta;
    meta["learner"] = m.learner;
    meta["seed"] = m.seed;
    meta["cumulative_fp_estimate"] = m.cumulative_fp_estimate;
    json stage_meta = json::array();
    for (const StageMeta& s : m.stage_meta)
        stage_meta.push_back({{"rounds", s.rounds},
                              {"theta", s.theta},
                              {"holdout_detection_rate", s.holdout_detection_rate},
                              {"fp_rate", s.fp_rate},
                              {"degenerate", s.degenerate}});
    meta["stages"] = stage_meta;
    meta["warnings"] = m.warnings;
    meta["round_log"] = round_log_to_json(m.round_log);
    j["training_meta"] = meta;
    return j.dump(2) + "\n";
}

CascadeModel cascade_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("model JSON parse error: ") + e.what());
    }
    try {
        if (j.at("format_version").get<int>() != 1)
            throw DataError("unsupported model format_version");
        CascadeModel m;
        m.base = j.at("base").get<int>();
        m.pool_digest = digest_from_hex(j.at("pool_digest").get<std::string>());

        const FeaturePool pool = enumerate_pool(m.base);
        if (pool_digest(pool) != m.pool_digest)
            throw DataError("pool digest mismatch: model was built against a different pool");

        for (const json& sj : j.at("stages")) {
            StrongClassifier s;
            s.theta = sj.at("theta").get<double>();
            for (const json& rj : sj.at("rounds"))
                s.rounds.push_back(
                    {rj.at("alpha").get<double>(), component_from_json(rj.at("component"))});
            if (s.rounds.empty()) throw DataError("stage has no rounds");
            m.stages.push_back(std::move(s));
        }
        if (m.stages.empty()) throw DataError("cascade model has no stages");

        // referenced feature ids must index the pool
        for (const StrongClassifier& s : m.stages)
            for (const auto& r : s.rounds)
                std::visit(
                    [&](const auto& c) {
                        using T = std::decay_t<decltype(c)>;
                        if constexpr (std::is_same_v<T, Stump>) {
                            if (c.feature >= pool.size())
                                throw DataError("stump references a feature outside the pool");
                        } else if constexpr (std::is_same_v<T, SvmComponent>) {
                            for (const auto f : c.feature_subset)
                                if (f >= pool.size())
                                    throw DataError("svm references a feature outside the pool");
                        }
                    },
                    r.h);

        if (j.contains("training_meta")) {
            const json& meta = j.at("training_meta");
            m.learner = meta.value("learner", std::string{});
            m.seed = meta.value("seed", std::uint64_t{0});
            m.cumulative_fp_estimate = meta.value("cumulative_fp_estimate", 1.0);
            if (meta.contains("stages"))
                for (const json& sj : meta.at("stages"))
                    m.stage_meta.push_back({sj.at("rounds").get<int>(),
                                            sj.at("theta").get<double>(),
                                            sj.at("holdout_detection_rate").get<double>(),
                                            sj.at("fp_rate").get<double>(),
                                            sj.at("degenerate").get<bool>()});
            if (meta.contains("warnings"))
                m.warnings = meta.at("warnings").get<std::vector<std::string>>();
            if (meta.contains("round_log")) m.round_log = round_log_from_json(meta.at("round_log"));
        }
        return m;
    } catch (const json::exception& e) {
        throw DataError(std::string("model JSON structure error: ") + e.what());
    }
}

void save_cascade(const CascadeModel& m, const std::string& path) {
    const std::string text = cascade_to_json(m);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write model file: " + path);
    out << text;
    if (!out) throw DataError("short write: " + path);
}

CascadeModel load_cascade(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return cascade_from_json(text);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

std::string pool_to_json(const FeaturePool& pool) {
    json j;
    j["base"] = pool.base;
    json feats = json::array();
    for (const HaarFeature& f : pool.features)
        feats.push_back({static_cast<int>(f.kind), f.anchor.x, f.anchor.y, f.anchor.w,
                         f.anchor.h});
    j["features"] = feats;
    return j.dump() + "\n";
}

FeaturePool pool_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("pool JSON parse error: ") + e.what());
    }
    FeaturePool pool;
    pool.base = j.at("base").get<int>();
    for (const json& f : j.at("features")) {
        HaarFeature feat;
        feat.kind = static_cast<HaarKind>(f.at(0).get<int>());
        feat.anchor = {f.at(1).get<int>(), f.at(2).get<int>(), f.at(3).get<int>(),
                       f.at(4).get<int>()};
        pool.features.push_back(feat);
    }
    return pool;
}

}  // namespace boostdet
