// boostdet: train / detect / evaluate boosted Haar cascades from the shell.
//
// Every run is a pure function of its flags and --seed: no wall clock, no OS
// entropy. Each command writes a manifest beside its primary output with the
// full config snapshot and input digests, so runs can be audited and
// reproduced bit for bit.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "boostdet/boost_svm.hpp"
#include "boostdet/cascade.hpp"
#include "boostdet/error.hpp"
#include "boostdet/eval.hpp"
#include "boostdet/image.hpp"
#include "boostdet/model_io.hpp"
#include "boostdet/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace boostdet;

namespace {

constexpr const char* kToolVersion = "boostdet 0.1.0";

// ---- small helpers -----------------------------------------------------------

std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write file: " + path);
    out << text;
    if (!out) throw DataError("short write: " + path);
}

std::uint64_t digest_file(const std::string& path) {
    const auto bytes = read_file_bytes(path);
    return fnv1a64(bytes.data(), bytes.size());
}

std::uint64_t digest_path(const std::string& path) {
    if (!fs::exists(path)) throw DataError("no such path: " + path);
    if (!fs::is_directory(path)) return digest_file(path);
    std::vector<std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(path))
        if (entry.is_regular_file()) files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    std::uint64_t h = fnv1a64(nullptr, 0);
    for (const std::string& f : files) {
        h = fnv1a64(f.data(), f.size(), h);
        const std::uint64_t fd = digest_file(f);
        h = fnv1a64(&fd, sizeof fd, h);
    }
    return h;
}

// model.json -> model.rounds.csv / model.manifest.json
std::string sibling(const std::string& out, const std::string& suffix) {
    fs::path p(out);
    if (p.has_extension()) p.replace_extension();
    return p.string() + suffix;
}

void write_manifest(const std::string& out_path, const std::string& command, json config,
                    std::uint64_t seed, int jobs, const json& inputs,
                    const std::vector<std::string>& outputs) {
    json m;
    m["tool"] = kToolVersion;
    m["command"] = command;
    m["seed"] = seed;
    m["config"] = std::move(config);
    m["execution"] = {{"jobs", jobs}};
    m["inputs"] = inputs;
    m["outputs"] = outputs;
    write_text(out_path, m.dump(2) + "\n");
}

std::vector<std::string> list_images(const std::string& path) {
    std::vector<std::string> out;
    if (fs::is_directory(path)) {
        for (const auto& entry : fs::directory_iterator(path)) {
            if (!entry.is_regular_file()) continue;
            const auto ext = entry.path().extension().string();
            if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm")
                out.push_back(entry.path().string());
        }
        std::sort(out.begin(), out.end());
        if (out.empty()) throw DataError("no .pgm/.ppm images in directory: " + path);
    } else if (fs::exists(path)) {
        out.push_back(path);
    } else {
        throw DataError("no such image path: " + path);
    }
    return out;
}

std::vector<GrayImage> load_image_dir(const std::string& dir) {
    std::vector<GrayImage> images;
    for (const std::string& p : list_images(dir)) images.push_back(load_pnm(p));
    return images;
}

std::vector<std::string> split_list(const std::string& arg) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : arg) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

// ---- shared scan flags ---------------------------------------------------------

struct ScanFlags {
    double scale_factor = 1.25;
    double step_fraction = 0.05;
    int min_window = 0;
    int min_neighbors = 2;
    double overlap = 0.3;

    void attach(CLI::App* cmd) {
        cmd->add_option("--scale-factor", scale_factor, "window growth per scale (default 1.25)");
        cmd->add_option("--step", step_fraction, "stride as a fraction of window size");
        cmd->add_option("--min-window", min_window, "smallest scan window in pixels");
        cmd->add_option("--min-neighbors", min_neighbors, "raw hits needed per detection");
        cmd->add_option("--overlap", overlap, "IoU that groups raw hits");
    }
    ScanConfig to_config(int jobs) const {
        if (!(scale_factor > 1.0)) throw ConfigError("--scale-factor must be > 1");
        if (!(step_fraction > 0.0)) throw ConfigError("--step must be > 0");
        ScanConfig cfg;
        cfg.scale_factor = scale_factor;
        cfg.step_fraction = step_fraction;
        cfg.min_window = min_window;
        cfg.merge_min_neighbors = min_neighbors;
        cfg.merge_overlap = overlap;
        cfg.jobs = jobs;
        return cfg;
    }
    json to_json() const {
        return {{"scale_factor", scale_factor},
                {"step_fraction", step_fraction},
                {"min_window", min_window},
                {"min_neighbors", min_neighbors},
                {"overlap", overlap}};
    }
};

// ---- train ----------------------------------------------------------------------

int cmd_train(const std::string& faces_dir, const std::string& nonfaces_dir,
              const std::string& learner, int base, std::uint64_t seed, int jobs,
              const std::string& out, const StageGoals& goals, CascadeLimits limits,
              const std::string& stage_rounds_arg, double svm_c, double sigma_ini,
              double sigma_min, double sigma_step, std::size_t subset, int tmax,
              std::size_t resample_n) {
    if (base < 1) throw ConfigError("--base must be >= 1");
    const CascadeLearner kind = learner_from_name(learner);
    for (const std::string& tok : split_list(stage_rounds_arg))
        limits.stage_rounds.push_back(std::stoi(tok));
    limits.seed = seed;
    limits.jobs = jobs;
    limits.svm.c = svm_c;
    limits.svm.t_max = tmax;
    limits.svm.resample_n = resample_n;
    limits.svm.feature_subset_size = subset;
    if (sigma_ini > 0.0 || sigma_min > 0.0 || sigma_step > 0.0) {
        limits.svm.schedule = {sigma_ini, sigma_min, sigma_step};
        if (!limits.svm.schedule.configured())
            throw ConfigError("--sigma-ini, --sigma-min and --sigma-step must all be set");
    }

    const auto faces = load_image_dir(faces_dir);
    const auto nonfaces = load_image_dir(nonfaces_dir);
    const CascadeModel model = train_cascade(faces, nonfaces, goals, kind, limits, base);
    for (const std::string& w : model.warnings) std::cerr << "warning: " << w << "\n";

    save_cascade(model, out);
    const std::string rounds_path = sibling(out, ".rounds.csv");
    {
        std::string csv = "stage,t,sigma,epsilon,alpha,status,resample_seed\n";
        for (const SvmRoundLog& row : model.round_log) {
            csv += std::to_string(row.t / 1000 + 1) + "," + std::to_string(row.t % 1000) + "," +
                   fmt_real(row.sigma) + "," + fmt_real(row.epsilon) + "," + fmt_real(row.alpha) +
                   "," + (row.accepted ? "accepted" : "rejected") + "," +
                   std::to_string(row.resample_seed) + "\n";
        }
        write_text(rounds_path, csv);
    }

    json config{{"faces", faces_dir},
                {"nonfaces", nonfaces_dir},
                {"learner", learner},
                {"base", base},
                {"d_min", goals.d_min},
                {"f_max", goals.f_max},
                {"stages", limits.max_stages},
                {"rounds", limits.rounds_per_stage},
                {"stage_rounds", stage_rounds_arg},
                {"max_rounds", limits.max_rounds_per_stage},
                {"holdout", limits.holdout_fraction},
                {"negatives", limits.negatives_per_stage},
                {"target_fp", limits.target_fp},
                {"c", svm_c},
                {"sigma_ini", sigma_ini},
                {"sigma_min", sigma_min},
                {"sigma_step", sigma_step},
                {"subset", subset},
                {"tmax", tmax},
                {"resample_n", resample_n},
                {"tree_depth", limits.tree_depth},
                {"net_hidden", limits.net_hidden},
                {"net_epochs", limits.net_epochs}};
    json inputs{{faces_dir, digest_hex(digest_path(faces_dir))},
                {nonfaces_dir, digest_hex(digest_path(nonfaces_dir))}};
    write_manifest(sibling(out, ".manifest.json"), "train", config, seed, jobs, inputs,
                   {out, rounds_path});
    return 0;
}

// ---- detect ----------------------------------------------------------------------

int cmd_detect(const std::string& model_path, const std::vector<std::string>& image_args,
               const std::string& out, bool annotate, const ScanFlags& scan, std::uint64_t seed,
               int jobs) {
    const CascadeModel model = load_cascade(model_path);
    const ScanConfig cfg = scan.to_config(jobs);

    std::vector<std::string> paths;
    for (const std::string& arg : image_args)
        for (const std::string& p : list_images(arg)) paths.push_back(p);

    std::vector<std::pair<std::string, std::vector<Detection>>> results;
    std::vector<std::string> outputs{out};
    for (const std::string& p : paths) {
        const GrayImage img = load_pnm(p);
        DetectResult res = detect(model, img, cfg);
        if (!res.notice.empty()) std::cerr << "notice: " << p << ": " << res.notice << "\n";
        if (annotate) {
            std::vector<Rect> boxes;
            for (const Detection& d : res.detections) boxes.push_back(d.rect);
            const std::string ppm =
                (fs::path(out).parent_path() / (fs::path(p).stem().string() + ".det.ppm"))
                    .string();
            save_ppm_annotated(img, boxes, ppm);
            outputs.push_back(ppm);
        }
        results.emplace_back(p, std::move(res.detections));
    }
    write_text(out, detections_csv(results));

    json config{{"model", model_path}, {"annotate", annotate}, {"scan", scan.to_json()}};
    json inputs{{model_path, digest_hex(digest_file(model_path))}};
    for (const std::string& p : paths) inputs[p] = digest_hex(digest_file(p));
    write_manifest(sibling(out, ".manifest.json"), "detect", config, seed, jobs, inputs, outputs);
    return 0;
}

// ---- roc / eval -------------------------------------------------------------------

LoadedCorpus load_corpus_dir(const std::string& dir) {
    const fs::path ann = fs::is_directory(dir) ? fs::path(dir) / "annotations.txt" : fs::path(dir);
    return load_corpus(load_annotations(ann.string()));
}

int cmd_roc(const std::string& model_path, const std::string& corpus_dir, const std::string& out,
            const std::string& sweep_arg, double iou, const ScanFlags& scan, std::uint64_t seed,
            int jobs) {
    const CascadeModel model = load_cascade(model_path);
    const LoadedCorpus corpus = load_corpus_dir(corpus_dir);
    const ScanConfig cfg = scan.to_config(jobs);

    if (corpus.items.empty()) throw DataError("corpus is empty");
    const RocCache cache = build_roc_cache(model, corpus, cfg);
    std::vector<double> sweep;
    if (sweep_arg == "auto") {
        sweep = natural_sweep(cache);
    } else {
        for (const std::string& tok : split_list(sweep_arg)) sweep.push_back(std::stod(tok));
        if (sweep.empty()) throw ConfigError("--sweep has no values");
    }
    const auto points = roc_points(cache, sweep, iou);

    write_text(out, roc_csv(points));
    const std::string svg_path = sibling(out, ".svg");
    write_text(svg_path, roc_svg({{fs::path(model_path).stem().string(), points}}, "ROC"));

    json config{{"model", model_path}, {"corpus", corpus_dir}, {"sweep", sweep_arg},
                {"iou", iou},          {"scan", scan.to_json()}};
    json inputs{{model_path, digest_hex(digest_file(model_path))},
                {corpus_dir, digest_hex(digest_path(corpus_dir))}};
    write_manifest(sibling(out, ".manifest.json"), "roc", config, seed, jobs, inputs,
                   {out, svg_path});
    return 0;
}

int cmd_eval(const std::string& models_arg, const std::string& names_arg,
             const std::string& corpus_dir, const std::string& fd_arg, const std::string& out_dir,
             double iou, const ScanFlags& scan, std::uint64_t seed, int jobs) {
    const auto model_paths = split_list(models_arg);
    if (model_paths.empty()) throw ConfigError("--models has no entries");
    std::vector<std::string> names = split_list(names_arg);
    if (names.empty())
        for (const std::string& p : model_paths) names.push_back(fs::path(p).stem().string());
    if (names.size() != model_paths.size())
        throw ConfigError("--names count does not match --models");
    std::vector<int> fd_targets;
    for (const std::string& tok : split_list(fd_arg)) fd_targets.push_back(std::stoi(tok));
    if (fd_targets.empty()) throw ConfigError("--fd has no values");

    const LoadedCorpus corpus = load_corpus_dir(corpus_dir);
    const ScanConfig cfg = scan.to_config(jobs);
    fs::create_directories(out_dir);

    std::vector<CascadeModel> models;
    for (const std::string& p : model_paths) models.push_back(load_cascade(p));
    std::vector<std::pair<std::string, const CascadeModel*>> named;
    for (std::size_t i = 0; i < models.size(); ++i) named.emplace_back(names[i], &models[i]);

    std::vector<std::string> outputs;
    std::vector<std::pair<std::string, std::vector<RocPoint>>> curves;
    for (std::size_t i = 0; i < models.size(); ++i) {
        const RocCache cache = build_roc_cache(models[i], corpus, cfg);
        const auto points = roc_points(cache, natural_sweep(cache), iou);
        const std::string csv_path = (fs::path(out_dir) / ("roc_" + names[i] + ".csv")).string();
        write_text(csv_path, roc_csv(points));
        outputs.push_back(csv_path);
        curves.emplace_back(names[i], points);
    }
    const std::string svg_path = (fs::path(out_dir) / "roc.svg").string();
    write_text(svg_path, roc_svg(curves, "ROC comparison"));
    outputs.push_back(svg_path);

    const ErrorTable table = error_table(named, corpus, cfg, fd_targets, iou);
    const std::string txt_path = (fs::path(out_dir) / "error_table.txt").string();
    const std::string csv_path = (fs::path(out_dir) / "error_table.csv").string();
    write_text(txt_path, error_table_text(table));
    write_text(csv_path, error_table_csv(table));
    outputs.push_back(txt_path);
    outputs.push_back(csv_path);
    std::cout << error_table_text(table);

    json config{{"models", models_arg}, {"names", names_arg}, {"corpus", corpus_dir},
                {"fd", fd_arg},         {"iou", iou},         {"scan", scan.to_json()}};
    json inputs{{corpus_dir, digest_hex(digest_path(corpus_dir))}};
    for (const std::string& p : model_paths) inputs[p] = digest_hex(digest_file(p));
    write_manifest((fs::path(out_dir) / "manifest.json").string(), "eval", config, seed, jobs,
                   inputs, outputs);
    return 0;
}

// ---- synth -----------------------------------------------------------------------

int cmd_synth_cross(int images, int targets, std::uint64_t seed, const std::string& out_dir,
                    int train_faces, int train_nonfaces, int base, int image_size, int jobs) {
    if (images < 1 || targets < 0) throw ConfigError("--images must be >= 1, --targets >= 0");
    if (base < 4) throw ConfigError("--base must be >= 4");
    CrossParams params;
    params.base = base;
    params.image_w = params.image_h = image_size;

    const CrossCorpus corpus = gen_cross_corpus(images, targets, seed, params);
    save_cross_corpus(corpus, out_dir);
    std::vector<std::string> outputs{(fs::path(out_dir) / "annotations.txt").string()};

    if (train_faces > 0 || train_nonfaces > 0) {
        const CrossTraining training = gen_cross_training(train_faces, train_nonfaces, seed, params);
        fs::create_directories(fs::path(out_dir) / "faces");
        fs::create_directories(fs::path(out_dir) / "nonfaces");
        char name[64];
        for (std::size_t i = 0; i < training.faces.size(); ++i) {
            std::snprintf(name, sizeof name, "faces/face_%04zu.pgm", i);
            save_pgm(training.faces[i], (fs::path(out_dir) / name).string());
        }
        for (std::size_t i = 0; i < training.nonface_images.size(); ++i) {
            std::snprintf(name, sizeof name, "nonfaces/bg_%04zu.pgm", i);
            save_pgm(training.nonface_images[i], (fs::path(out_dir) / name).string());
        }
    }

    json config{{"kind", "cross"},        {"images", images},
                {"targets", targets},     {"train_faces", train_faces},
                {"train_nonfaces", train_nonfaces}, {"base", base},
                {"image_size", image_size}};
    write_manifest((fs::path(out_dir) / "manifest.json").string(), "synth", config, seed, jobs,
                   json::object(), outputs);
    return 0;
}

int cmd_synth_tabular(const std::string& kind, std::size_t n, double ratio, double noise,
                      std::uint64_t seed, const std::string& out, int jobs) {
    const Dataset data = kind == "gaussians" ? gen_two_gaussians(n, ratio, seed)
                                             : gen_two_moons(n, noise, seed);
    std::string csv = "x1,x2,label\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto p = data.point(i);
        csv += fmt_real(p[0]) + "," + fmt_real(p[1]) + "," + std::to_string(data.label(i)) + "\n";
    }
    write_text(out, csv);
    json config{{"kind", kind}, {"n", n}, {"ratio", ratio}, {"noise", noise}};
    write_manifest(sibling(out, ".manifest.json"), "synth", config, seed, jobs, json::object(),
                   {out});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"boosted Haar-cascade object detection toolkit"};
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    int jobs = 1;
    app.add_option("--seed", seed, "RNG seed; all randomness derives from it")
        ->capture_default_str();
    app.add_option("--jobs", jobs, "worker threads (outputs are identical for any value)")
        ->capture_default_str();

    // train
    auto* train = app.add_subcommand("train", "train a cascade from face/nonface images");
    std::string faces_dir, nonfaces_dir, learner = "stump", out = "model.json";
    int base = 32;
    StageGoals goals;
    CascadeLimits limits;
    double svm_c = 1.0, sigma_ini = 0.0, sigma_min = 0.0, sigma_step = 0.0;
    std::size_t subset = 0, resample_n = 0;
    int tmax = 50;
    train->add_option("--faces", faces_dir, "directory of base x base face windows")->required();
    train->add_option("--nonfaces", nonfaces_dir, "directory of face-free images")->required();
    train->add_option("--learner", learner, "svm|stump|tree|net")->capture_default_str();
    train->add_option("--base", base, "detector base window")->capture_default_str();
    train->add_option("-o,--out", out, "model file")->capture_default_str();
    train->add_option("--dmin", goals.d_min, "per-stage detection-rate goal");
    train->add_option("--fmax", goals.f_max, "per-stage false-positive goal");
    std::string stage_rounds_arg;
    train->add_option("--stages", limits.max_stages, "maximum cascade stages");
    train->add_option("--rounds", limits.rounds_per_stage, "initial boosting rounds per stage");
    train->add_option("--stage-rounds", stage_rounds_arg,
                      "per-stage rounds, e.g. 4,8,16 (later stages reuse the last)");
    train->add_option("--max-rounds", limits.max_rounds_per_stage, "round cap per stage");
    train->add_option("--holdout", limits.holdout_fraction, "face fraction held out for theta");
    train->add_option("--negatives", limits.negatives_per_stage,
                      "negatives per stage (0 = 10x faces)");
    train->add_option("--target-fp", limits.target_fp, "stop once cumulative FP rate <= this");
    train->add_option("--tree-depth", limits.tree_depth, "tree learner depth");
    train->add_option("--net-hidden", limits.net_hidden, "net learner hidden units");
    train->add_option("--net-epochs", limits.net_epochs, "net learner epochs");
    train->add_option("--c", svm_c, "SVM regularization C");
    train->add_option("--sigma-ini", sigma_ini, "starting RBF width (default: from data)");
    train->add_option("--sigma-min", sigma_min, "minimum RBF width");
    train->add_option("--sigma-step", sigma_step, "width decrement on rejection");
    train->add_option("--subset", subset, "features per SVM component (0 = auto)");
    train->add_option("--tmax", tmax, "maximum AdaBoostSVM rounds per stage");
    train->add_option("--resample", resample_n, "SVM resample size (0 = auto)");

    // detect
    auto* det = app.add_subcommand("detect", "run a model over images");
    std::string det_model, det_out = "detections.csv";
    std::vector<std::string> det_images;
    bool annotate = false;
    ScanFlags det_scan;
    det->add_option("--model", det_model, "model file")->required();
    det->add_option("--images", det_images, "image files or directories")->required();
    det->add_option("-o,--out", det_out, "detections CSV")->capture_default_str();
    det->add_flag("--annotate", annotate, "also write PPM copies with detection boxes");
    det_scan.attach(det);

    // roc
    auto* roc = app.add_subcommand("roc", "ROC curve for one model over a corpus");
    std::string roc_model, roc_corpus, roc_out = "roc.csv", sweep_arg = "auto";
    double roc_iou = 0.5;
    ScanFlags roc_scan;
    roc->add_option("--model", roc_model, "model file")->required();
    roc->add_option("--corpus", roc_corpus, "corpus dir (with annotations.txt)")->required();
    roc->add_option("-o,--out", roc_out, "ROC CSV (SVG written beside it)")->capture_default_str();
    roc->add_option("--sweep", sweep_arg, "'auto' or comma-separated thresholds");
    roc->add_option("--iou", roc_iou, "IoU to match ground truth");
    roc_scan.attach(roc);

    // eval
    auto* ev = app.add_subcommand("eval", "error-rate table across models");
    std::string ev_models, ev_names, ev_corpus, ev_fd = "120,200", ev_out = "eval";
    double ev_iou = 0.5;
    ScanFlags ev_scan;
    ev->add_option("--models", ev_models, "comma-separated model files")->required();
    ev->add_option("--names", ev_names, "comma-separated row names (default: file stems)");
    ev->add_option("--corpus", ev_corpus, "corpus dir")->required();
    ev->add_option("--fd", ev_fd, "false-detection budgets (table columns)")
        ->capture_default_str();
    ev->add_option("-o,--out", ev_out, "output directory")->capture_default_str();
    ev->add_option("--iou", ev_iou, "IoU to match ground truth");
    ev_scan.attach(ev);

    // synth
    auto* synth = app.add_subcommand("synth", "generate synthetic corpora and datasets");
    synth->require_subcommand(1);
    auto* cross = synth->add_subcommand("cross", "cross-target detection corpus");
    int sy_images = 10, sy_targets = 3, sy_train_faces = 0, sy_train_nonfaces = 0;
    int sy_base = 12, sy_image_size = 96;
    std::string sy_out = "corpus";
    cross->add_option("--images", sy_images, "corpus images")->capture_default_str();
    cross->add_option("--targets", sy_targets, "targets per image")->capture_default_str();
    cross->add_option("--train-faces", sy_train_faces, "also write this many face windows")
        ->capture_default_str();
    cross->add_option("--train-nonfaces", sy_train_nonfaces,
                      "also write this many background images")
        ->capture_default_str();
    cross->add_option("--base", sy_base, "target base size")->capture_default_str();
    cross->add_option("--image-size", sy_image_size, "corpus image edge")->capture_default_str();
    cross->add_option("-o,--out", sy_out, "output directory")->capture_default_str();

    auto* gauss = synth->add_subcommand("gaussians", "imbalanced two-gaussians dataset");
    std::size_t g_n = 220;
    double g_ratio = 10.0;
    std::string g_out = "gaussians.csv";
    gauss->add_option("--n", g_n, "sample count")->capture_default_str();
    gauss->add_option("--ratio", g_ratio, "majority:minority imbalance")->capture_default_str();
    gauss->add_option("-o,--out", g_out, "CSV file")->capture_default_str();

    auto* moons = synth->add_subcommand("moons", "two-moons dataset");
    std::size_t m_n = 200;
    double m_noise = 0.15;
    std::string m_out = "moons.csv";
    moons->add_option("--n", m_n, "sample count")->capture_default_str();
    moons->add_option("--noise", m_noise, "gaussian noise level")->capture_default_str();
    moons->add_option("-o,--out", m_out, "CSV file")->capture_default_str();

    // global --seed/--jobs may appear after the subcommand name
    for (CLI::App* sub : {train, det, roc, ev, synth, cross, gauss, moons}) sub->fallthrough();

    try {
        app.parse(argc, argv);
        if (jobs < 1) throw ConfigError("--jobs must be >= 1");

        if (*train)
            return cmd_train(faces_dir, nonfaces_dir, learner, base, seed, jobs, out, goals,
                             limits, stage_rounds_arg, svm_c, sigma_ini, sigma_min, sigma_step,
                             subset, tmax, resample_n);
        if (*det) return cmd_detect(det_model, det_images, det_out, annotate, det_scan, seed, jobs);
        if (*roc)
            return cmd_roc(roc_model, roc_corpus, roc_out, sweep_arg, roc_iou, roc_scan, seed,
                           jobs);
        if (*ev)
            return cmd_eval(ev_models, ev_names, ev_corpus, ev_fd, ev_out, ev_iou, ev_scan, seed,
                            jobs);
        if (*cross)
            return cmd_synth_cross(sy_images, sy_targets, seed, sy_out, sy_train_faces,
                                   sy_train_nonfaces, sy_base, sy_image_size, jobs);
        if (*gauss) return cmd_synth_tabular("gaussians", g_n, g_ratio, 0.0, seed, g_out, jobs);
        if (*moons) return cmd_synth_tabular("moons", m_n, 1.0, m_noise, seed, m_out, jobs);
        return 0;
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: data: " << e.what() << "\n";
        return 3;
    } catch (const TrainError& e) {
        std::cerr << "error: training: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
}
