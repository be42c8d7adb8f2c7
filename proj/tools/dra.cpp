// dra: curves, region labels, samples and sampled Hilbert functions for the
// degree-Rips bifiltration of a weighted annulus.

#include "dra/dra.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <fmt/format.h>

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace {

using nlohmann::ordered_json;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_internal = 2;

struct ModelArgs {
    double R = 0.4;
    double Q = 0.5;
    double w = 0.05;

    dra::AnnulusModel build() const { return {R, Q, w}; }
};

struct Config {
    ModelArgs model;
    double s = 0.0;
    double k = 0.0;
    double c = 0.0;
    dra::GridAxis s_axis{0.01, 0.2, 40};
    dra::GridAxis k_axis{0.0, 0.05, 40};
    unsigned ell_max = dra::default_ell_max;
    std::size_t n = 500;
    std::uint64_t seed = 1;
    std::string points;
    std::string out;
    double margin = 0.2;
    double tol = dra::default_boundary_tol;
};

void add_model(CLI::App* cmd, Config& cfg) {
    cmd->add_option("--R", cfg.model.R, "inner radius")->capture_default_str();
    cmd->add_option("--Q", cfg.model.Q, "outer radius")->capture_default_str();
    cmd->add_option("--w", cfg.model.w, "mass of the inner disc")->capture_default_str();
}

void add_s_axis(CLI::App* cmd, Config& cfg) {
    cmd->add_option("--s-min", cfg.s_axis.min)->capture_default_str();
    cmd->add_option("--s-max", cfg.s_axis.max)->capture_default_str();
    cmd->add_option("--s-steps", cfg.s_axis.steps)->capture_default_str();
}

void add_k_axis(CLI::App* cmd, Config& cfg) {
    cmd->add_option("--k-min", cfg.k_axis.min)->capture_default_str();
    cmd->add_option("--k-max", cfg.k_axis.max)->capture_default_str();
    cmd->add_option("--k-steps", cfg.k_axis.steps)->capture_default_str();
}

void add_out(CLI::App* cmd, Config& cfg) {
    cmd->add_option("--out", cfg.out, "output path (default: stdout)");
}

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void require_positive(double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) throw UsageError(fmt::format("{} must be > 0", field));
}

void require_unit(double v, const char* field) {
    if (!(v >= 0.0 && v <= 1.0)) throw UsageError(fmt::format("{} must lie in [0, 1]", field));
}

void validate_s_axis(const dra::GridAxis& axis) {
    axis.validate("s");
    require_positive(axis.min, "s-min");
}

void validate_k_axis(const dra::GridAxis& axis) {
    axis.validate("k");
    require_unit(axis.min, "k-min");
    require_unit(axis.max, "k-max");
}

std::string meta_line(const std::string& cmd, const Config& cfg, bool with_sample) {
    std::string m = fmt::format("dra {} {}", dra::version, cmd);
    if (with_sample) m += fmt::format(" seed={}", cfg.seed);
    m += fmt::format(" R={} Q={} w={}", cfg.model.R, cfg.model.Q, cfg.model.w);
    if (with_sample) m += fmt::format(" n={} prng={}", cfg.n, dra::prng_id);
    return m;
}

void emit(const Config& cfg, const std::string& content) {
    if (cfg.out.empty()) {
        std::cout << content;
        std::cout.flush();
    } else {
        dra::write_file_atomic(cfg.out, content);
    }
}

unsigned worker_threads() {
    const char* env = std::getenv("DRA_THREADS");
    if (env == nullptr || *env == '\0') return 0;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 4096) throw UsageError("DRA_THREADS must be a positive integer");
    return static_cast<unsigned>(v);
}

ordered_json label_json(const dra::RegionLabel& label) {
    ordered_json j;
    j["label"] = dra::kind_name(label.kind);
    if (label.kind == dra::RegionLabel::Kind::Sphere) j["ell"] = label.ell;
    return j;
}

ordered_json axis_json(const dra::GridAxis& axis) {
    return {{"min", axis.min}, {"max", axis.max}, {"steps", axis.steps}};
}

int cmd_curves(const Config& cfg) {
    const auto model = cfg.model.build();
    validate_s_axis(cfg.s_axis);
    const auto table = dra::build_curve_table(model, cfg.s_axis.values(), cfg.ell_max);
    emit(cfg, dra::curves_csv(table));
    return exit_ok;
}

int cmd_classify(const Config& cfg) {
    const auto model = cfg.model.build();
    require_positive(cfg.s, "s");
    require_unit(cfg.k, "k");
    if (!(cfg.tol >= 0.0)) throw UsageError("tol must be >= 0");

    const dra::CurveEvaluator curves(model, cfg.s);
    const auto label = dra::classify(curves, cfg.k, cfg.tol, cfg.ell_max);
    const auto via_radius = dra::classify_via_radius(model, curves.peak(), cfg.k, cfg.ell_max);
    const auto P = dra::superlevel_inner_radius(model, curves.peak(), cfg.k);

    // Curves bracketing k: phi_0 >= phi_1 >= ... >= phi_inf.
    std::optional<double> above, below;
    std::vector<dra::SphereIndex> ells;
    for (unsigned l = 0; l <= cfg.ell_max; ++l) ells.emplace_back(l);
    ells.push_back(dra::SphereIndex::infinity());
    for (const auto& ell : ells) {
        const double v = curves.phi(ell);
        if (v >= cfg.k && (!above || v < *above)) above = v;
        if (v <= cfg.k && (!below || v > *below)) below = v;
    }

    ordered_json j = label_json(label);
    if (P) j["P"] = *P;
    j["phi_bracket"] = {below ? ordered_json(*below) : ordered_json(nullptr),
                        above ? ordered_json(*above) : ordered_json(nullptr)};
    const auto rj = label_json(via_radius);
    j["radius_label"] = rj["label"];
    if (rj.contains("ell")) j["radius_ell"] = rj["ell"];
    j["s"] = cfg.s;
    j["k"] = cfg.k;
    j["meta"] = meta_line("classify", cfg, false);

    const bool conflict = !(label == via_radius)
                          && label.kind != dra::RegionLabel::Kind::Boundary
                          && via_radius.kind != dra::RegionLabel::Kind::Boundary;
    j["agree"] = !conflict;
    emit(cfg, j.dump(2) + "\n");
    if (conflict) {
        std::cerr << "error: curve and radius classifications disagree: " << label.str()
                  << " vs " << via_radius.str() << "\n";
        return exit_internal;
    }
    return exit_ok;
}

int cmd_nu(const Config& cfg) {
    const auto model = cfg.model.build();
    if (!(cfg.s >= 0.0) || !std::isfinite(cfg.s)) throw UsageError("s must be >= 0");
    if (!(cfg.c >= 0.0) || !std::isfinite(cfg.c)) throw UsageError("c must be >= 0");
    ordered_json j;
    j["s"] = cfg.s;
    j["c"] = cfg.c;
    j["nu"] = dra::nu(model, cfg.s, cfg.c);
    j["meta"] = meta_line("nu", cfg, false);
    emit(cfg, j.dump(2) + "\n");
    return exit_ok;
}

int cmd_omega(const Config& cfg) {
    const auto model = cfg.model.build();
    require_positive(cfg.s, "s");
    const auto peak = dra::omega(model, cfg.s);
    ordered_json j;
    j["s"] = cfg.s;
    j["omega"] = peak.omega;
    j["M"] = peak.M;
    j["regime"] = dra::to_string(peak.regime);
    if (peak.middle_root) j["middle_root"] = *peak.middle_root;
    j["meta"] = meta_line("omega", cfg, false);
    emit(cfg, j.dump(2) + "\n");
    return exit_ok;
}

int cmd_sample(const Config& cfg) {
    const auto model = cfg.model.build();
    if (cfg.n < 1) throw UsageError("n must be >= 1");
    const auto cloud = dra::sample(model, cfg.n, cfg.seed);
    emit(cfg, dra::points_csv(cloud.points, meta_line("sample", cfg, true)));
    if (!cfg.out.empty()) {
        ordered_json side;
        side["model"] = {{"R", cfg.model.R}, {"Q", cfg.model.Q}, {"w", cfg.model.w}};
        side["n"] = cfg.n;
        side["seed"] = cfg.seed;
        side["prng"] = dra::prng_id;
        side["version"] = dra::version;
        dra::write_file_atomic(cfg.out + ".json", side.dump(2) + "\n");
    }
    return exit_ok;
}

struct LoadedPoints {
    std::vector<dra::Point2> points;
    std::string provenance;
};

LoadedPoints load_points(const Config& cfg, const std::string& cmd) {
    if (!cfg.points.empty()) {
        auto file = dra::read_points_csv(cfg.points);
        std::string prov = fmt::format("dra {} {} points={}", dra::version, cmd, cfg.points);
        if (!file.comments.empty()) prov += " from: " + file.comments.front();
        return {std::move(file.points), prov};
    }
    cfg.model.build();
    if (cfg.n < 1) throw UsageError("n must be >= 1");
    auto cloud = dra::sample(cfg.model.build(), cfg.n, cfg.seed);
    return {std::move(cloud.points), meta_line(cmd, cfg, true)};
}

int cmd_hilbert(const Config& cfg) {
    validate_s_axis(cfg.s_axis);
    validate_k_axis(cfg.k_axis);
    const unsigned threads = worker_threads();
    const auto loaded = load_points(cfg, "hilbert");
    const dra::DistanceIndex index(loaded.points);
    const auto grid = dra::hilbert_grid(index, cfg.s_axis.values(), cfg.k_axis.values(), threads);
    emit(cfg, dra::hilbert_csv(grid, loaded.provenance));
    return exit_ok;
}

int cmd_compare(const Config& cfg) {
    const auto model = cfg.model.build();
    validate_s_axis(cfg.s_axis);
    validate_k_axis(cfg.k_axis);
    if (!(cfg.margin >= 0.0 && cfg.margin < 0.5)) throw UsageError("margin must lie in [0, 0.5)");
    if (!(cfg.tol >= 0.0)) throw UsageError("tol must be >= 0");
    const unsigned threads = worker_threads();
    const auto loaded = load_points(cfg, "compare");
    const dra::DistanceIndex index(loaded.points);
    const auto grid = dra::hilbert_grid(index, cfg.s_axis.values(), cfg.k_axis.values(), threads);
    const auto report = dra::region_agreement(grid, model, cfg.margin, cfg.tol, cfg.ell_max);

    ordered_json j;
    j["n_checked"] = report.n_checked;
    j["n_agree"] = report.n_agree;
    j["fraction"] = report.fraction();
    j["margin"] = report.margin;
    j["grid_spec"] = {{"s", axis_json(cfg.s_axis)}, {"k", axis_json(cfg.k_axis)}};
    j["n_checked_trivial"] = report.n_checked_trivial;
    j["n_agree_trivial"] = report.n_agree_trivial;
    j["fraction_trivial"] = report.fraction_trivial();
    j["vacuous"] = report.vacuous();
    j["meta"] = loaded.provenance + fmt::format(" R={} Q={} w={}", cfg.model.R, cfg.model.Q,
                                                cfg.model.w);
    emit(cfg, j.dump(2) + "\n");
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Degree-Rips bifiltration of a weighted annulus"};
    app.set_version_flag("--version", std::string(dra::version));
    app.require_subcommand(1);
    Config cfg;

    auto* curves = app.add_subcommand("curves", "phi_l(s) on an s grid as CSV");
    add_model(curves, cfg);
    add_s_axis(curves, cfg);
    curves->add_option("--ell-max", cfg.ell_max)->capture_default_str();
    add_out(curves, cfg);

    auto* classify = app.add_subcommand("classify", "region label of (s, k) as JSON");
    add_model(classify, cfg);
    classify->add_option("--s", cfg.s)->required();
    classify->add_option("--k", cfg.k)->required();
    classify->add_option("--ell-max", cfg.ell_max)->capture_default_str();
    classify->add_option("--tol", cfg.tol)->capture_default_str();
    add_out(classify, cfg);

    auto* nu = app.add_subcommand("nu", "measure of the ball of radius s at distance c");
    add_model(nu, cfg);
    nu->add_option("--s", cfg.s)->required();
    nu->add_option("--c", cfg.c)->required();
    add_out(nu, cfg);

    auto* omega = app.add_subcommand("omega", "maximiser of the ball measure at radius s");
    add_model(omega, cfg);
    omega->add_option("--s", cfg.s)->required();
    add_out(omega, cfg);

    auto* sample = app.add_subcommand("sample", "i.i.d. sample as points CSV");
    add_model(sample, cfg);
    sample->add_option("--n", cfg.n)->capture_default_str();
    sample->add_option("--seed", cfg.seed)->capture_default_str();
    add_out(sample, cfg);

    auto* hilbert = app.add_subcommand("hilbert", "h0, h1 of the degree-Rips frames on a grid");
    add_model(hilbert, cfg);
    add_s_axis(hilbert, cfg);
    add_k_axis(hilbert, cfg);
    hilbert->add_option("--points", cfg.points, "points CSV (default: sample with --n, --seed)");
    hilbert->add_option("--n", cfg.n)->capture_default_str();
    hilbert->add_option("--seed", cfg.seed)->capture_default_str();
    add_out(hilbert, cfg);

    auto* compare = app.add_subcommand("compare", "agreement of sampled h1 with the S^1 region");
    add_model(compare, cfg);
    add_s_axis(compare, cfg);
    add_k_axis(compare, cfg);
    compare->add_option("--points", cfg.points, "points CSV (default: sample with --n, --seed)");
    compare->add_option("--n", cfg.n)->capture_default_str();
    compare->add_option("--seed", cfg.seed)->capture_default_str();
    compare->add_option("--margin", cfg.margin)->capture_default_str();
    compare->add_option("--tol", cfg.tol)->capture_default_str();
    compare->add_option("--ell-max", cfg.ell_max)->capture_default_str();
    add_out(compare, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*curves) return cmd_curves(cfg);
        if (*classify) return cmd_classify(cfg);
        if (*nu) return cmd_nu(cfg);
        if (*omega) return cmd_omega(cfg);
        if (*sample) return cmd_sample(cfg);
        if (*hilbert) return cmd_hilbert(cfg);
        if (*compare) return cmd_compare(cfg);
    } catch (const dra::InternalInconsistency& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return exit_internal;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
