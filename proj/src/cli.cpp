#include "dqlab/cli.hpp"

#include "dqlab/dependence.hpp"
#include "dqlab/dq_core.hpp"
#include "dqlab/elliptical.hpp"
#include "dqlab/errors.hpp"
#include "dqlab/io.hpp"
#include "dqlab/mrv.hpp"
#include "dqlab/optimizer.hpp"
#include "dqlab/rng.hpp"

#include <CLI11.hpp>

#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

namespace dqlab {

namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kDefaultSeed = 20240901;
constexpr std::size_t kDefaultSamples = 1000000;

std::string num6(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

RiskMeasureKind parse_measure(const std::string& s) {
    if (s == "var") return RiskMeasureKind::var;
    if (s == "es") return RiskMeasureKind::es;
    throw std::invalid_argument("measure must be 'var' or 'es'");
}

std::vector<double> parse_weight_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(std::stod(field));
    if (out.empty()) throw std::invalid_argument("empty weight list");
    return out;
}

struct EllipticalArgs {
    std::string family = "normal";
    double nu = 3.0;
    std::string sigma_path;
    std::string mu_path;

    EllipticalSpec build() const {
        Matrix sigma = read_matrix_csv(sigma_path);
        std::vector<double> mu(sigma.rows(), 0.0);
        if (!mu_path.empty()) {
            const Matrix m = read_matrix_csv(mu_path);
            if (m.rows() * m.cols() != sigma.rows())
                throw std::invalid_argument("mu file must hold one value per asset");
            mu.assign(m.data().begin(), m.data().end());
        }
        if (family == "normal") return EllipticalSpec::make_normal(std::move(mu), std::move(sigma));
        if (family == "t")
            return EllipticalSpec::make_student_t(nu, std::move(mu), std::move(sigma));
        throw std::invalid_argument("family must be 'normal' or 't'");
    }

    void attach(CLI::App* cmd) {
        cmd->add_option("--family", family, "model family: normal or t")
            ->check(CLI::IsMember({"normal", "t"}));
        cmd->add_option("--nu", nu, "degrees of freedom for the t family");
        cmd->add_option("--sigma", sigma_path, "dispersion matrix CSV")->required();
        cmd->add_option("--mu", mu_path, "location vector CSV (default zeros)");
    }
};

struct UnivariateArgs {
    std::string model = "normal";
    double loc = 0.0;
    double scale = 1.0;
    double nu = 3.0;
    double lower = 0.0;
    double upper = 1.0;
    double gamma = 2.0;

    UnivariateModel build() const {
        if (model == "normal") return Normal{loc, scale};
        if (model == "t") return StudentT{nu, loc, scale};
        if (model == "uniform") return Uniform{lower, upper};
        if (model == "pareto") return Pareto{gamma, scale};
        throw std::invalid_argument("model must be normal, t, uniform or pareto");
    }

    void attach(CLI::App* cmd) {
        cmd->add_option("--model", model, "normal, t, uniform or pareto")
            ->check(CLI::IsMember({"normal", "t", "uniform", "pareto"}));
        cmd->add_option("--loc", loc, "location");
        cmd->add_option("--scale", scale, "scale");
        cmd->add_option("--nu", nu, "t degrees of freedom");
        cmd->add_option("--lower", lower, "uniform lower bound");
        cmd->add_option("--upper", upper, "uniform upper bound");
        cmd->add_option("--gamma", gamma, "pareto tail index");
    }
};

// ---------------------------------------------------------------------------
// Figure and table reproduction
// ---------------------------------------------------------------------------

struct ReproduceContext {
    fs::path out_dir;
    std::uint64_t seed = kDefaultSeed;
    std::size_t samples = kDefaultSamples;
};

void write_series_csv(const fs::path& path, const std::string& sweep_name,
                      const std::vector<double>& sweep,
                      const std::vector<std::pair<std::string, std::vector<double>>>& series) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open for writing: " + path.string());
    out << sweep_name;
    for (const auto& [name, _] : series) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        out << num6(sweep[i]);
        for (const auto& [_, column] : series) {
            out << ',';
            if (i < column.size() && !std::isnan(column[i])) out << num6(column[i]);
        }
        out << '\n';
    }
}

void write_manifest(const ReproduceContext& ctx, const std::string& id,
                    const nlohmann::json& parameters, const std::vector<std::string>& files) {
    nlohmann::json doc;
    doc["figure"] = id;
    doc["seed"] = ctx.seed;
    doc["samples"] = ctx.samples;
    doc["parameters"] = parameters;
    doc["files"] = files;
    std::ofstream out(ctx.out_dir / (id + "_manifest.json"));
    if (!out)
        throw std::invalid_argument("cannot open manifest for writing in " +
                                    ctx.out_dir.string());
    out << doc.dump(2) << '\n';
}

// Deterministic parallel sweep: every grid point writes its own slot.
template <typename Fn>
void parallel_points(std::size_t count, Fn&& fn) {
    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    if (workers == 1 || count < 4) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::future<void>> futures;
    std::atomic<std::size_t> next{0};
    for (unsigned t = 0; t < workers; ++t) {
        futures.push_back(std::async(std::launch::async, [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        }));
    }
    for (auto& f : futures) f.get();
}

std::vector<EllipticalSpec> four_models(std::size_t n, double r, double nu) {
    const Matrix s1 = sigma_equicorrelated(n, r);
    const Matrix s2 = sigma_ar1(n, r);
    std::vector<double> mu(n, 0.0);
    return {EllipticalSpec::make_normal(mu, s1), EllipticalSpec::make_normal(mu, s2),
            EllipticalSpec::make_student_t(nu, mu, s1),
            EllipticalSpec::make_student_t(nu, mu, s2)};
}

void reproduce_fig1(const ReproduceContext& ctx) {
    const double alpha = 0.05;
    const double r = 0.3;
    const std::size_t n = 4;
    std::vector<double> nus;
    for (double nu = 0.25; nu <= 10.0 + 1e-9; nu += 0.25) nus.push_back(nu);

    const Matrix s1 = sigma_equicorrelated(n, r);
    const Matrix s2 = sigma_ar1(n, r);
    const std::vector<double> mu(n, 0.0);
    const double dr1 = 1.0 / k_sigma(s1).k_sigma;
    const double dr2 = 1.0 / k_sigma(s2).k_sigma;

    std::vector<double> var1(nus.size()), var2(nus.size());
    std::vector<double> es1(nus.size(), std::nan("")), es2(nus.size(), std::nan(""));
    parallel_points(nus.size(), [&](std::size_t i) {
        const auto t1 = EllipticalSpec::make_student_t(nus[i], mu, s1);
        const auto t2 = EllipticalSpec::make_student_t(nus[i], mu, s2);
        var1[i] = dq_var_elliptical(t1, Level(alpha)).value;
        var2[i] = dq_var_elliptical(t2, Level(alpha)).value;
        if (nus[i] > 1.0) {
            es1[i] = dq_es_elliptical(t1, Level(alpha)).value;
            es2[i] = dq_es_elliptical(t2, Level(alpha)).value;
        }
    });
    std::vector<double> flat1(nus.size(), dr1), flat2(nus.size(), dr2);

    write_series_csv(ctx.out_dir / "fig1_var.csv", "nu", nus,
                     {{"dq_var_t_sigma1", var1},
                      {"dq_var_t_sigma2", var2},
                      {"dr_var_sigma1", flat1},
                      {"dr_var_sigma2", flat2}});
    write_series_csv(ctx.out_dir / "fig1_es.csv", "nu", nus,
                     {{"dq_es_t_sigma1", es1},
                      {"dq_es_t_sigma2", es2},
                      {"dr_es_sigma1", flat1},
                      {"dr_es_sigma2", flat2}});
    write_manifest(ctx, "fig1",
                   {{"alpha", alpha}, {"r", r}, {"n", n}, {"nu_grid", "0.25:0.25:10"}},
                   {"fig1_var.csv", "fig1_es.csv"});
}

void reproduce_fig2(const ReproduceContext& ctx) {
    const double alpha = 0.05;
    const double nu = 3.0;
    const std::size_t n = 4;
    std::vector<double> rs;
    for (double r = 0.0; r <= 1.0 + 1e-9; r += 0.02) rs.push_back(std::min(r, 1.0));

    std::vector<std::vector<double>> var(4, std::vector<double>(rs.size()));
    std::vector<std::vector<double>> es(4, std::vector<double>(rs.size()));
    parallel_points(rs.size(), [&](std::size_t i) {
        const auto models = four_models(n, rs[i], nu);
        for (std::size_t m = 0; m < 4; ++m) {
            var[m][i] = dq_var_elliptical(models[m], Level(alpha)).value;
            es[m][i] = dq_es_elliptical(models[m], Level(alpha)).value;
        }
    });

    write_series_csv(ctx.out_dir / "fig2_var.csv", "r", rs,
                     {{"normal_sigma1", var[0]},
                      {"normal_sigma2", var[1]},
                      {"t_sigma1", var[2]},
                      {"t_sigma2", var[3]}});
    write_series_csv(ctx.out_dir / "fig2_es.csv", "r", rs,
                     {{"normal_sigma1", es[0]},
                      {"normal_sigma2", es[1]},
                      {"t_sigma1", es[2]},
                      {"t_sigma2", es[3]}});
    write_manifest(ctx, "fig2",
                   {{"alpha", alpha}, {"nu", nu}, {"n", n}, {"r_grid", "0:0.02:1"}},
                   {"fig2_var.csv", "fig2_es.csv"});
}

void reproduce_fig3(const ReproduceContext& ctx) {
    const double r = 0.3;
    const double nu = 3.0;
    const std::size_t n = 4;
    std::vector<double> alphas;
    for (double a = 0.002; a <= 0.098 + 1e-9; a += 0.002) alphas.push_back(a);

    const auto models = four_models(n, r, nu);
    std::vector<std::vector<double>> var(4, std::vector<double>(alphas.size()));
    std::vector<std::vector<double>> es(4, std::vector<double>(alphas.size()));
    parallel_points(alphas.size(), [&](std::size_t i) {
        for (std::size_t m = 0; m < 4; ++m) {
            var[m][i] = dq_var_elliptical(models[m], Level(alphas[i])).value;
            es[m][i] = dq_es_elliptical(models[m], Level(alphas[i])).value;
        }
    });

    write_series_csv(ctx.out_dir / "fig3_var.csv", "alpha", alphas,
                     {{"normal_sigma1", var[0]},
                      {"normal_sigma2", var[1]},
                      {"t_sigma1", var[2]},
                      {"t_sigma2", var[3]}});
    write_series_csv(ctx.out_dir / "fig3_es.csv", "alpha", alphas,
                     {{"normal_sigma1", es[0]},
                      {"normal_sigma2", es[1]},
                      {"t_sigma1", es[2]},
                      {"t_sigma2", es[3]}});
    write_manifest(ctx, "fig3",
                   {{"r", r}, {"nu", nu}, {"n", n}, {"alpha_grid", "0.002:0.002:0.098"}},
                   {"fig3_var.csv", "fig3_es.csv"});
}

void reproduce_fig4(const ReproduceContext& ctx) {
    const double alpha = 0.05;
    const double r = 0.5;
    const double nu = 3.0;
    std::vector<double> ns;
    for (std::size_t n = 2; n <= 100; ++n) ns.push_back(static_cast<double>(n));

    std::vector<std::vector<double>> var(4, std::vector<double>(ns.size()));
    std::vector<std::vector<double>> es(4, std::vector<double>(ns.size()));
    parallel_points(ns.size(), [&](std::size_t i) {
        const auto models = four_models(static_cast<std::size_t>(ns[i]), r, nu);
        for (std::size_t m = 0; m < 4; ++m) {
            var[m][i] = dq_var_elliptical(models[m], Level(alpha)).value;
            es[m][i] = dq_es_elliptical(models[m], Level(alpha)).value;
        }
    });

    write_series_csv(ctx.out_dir / "fig4_var.csv", "n", ns,
                     {{"normal_sigma1", var[0]},
                      {"normal_sigma2", var[1]},
                      {"t_sigma1", var[2]},
                      {"t_sigma2", var[3]}});
    write_series_csv(ctx.out_dir / "fig4_es.csv", "n", ns,
                     {{"normal_sigma1", es[0]},
                      {"normal_sigma2", es[1]},
                      {"t_sigma1", es[2]},
                      {"t_sigma2", es[3]}});
    write_manifest(ctx, "fig4",
                   {{"alpha", alpha}, {"r", r}, {"nu", nu}, {"n_grid", "2:1:100"}},
                   {"fig4_var.csv", "fig4_es.csv"});
}

// Weighted portfolio of an elliptical model stays elliptical with dispersion
// D_w Sigma D_w, so the weight sweep is fully analytic.
Matrix weighted_dispersion(const Matrix& sigma, double w1, double w2) {
    Matrix out(2, 2);
    const double w[2] = {w1, w2};
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) out.at(i, j) = w[i] * w[j] * sigma.at(i, j);
    return out;
}

void reproduce_fig5(const ReproduceContext& ctx) {
    const double nu = 3.0;
    Matrix sigma(2, 2);
    sigma.at(0, 0) = 1.0;
    sigma.at(0, 1) = sigma.at(1, 0) = 0.5;
    sigma.at(1, 1) = 2.0;
    const std::vector<double> alphas = {0.001, 0.01, 0.025, 0.05};

    std::vector<double> w1s;
    for (double w = 0.0; w <= 1.0 + 1e-9; w += 0.01) w1s.push_back(std::min(w, 1.0));

    std::vector<std::vector<double>> var(alphas.size(), std::vector<double>(w1s.size()));
    std::vector<std::vector<double>> es(alphas.size(), std::vector<double>(w1s.size()));
    parallel_points(w1s.size(), [&](std::size_t i) {
        const Matrix sw = weighted_dispersion(sigma, w1s[i], 1.0 - w1s[i]);
        const auto spec = EllipticalSpec::make_student_t(nu, {0.0, 0.0}, sw);
        for (std::size_t a = 0; a < alphas.size(); ++a) {
            var[a][i] = dq_var_elliptical(spec, Level(alphas[a])).value;
            es[a][i] = dq_es_elliptical(spec, Level(alphas[a])).value;
        }
    });

    std::vector<std::pair<std::string, std::vector<double>>> var_series;
    std::vector<std::pair<std::string, std::vector<double>>> es_series;
    for (std::size_t a = 0; a < alphas.size(); ++a) {
        var_series.emplace_back("alpha_" + num6(alphas[a]), var[a]);
        es_series.emplace_back("alpha_" + num6(alphas[a]), es[a]);
    }
    write_series_csv(ctx.out_dir / "fig5_var.csv", "w1", w1s, var_series);
    write_series_csv(ctx.out_dir / "fig5_es.csv", "w1", w1s, es_series);
    write_manifest(ctx, "fig5",
                   {{"nu", nu},
                    {"sigma", {{1.0, 0.5}, {0.5, 2.0}}},
                    {"alphas", alphas},
                    {"w1_grid", "0:0.01:1"}},
                   {"fig5_var.csv", "fig5_es.csv"});
}

void reproduce_fig6(const ReproduceContext& ctx) {
    const double r = 0.3;
    const std::vector<double> alphas = {0.001, 0.01, 0.025};
    std::vector<double> w1s;
    for (double w = 0.0; w <= 1.0 + 1e-9; w += 0.025) w1s.push_back(std::min(w, 1.0));

    std::vector<std::string> files;
    int panel = 0;
    for (double nu : {2.0, 4.0}) {
        const ScenarioMatrix sample =
            sample_example2(r, nu, ctx.samples, derive_seed(ctx.seed, ++panel));

        // Marginal VaR once per alpha; positive homogeneity handles weights.
        std::vector<std::array<double, 2>> margin_var(alphas.size());
        for (std::size_t a = 0; a < alphas.size(); ++a)
            for (std::size_t i = 0; i < 2; ++i)
                margin_var[a][i] = var_empirical(
                    EmpiricalDistribution::from_column(sample, i), Level(alphas[a]));

        std::vector<std::vector<double>> dq(alphas.size(),
                                            std::vector<double>(w1s.size()));
        std::vector<double> limit(w1s.size());
        parallel_points(w1s.size(), [&](std::size_t i) {
            const double w1 = w1s[i];
            const double w2 = 1.0 - w1;
            limit[i] = example2_f(Weights::normalized({w1, w2}), r, nu);
            std::vector<double> sums(sample.scenarios());
            for (std::size_t j = 0; j < sample.scenarios(); ++j) {
                const auto row = sample.row(j);
                sums[j] = w1 * row[0] + w2 * row[1];
            }
            for (std::size_t a = 0; a < alphas.size(); ++a) {
                const double threshold =
                    w1 * margin_var[a][0] + w2 * margin_var[a][1];
                std::size_t count = 0;
                for (double s : sums)
                    if (s > threshold) ++count;
                dq[a][i] = static_cast<double>(count) /
                           static_cast<double>(sample.scenarios()) / alphas[a];
            }
        });

        std::vector<std::pair<std::string, std::vector<double>>> series;
        for (std::size_t a = 0; a < alphas.size(); ++a)
            series.emplace_back("dq_var_alpha_" + num6(alphas[a]), dq[a]);
        series.emplace_back("f_limit", limit);
        const std::string name = "fig6_nu" + num6(nu) + ".csv";
        write_series_csv(ctx.out_dir / name, "w1", w1s, series);
        files.push_back(name);
    }
    write_manifest(ctx, "fig6",
                   {{"r", r},
                    {"alphas", alphas},
                    {"nus", {2.0, 4.0}},
                    {"w1_grid", "0:0.025:1"},
                    {"sampling", "one common-random-number sample per panel, "
                                 "seed derived from (seed, panel index)"}},
                   files);
}

void reproduce_table1(const ReproduceContext& ctx) {
    const double alpha = 0.01;
    const double r = 0.3;
    const std::size_t n = 4;
    const auto models = four_models(n, r, 3.0);
    const std::vector<std::string> names = {"normal_sigma1", "normal_sigma2", "t3_sigma1",
                                            "t3_sigma2"};

    std::ofstream out(ctx.out_dir / "table1.csv");
    if (!out) throw std::invalid_argument("cannot open table1.csv for writing");
    out << "model,c,c_alpha,dq_var,dq_es\n";
    for (std::size_t m = 0; m < models.size(); ++m) {
        const double c = pelve(models[m].standard_generator(), Level(alpha));
        const double c_alpha = c * alpha;
        const double v = dq_var_elliptical(models[m], Level(alpha)).value;
        const double e = dq_es_elliptical(models[m], Level(c_alpha)).value;
        out << names[m] << ',' << num6(c) << ',' << num6(c_alpha) << ',' << num6(v) << ','
            << num6(e) << '\n';
    }
    write_manifest(ctx, "table1", {{"alpha", alpha}, {"r", r}, {"n", n}},
                   {"table1.csv"});
}

void reproduce(const std::string& id, const ReproduceContext& ctx) {
    fs::create_directories(ctx.out_dir);
    if (id == "fig1") return reproduce_fig1(ctx);
    if (id == "fig2") return reproduce_fig2(ctx);
    if (id == "fig3") return reproduce_fig3(ctx);
    if (id == "fig4") return reproduce_fig4(ctx);
    if (id == "fig5") return reproduce_fig5(ctx);
    if (id == "fig6") return reproduce_fig6(ctx);
    if (id == "table1") return reproduce_table1(ctx);
    if (id == "all") {
        for (const char* each : {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "table1"})
            reproduce(each, ctx);
        return;
    }
    throw std::invalid_argument("unknown reproduction id: " + id);
}

// ---------------------------------------------------------------------------
// Command wiring
// ---------------------------------------------------------------------------

int dispatch(const std::vector<std::string>& args);

int run_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("invalid config JSON: ") + e.what());
    }
    ExperimentConfig config;
    config.command = doc.at("command").get<std::string>();
    doc.erase("command");
    config.options = std::move(doc);
    return run(config);
}

} // namespace

int run(const ExperimentConfig& config) {
    // Mirror the JSON options back onto command-line flags so both front
    // ends share one parser.
    std::vector<std::string> args;
    std::stringstream command(config.command);
    std::string word;
    while (command >> word) args.push_back(word);
    for (const auto& [key, value] : config.options.items()) {
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back("--" + key);
            continue;
        }
        args.push_back("--" + key);
        if (value.is_string())
            args.push_back(value.get<std::string>());
        else
            args.push_back(value.dump());
    }
    return dispatch(args);
}

namespace {

int dispatch_impl(const std::vector<std::string>& args) {
    CLI::App app{"diversification quotient analytics"};
    app.require_subcommand(1);

    // --- elliptical ---
    auto* elliptical_cmd =
        app.add_subcommand("elliptical", "closed-form DQ/DR for an elliptical model");
    EllipticalArgs elliptical_args;
    elliptical_args.attach(elliptical_cmd);
    double e_alpha = 0.05;
    std::string e_measure = "var";
    std::string e_metric = "dq";
    elliptical_cmd->add_option("--alpha", e_alpha, "tail probability level");
    elliptical_cmd->add_option("--measure", e_measure, "var or es")
        ->check(CLI::IsMember({"var", "es"}));
    elliptical_cmd->add_option("--metric", e_metric, "dq, dr or limit")
        ->check(CLI::IsMember({"dq", "dr", "limit"}));

    // --- empirical ---
    auto* empirical_cmd =
        app.add_subcommand("empirical", "DQ/DR on a scenario CSV");
    std::string input_path;
    double p_alpha = 0.05;
    std::string p_measure = "var";
    std::string p_metric = "dq";
    std::string p_method = "rmin";
    bool p_stderr = false;
    empirical_cmd->add_option("--input", input_path, "scenario CSV")->required();
    empirical_cmd->add_option("--alpha", p_alpha, "tail probability level");
    empirical_cmd->add_option("--measure", p_measure, "var or es")
        ->check(CLI::IsMember({"var", "es"}));
    empirical_cmd->add_option("--metric", p_metric, "dq or dr")
        ->check(CLI::IsMember({"dq", "dr"}));
    empirical_cmd->add_option("--method", p_method, "ES route: rmin or bisection")
        ->check(CLI::IsMember({"rmin", "bisection"}));
    empirical_cmd->add_flag("--stderr", p_stderr, "append a batch-split standard error");

    // --- mrv ---
    auto* mrv_cmd = app.add_subcommand("mrv", "tail limits for MRV models");
    mrv_cmd->require_subcommand(1);
    auto* mrv_limit = mrv_cmd->add_subcommand("limit", "portfolio limit f(w)");
    std::string psi_path;
    std::string weight_csv;
    bool equal_weights = false;
    mrv_limit->add_option("--psi", psi_path, "spectral measure JSON")->required();
    mrv_limit->add_option("--weights", weight_csv, "comma-separated weights");
    mrv_limit->add_flag("--equal", equal_weights, "use equal weights");
    auto* mrv_iid = mrv_cmd->add_subcommand("iid", "iid limit n^(1-gamma)");
    std::size_t iid_n = 2;
    double iid_gamma = 2.0;
    mrv_iid->add_option("--n", iid_n, "portfolio size")->required();
    mrv_iid->add_option("--gamma", iid_gamma, "tail index")->required();

    // --- optimize ---
    auto* opt_cmd = app.add_subcommand("optimize", "portfolio weight optimization");
    opt_cmd->require_subcommand(1);
    auto* opt_elliptical = opt_cmd->add_subcommand("elliptical", "closed-form optimizer");
    EllipticalArgs opt_elliptical_args;
    opt_elliptical_args.attach(opt_elliptical);
    auto* opt_empirical = opt_cmd->add_subcommand("empirical", "pattern search on scenarios");
    std::string opt_input;
    double opt_alpha = 0.05;
    std::string opt_measure = "var";
    opt_empirical->add_option("--input", opt_input, "scenario CSV")->required();
    opt_empirical->add_option("--alpha", opt_alpha, "tail probability level");
    opt_empirical->add_option("--measure", opt_measure, "var or es")
        ->check(CLI::IsMember({"var", "es"}));
    auto* opt_mrv = opt_cmd->add_subcommand("mrv", "convex tail-limit optimizer");
    std::string opt_psi;
    opt_mrv->add_option("--psi", opt_psi, "spectral measure JSON")->required();

    // --- sample ---
    auto* sample_cmd = app.add_subcommand("sample", "generate scenario CSVs");
    sample_cmd->require_subcommand(1);
    auto* sample_elliptical_cmd = sample_cmd->add_subcommand("elliptical", "elliptical sampler");
    EllipticalArgs sample_args;
    sample_args.attach(sample_elliptical_cmd);
    std::size_t s_count = kDefaultSamples;
    std::uint64_t s_seed = kDefaultSeed;
    std::string s_out;
    sample_elliptical_cmd->add_option("--count", s_count, "number of scenarios");
    sample_elliptical_cmd->add_option("--seed", s_seed, "random seed");
    sample_elliptical_cmd->add_option("--out", s_out, "output CSV")->required();

    auto* sample_iid_cmd = sample_cmd->add_subcommand("iid", "iid univariate sampler");
    UnivariateArgs iid_args;
    iid_args.attach(sample_iid_cmd);
    std::size_t iid_assets = 2;
    std::size_t iid_count = kDefaultSamples;
    std::uint64_t iid_seed = kDefaultSeed;
    std::string iid_out;
    sample_iid_cmd->add_option("--n", iid_assets, "number of assets");
    sample_iid_cmd->add_option("--count", iid_count, "number of scenarios");
    sample_iid_cmd->add_option("--seed", iid_seed, "random seed");
    sample_iid_cmd->add_option("--out", iid_out, "output CSV")->required();

    auto* sample_ex2_cmd = sample_cmd->add_subcommand("example2", "two-asset t factor model");
    double ex2_r = 0.3;
    double ex2_nu = 2.0;
    std::size_t ex2_count = kDefaultSamples;
    std::uint64_t ex2_seed = kDefaultSeed;
    std::string ex2_out;
    sample_ex2_cmd->add_option("--r", ex2_r, "factor loading in [0,1)");
    sample_ex2_cmd->add_option("--nu", ex2_nu, "factor t degrees of freedom");
    sample_ex2_cmd->add_option("--count", ex2_count, "number of scenarios");
    sample_ex2_cmd->add_option("--seed", ex2_seed, "random seed");
    sample_ex2_cmd->add_option("--out", ex2_out, "output CSV")->required();

    // --- make ---
    auto* make_cmd = app.add_subcommand("make", "deterministic dependence constructions");
    make_cmd->require_subcommand(1);
    auto* make_com = make_cmd->add_subcommand("comonotonic", "common-grid comonotonic scenarios");
    UnivariateArgs com_args;
    com_args.attach(make_com);
    std::size_t com_n = 2;
    std::size_t com_count = 100000;
    std::string com_out;
    make_com->add_option("--n", com_n, "number of identical marginals");
    make_com->add_option("--count", com_count, "number of scenarios");
    make_com->add_option("--out", com_out, "output CSV")->required();

    auto* make_ce = make_cmd->add_subcommand("alpha-ce", "concentration-exclusion model");
    std::size_t ce_n = 3;
    double ce_alpha = 0.05;
    std::size_t ce_count = 10000;
    std::string ce_out;
    make_ce->add_option("--n", ce_n, "portfolio size");
    make_ce->add_option("--alpha", ce_alpha, "level, alpha < 1/n, alpha*count integer");
    make_ce->add_option("--count", ce_count, "number of scenarios");
    make_ce->add_option("--out", ce_out, "output CSV")->required();

    auto* make_onehot = make_cmd->add_subcommand("onehot", "one-hot multinomial scenarios");
    std::size_t oh_n = 4;
    std::size_t oh_count = 10000;
    std::string oh_out;
    make_onehot->add_option("--n", oh_n, "portfolio size");
    make_onehot->add_option("--count", oh_count, "number of scenarios (divisible by n)");
    make_onehot->add_option("--out", oh_out, "output CSV")->required();

    // --- reproduce ---
    auto* repro_cmd = app.add_subcommand("reproduce", "emit figure/table data files");
    std::string repro_id;
    ReproduceContext ctx;
    std::string repro_out = "out";
    repro_cmd->add_option("id", repro_id, "fig1..fig6, table1 or all")->required();
    repro_cmd->add_option("--out", repro_out, "output directory");
    repro_cmd->add_option("--seed", ctx.seed, "base seed");
    repro_cmd->add_option("--samples", ctx.samples, "Monte Carlo sample count");

    // --- run (JSON config) ---
    auto* run_cmd = app.add_subcommand("run", "run a JSON experiment config");
    std::string config_path;
    run_cmd->add_option("--config", config_path, "JSON config mirroring the flags")
        ->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    }

    if (elliptical_cmd->parsed()) {
        const EllipticalSpec spec = elliptical_args.build();
        if (e_metric == "limit") {
            std::cout << num6(dq_var_limit(spec)) << '\n';
        } else if (e_metric == "dr") {
            std::cout << num6(dr_elliptical(spec, parse_measure(e_measure), Level(e_alpha)))
                      << '\n';
        } else {
            const auto result = parse_measure(e_measure) == RiskMeasureKind::var
                                    ? dq_var_elliptical(spec, Level(e_alpha))
                                    : dq_es_elliptical(spec, Level(e_alpha));
            std::cout << num6(result.value) << '\n';
        }
        return 0;
    }

    if (empirical_cmd->parsed()) {
        const ScenarioMatrix scenarios = read_scenario_csv(input_path);
        const RiskMeasureKind measure = parse_measure(p_measure);
        if (p_metric == "dr") {
            std::cout << num6(dr(scenarios, measure, Level(p_alpha))) << '\n';
            return 0;
        }
        DQResult result;
        if (measure == RiskMeasureKind::var)
            result = p_stderr ? dq_var_with_stderr(scenarios, Level(p_alpha))
                              : dq_var(scenarios, Level(p_alpha));
        else if (p_stderr)
            result = dq_es_with_stderr(scenarios, Level(p_alpha));
        else
            result = dq_es(scenarios, Level(p_alpha),
                           p_method == "rmin" ? DqMethod::rmin : DqMethod::bisection);
        std::cout << num6(result.value) << '\n';
        if (result.std_error) std::cout << "stderr = " << num6(*result.std_error) << '\n';
        return 0;
    }

    if (mrv_limit->parsed()) {
        const SpectralMeasure psi = read_spectral_json(psi_path);
        Weights w = equal_weights ? Weights::equal(psi.dimension())
                                  : Weights::normalized(parse_weight_list(weight_csv));
        std::cout << num6(dq_limit_mrv(w, psi)) << '\n';
        return 0;
    }
    if (mrv_iid->parsed()) {
        std::cout << num6(dq_limit_iid(iid_n, iid_gamma)) << '\n';
        return 0;
    }

    const auto print_report = [](const OptimizationReport& report) {
        for (std::size_t i = 0; i < report.weights.size(); ++i)
            std::cout << "w_" << (i + 1) << " = " << num6(report.weights[i]) << '\n';
        std::cout << "objective = " << num6(report.objective) << '\n';
        const char* method = "";
        switch (report.method) {
            case OptimizeMethod::closed_form: method = "closed-form"; break;
            case OptimizeMethod::qp_fallback: method = "qp-fallback"; break;
            case OptimizeMethod::simplex_search: method = "simplex-search"; break;
            case OptimizeMethod::convex_mrv: method = "convex-mrv"; break;
        }
        std::cout << "method = " << method << '\n';
        std::cout << "converged = " << (report.converged ? "true" : "false") << '\n';
    };

    if (opt_elliptical->parsed()) {
        print_report(optimize_elliptical(opt_elliptical_args.build()));
        return 0;
    }
    if (opt_empirical->parsed()) {
        print_report(optimize_dq_empirical(read_scenario_csv(opt_input),
                                           parse_measure(opt_measure), Level(opt_alpha)));
        return 0;
    }
    if (opt_mrv->parsed()) {
        print_report(optimize_mrv_limit(read_spectral_json(opt_psi)));
        return 0;
    }

    if (sample_elliptical_cmd->parsed()) {
        write_scenario_csv(s_out, sample_elliptical(sample_args.build(), s_count, s_seed));
        return 0;
    }
    if (sample_iid_cmd->parsed()) {
        write_scenario_csv(iid_out, sample_univariate_iid(iid_args.build(), iid_count,
                                                          iid_assets, iid_seed));
        return 0;
    }
    if (sample_ex2_cmd->parsed()) {
        write_scenario_csv(ex2_out, sample_example2(ex2_r, ex2_nu, ex2_count, ex2_seed));
        return 0;
    }

    if (make_com->parsed()) {
        const std::vector<UnivariateModel> marginals(com_n, com_args.build());
        write_scenario_csv(com_out, make_comonotonic(marginals, com_count));
        return 0;
    }
    if (make_ce->parsed()) {
        write_scenario_csv(ce_out, make_alpha_ce(ce_n, Level(ce_alpha), ce_count));
        return 0;
    }
    if (make_onehot->parsed()) {
        write_scenario_csv(oh_out, make_multinomial_onehot(oh_n, oh_count));
        return 0;
    }

    if (repro_cmd->parsed()) {
        ctx.out_dir = repro_out;
        reproduce(repro_id, ctx);
        return 0;
    }

    if (run_cmd->parsed()) return run_config_file(config_path);

    throw std::invalid_argument("no command selected");
}

int dispatch(const std::vector<std::string>& args) {
    try {
        return dispatch_impl(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help and friends
            return 0;
        }
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const unsupported_measure_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const numerical_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}

} // namespace

int run_cli(const std::vector<std::string>& args) { return dispatch(args); }

} // namespace dqlab
