#include <algorithm>
#include <cmath>
#include <future>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "igfade/composite.hpp"
#include "igfade/errors.hpp"
#include "igfade/fitting.hpp"
#include "igfade/montecarlo.hpp"

using namespace igfade;
using namespace igfade::cli;

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kNoConvergence = 3;
constexpr int kAllFitsFailed = 4;
constexpr int kValidationFailed = 5;

struct AllFitsFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// f over xs in contiguous blocks, one per hardware thread; results keep grid order.
std::vector<double> parallel_map(const std::vector<double>& xs, const std::function<double(double)>& f) {
    std::vector<double> out(xs.size());
    const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t block = (xs.size() + workers - 1) / workers;
    std::vector<std::future<void>> jobs;
    for (std::size_t start = 0; start < xs.size(); start += block) {
        const std::size_t stop = std::min(xs.size(), start + block);
        jobs.push_back(std::async(std::launch::async, [&, start, stop] {
            for (std::size_t i = start; i < stop; ++i) out[i] = f(xs[i]);
        }));
    }
    for (auto& j : jobs) j.get();
    return out;
}

struct Common {
    std::string config;
    std::string strategy = "auto";
    std::string out;
    double rel_tol = Tolerance{}.rel_tol;
    std::size_t max_terms = Tolerance{}.max_terms;

    Tolerance tolerance() const {
        Tolerance t;
        t.rel_tol = rel_tol;
        t.max_terms = max_terms;
        return t;
    }
};

void add_common(CLI::App* cmd, Common& c, bool strategy) {
    cmd->add_option("-c,--config", c.config, "model config: inline JSON or a file path")->required();
    if (strategy) {
        cmd->add_option("--strategy", c.strategy, "auto | gmgf-general | gmgf-integer | mixture | numeric");
    }
    cmd->add_option("--rel-tol", c.rel_tol, "relative tolerance of series and quadrature");
    cmd->add_option("--max-terms", c.max_terms, "series term budget");
    cmd->add_option("-o,--out", c.out, "output CSV (default stdout)");
}

void cmd_eval(const Common& c, const std::string& quantity, const std::string& grid_spec) {
    const CompositeModel model = parse_model(load_document(c.config)).model();
    const Strategy strategy = parse_strategy(c.strategy);
    const Tolerance tol = c.tolerance();
    const auto grid = parse_grid(grid_spec);
    std::function<double(double)> f;
    if (quantity == "pdf") {
        f = [&](double u) { return composite::pdf(model, u, strategy, tol); };
    } else if (quantity == "cdf") {
        f = [&](double u) { return composite::cdf(model, u, strategy, tol); };
    } else if (quantity == "amp-pdf") {
        f = [&](double r) { return composite::amplitude_pdf(model, r, strategy, tol); };
    } else if (quantity == "amp-cdf") {
        f = [&](double r) { return composite::amplitude_cdf(model, r, strategy, tol); };
    } else {
        throw InputError("unknown quantity '" + quantity + "' (pdf, cdf, amp-pdf, amp-cdf)");
    }
    for (double u : grid) {
        if (!(u > 0.0)) throw InputError("grid values must be positive");
    }
    // Availability errors surface before any work.
    composite::resolve(model, strategy);
    const auto values = parallel_map(grid, f);
    CsvWriter out(c.out, {"u", "value"});
    for (std::size_t i = 0; i < grid.size(); ++i) out.row(std::vector<double>{grid[i], values[i]});
    out.commit();
}

void cmd_outage(const Common& c, const std::string& grid_spec, bool asymptotic) {
    const CompositeModel model = parse_model(load_document(c.config)).model();
    const Strategy strategy = parse_strategy(c.strategy);
    const Tolerance tol = c.tolerance();
    const auto grid = parse_grid(grid_spec);
    composite::resolve(model, strategy);
    const double gamma_bar = model.w_bar();
    const auto exact = parallel_map(grid, [&](double db) {
        return composite::outage(model, gamma_bar * std::pow(10.0, db / 10.0), gamma_bar, strategy, tol);
    });
    std::vector<std::string> header{"gamma_th_db", "exact"};
    if (asymptotic) header.push_back("asymptote");
    CsvWriter out(c.out, header);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<double> row{grid[i], exact[i]};
        if (asymptotic) {
            row.push_back(composite::outage_asymptotic(model, gamma_bar * std::pow(10.0, grid[i] / 10.0), gamma_bar));
        }
        out.row(row);
    }
    out.commit();
}

struct FitArgs {
    std::string data;
    std::string scale;
    std::string db_direction = "paper";
    std::vector<std::string> families{"lognormal", "gamma", "inverse-gaussian", "inverse-gamma"};
    bool integer_m = false;
    std::size_t multistart = 8;
    std::string out;
};

ShadowingFamily parse_family(const std::string& name) {
    for (auto f : {ShadowingFamily::Lognormal, ShadowingFamily::Gamma, ShadowingFamily::InverseGaussian,
                   ShadowingFamily::InverseGamma}) {
        if (family_name(f) == name) return f;
    }
    throw InputError("unknown family '" + name + "' (lognormal, gamma, inverse-gaussian, inverse-gamma)");
}

EmpiricalCdf load_log_ecdf(const FitArgs& a) {
    if (a.scale != "db" && a.scale != "ln" && a.scale != "linear") {
        throw InputError("--scale must be db, ln or linear");
    }
    if (a.db_direction != "paper" && a.db_direction != "conventional") {
        throw InputError("--db-direction must be paper or conventional");
    }
    const DbDirection dir = a.db_direction == "paper" ? DbDirection::Paper : DbDirection::Conventional;
    const Table table = read_csv(a.data);
    const auto to_log = [&](double x, std::size_t line) {
        if (a.scale == "ln") return x;
        if (a.scale == "db") return fitting::db_to_natural_log(x, dir);
        if (!(x > 0.0)) throw InputError(a.data + ":" + std::to_string(line) + ": linear-scale values must be positive");
        return std::log(x);
    };
    if (table.rows.empty()) throw InputError(a.data + ": no data rows");
    if (table.header == std::vector<std::string>{"value"}) {
        std::vector<double> samples;
        for (std::size_t i = 0; i < table.rows.size(); ++i) samples.push_back(to_log(table.rows[i][0], table.line[i]));
        return montecarlo::empirical_cdf(samples);
    }
    if (table.header == std::vector<std::string>{"t", "cdf"}) {
        EmpiricalCdf e;
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            const double t = to_log(table.rows[i][0], table.line[i]);
            const double p = table.rows[i][1];
            const std::string at = a.data + ":" + std::to_string(table.line[i]) + ": ";
            if (!(p >= 0.0 && p <= 1.0)) throw InputError(at + "cdf must lie in [0, 1]");
            if (!e.abscissa.empty() && !(t > e.abscissa.back())) throw InputError(at + "t must be strictly increasing");
            if (!e.value.empty() && p < e.value.back()) throw InputError(at + "cdf column is not monotone");
            e.abscissa.push_back(t);
            e.value.push_back(p);
        }
        e.sample_count = e.size();
        return e;
    }
    throw InputError(a.data + ":1: header must be 'value' or 't,cdf'");
}

std::vector<std::string> param_cells(const ShadowingModel& p) {
    if (const auto* v = std::get_if<Lognormal>(&p)) return {"mu", format_number(v->mu), "sigma", format_number(v->sigma)};
    if (const auto* v = std::get_if<GammaSh>(&p)) return {"k", format_number(v->k), "omega", format_number(v->omega)};
    if (const auto* v = std::get_if<InverseGaussian>(&p)) {
        return {"mu_i", format_number(v->mu_i), "lambda", format_number(v->lambda)};
    }
    const auto& v = std::get<InverseGamma>(p);
    return {"m", format_number(v.m), "omega_i", format_number(v.omega_i)};
}

void cmd_fit(const FitArgs& a) {
    const EmpiricalCdf e = load_log_ecdf(a);
    std::vector<ShadowingFamily> families;
    for (const auto& name : a.families) families.push_back(parse_family(name));
    if (families.empty()) throw InputError("no families requested");
    FitOptions opt;
    opt.integer_m = a.integer_m;
    opt.multistart = a.multistart;
    const auto ranked = fitting::compare_families(e, families, opt);
    CsvWriter out(a.out, {"rank", "family", "param1", "value1", "param2", "value2", "cvm", "converged", "error"});
    std::size_t rank = 0;
    bool any = false;
    for (const FitResult& r : ranked) {
        std::vector<std::string> row{std::to_string(++rank), fitting::label(r)};
        if (r.error.empty()) {
            any = true;
            const auto p = param_cells(r.params);
            row.insert(row.end(), p.begin(), p.end());
            row.push_back(format_number(r.cvm));
            row.push_back(r.converged ? "true" : "false");
            row.push_back("");
        } else {
            row.insert(row.end(), {"", "", "", "", "", "false", "\"" + r.error + "\""});
        }
        out.row(row);
    }
    if (!any) throw AllFitsFailed("every family fit failed");
    out.commit();
}

struct SimArgs {
    std::string config;
    std::size_t count = montecarlo::kDefaultSampleCount;
    std::uint64_t seed = 1;
    std::string emit;
    bool validate = false;
    std::string strategy = "auto";
};

void cmd_simulate(const SimArgs& a) {
    const CompositeModel model = parse_model(load_document(a.config)).model();
    if (a.count < 1) throw InputError("--count must be at least 1");
    if (a.emit.empty() && !a.validate) throw InputError("simulate needs --emit-samples and/or --validate");
    const Strategy strategy = parse_strategy(a.strategy);
    composite::resolve(model, strategy);
    const auto samples = montecarlo::sample_composite(model, a.count, a.seed);
    if (!a.emit.empty()) {
        CsvWriter out(a.emit, {"w"});
        for (double w : samples) out.row(std::vector<double>{w});
        out.commit();
    }
    if (!a.validate) return;
    const EmpiricalCdf e = montecarlo::empirical_cdf(samples);
    const Comparison c = montecarlo::compare(
        e, [&](double u) { return u > 0.0 ? composite::cdf(model, u, strategy) : 0.0; });
    const double threshold = 0.003 * std::sqrt(1e6 / static_cast<double>(a.count));
    // The interpolation bound counts against the model.
    const bool pass = c.sup_distance + c.sup_distance_bound < threshold;
    std::cout << "count,seed,sup_distance,sup_distance_bound,cvm,threshold,result\n"
              << a.count << ',' << a.seed << ',' << format_number(c.sup_distance) << ','
              << format_number(c.sup_distance_bound) << ',' << format_number(c.cvm) << ','
              << format_number(threshold) << ',' << (pass ? "pass" : "fail") << '\n';
    if (!pass) throw ValidationFailed("sup-distance above the validation threshold");
}

void cmd_gmgf(const std::string& doc, double p, double s, bool check, double rel_tol) {
    const FadingModel model = parse_fading(load_document(doc));
    if (!(p >= 0.0)) throw InputError("--p must be nonnegative");
    if (!(s <= 0.0)) throw InputError("--s must be nonpositive");
    Tolerance tol;
    tol.rel_tol = rel_tol;
    const double value = fading::gmgf(model, p, s, tol);
    if (!check) {
        std::cout << "gmgf\n" << format_number(value) << '\n';
        return;
    }
    const Estimate num = fading::gmgf_numeric(model, p, s, tol);
    const double rel = std::abs(value - num.value) / std::max(std::abs(num.value), 1e-300);
    std::cout << "gmgf,numeric,numeric_error,rel_diff\n"
              << format_number(value) << ',' << format_number(num.value) << ',' << format_number(num.error) << ','
              << format_number(rel) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inverse-gamma composite fading: curves, outage, Monte Carlo and shadowing fits"};
    app.require_subcommand(1);

    Common eval_c;
    std::string quantity = "pdf", eval_grid;
    auto* eval = app.add_subcommand("eval", "composite pdf/cdf on a grid, CSV u,value");
    add_common(eval, eval_c, true);
    eval->add_option("-q,--quantity", quantity, "pdf | cdf | amp-pdf | amp-cdf");
    eval->add_option("-g,--grid", eval_grid, "start:step:stop")->required();

    Common out_c;
    std::string outage_grid;
    bool asymptotic = false;
    auto* outage = app.add_subcommand("outage", "outage probability against threshold in dB relative to mean SNR");
    add_common(outage, out_c, true);
    outage->add_option("-g,--grid", outage_grid, "start:step:stop in dB")->required();
    outage->add_flag("--asymptotic", asymptotic, "add the high-SNR asymptote column");

    FitArgs fit_a;
    auto* fit = app.add_subcommand("fit", "fit shadowing families to measured data by Cramer-von Mises");
    fit->add_option("-d,--data", fit_a.data, "CSV with header 'value' (samples) or 't,cdf' (eCDF)")->required();
    fit->add_option("--scale", fit_a.scale, "db | ln | linear")->required();
    fit->add_option("--db-direction", fit_a.db_direction, "paper (t = 20 t_dB / ln 10) | conventional (t_dB ln 10 / 20)");
    fit->add_option("--families", fit_a.families, "comma-separated family list")->delimiter(',');
    fit->add_flag("--integer-m", fit_a.integer_m, "add the integer-m inverse-gamma row");
    fit->add_option("--multistart", fit_a.multistart, "simplex starts per family");
    fit->add_option("-o,--out", fit_a.out, "report CSV (default stdout)");

    SimArgs sim_a;
    auto* sim = app.add_subcommand("simulate", "Monte Carlo samples and validation against the analytic cdf");
    sim->add_option("-c,--config", sim_a.config, "model config: inline JSON or a file path")->required();
    sim->add_option("-n,--count", sim_a.count, "sample count");
    sim->add_option("--seed", sim_a.seed, "RNG seed");
    sim->add_option("--emit-samples", sim_a.emit, "write samples to this CSV");
    sim->add_flag("--validate", sim_a.validate, "compare the eCDF with the analytic cdf");
    sim->add_option("--strategy", sim_a.strategy, "cdf strategy used for validation");

    std::string gmgf_doc;
    double gp = 0.0, gs = 0.0, g_tol = Tolerance{}.rel_tol;
    bool g_check = false;
    auto* gmgf = app.add_subcommand("gmgf", "generalized MGF E[X^p exp(sX)] of a fading model");
    gmgf->add_option("-f,--fading", gmgf_doc, "fading config: inline JSON or a file path")->required();
    gmgf->add_option("-p,--p", gp, "order p >= 0")->required();
    gmgf->add_option("-s,--s", gs, "argument s <= 0")->required();
    gmgf->add_flag("--check", g_check, "also print the quadrature value and relative difference");
    gmgf->add_option("--rel-tol", g_tol, "relative tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        if (*eval) cmd_eval(eval_c, quantity, eval_grid);
        if (*outage) cmd_outage(out_c, outage_grid, asymptotic);
        if (*fit) cmd_fit(fit_a);
        if (*sim) cmd_simulate(sim_a);
        if (*gmgf) cmd_gmgf(gmgf_doc, gp, gs, g_check, g_tol);
    } catch (const ConvergenceError& e) {
        std::cerr << "error: no convergence: " << e.what() << '\n';
        return kNoConvergence;
    } catch (const AllFitsFailed& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kAllFitsFailed;
    } catch (const ValidationFailed& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidationFailed;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kOk;
}
