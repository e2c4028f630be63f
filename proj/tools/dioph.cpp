// Command line front end: best-approximation sequences, transference
// certificates, shift-vector construction, Monte Carlo measure experiments,
// direction clustering, and the approximating-function calculus.
//
// Exit codes: 0 success, 2 input validation, 3 mathematical precondition,
// 4 budget exceeded, 5 precision exhausted, 6 internal contradiction.

#include <CLI11.hpp>
#include <json.hpp>

#include <dioph/dioph.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dioph;

namespace {

struct CommonOpts {
    unsigned precision = 256;
    long long budget = 200'000'000;
    uint64_t seed = 0;
    std::string out = ".";
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--precision", c.precision, "working precision in bits")
        ->check(CLI::Range(64u, 1u << 20));
    cmd->add_option("--budget", c.budget, "max enumeration points")
        ->check(CLI::Range(1000LL, (1LL << 62)));
    cmd->add_option("--seed", c.seed, "random seed");
    cmd->add_option("--out", c.out, "output directory");
    cmd->add_option("--threads", c.threads, "worker count")
        ->check(CLI::Range(1, 256));
}

EnumOptions enum_opts(const CommonOpts& c) {
    EnumOptions o;
    o.budget = c.budget;
    o.threads = c.threads;
    return o;
}

Vec parse_vector_arg(const std::string& text, size_t dim) {
    Vec v;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ','))
        v.e.push_back(parse_scalar(part));
    if (v.dim() != dim)
        throw input_error("eta needs " + std::to_string(dim) + " components");
    return v;
}

void write_manifest(const CommonOpts& c, const std::string& cmd,
                    const json& params) {
    json m;
    m["command"] = cmd;
    m["version"] = artifact_version;
    m["precision_bits"] = c.precision;
    m["budget"] = c.budget;
    m["seed"] = c.seed;
    m["threads"] = c.threads;
    m["params"] = params;
    write_json_file((fs::path(c.out) / ("manifest-" + cmd + ".json")).string(), m);
}

void prepare(const CommonOpts& c) {
    set_working_bits(c.precision);
    fs::create_directories(c.out);
}

// --- subcommand bodies ---------------------------------------------------

int run_best_approx(const CommonOpts& c, const std::string& matrix_file,
                    long long t_max, const std::string& eta_arg) {
    prepare(c);
    Matrix th = read_matrix_file(matrix_file);
    json params{{"matrix", matrix_file}, {"tmax", t_max}, {"eta", eta_arg}};
    write_manifest(c, "best-approx", params);
    fs::path out(c.out);
    if (eta_arg.empty()) {
        auto seq = compute_best_approx(th, t_max, enum_opts(c));
        write_text_file((out / "sequence.csv").string(), sequence_to_csv(seq));
        write_json_file((out / "sequence.json").string(), sequence_to_json(seq));
        std::cout << "records=" << seq.records.size()
                  << " trivially_singular="
                  << (seq.trivially_singular() ? "yes" : "no") << "\n";
    } else {
        Vec eta = parse_vector_arg(eta_arg, th.n);
        auto seq = compute_inhom(th, eta, t_max, enum_opts(c));
        write_text_file((out / "sequence.csv").string(), sequence_to_csv(seq));
        write_json_file((out / "sequence.json").string(), sequence_to_json(seq));
        std::cout << "records=" << seq.records.size()
                  << " trivially_singular="
                  << (seq.trivially_singular() ? "yes" : "no") << "\n";
    }
    return 0;
}

int run_transfer(const CommonOpts& c, const std::string& matrix_file,
                 const std::string& eta_arg, double Y, double Q,
                 const std::string& psi_bound_arg, long long t_lo,
                 long long t_hi) {
    prepare(c);
    Matrix th = read_matrix_file(matrix_file);
    Vec eta = eta_arg.empty() ? Vec::zeros(th.n) : parse_vector_arg(eta_arg, th.n);
    json params{{"matrix", matrix_file}, {"eta", eta_arg}, {"Y", Y}, {"Q", Q},
                {"psi_bound", psi_bound_arg}, {"tlo", t_lo}, {"thi", t_hi}};
    write_manifest(c, "transfer", params);
    fs::path out(c.out);
    auto cert = cassels_solve(th, eta, Y, Q, enum_opts(c));
    write_json_file((out / "certificate.json").string(), cert.to_json());
    std::cout << "witness |q|=" << sup_norm(cert.witness_q)
              << " achieved=" << cert.achieved.to_double() << "\n";
    if (!psi_bound_arg.empty()) {
        auto rep = jarnik_uniform_check(th, eta, parse_function(psi_bound_arg),
                                        t_lo, t_hi, enum_opts(c));
        write_json_file((out / "jarnik.json").string(), rep.to_json());
        std::cout << "jarnik " << (rep.pass ? "pass" : "FAIL")
                  << " max_product=" << rep.metrics["max_product"] << "\n";
    }
    return 0;
}

int run_construct_eta(const CommonOpts& c, const std::string& matrix_file,
                      long long t_max, const std::string& phi_arg, size_t depth,
                      long long gap) {
    prepare(c);
    Matrix th = read_matrix_file(matrix_file);
    auto phi = parse_function(phi_arg);
    json params{{"matrix", matrix_file}, {"tmax", t_max}, {"phi", phi_arg},
                {"depth", depth}, {"gap", gap}};
    write_manifest(c, "construct-eta", params);
    auto seq = compute_best_approx(th, t_max, enum_opts(c));
    auto ec = construct_eta(seq, phi, depth, gap);
    auto inv = check_eta_invariants(ec);
    json j = ec.to_json();
    j["invariants"] = inv.to_json();
    write_json_file((fs::path(c.out) / "construction.json").string(), j);
    std::cout << "depth=" << ec.depth
              << " invariants=" << (inv.pass ? "pass" : "FAIL")
              << " tail_bound=" << ec.tail_bound.to_double() << "\n";
    return 0;
}

int run_measure(const CommonOpts& c, const std::string& matrix_file,
                const std::string& mode, const std::string& g_arg,
                long long T_lo, long long T_hi, size_t samples, size_t k_min) {
    prepare(c);
    Matrix th = read_matrix_file(matrix_file);
    auto g = parse_function(g_arg);
    SampleConfig cfg;
    cfg.seed = c.seed;
    cfg.count = samples;
    json params{{"matrix", matrix_file}, {"mode", mode}, {"g", g_arg},
                {"Tlo", T_lo}, {"Thi", T_hi}, {"samples", samples},
                {"kmin", k_min}};
    write_manifest(c, "measure", params);
    ExperimentReport rep;
    if (mode == "uniform")
        rep = measure_estimate_uniform(th, g, T_lo, T_hi, cfg, enum_opts(c));
    else if (mode == "asymptotic")
        rep = measure_estimate_asymptotic(th, g, T_hi, k_min, cfg, enum_opts(c));
    else
        throw input_error("mode must be 'uniform' or 'asymptotic'");
    fs::path out(c.out);
    write_json_file((out / "measure.json").string(), rep.to_json());
    if (rep.details.contains("curve")) {
        std::ostringstream csv;
        csv << "# precision_bits=" << working_bits_ref()
            << " version=" << artifact_version << " seed=" << c.seed << "\n";
        csv << "T,fraction,n_samples\n";
        for (const auto& pt : rep.details["curve"])
            csv << pt["T"].get<long long>() << ","
                << pt["fraction"].get<double>() << "," << samples << "\n";
        write_text_file((out / "curve.csv").string(), csv.str());
    }
    std::cout << "fraction=" << rep.metrics["fraction"] << "\n";
    return 0;
}

int run_directions(const CommonOpts& c, const std::string& matrix_file,
                   long long t_max, double tail, double tol) {
    prepare(c);
    Matrix th = read_matrix_file(matrix_file);
    json params{{"matrix", matrix_file}, {"tmax", t_max}, {"tail", tail},
                {"tol", tol}};
    write_manifest(c, "directions", params);
    auto seq = compute_best_approx(th, t_max, enum_opts(c));
    auto ds = asymptotic_directions(seq, tail, tol);
    json j;
    j["tol"] = ds.tol;
    json cl = json::array();
    for (const auto& cluster : ds.clusters)
        cl.push_back({{"dir", cluster.dir}, {"count", cluster.count}});
    j["clusters"] = cl;
    write_json_file((fs::path(c.out) / "directions.json").string(), j);
    std::cout << "clusters=" << ds.clusters.size() << "\n";
    return 0;
}

int run_functions(const CommonOpts& c, const std::string& f_arg, bool want_dual,
                  const std::string& series_arg, double T_lo, double T_hi,
                  int points) {
    prepare(c);
    auto f = parse_function(f_arg);
    json params{{"f", f_arg}, {"dual", want_dual}, {"series", series_arg},
                {"Tlo", T_lo}, {"Thi", T_hi}, {"points", points}};
    write_manifest(c, "functions", params);
    fs::path out(c.out);

    json j;
    j["f"] = f.to_json();
    if (!series_arg.empty()) {
        SeriesKind kind;
        if (series_arg == "kg") kind = SeriesKind::KhintchineGroshev;
        else if (series_arg == "kw") kind = SeriesKind::KleinbockWadleigh;
        else throw input_error("series must be 'kg' or 'kw'");
        auto verdict = kg_series_verdict(f, kind);
        auto trend = partial_sum_trend(f, kind);
        j["series"] = {
            {"kind", series_arg},
            {"verdict", verdict == SeriesVerdict::Converges ? "converges"
                                                            : "diverges"},
            {"trend_suggests", trend.suggested == SeriesVerdict::Converges
                                   ? "converges"
                                   : "diverges"},
            {"decade_increments", trend.decade_increments},
            {"fitted_exponent", trend.fitted_exponent}};
        std::cout << "series verdict: "
                  << (verdict == SeriesVerdict::Converges ? "converges"
                                                          : "diverges")
                  << "\n";
    }
    if (want_dual) {
        auto g = f.dual();
        bool have_asym = f.family() == ApproxFunction::Family::PowerLog &&
                         f.outer_scale() == 1.0 && f.inner_scale() == 1.0;
        std::ostringstream csv;
        csv << "# precision_bits=" << working_bits_ref()
            << " version=" << artifact_version << "\n";
        csv << "T,f,dual" << (have_asym ? ",dual_asymptotic,log_rel_err" : "")
            << "\n";
        ApproxFunction ga = have_asym ? f.dual_asymptotic() : g;
        double lo = std::max({T_lo, f.domain_lo() * 1.01, g.domain_lo() * 1.01});
        for (int i = 0; i < points; ++i) {
            double T = lo * std::pow(T_hi / lo,
                                     static_cast<double>(i) / (points - 1));
            csv << T << "," << f.eval_center(T) << "," << g.eval_center(T);
            if (have_asym) {
                double gv = g.eval_center(T), av = ga.eval_center(T);
                csv << "," << av << ","
                    << std::fabs(std::log(av) - std::log(gv)) /
                           std::fabs(std::log(gv));
            }
            csv << "\n";
        }
        write_text_file((out / "dual.csv").string(), csv.str());
        j["dual"] = g.to_json();
        std::cout << "dual table written (" << points << " points)\n";
    }
    write_json_file((out / "functions.json").string(), j);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"inhomogeneous Diophantine approximation workbench"};
    app.require_subcommand(1);

    CommonOpts c;
    std::string matrix_file, eta_arg, psi_bound_arg, mode = "uniform";
    std::string g_arg = "f1", phi_arg = "f1", f_arg = "f1", series_arg;
    long long t_max = 100, T_lo = 5, T_hi = 50, jt_lo = 10, jt_hi = 1000;
    double Y = 0, Q = 0, tail = 0.2, tol = 0.05, fT_lo = 10, fT_hi = 1e6;
    size_t depth = 5, samples = 1000, k_min = 1;
    long long gap = 0;
    int points = 50;
    bool want_dual = false;

    auto* ba = app.add_subcommand("best-approx",
                                  "best-approximation sequence of a matrix");
    add_common(ba, c);
    ba->add_option("--matrix", matrix_file, "matrix JSON file")->required();
    ba->add_option("--tmax", t_max, "search bound")->check(CLI::Range(1LL, 1LL << 40));
    ba->add_option("--eta", eta_arg, "shift vector (inhomogeneous variant)");

    auto* tr = app.add_subcommand("transfer", "transference certificate");
    add_common(tr, c);
    tr->add_option("--matrix", matrix_file, "matrix JSON file")->required();
    tr->add_option("--eta", eta_arg, "shift vector, comma separated");
    tr->add_option("--Y", Y, "homogeneous range")->required();
    tr->add_option("--Q", Q, "witness range")->required();
    tr->add_option("--psi-bound", psi_bound_arg,
                   "also run the uniform check with this bound");
    tr->add_option("--tlo", jt_lo, "uniform check range start");
    tr->add_option("--thi", jt_hi, "uniform check range end");

    auto* ce = app.add_subcommand("construct-eta", "shift vector construction");
    add_common(ce, c);
    ce->add_option("--matrix", matrix_file, "matrix JSON file")->required();
    ce->add_option("--tmax", t_max, "sequence search bound");
    ce->add_option("--phi", phi_arg, "target function literal");
    ce->add_option("--depth", depth, "number of construction terms");
    ce->add_option("--gap", gap, "minimum index gap (0: default 2B)");

    auto* me = app.add_subcommand("measure", "Monte Carlo measure surrogate");
    add_common(me, c);
    me->add_option("--matrix", matrix_file, "matrix JSON file")->required();
    me->add_option("--mode", mode, "uniform | asymptotic");
    me->add_option("--g", g_arg, "function literal");
    me->add_option("--Tlo", T_lo, "range start");
    me->add_option("--Thi", T_hi, "range end");
    me->add_option("--samples", samples, "sample count")->check(CLI::Range(1, 100000000));
    me->add_option("--kmin", k_min, "solution count threshold (asymptotic)");

    auto* di = app.add_subcommand("directions", "asymptotic direction clusters");
    add_common(di, c);
    di->add_option("--matrix", matrix_file, "matrix JSON file")->required();
    di->add_option("--tmax", t_max, "sequence search bound");
    di->add_option("--tail", tail, "fraction of early records to discard");
    di->add_option("--tol", tol, "angular clustering tolerance (rad)");

    auto* fn = app.add_subcommand("functions", "approximating function calculus");
    add_common(fn, c);
    fn->add_option("--f", f_arg, "function literal");
    fn->add_flag("--dual", want_dual, "emit the dual table");
    fn->add_option("--series", series_arg, "series verdict: kg | kw");
    fn->add_option("--Tlo", fT_lo, "table range start");
    fn->add_option("--Thi", fT_hi, "table range end");
    fn->add_option("--points", points, "table size")->check(CLI::Range(2, 100000));

    CLI11_PARSE(app, argc, argv);

    try {
        if (ba->parsed()) return run_best_approx(c, matrix_file, t_max, eta_arg);
        if (tr->parsed())
            return run_transfer(c, matrix_file, eta_arg, Y, Q, psi_bound_arg,
                                jt_lo, jt_hi);
        if (ce->parsed())
            return run_construct_eta(c, matrix_file, t_max, phi_arg, depth, gap);
        if (me->parsed())
            return run_measure(c, matrix_file, mode, g_arg, T_lo, T_hi, samples,
                               k_min);
        if (di->parsed()) return run_directions(c, matrix_file, t_max, tail, tol);
        if (fn->parsed())
            return run_functions(c, f_arg, want_dual, series_arg, fT_lo, fT_hi,
                                 points);
    } catch (const hypothesis_violated& e) {
        json err{{"error", e.what()}, {"exit_code", e.exit_code()},
                 {"violating_y", e.y}, {"dist", e.dist.to_double()}};
        std::cerr << err.dump(2) << "\n";
        return e.exit_code();
    } catch (const error& e) {
        json err{{"error", e.what()}, {"exit_code", e.exit_code()}};
        std::cerr << err.dump(2) << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        json err{{"error", e.what()}, {"exit_code", 1}};
        std::cerr << err.dump(2) << "\n";
        return 1;
    }
    return 0;
}
