#include "prolate/run_config.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "prolate/approx.hpp"
#include "prolate/fast_apply.hpp"
#include "prolate/spectral.hpp"

namespace prolate
{

using io::json;

namespace
{

constexpr Index kSymbolGrid = Index{1} << 16;

const std::vector<std::pair<Task, std::string>>& task_names()
{
    static const std::vector<std::pair<Task, std::string>> names = {
        {Task::Build, "build"},           {Task::Eigs, "eigs"},
        {Task::Szego, "szego"},           {Task::Dof, "dof"},
        {Task::Approx, "approx"},         {Task::Solve, "solve"},
        {Task::Multitaper, "multitaper"}, {Task::Estimate, "estimate"},
        {Task::Study, "study"},
    };
    return names;
}

// --- parameter access ------------------------------------------------------

double param_number(const ExperimentConfig& cfg, const std::string& key, std::optional<double> def = {})
{
    if (!cfg.params.contains(key))
    {
        if (def)
        {
            return *def;
        }
        throw ConfigError("missing field 'params." + key + "'");
    }
    const json& v = cfg.params.at(key);
    if (!v.is_number())
    {
        throw ConfigError("field 'params." + key + "' must be a number");
    }
    return v.get<double>();
}

Index param_int(const ExperimentConfig& cfg, const std::string& key, std::optional<Index> def = {})
{
    if (!cfg.params.contains(key))
    {
        if (def)
        {
            return *def;
        }
        throw ConfigError("missing field 'params." + key + "'");
    }
    const json& v = cfg.params.at(key);
    if (!v.is_number_integer())
    {
        throw ConfigError("field 'params." + key + "' must be an integer");
    }
    return v.get<Index>();
}

std::string param_string(const ExperimentConfig& cfg, const std::string& key,
                         std::optional<std::string> def = {})
{
    if (!cfg.params.contains(key))
    {
        if (def)
        {
            return *def;
        }
        throw ConfigError("missing field 'params." + key + "'");
    }
    const json& v = cfg.params.at(key);
    if (!v.is_string())
    {
        throw ConfigError("field 'params." + key + "' must be a string");
    }
    return v.get<std::string>();
}

double tolerance(const ExperimentConfig& cfg, const std::string& key, double def)
{
    auto it = cfg.tolerances.find(key);
    return it == cfg.tolerances.end() ? def : it->second;
}

const io::ProblemSpec& need_problem(const ExperimentConfig& cfg)
{
    if (!cfg.problem)
    {
        throw ConfigError("missing field 'problem'");
    }
    return *cfg.problem;
}

const io::SymbolSource& need_symbol(const ExperimentConfig& cfg)
{
    if (!cfg.symbol)
    {
        throw ConfigError("missing field 'symbol'");
    }
    return *cfg.symbol;
}

/// Problem with its (first) window dimension replaced by n.
io::ProblemSpec resized(io::ProblemSpec p, Index n)
{
    p.window.sizes[0] = n;
    if (p.window.kind == WindowKind::Block2D)
    {
        p.window.sizes[1] = n;
    }
    return p;
}

ToeplitzOperator<double> problem_operator(const io::ProblemSpec& p)
{
    return time_frequency_limiting_operator<double>(p.group, p.window, p.band);
}

/// Operator named by the config: params.operator file, else problem, else symbol at params.n.
ToeplitzOperator<double> config_operator(const ExperimentConfig& cfg)
{
    if (cfg.params.contains("operator"))
    {
        return io::load_operator(param_string(cfg, "operator"));
    }
    if (cfg.problem)
    {
        return problem_operator(*cfg.problem);
    }
    if (cfg.symbol)
    {
        return io::operator_from_symbol(*cfg.symbol, param_int(cfg, "n"));
    }
    throw ConfigError("config needs 'problem', 'symbol' or 'params.operator'");
}

std::vector<Index> sweep(const ExperimentConfig& cfg)
{
    if (!cfg.sizes.empty())
    {
        return cfg.sizes;
    }
    if (cfg.params.contains("n"))
    {
        return {param_int(cfg, "n")};
    }
    throw ConfigError("missing field 'sizes' (or 'params.n')");
}

// --- output ----------------------------------------------------------------

struct Sink
{
    const ExperimentConfig& cfg;
    std::ostream& out;

    void emit(const std::string& name, const std::string& text) const
    {
        if (cfg.out.empty())
        {
            out << text;
        }
        else
        {
            io::write_text(cfg.out / name, text);
        }
    }

    /// Secondary artifacts need a directory.
    void emit_file(const std::string& name, const std::string& text) const
    {
        if (cfg.out.empty())
        {
            throw ConfigError("field 'out' is required to write " + name);
        }
        io::write_text(cfg.out / name, text);
    }
};

std::string dump(const json& j)
{
    return j.dump(2) + "\n";
}

json complex_array(const ComplexVector<double>& v)
{
    json a = json::array();
    for (Index i = 0; i < v.size(); ++i)
    {
        a.push_back(json::array({v[i].real(), v[i].imag()}));
    }
    return a;
}

int report_violations(const std::vector<StudyRow>& rows, std::ostream& err)
{
    int bad = 0;
    for (const auto& r : rows)
    {
        if (r.violated)
        {
            err << "tolerance violated: N=" << r.n << " metric=" << r.metric
                << " lhs=" << io::format_double(r.lhs) << " rhs=" << io::format_double(r.rhs)
                << " abs_gap=" << io::format_double(r.abs_gap) << "\n";
            ++bad;
        }
    }
    return bad ? exit_code::numeric : exit_code::ok;
}

StudyRow make_row(Index n, std::string metric, double lhs, double rhs)
{
    return {n, std::move(metric), lhs, rhs, std::abs(lhs - rhs), false};
}

// --- tasks -----------------------------------------------------------------

int task_build(const ExperimentConfig& cfg, const Sink& sink)
{
    sink.emit("operator.json", dump(io::operator_to_json(config_operator(cfg))));
    return exit_code::ok;
}

int task_eigs(const ExperimentConfig& cfg, const Sink& sink)
{
    const bool save = cfg.params.value("save_decomposition", false);
    const auto dec  = eig_hermitian(config_operator(cfg), EigenOptions{save});
    sink.emit("eigs.csv", io::eigenvalues_csv(dec.eigenvalues));
    if (save)
    {
        sink.emit_file("decomposition.json", io::decomposition_to_json(dec).dump() + "\n");
    }
    return exit_code::ok;
}

std::vector<TestFunction<double>> thetas(const ExperimentConfig& cfg)
{
    std::vector<std::string> names = {"x", "x^2"};
    if (cfg.params.contains("thetas"))
    {
        names = cfg.params.at("thetas").get<std::vector<std::string>>();
    }
    std::vector<TestFunction<double>> out;
    for (const auto& n : names)
    {
        out.push_back(test_function<double>(n));
    }
    return out;
}

/// Szego report for one size, including estimator errors when available.
DistributionReport<double> szego_at(const io::SymbolSource& src, const SymbolGrid<double>& grid,
                                    Index n, const std::vector<TestFunction<double>>& th)
{
    const auto op  = io::operator_from_symbol(src, n);
    const auto dec = eig_hermitian(op, EigenOptions{false});
    auto report    = szego_report(dec, grid, th);
    if (const auto* s = std::get_if<Symbol<double>>(&src))
    {
        attach_estimator_errors(report, dec, op, *s);
    }
    else if (grid.grid_size() % n == 0)
    {
        report.estimator_errors["symbol_sampling"] =
            max_abs_difference(dec.eigenvalues, estimate_eigs_symbol_sampling(grid, n));
        report.estimator_errors["circulant"] =
            max_abs_difference(dec.eigenvalues, estimate_eigs_circulant(op).values);
    }
    return report;
}

json report_json(Index n, const DistributionReport<double>& r)
{
    json j;
    j["n"]    = n;
    j["rows"] = json::array();
    for (const auto& row : r.szego_rows)
    {
        j["rows"].push_back({{"theta", row.theta},
                             {"matrix_mean", row.matrix_mean},
                             {"symbol_integral", row.symbol_integral},
                             {"abs_gap", row.abs_gap}});
    }
    j["cdf_distance"] = r.cdf_distance;
    j["counts"]       = json::array();
    for (const auto& c : r.counts)
    {
        j["counts"].push_back({{"a", c.a}, {"b", c.b}, {"closed", c.closed_right}, {"count", c.count}});
    }
    j["estimator_errors"] = r.estimator_errors;
    return j;
}

int task_szego(const ExperimentConfig& cfg, const Sink& sink)
{
    const auto& src = need_symbol(cfg);
    const auto grid = io::symbol_grid(src, param_int(cfg, "grid", kSymbolGrid));
    const auto th   = thetas(cfg);
    const auto ns   = sweep(cfg);
    json j;
    if (ns.size() == 1)
    {
        j = report_json(ns[0], szego_at(src, grid, ns[0], th));
    }
    else
    {
        j["reports"] = json::array();
        for (Index n : ns)
        {
            j["reports"].push_back(report_json(n, szego_at(src, grid, n, th)));
        }
    }
    sink.emit("szego.json", dump(j));
    return exit_code::ok;
}

int task_dof(const ExperimentConfig& cfg, const Sink& sink)
{
    if (cfg.params.contains("eps") && !cfg.sizes.empty())
    {
        const double eps = param_number(cfg, "eps");
        const auto& src  = need_symbol(cfg);
        DofStudy<double> study;
        if (const auto* s = std::get_if<Symbol<double>>(&src))
        {
            study = dof_convergence_study(*s, eps, cfg.sizes, param_int(cfg, "grid", kSymbolGrid));
        }
        else
        {
            study = dof_convergence_study(std::get<SymbolGrid<double>>(src), eps, cfg.sizes);
        }
        std::string csv = "N,eff_dim,ratio,limit,abs_gap\n";
        for (const auto& r : study.rows)
        {
            csv += std::to_string(r.n) + "," + std::to_string(r.eff_dim) + "," +
                   io::format_double(r.ratio) + "," + io::format_double(study.limit) + "," +
                   io::format_double(r.gap) + "\n";
        }
        sink.emit("dof.csv", csv);
        return exit_code::ok;
    }
    auto op = config_operator(cfg);
    if (!cfg.problem && cfg.symbol && cfg.params.value("autocorrelation", true))
    {
        // symbol given as a pulse: the signal set is controlled by |phi^|^2
        const auto& src = *cfg.symbol;
        const Index n   = param_int(cfg, "n");
        if (const auto* s = std::get_if<Symbol<double>>(&src))
        {
            op = autocorrelation_operator(*s, n);
        }
        else
        {
            op = autocorrelation_operator(std::get<SymbolGrid<double>>(src), n);
        }
    }
    const auto dec  = eig_hermitian(op, EigenOptions{false});
    std::string csv = "n,d_n\n";
    for (Index i = 0; i < dec.size(); ++i)
    {
        csv += std::to_string(i) + "," + io::format_double(n_width(dec, i)) + "\n";
    }
    sink.emit("dof.csv", csv);
    return exit_code::ok;
}

int task_approx(const ExperimentConfig& cfg, const Sink& sink, std::ostream& err)
{
    const std::string theorem = param_string(cfg, "theorem");
    json j;
    j["theorem"] = theorem;
    json params  = json::object();
    bool violated = false;
    if (theorem == "2" || theorem == "3")
    {
        const auto& p     = need_problem(cfg);
        // DPSS problems use the commuting-matrix route, whose eigenpairs stay
        // accurate where the residual is far below rounding level
        const bool dpss   = p.group.kind == GroupKind::IntLine && p.band.kind == BandKind::SymmetricBand;
        const auto dec    = dpss ? dpss_basis(p.window.sizes[0], p.band.width[0], p.window.sizes[0],
                                              DpssMethod::Tridiagonal)
                                 : eig_hermitian(problem_operator(p));
        const Index rank  = param_int(cfg, "rank");
        const double meas = band_measure(p.group, p.band);
        const double rhs  = random_residual(dec, rank, p.window.size(), meas);
        const auto basis  = make_slepian_basis(dec, rank);
        params            = io::to_json(p);
        params["rank"]    = rank;
        j["rhs"]          = rhs;
        if (theorem == "2")
        {
            const Index nodes = param_int(cfg, "nodes", 32 * std::max(p.window.sizes[0], p.window.sizes[1]));
            params["nodes"]   = nodes;
            const double lhs  = character_approx_mse(basis, p.band, nodes);
            j["lhs"]          = lhs;
            j["gap"]          = std::abs(lhs - rhs);
            violated          = std::abs(lhs - rhs) > tolerance(cfg, "identity", 1e-6);
        }
        else
        {
            const Index draws = param_int(cfg, "draws", 100000);
            const auto mc     = random_residual_monte_carlo(basis, p.band, draws, cfg.seed);
            params["draws"]   = draws;
            params["seed"]    = cfg.seed;
            j["lhs"]          = mc.mean;
            j["std_error"]    = mc.std_error;
            j["gap"]          = std::abs(mc.mean - rhs);
            violated = std::abs(mc.mean - rhs) > tolerance(cfg, "std_errors", 3.0) * mc.std_error;
        }
    }
    else if (theorem == "4")
    {
        Index n  = 0;
        double w = 0;
        if (cfg.problem)
        {
            const auto& p = *cfg.problem;
            if (p.group.kind != GroupKind::IntLine || p.band.kind != BandKind::SymmetricBand)
            {
                throw ConfigError("theorem 4 needs group Z with a symmetric band");
            }
            n = p.window.sizes[0];
            w = p.band.width[0];
        }
        else
        {
            n = param_int(cfg, "n");
            w = param_number(cfg, "W");
        }
        const double eps  = param_number(cfg, "eps");
        const Index grid  = param_int(cfg, "f_grid", 64 * n);
        const double c    = tolerance(cfg, "constant", 3.0);
        const auto k      = uniform_sinusoid_K<double>(n, w, eps, grid);
        const double area = 2.0 * static_cast<double>(n) * w;
        const double rhs  = area + c * std::log(static_cast<double>(n)) * std::log(1.0 / (eps * eps));
        params            = {{"n", n}, {"W", w}, {"eps", eps}, {"f_grid", grid}, {"constant", c}};
        j["lhs"]          = k.k;
        j["rhs"]          = rhs;
        j["lower"]        = std::ceil(area - 1e-12);
        j["max_residual"] = k.max_residual;
        j["saturated"]    = k.saturated;
        j["gap"]          = rhs - static_cast<double>(k.k);
        violated          = static_cast<double>(k.k) > rhs || k.saturated;
    }
    else
    {
        throw ConfigError("field 'params.theorem' must be \"2\", \"3\" or \"4\"");
    }
    j["params"] = params;
    sink.emit("approx.json", dump(j));
    if (violated)
    {
        err << "tolerance violated: approx " << theorem << " gap=" << io::format_double(j["gap"].get<double>())
            << "\n";
        return exit_code::numeric;
    }
    return exit_code::ok;
}

int task_solve(const ExperimentConfig& cfg, const Sink& sink)
{
    const auto op = config_operator(cfg);
    const auto y  = io::read_complex_csv(param_string(cfg, "rhs"));
    if (y.size() != op.size())
    {
        throw DimensionError("right-hand side has " + std::to_string(y.size()) +
                             " entries, operator dimension is " + std::to_string(op.size()));
    }
    const auto dec   = eig_hermitian(op);
    const Index rank = param_int(cfg, "rank", default_rank(1, op.trace()));
    const auto rep   = truncated_pinv_solve(dec, y, rank);
    json j;
    j["rank_used"]    = rep.rank_used;
    j["residual"]     = rep.residual;
    j["dropped_mass"] = rep.dropped_mass;
    j["solution"]     = complex_array(rep.solution);
    sink.emit("solve.json", dump(j));
    return exit_code::ok;
}

int task_multitaper(const ExperimentConfig& cfg, const Sink& sink, std::ostream& err)
{
    const auto x      = io::read_complex_csv(param_string(cfg, "signal"));
    const double nw   = param_number(cfg, "nw");
    const double w    = nw / static_cast<double>(x.size());
    const Index k     = param_int(cfg, "tapers", std::max<Index>(1, static_cast<Index>(2 * nw) - 1));
    const Index m     = param_int(cfg, "grid", x.size());
    MultitaperOptions opt;
    opt.eigenvalue_weighted = cfg.params.value("weighted", false);
    const auto est          = multitaper_psd(x, w, k, m, opt);
    if (est.taper_warning)
    {
        err << "warning: K=" << k << " exceeds ceil(2NW); trailing tapers are poorly concentrated\n";
    }
    std::string csv = "f,psd\n";
    for (Index i = 0; i < m; ++i)
    {
        csv += io::format_double(est.frequencies[i]) + "," + io::format_double(est.psd[i]) + "\n";
    }
    sink.emit("multitaper.csv", csv);
    return exit_code::ok;
}

int task_estimate(const ExperimentConfig& cfg, const Sink& sink, std::ostream& err)
{
    const auto& src = need_symbol(cfg);
    const Index n   = param_int(cfg, "n");
    const auto op   = io::operator_from_symbol(src, n);
    const auto dec  = eig_hermitian(op, EigenOptions{false});
    RealVector<double> sampled;
    if (const auto* s = std::get_if<Symbol<double>>(&src))
    {
        sampled = estimate_eigs_symbol_sampling(*s, n);
    }
    else
    {
        sampled = estimate_eigs_symbol_sampling(std::get<SymbolGrid<double>>(src), n);
    }
    const auto circ = estimate_eigs_circulant(op);
    if (circ.wrap_warning)
    {
        err << "warning: symbol bandwidth >= n/2, wrapped circulant lags overlap\n";
    }
    std::string csv = "index,eigenvalue,symbol_sampling,circulant\n";
    for (Index i = 0; i < n; ++i)
    {
        csv += std::to_string(i) + "," + io::format_double(dec.eigenvalues[i]) + "," +
               io::format_double(sampled[i]) + "," + io::format_double(circ.values[i]) + "\n";
    }
    sink.emit("estimate.csv", csv);
    return exit_code::ok;
}

std::string study_csv(const std::vector<StudyRow>& rows)
{
    std::string csv = "N,metric,lhs,rhs,abs_gap\n";
    for (const auto& r : rows)
    {
        csv += std::to_string(r.n) + "," + r.metric + "," + io::format_double(r.lhs) + "," +
               io::format_double(r.rhs) + "," + io::format_double(r.abs_gap) + "\n";
    }
    return csv;
}

} // namespace

// ---------------------------------------------------------------------------

Task parse_task(const std::string& name)
{
    for (const auto& [t, s] : task_names())
    {
        if (s == name)
        {
            return t;
        }
    }
    throw ConfigError("field 'task': unknown task '" + name + "'");
}

std::string to_string(Task t)
{
    for (const auto& [k, s] : task_names())
    {
        if (k == t)
        {
            return s;
        }
    }
    return "?";
}

ExperimentConfig parse_config(const json& j)
{
    if (!j.is_object())
    {
        throw ConfigError("config must be a JSON object");
    }
    ExperimentConfig cfg;
    if (!j.contains("task") || !j.at("task").is_string())
    {
        throw ConfigError("missing field 'task'");
    }
    cfg.task = parse_task(j.at("task").get<std::string>());
    if (j.contains("problem"))
    {
        cfg.problem = io::parse_problem(j.at("problem"), "problem");
    }
    if (j.contains("symbol"))
    {
        cfg.symbol = io::parse_symbol(j.at("symbol"), "symbol");
    }
    if (j.contains("sizes"))
    {
        const json& s = j.at("sizes");
        if (!s.is_array())
        {
            throw ConfigError("field 'sizes' must be an array of integers");
        }
        for (std::size_t i = 0; i < s.size(); ++i)
        {
            if (!s[i].is_number_integer() || s[i].get<Index>() < 1)
            {
                throw ConfigError("field 'sizes[" + std::to_string(i) + "]' must be a positive integer");
            }
            const Index v = s[i].get<Index>();
            if (!cfg.sizes.empty() && v <= cfg.sizes.back())
            {
                throw ConfigError("field 'sizes' must be strictly increasing");
            }
            cfg.sizes.push_back(v);
        }
    }
    if (j.contains("tolerances"))
    {
        const json& t = j.at("tolerances");
        if (!t.is_object())
        {
            throw ConfigError("field 'tolerances' must be an object");
        }
        for (const auto& [k, v] : t.items())
        {
            if (!v.is_number() || !(v.get<double>() > 0))
            {
                throw ConfigError("field 'tolerances." + k + "' must be a positive number");
            }
            cfg.tolerances[k] = v.get<double>();
        }
    }
    if (j.contains("out"))
    {
        cfg.out = j.at("out").get<std::string>();
    }
    if (j.contains("seed"))
    {
        if (!j.at("seed").is_number_unsigned())
        {
            throw ConfigError("field 'seed' must be a nonnegative integer");
        }
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("params"))
    {
        if (!j.at("params").is_object())
        {
            throw ConfigError("field 'params' must be an object");
        }
        cfg.params = j.at("params");
    }
    return cfg;
}

std::vector<StudyRow> run_study(const ExperimentConfig& cfg)
{
    const std::string metric = param_string(cfg, "metric");
    const auto ns            = sweep(cfg);
    std::vector<StudyRow> rows;

    if (metric == "trace" || metric == "frobenius" || metric == "half_point" ||
        metric == "sumsq_deficit" || metric == "clustering")
    {
        const auto& base = need_problem(cfg);
        double prev_deficit = 0;
        for (Index n : ns)
        {
            const auto p       = resized(base, n);
            const auto op      = problem_operator(p);
            const auto dec     = eig_hermitian(op, EigenOptions{false});
            const double area  = static_cast<double>(p.window.size()) * band_measure(p.group, p.band);
            const auto& lam    = dec.eigenvalues;
            if (metric == "trace")
            {
                auto r     = make_row(n, metric, lam.sum(), area);
                r.violated = r.abs_gap > tolerance(cfg, "trace", 1e-8) * static_cast<double>(p.window.size());
                rows.push_back(r);
            }
            else if (metric == "frobenius")
            {
                const auto h  = op.dense();
                auto r        = make_row(n, metric, lam.squaredNorm(), h.squaredNorm());
                r.violated    = r.abs_gap > tolerance(cfg, "frobenius", 1e-8) * std::max(1.0, r.rhs);
                rows.push_back(r);
            }
            else if (metric == "sumsq_deficit")
            {
                const double deficit = area - lam.squaredNorm();
                if (prev_deficit > 0)
                {
                    auto r     = make_row(n, "sumsq_deficit_ratio", deficit / prev_deficit,
                                          tolerance(cfg, "ratio", 1.5));
                    r.violated = r.lhs > r.rhs;
                    rows.push_back(r);
                }
                else
                {
                    rows.push_back(make_row(n, "sumsq_deficit", deficit, 0.0));
                    rows.back().violated = !(deficit > 0);
                }
                prev_deficit = deficit;
            }
            else if (metric == "half_point")
            {
                if (p.band.kind != BandKind::SymmetricBand || p.group.kind != GroupKind::IntLine)
                {
                    throw ConfigError("metric half_point needs group Z with a symmetric band");
                }
                const Index lo = static_cast<Index>(std::floor(area)) - 1;
                const Index hi = static_cast<Index>(std::ceil(area));
                if (lo < 0 || hi >= lam.size())
                {
                    throw ConfigError("metric half_point: 2NW must lie in [1, N)");
                }
                auto upper     = make_row(n, "half_point_upper", lam[lo], 0.5);
                upper.violated = lam[lo] < 0.5;
                auto lower     = make_row(n, "half_point_lower", lam[hi], 0.5);
                lower.violated = lam[hi] > 0.5;
                rows.push_back(upper);
                rows.push_back(lower);
            }
            else
            {
                const double eps   = param_number(cfg, "eps", 0.01);
                const double bound = transition_bound_dpss(p.window.size(), eps);
                auto r             = make_row(n, "transition_count",
                                              static_cast<double>(eig_count(dec, eps, 1.0 - eps)), bound);
                r.violated         = r.lhs > r.rhs;
                rows.push_back(r);
            }
        }
        return rows;
    }

    if (metric == "szego_cdf" || metric == "estimators")
    {
        const auto& src = need_symbol(cfg);
        const auto grid = io::symbol_grid(src, param_int(cfg, "grid", kSymbolGrid));
        const std::vector<TestFunction<double>> th = {test_function<double>("x")};
        double first_sampling = -1;
        double prev_cdf       = -1;
        for (Index n : ns)
        {
            const auto rep = szego_at(src, grid, n, th);
            if (metric == "szego_cdf")
            {
                auto r = make_row(n, metric, rep.cdf_distance, 0.0);
                r.violated = prev_cdf >= 0 && rep.cdf_distance > prev_cdf + tolerance(cfg, "noise", 0.02);
                prev_cdf   = rep.cdf_distance;
                rows.push_back(r);
                continue;
            }
            if (rep.estimator_errors.empty())
            {
                throw ConfigError("metric estimators: grid size must be a multiple of every N");
            }
            const double es = rep.estimator_errors.at("symbol_sampling");
            const double ec = rep.estimator_errors.at("circulant");
            auto rs         = make_row(n, "estimator_symbol_sampling", es, 0.0);
            if (first_sampling < 0)
            {
                first_sampling = es;
            }
            else
            {
                rs.violated = !(es < first_sampling);
            }
            auto rc     = make_row(n, "estimator_circulant", ec, 0.0);
            auto agree  = make_row(n, "estimator_agreement", std::abs(es - ec), 0.0);
            agree.violated = agree.lhs > tolerance(cfg, "agreement", 1e-12);
            rows.push_back(rs);
            rows.push_back(rc);
            rows.push_back(agree);
        }
        return rows;
    }

    if (metric == "dof_ratio")
    {
        const auto& src  = need_symbol(cfg);
        const double eps = param_number(cfg, "eps");
        DofStudy<double> study;
        if (const auto* s = std::get_if<Symbol<double>>(&src))
        {
            study = dof_convergence_study(*s, eps, ns, param_int(cfg, "grid", kSymbolGrid));
        }
        else
        {
            study = dof_convergence_study(std::get<SymbolGrid<double>>(src), eps, ns);
        }
        for (std::size_t i = 0; i < study.rows.size(); ++i)
        {
            const auto& d = study.rows[i];
            auto r        = make_row(d.n, metric, d.ratio, study.limit);
            r.violated    = i + 1 == study.rows.size() && r.abs_gap > tolerance(cfg, "dof_ratio", 0.05);
            rows.push_back(r);
        }
        return rows;
    }

    throw ConfigError("field 'params.metric': unknown metric '" + metric + "'");
}

int run_config(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err)
{
    try
    {
        const Sink sink{cfg, out};
        switch (cfg.task)
        {
        case Task::Build:
            return task_build(cfg, sink);
        case Task::Eigs:
            return task_eigs(cfg, sink);
        case Task::Szego:
            return task_szego(cfg, sink);
        case Task::Dof:
            return task_dof(cfg, sink);
        case Task::Approx:
            return task_approx(cfg, sink, err);
        case Task::Solve:
            return task_solve(cfg, sink);
        case Task::Multitaper:
            return task_multitaper(cfg, sink, err);
        case Task::Estimate:
            return task_estimate(cfg, sink, err);
        case Task::Study:
        {
            const auto rows = run_study(cfg);
            sink.emit("study.csv", study_csv(rows));
            return report_violations(rows, err);
        }
        }
        return exit_code::usage;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

int exit_code_for(const std::exception& e)
{
    if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const ParseError*>(&e))
    {
        return exit_code::io;
    }
    if (dynamic_cast<const NumericError*>(&e) || dynamic_cast<const RankError*>(&e) ||
        dynamic_cast<const HypothesisError*>(&e))
    {
        return exit_code::numeric;
    }
    if (dynamic_cast<const Error*>(&e) || dynamic_cast<const json::exception*>(&e))
    {
        return exit_code::usage;
    }
    return exit_code::numeric;
}

} // namespace prolate
