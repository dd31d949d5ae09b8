// prolate: command-line front end for the time-frequency limiting toolkit.
//
//   prolate <task> [--config FILE] [flags] [--out DIR]
//
// Flags override the corresponding config fields.

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "prolate/run_config.hpp"

namespace
{

using prolate::io::json;

struct Flags
{
    std::string config;
    std::string out;
    std::optional<std::string> group;
    std::optional<long> modulus;
    std::optional<long> n;
    std::optional<long> n2;
    std::optional<double> w;
    std::optional<double> w2;
    std::optional<long> k;
    std::optional<long> offset;
    std::optional<std::string> symbol;
    std::vector<long> sizes;
    std::vector<std::string> tolerances;
    std::vector<std::string> params;
    std::optional<std::uint64_t> seed;

    // task-specific shorthands for params.*
    std::optional<double> eps;
    std::optional<std::string> theorem;
    std::optional<long> rank;
    std::optional<std::string> operator_file;
    std::optional<std::string> rhs;
    std::optional<std::string> signal;
    std::optional<double> nw;
    std::optional<long> tapers;
    std::optional<long> grid;
    std::optional<std::string> metric;
    std::vector<std::string> thetas;
    std::optional<long> draws;
    std::optional<long> nodes;
    bool weighted = false;
    bool save_decomposition = false;
};

void add_flags(CLI::App* sub, Flags& f)
{
    sub->add_option("--config", f.config, "JSON experiment config");
    sub->add_option("--out", f.out, "output directory (default: primary artifact to stdout)");
    sub->add_option("--group", f.group, "Z, ZN or Z2")->check(CLI::IsMember({"Z", "ZN", "Z2"}));
    sub->add_option("--modulus", f.modulus, "group order for ZN");
    sub->add_option("--n,-n", f.n, "window length (operator size)");
    sub->add_option("--n2", f.n2, "second window length for Z2");
    sub->add_option("--W,-W", f.w, "band half-width");
    sub->add_option("--W2", f.w2, "second band half-width for Z2");
    sub->add_option("--K,-K", f.k, "index-block band size on ZN");
    sub->add_option("--offset", f.offset, "index-block band offset on ZN");
    sub->add_option("--symbol", f.symbol,
                    "cosine:A,B | constant:C | indicator:W | triangle:H | grid:FILE | "
                    "trig:k=re,... | JSON object");
    sub->add_option("--sizes", f.sizes, "size sweep, e.g. 64,128,256")->delimiter(',');
    sub->add_option("--tol", f.tolerances, "tolerance NAME=VALUE (repeatable)");
    sub->add_option("--param", f.params, "extra parameter KEY=JSON (repeatable)");
    sub->add_option("--seed", f.seed, "random seed");
    sub->add_option("--eps", f.eps, "level eps");
    sub->add_option("--theorem", f.theorem, "approx: 2, 3 or 4");
    sub->add_option("--rank", f.rank, "truncation rank");
    sub->add_option("--operator", f.operator_file, "operator JSON file");
    sub->add_option("--rhs", f.rhs, "right-hand side CSV");
    sub->add_option("--signal", f.signal, "signal CSV");
    sub->add_option("--nw", f.nw, "time-bandwidth product N*W");
    sub->add_option("--tapers", f.tapers, "number of tapers");
    sub->add_option("--grid", f.grid, "frequency / symbol grid size");
    sub->add_option("--metric", f.metric, "study metric");
    sub->add_option("--thetas", f.thetas, "szego test functions")->delimiter(',');
    sub->add_option("--draws", f.draws, "Monte-Carlo draws");
    sub->add_option("--nodes", f.nodes, "band quadrature nodes");
    sub->add_flag("--weighted", f.weighted, "eigenvalue-weighted multitaper average");
    sub->add_flag("--save-decomposition", f.save_decomposition, "eigs: also write decomposition.json");
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;)
    {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos)
        {
            return out;
        }
        start = pos + 1;
    }
}

std::pair<std::string, std::string> key_value(const std::string& s, const char* what)
{
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
    {
        throw prolate::ConfigError(std::string(what) + " must look like NAME=VALUE, got '" + s + "'");
    }
    return {s.substr(0, eq), s.substr(eq + 1)};
}

double number(const std::string& s, const std::string& what)
{
    try
    {
        std::size_t used = 0;
        const double v   = std::stod(s, &used);
        if (used == s.size())
        {
            return v;
        }
    }
    catch (const std::exception&)
    {
    }
    throw prolate::ConfigError(what + ": '" + s + "' is not a number");
}

json symbol_json(const std::string& spec)
{
    if (!spec.empty() && spec.front() == '{')
    {
        return prolate::io::parse_json(spec, "--symbol");
    }
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string arg  = colon == std::string::npos ? "" : spec.substr(colon + 1);
    const auto args        = split(arg, ',');
    if (kind == "cosine" && args.size() == 2)
    {
        return {{"kind", "cosine"}, {"a", number(args[0], "--symbol")}, {"b", number(args[1], "--symbol")}};
    }
    if (kind == "constant" && args.size() == 1)
    {
        return {{"kind", "constant"}, {"value", number(args[0], "--symbol")}};
    }
    if (kind == "indicator" && args.size() == 1)
    {
        return {{"kind", "indicator"}, {"W", number(args[0], "--symbol")}};
    }
    if (kind == "triangle" && args.size() == 1)
    {
        return {{"kind", "triangle"}, {"half_width", number(args[0], "--symbol")}};
    }
    if (kind == "grid" && !arg.empty())
    {
        return {{"kind", "grid"}, {"file", arg}};
    }
    if (kind == "trig" && !arg.empty())
    {
        json coeffs = json::array();
        for (const auto& term : args)
        {
            const auto [k, v] = key_value(term, "--symbol trig term");
            coeffs.push_back({static_cast<long>(number(k, "--symbol")), number(v, "--symbol")});
        }
        return {{"kind", "trig"}, {"coeffs", coeffs}};
    }
    throw prolate::ConfigError("--symbol: cannot parse '" + spec + "'");
}

/// Problem object from flags, when a band was given.
std::optional<json> problem_json(const Flags& f)
{
    if (!f.w && !f.k)
    {
        return std::nullopt;
    }
    if (!f.n)
    {
        throw prolate::ConfigError("--n is required with --W or --K");
    }
    std::string group = f.group.value_or(f.k ? "ZN" : (f.w2 || f.n2 ? "Z2" : "Z"));
    json p;
    p["group"] = group;
    if (group == "ZN")
    {
        p["N"]      = f.modulus.value_or(*f.n);
        p["window"] = {{"kind", "block"}, {"size", *f.n}};
        if (!f.k)
        {
            throw prolate::ConfigError("--K is required for group ZN");
        }
        p["band"] = {{"kind", "index_block"}, {"K", *f.k}, {"offset", f.offset.value_or(0)}};
    }
    else if (group == "Z2")
    {
        if (!f.w)
        {
            throw prolate::ConfigError("--W is required for group Z2");
        }
        p["window"] = {{"kind", "block2d"}, {"sizes", {*f.n, f.n2.value_or(*f.n)}}};
        p["band"]   = {{"kind", "product"}, {"W", {*f.w, f.w2.value_or(*f.w)}}};
    }
    else
    {
        if (!f.w)
        {
            throw prolate::ConfigError("--W is required for group Z");
        }
        p["window"] = {{"kind", "block"}, {"size", *f.n}};
        p["band"]   = {{"kind", "symmetric"}, {"W", *f.w}};
    }
    return p;
}

json merged_config(const std::string& task, const Flags& f)
{
    json cfg = json::object();
    if (!f.config.empty())
    {
        cfg = prolate::io::parse_json(prolate::io::read_text(f.config), f.config);
        if (!cfg.is_object())
        {
            throw prolate::ConfigError("config must be a JSON object");
        }
    }
    if (cfg.contains("task") && cfg["task"] != task)
    {
        throw prolate::ConfigError("field 'task' is '" + cfg["task"].dump() + "' but subcommand is " + task);
    }
    cfg["task"] = task;
    if (!cfg.contains("params"))
    {
        cfg["params"] = json::object();
    }
    json& params = cfg["params"];

    if (auto p = problem_json(f))
    {
        cfg["problem"] = *p;
    }
    if (f.symbol)
    {
        cfg["symbol"] = symbol_json(*f.symbol);
    }
    if (!f.sizes.empty())
    {
        cfg["sizes"] = f.sizes;
    }
    for (const auto& t : f.tolerances)
    {
        const auto [k, v]     = key_value(t, "--tol");
        cfg["tolerances"][k] = number(v, "--tol " + k);
    }
    if (!f.out.empty())
    {
        cfg["out"] = f.out;
    }
    if (f.seed)
    {
        cfg["seed"] = *f.seed;
    }
    if (f.n)
    {
        params["n"] = *f.n;
    }
    auto set = [&params](const char* key, const auto& opt) {
        if (opt)
        {
            params[key] = *opt;
        }
    };
    set("eps", f.eps);
    set("theorem", f.theorem);
    set("rank", f.rank);
    set("operator", f.operator_file);
    set("rhs", f.rhs);
    set("signal", f.signal);
    set("nw", f.nw);
    set("tapers", f.tapers);
    set("grid", f.grid);
    set("metric", f.metric);
    set("draws", f.draws);
    set("nodes", f.nodes);
    if (!f.thetas.empty())
    {
        params["thetas"] = f.thetas;
    }
    if (f.weighted)
    {
        params["weighted"] = true;
    }
    if (f.save_decomposition)
    {
        params["save_decomposition"] = true;
    }
    if (f.w && !cfg.contains("problem"))
    {
        params["W"] = *f.w;
    }
    for (const auto& kv : f.params)
    {
        const auto [k, v] = key_value(kv, "--param");
        try
        {
            params[k] = json::parse(v);
        }
        catch (const json::parse_error&)
        {
            params[k] = v; // bare strings
        }
    }
    return cfg;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Time-limited Toeplitz operators, Slepian bases and eigenvalue distribution studies"};
    app.require_subcommand(1);

    Flags flags;
    const std::vector<std::pair<std::string, std::string>> tasks = {
        {"build", "write an operator file"},
        {"eigs", "eigenvalues (and optionally the full decomposition)"},
        {"szego", "distribution report against the symbol"},
        {"dof", "Kolmogorov n-widths / effective-dimension study"},
        {"approx", "subspace approximation identities and bounds"},
        {"solve", "truncated-pseudoinverse solve"},
        {"multitaper", "multitaper power spectral density"},
        {"estimate", "fast eigenvalue estimators"},
        {"study", "convergence study across sizes with tolerance checks"},
    };
    for (const auto& [name, help] : tasks)
    {
        add_flags(app.add_subcommand(name, help), flags);
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        app.exit(e);
        return prolate::exit_code::usage;
    }

    const std::string task = app.get_subcommands().front()->get_name();
    try
    {
        const auto cfg = prolate::parse_config(merged_config(task, flags));
        return prolate::run_config(cfg, std::cout, std::cerr);
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return prolate::exit_code_for(e);
    }
}
