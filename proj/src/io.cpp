#include "prolate/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace prolate::io
{

namespace
{

std::string join(const std::string& path, const std::string& key)
{
    return path.empty() ? key : path + "." + key;
}

const json& require(const json& j, const std::string& key, const std::string& path)
{
    if (!j.is_object() || !j.contains(key))
    {
        throw ConfigError("missing field '" + join(path, key) + "'");
    }
    return j.at(key);
}

double require_number(const json& j, const std::string& key, const std::string& path)
{
    const json& v = require(j, key, path);
    if (!v.is_number())
    {
        throw ConfigError("field '" + join(path, key) + "' must be a number");
    }
    return v.get<double>();
}

Index require_int(const json& j, const std::string& key, const std::string& path)
{
    const json& v = require(j, key, path);
    if (!v.is_number_integer())
    {
        throw ConfigError("field '" + join(path, key) + "' must be an integer");
    }
    return v.get<Index>();
}

std::string require_string(const json& j, const std::string& key, const std::string& path)
{
    const json& v = require(j, key, path);
    if (!v.is_string())
    {
        throw ConfigError("field '" + join(path, key) + "' must be a string");
    }
    return v.get<std::string>();
}

GroupSpec parse_group(const json& j, const std::string& path)
{
    const std::string g = require_string(j, "group", path);
    if (g == "Z")
    {
        return GroupSpec::integers();
    }
    if (g == "ZN")
    {
        return GroupSpec::cyclic(require_int(j, "N", path));
    }
    if (g == "Z2")
    {
        return GroupSpec::lattice2d();
    }
    throw ConfigError("field '" + join(path, "group") + "' must be one of Z, ZN, Z2");
}

json complex_pair(std::complex<double> c)
{
    return json::array({c.real(), c.imag()});
}

std::complex<double> parse_pair(const json& j)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    {
        throw ConfigError("complex values must be [re, im] pairs");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

json column_to_json(const ComplexVector<double>& c)
{
    json out = json::array();
    for (Index k = 0; k < c.size(); ++k)
    {
        out.push_back(complex_pair(c[k]));
    }
    return out;
}

ComplexVector<double> column_from_json(const json& j)
{
    if (!j.is_array() || j.empty())
    {
        throw ConfigError("first_column must be a non-empty array");
    }
    ComplexVector<double> c(static_cast<Index>(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k)
    {
        c[static_cast<Index>(k)] = parse_pair(j[k]);
    }
    return c;
}

json group_fields(const GroupSpec& g)
{
    json out;
    out["group"] = to_string(g.kind);
    if (g.kind == GroupKind::CyclicN)
    {
        out["N"] = g.modulus;
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------

ProblemSpec parse_problem(const json& j, const std::string& path)
{
    ProblemSpec p;
    p.group = parse_group(j, path);

    const json& w         = require(j, "window", path);
    const std::string wp  = join(path, "window");
    const std::string wk  = w.value("kind", p.group.kind == GroupKind::Product2D ? "block2d" : "block");
    if (wk == "block")
    {
        p.window = TimeWindow::block(require_int(w, "size", wp));
    }
    else if (wk == "block2d")
    {
        const json& s = require(w, "sizes", wp);
        if (!s.is_array() || s.size() != 2)
        {
            throw ConfigError("field '" + join(wp, "sizes") + "' must be [N1, N2]");
        }
        p.window = TimeWindow::block2d(s[0].get<Index>(), s[1].get<Index>());
    }
    else
    {
        throw ConfigError("field '" + join(wp, "kind") + "' must be block or block2d");
    }

    const json& b        = require(j, "band", path);
    const std::string bp = join(path, "band");
    const std::string bk = require_string(b, "kind", bp);
    if (bk == "symmetric")
    {
        p.band = BandSpec::symmetric(require_number(b, "W", bp));
    }
    else if (bk == "index_block")
    {
        if (p.group.kind != GroupKind::CyclicN)
        {
            throw ConfigError("field '" + join(bp, "kind") + "': index_block needs group ZN");
        }
        p.band = BandSpec::index_block(require_int(b, "K", bp), p.group.modulus,
                                       b.value("offset", Index{0}));
    }
    else if (bk == "product")
    {
        const json& ws = require(b, "W", bp);
        if (!ws.is_array() || ws.size() != 2)
        {
            throw ConfigError("field '" + join(bp, "W") + "' must be [W1, W2]");
        }
        p.band = BandSpec::product(ws[0].get<double>(), ws[1].get<double>());
    }
    else
    {
        throw ConfigError("field '" + join(bp, "kind") +
                          "' must be symmetric, index_block or product");
    }
    validate_window(p.group, p.window);
    band_measure(p.group, p.band);
    return p;
}

json to_json(const ProblemSpec& p)
{
    json out = group_fields(p.group);
    if (p.window.kind == WindowKind::IndexBlock)
    {
        out["window"] = {{"kind", "block"}, {"size", p.window.sizes[0]}};
    }
    else
    {
        out["window"] = {{"kind", "block2d"}, {"sizes", {p.window.sizes[0], p.window.sizes[1]}}};
    }
    switch (p.band.kind)
    {
    case BandKind::SymmetricBand:
        out["band"] = {{"kind", "symmetric"}, {"W", p.band.width[0]}};
        break;
    case BandKind::IndexBlock:
        out["band"] = {{"kind", "index_block"}, {"K", p.band.count}, {"offset", p.band.offset}};
        break;
    case BandKind::ProductBand:
        out["band"] = {{"kind", "product"}, {"W", {p.band.width[0], p.band.width[1]}}};
        break;
    }
    return out;
}

// ---------------------------------------------------------------------------

SymbolSource parse_symbol(const json& j, const std::string& path)
{
    const std::string kind = require_string(j, "kind", path);
    if (kind == "cosine")
    {
        return Symbol<double>::cosine(require_number(j, "a", path), require_number(j, "b", path));
    }
    if (kind == "constant")
    {
        return Symbol<double>::constant(require_number(j, "value", path));
    }
    if (kind == "indicator")
    {
        return Symbol<double>::band_indicator(require_number(j, "W", path));
    }
    if (kind == "trig")
    {
        const json& cs = require(j, "coeffs", path);
        if (!cs.is_array())
        {
            throw ConfigError("field '" + join(path, "coeffs") + "' must be an array");
        }
        std::map<Index, std::complex<double>> coeffs;
        for (const auto& row : cs)
        {
            if (!row.is_array() || row.size() < 2 || row.size() > 3)
            {
                throw ConfigError("field '" + join(path, "coeffs") + "' rows must be [k, re, im?]");
            }
            const double im = row.size() == 3 ? row[2].get<double>() : 0.0;
            coeffs[row[0].get<Index>()] += std::complex<double>(row[1].get<double>(), im);
        }
        return Symbol<double>::trigonometric(std::move(coeffs));
    }
    if (kind == "triangle")
    {
        const double half = j.value("half_width", 0.5);
        const Index grid  = j.value("grid", Index{1} << 16);
        if (!(half > 0.0 && half <= 0.5))
        {
            throw ConfigError("field '" + join(path, "half_width") + "' must lie in (0, 1/2]");
        }
        return SymbolGrid<double>::sample(
            [half](double f) {
                return std::max(0.0, 1.0 - std::abs(canonical_frequency(f)) / half);
            },
            grid);
    }
    if (kind == "grid")
    {
        if (j.contains("file"))
        {
            return SymbolGrid<double>(read_complex_csv(require_string(j, "file", path)));
        }
        const json& vs = require(j, "values", path);
        ComplexVector<double> s(static_cast<Index>(vs.size()));
        for (std::size_t m = 0; m < vs.size(); ++m)
        {
            s[static_cast<Index>(m)] = vs[m].is_array() ? parse_pair(vs[m])
                                                        : std::complex<double>(vs[m].get<double>());
        }
        return SymbolGrid<double>(std::move(s));
    }
    throw ConfigError("field '" + join(path, "kind") +
                      "' must be cosine, constant, indicator, trig, triangle or grid");
}

SymbolGrid<double> symbol_grid(const SymbolSource& s, Index grid_size)
{
    if (const auto* g = std::get_if<SymbolGrid<double>>(&s))
    {
        return *g;
    }
    return SymbolGrid<double>::sample(std::get<Symbol<double>>(s), grid_size);
}

ToeplitzOperator<double> operator_from_symbol(const SymbolSource& s, Index n)
{
    if (const auto* g = std::get_if<SymbolGrid<double>>(&s))
    {
        return toeplitz_from_symbol(*g, n);
    }
    return toeplitz_from_symbol(std::get<Symbol<double>>(s), n);
}

// ---------------------------------------------------------------------------

json operator_to_json(const ToeplitzOperator<double>& op)
{
    json out           = group_fields(op.group());
    out["separable"]   = op.is_separable();
    out["symbol_tag"]  = op.symbol_tag();
    if (op.is_separable())
    {
        out["n"]            = {op.factors()[0].size(), op.factors()[1].size()};
        out["first_column"] = {column_to_json(op.factors()[0].first_column()),
                               column_to_json(op.factors()[1].first_column())};
    }
    else
    {
        out["n"]            = op.size();
        out["first_column"] = column_to_json(op.first_column());
    }
    return out;
}

ToeplitzOperator<double> operator_from_json(const json& j)
{
    const GroupSpec g     = parse_group(j, "");
    const bool separable  = j.value("separable", false);
    const std::string tag = j.value("symbol_tag", std::string{});
    const json& cols      = require(j, "first_column", "");
    if (separable)
    {
        const json& n = require(j, "n", "");
        if (!cols.is_array() || cols.size() != 2 || !n.is_array() || n.size() != 2)
        {
            throw ConfigError("separable operator needs two factor columns and n = [n1, n2]");
        }
        ToeplitzOperator<double> a(column_from_json(cols[0]), GroupSpec::integers());
        ToeplitzOperator<double> b(column_from_json(cols[1]), GroupSpec::integers());
        if (a.size() != n[0].get<Index>() || b.size() != n[1].get<Index>())
        {
            throw ConfigError("factor column lengths do not match n");
        }
        return ToeplitzOperator<double>::separable(std::move(a), std::move(b), tag);
    }
    ToeplitzOperator<double> op(column_from_json(cols), g, tag);
    if (op.size() != require_int(j, "n", ""))
    {
        throw ConfigError("first_column length does not match n");
    }
    return op;
}

void save_operator(const ToeplitzOperator<double>& op, const std::filesystem::path& path)
{
    write_text(path, operator_to_json(op).dump(2) + "\n");
}

ToeplitzOperator<double> load_operator(const std::filesystem::path& path)
{
    const json j = parse_json(read_text(path), path.string());
    try
    {
        return operator_from_json(j);
    }
    catch (const ConfigError& e)
    {
        throw ParseError(path.string() + ": " + e.what(), 0);
    }
}

// ---------------------------------------------------------------------------

json decomposition_to_json(const EigenDecomposition<double>& dec)
{
    json out;
    out["format"]      = "prolate.decomposition";
    out["version"]     = 1;
    out["source"]      = dec.source;
    out["group"]       = group_fields(dec.group);
    out["shape"]       = {dec.shape[0], dec.shape[1]};
    out["trace"]       = dec.trace;
    out["eigenvalues"] = std::vector<double>(dec.eigenvalues.data(),
                                             dec.eigenvalues.data() + dec.eigenvalues.size());
    json vecs          = json::object();
    vecs["rows"]       = dec.eigenvectors.rows();
    vecs["cols"]       = dec.eigenvectors.cols();
    std::vector<double> re(static_cast<std::size_t>(dec.eigenvectors.size()));
    std::vector<double> im(re.size());
    for (Index i = 0; i < dec.eigenvectors.size(); ++i)
    {
        re[static_cast<std::size_t>(i)] = dec.eigenvectors.data()[i].real();
        im[static_cast<std::size_t>(i)] = dec.eigenvectors.data()[i].imag();
    }
    vecs["re"]          = std::move(re);
    vecs["im"]          = std::move(im);
    out["eigenvectors"] = std::move(vecs);
    return out;
}

EigenDecomposition<double> decomposition_from_json(const json& j)
{
    if (j.value("format", std::string{}) != "prolate.decomposition")
    {
        throw ConfigError("not a decomposition file (format tag missing)");
    }
    EigenDecomposition<double> dec;
    dec.source      = j.value("source", std::string{});
    dec.group       = parse_group(require(j, "group", ""), "group");
    const json& sh  = require(j, "shape", "");
    dec.shape       = {sh.at(0).get<Index>(), sh.at(1).get<Index>()};
    dec.trace       = require_number(j, "trace", "");
    const auto vals = require(j, "eigenvalues", "").get<std::vector<double>>();
    dec.eigenvalues = Eigen::Map<const RealVector<double>>(vals.data(), static_cast<Index>(vals.size()));
    const json& v   = require(j, "eigenvectors", "");
    const Index r   = require_int(v, "rows", "eigenvectors");
    const Index c   = require_int(v, "cols", "eigenvectors");
    const auto re   = require(v, "re", "eigenvectors").get<std::vector<double>>();
    const auto im   = require(v, "im", "eigenvectors").get<std::vector<double>>();
    if (static_cast<Index>(re.size()) != r * c || im.size() != re.size())
    {
        throw ConfigError("eigenvector payload does not match rows x cols");
    }
    dec.eigenvectors.resize(r, c);
    for (Index i = 0; i < r * c; ++i)
    {
        dec.eigenvectors.data()[i] = {re[static_cast<std::size_t>(i)], im[static_cast<std::size_t>(i)]};
    }
    return dec;
}

void persist_decomposition(const EigenDecomposition<double>& dec, const std::filesystem::path& path)
{
    write_text(path, decomposition_to_json(dec).dump() + "\n");
}

EigenDecomposition<double> load_decomposition(const std::filesystem::path& path)
{
    const std::string text = read_text(path);
    const json j           = parse_json(text, path.string());
    try
    {
        return decomposition_from_json(j);
    }
    catch (const ConfigError& e)
    {
        throw ParseError(path.string() + ": " + e.what(), text.size());
    }
    catch (const json::exception& e)
    {
        throw ParseError(path.string() + ": " + e.what(), text.size());
    }
}

// ---------------------------------------------------------------------------

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path())
    {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
    {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << text;
    if (!out)
    {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

json parse_json(const std::string& text, const std::string& what)
{
    try
    {
        return json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        throw ParseError(what + ": malformed JSON", e.byte);
    }
}

std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

ComplexVector<double> read_complex_csv(const std::filesystem::path& path)
{
    std::istringstream in(read_text(path));
    std::vector<std::complex<double>> values;
    std::string line;
    std::size_t lineno = 0;
    std::size_t offset = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        const std::size_t line_start = offset;
        offset += line.size() + 1;
        if (!line.empty() && line.back() == '\r')
        {
            line.pop_back();
        }
        if (line.empty())
        {
            continue;
        }
        std::istringstream row(line);
        std::string cell;
        std::vector<double> cells;
        bool numeric = true;
        while (std::getline(row, cell, ','))
        {
            try
            {
                std::size_t used = 0;
                cells.push_back(std::stod(cell, &used));
                while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used])))
                {
                    ++used;
                }
                numeric = numeric && used == cell.size();
            }
            catch (const std::exception&)
            {
                numeric = false;
            }
        }
        if (!numeric)
        {
            if (lineno == 1 && values.empty())
            {
                continue; // header
            }
            throw ParseError(path.string() + ": non-numeric CSV row " + std::to_string(lineno),
                             line_start);
        }
        if (cells.empty() || cells.size() > 2)
        {
            throw ParseError(path.string() + ": expected 1 or 2 columns on row " +
                                 std::to_string(lineno),
                             line_start);
        }
        values.emplace_back(cells[0], cells.size() == 2 ? cells[1] : 0.0);
    }
    ComplexVector<double> out(static_cast<Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        out[static_cast<Index>(i)] = values[i];
    }
    return out;
}

std::string eigenvalues_csv(const RealVector<double>& values)
{
    std::string out = "index,eigenvalue\n";
    for (Index i = 0; i < values.size(); ++i)
    {
        out += std::to_string(i) + "," + format_double(values[i]) + "\n";
    }
    return out;
}

} // namespace prolate::io
