///
/// \file io.hpp
///
/// File formats: JSON for problem specs, operators, decompositions and
/// reports; CSV for sequences. Floating-point values are written with 17
/// significant digits so every double round-trips exactly.
///
#ifndef PROLATE_IO_HPP
#define PROLATE_IO_HPP

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "prolate/group.hpp"
#include "prolate/spectral.hpp"
#include "prolate/symbol.hpp"
#include "prolate/toeplitz.hpp"

namespace prolate::io
{

using json = nlohmann::json;

/// Group, time window and band read from a config object
/// {"group": "Z"|"ZN"|"Z2", "N": int?, "window": {...}, "band": {...}}.
struct ProblemSpec
{
    GroupSpec group;
    TimeWindow window;
    BandSpec band;
};

ProblemSpec parse_problem(const json& j, const std::string& path = "");
json to_json(const ProblemSpec& p);

/// Closed-form symbol or sampled grid.
using SymbolSource = std::variant<Symbol<double>, SymbolGrid<double>>;

/// {"kind": "cosine", "a", "b"} | {"kind": "trig", "coeffs": [[k, re, im?], ...]}
/// | {"kind": "indicator", "W"} | {"kind": "triangle", "half_width", "grid"}
/// | {"kind": "grid", "values": [...]} | {"kind": "grid", "file": CSV}
SymbolSource parse_symbol(const json& j, const std::string& path = "symbol");

/// Sampled view of a symbol source (closed forms are sampled on `grid_size`).
SymbolGrid<double> symbol_grid(const SymbolSource& s, Index grid_size);

/// Operator for a symbol source at size n.
ToeplitzOperator<double> operator_from_symbol(const SymbolSource& s, Index n);

json operator_to_json(const ToeplitzOperator<double>& op);
ToeplitzOperator<double> operator_from_json(const json& j);

void save_operator(const ToeplitzOperator<double>& op, const std::filesystem::path& path);
ToeplitzOperator<double> load_operator(const std::filesystem::path& path);

json decomposition_to_json(const EigenDecomposition<double>& dec);
EigenDecomposition<double> decomposition_from_json(const json& j);

void persist_decomposition(const EigenDecomposition<double>& dec, const std::filesystem::path& path);
EigenDecomposition<double> load_decomposition(const std::filesystem::path& path);

/// Read a whole file; IoError when it cannot be opened.
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Parse JSON text; ParseError carries the byte offset of the failure.
json parse_json(const std::string& text, const std::string& what);

/// "%.17g"
std::string format_double(double x);

/// CSV with one or two numeric columns (re[, im]); a non-numeric first line
/// is treated as a header.
ComplexVector<double> read_complex_csv(const std::filesystem::path& path);

std::string eigenvalues_csv(const RealVector<double>& values);

} // namespace prolate::io

#endif // PROLATE_IO_HPP
