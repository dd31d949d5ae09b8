#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "prolate/spectral.hpp"

using namespace prolate;
using cplx = std::complex<double>;

namespace
{

oracle::Dense to_dense(const ToeplitzOperator<double>& op)
{
    const auto d = op.dense();
    oracle::Dense out(d.rows(), std::vector<cplx>(d.cols()));
    for (Index i = 0; i < d.rows(); ++i)
    {
        for (Index j = 0; j < d.cols(); ++j)
        {
            out[i][j] = d(i, j);
        }
    }
    return out;
}

double max_diff(const RealVector<double>& a, const std::vector<double>& b)
{
    REQUIRE(static_cast<std::size_t>(a.size()) == b.size());
    double m = 0;
    for (Index i = 0; i < a.size(); ++i)
    {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

void check_decomposition(const ToeplitzOperator<double>& op, const EigenDecomposition<double>& dec)
{
    const auto t     = op.dense();
    const double nrm = t.norm();
    for (Index i = 1; i < dec.size(); ++i)
    {
        CHECK(dec.eigenvalues[i - 1] >= dec.eigenvalues[i]);
    }
    for (Index l = 0; l < dec.size(); ++l)
    {
        const auto u = dec.eigenvectors.col(l);
        CHECK((t * u - dec.eigenvalues[l] * u).norm() <= 1e-8 * nrm);
    }
    const Index n = dec.eigenvectors.cols();
    CHECK((dec.eigenvectors.adjoint() * dec.eigenvectors - ComplexMatrix<double>::Identity(n, n))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
}

} // namespace

TEST_CASE("eigendecomposition examples")
{
    const auto id  = toeplitz_from_symbol(Symbol<double>::constant(1.0), 4);
    const auto dec = eig_hermitian(id);
    CHECK(dec.size() == 4);
    for (Index i = 0; i < 4; ++i)
    {
        CHECK(dec.eigenvalues[i] == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK(eig_hermitian(prolate_operator(1, 0.2)).eigenvalues[0] == doctest::Approx(0.4).epsilon(1e-15));

    const auto op = prolate_operator(8, 0.25);
    CHECK(max_diff(eig_hermitian(op).eigenvalues, oracle::jacobi_hermitian(to_dense(op))) < 1e-10);
}

TEST_CASE("complex operators against the Jacobi oracle")
{
    const auto pd = periodic_prolate_operator(24, 15, 7);
    CHECK(!pd.is_real(1e-14));
    const auto dec = eig_hermitian(pd);
    CHECK(max_diff(dec.eigenvalues, oracle::jacobi_hermitian(to_dense(pd))) < 1e-10);
    check_decomposition(pd, dec);

    const auto shifted = time_frequency_limiting_operator<double>(GroupSpec::cyclic(20), TimeWindow::block(11),
                                                                  BandSpec::index_block(6, 20, 9));
    CHECK(max_diff(eig_hermitian(shifted).eigenvalues, oracle::jacobi_hermitian(to_dense(shifted))) < 1e-10);
}

TEST_CASE("decomposition invariants")
{
    for (const auto& op : {prolate_operator(64, 0.2), prolate_operator(50, 0.45),
                           periodic_prolate_operator(64, 32, 16)})
    {
        check_decomposition(op, eig_hermitian(op));
    }
}

TEST_CASE("eigenvector phase is canonical")
{
    const auto dec = eig_hermitian(periodic_prolate_operator(32, 20, 9));
    for (Index l = 0; l < dec.size(); ++l)
    {
        const auto u = dec.eigenvectors.col(l);
        const double peak = u.cwiseAbs().maxCoeff();
        Index arg         = 0;
        while (std::abs(u[arg]) < peak * (1 - 1e-9))
        {
            ++arg;
        }
        CHECK(std::abs(u[arg].imag()) < 1e-14);
        CHECK(u[arg].real() > 0);
    }
}

TEST_CASE("2-D spectrum is the sorted product of factor spectra")
{
    const auto op  = prolate_operator_2d(4, 4, 0.25, 0.25);
    const auto dec = eig_hermitian(op);
    const auto ref = oracle::jacobi_hermitian(to_dense(op));
    CHECK(max_diff(dec.eigenvalues, ref) < 1e-10);
    check_decomposition(op, dec);

    const auto op2 = prolate_operator_2d(5, 7, 0.15, 0.3);
    const auto a   = eig_hermitian(prolate_operator(5, 0.15)).eigenvalues;
    const auto b   = eig_hermitian(prolate_operator(7, 0.3)).eigenvalues;
    std::vector<double> prods;
    for (Index i = 0; i < a.size(); ++i)
    {
        for (Index j = 0; j < b.size(); ++j)
        {
            prods.push_back(a[i] * b[j]);
        }
    }
    std::sort(prods.begin(), prods.end(), std::greater<>());
    const auto d2 = eig_hermitian(op2);
    CHECK(max_diff(d2.eigenvalues, prods) < 1e-12);
    check_decomposition(op2, d2);
}

TEST_CASE("DPSS basis")
{
    const auto full = dpss_basis(16, 0.5, 16);
    for (Index i = 0; i < 16; ++i)
    {
        CHECK(full.eigenvalues[i] == doctest::Approx(1.0).epsilon(1e-12));
    }
    const auto b128 = dpss_basis(128, 0.1, 128);
    CHECK(b128.eigenvalues[0] > 1 - 1e-6);
    CHECK(b128.eigenvalues[127] < 1e-6);

    const auto b100 = dpss_basis(100, 0.2, 100);
    CHECK(b100.eigenvalues[39] >= 0.5);
    CHECK(b100.eigenvalues[40] <= 0.5);
    CHECK_THROWS_AS(dpss_basis(10, 0.2, 11), ParameterError);
}

TEST_CASE("tridiagonal DPSS route agrees with the dense route")
{
    const Index n   = 96;
    const double w  = 0.15;
    const auto d    = dpss_basis(n, w, n, DpssMethod::Dense);
    const auto t    = dpss_basis(n, w, n, DpssMethod::Tridiagonal);
    CHECK((d.eigenvalues - t.eigenvalues).cwiseAbs().maxCoeff() < 1e-10);
    // vectors agree where the eigenvalues are well separated
    for (Index l = 0; l < n; ++l)
    {
        const double gap_prev = l > 0 ? d.eigenvalues[l - 1] - d.eigenvalues[l] : 1.0;
        const double gap_next = l + 1 < n ? d.eigenvalues[l] - d.eigenvalues[l + 1] : 1.0;
        if (std::min(gap_prev, gap_next) > 1e-3)
        {
            CHECK((d.eigenvectors.col(l) - t.eigenvectors.col(l)).norm() < 1e-8);
        }
    }
    // the tridiagonal vectors are orthonormal even inside the clusters
    CHECK((t.eigenvectors.adjoint() * t.eigenvectors - ComplexMatrix<double>::Identity(n, n))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
}

TEST_CASE("small DPSS eigenvalues keep relative accuracy")
{
    const Index n  = 64;
    const double w = 0.2;
    const auto d   = dpss_basis(n, w, n, DpssMethod::Dense);
    const auto t   = dpss_basis(n, w, n, DpssMethod::Tridiagonal);
    for (Index l = 1; l < n; ++l)
    {
        CHECK(t.eigenvalues[l] > 0);
        // ordering is resolvable until the in-band energy nears (1e-16)^2
        if (t.eigenvalues[l - 1] < 1e-3 && t.eigenvalues[l] > 1e-25)
        {
            CHECK(t.eigenvalues[l] < t.eigenvalues[l - 1]);
        }
        // the dense values are reliable to ~1e-16 absolute
        if (d.eigenvalues[l] > 1e-7 && d.eigenvalues[l] < 1e-3)
        {
            CHECK(t.eigenvalues[l] == doctest::Approx(d.eigenvalues[l]).epsilon(1e-6));
        }
    }
    // in-band energy of a vector far past 2NW by an independent Simpson rule
    CHECK(t.eigenvalues[40] < 1e-15);
    const ComplexVector<double> u = t.eigenvectors.col(40);
    const auto energy             = oracle::simpson(
        [&](double f) {
            cplx s = 0;
            for (Index k = 0; k < n; ++k)
            {
                s += u[k] * oracle::expj(-f * static_cast<double>(k));
            }
            return cplx(std::norm(s));
        },
        -w, w, 4000);
    CHECK(t.eigenvalues[40] == doctest::Approx(energy.real()).epsilon(1e-6));
}

TEST_CASE("eigenvalue counts")
{
    const auto dec = eig_hermitian(toeplitz_from_symbol(Symbol<double>::constant(1.0), 4));
    CHECK(eig_count(dec, 0.5, 1.5) == 4);
    CHECK(eig_count(dec, 0.0, 1.0) == 0);
    CHECK(eig_count(dec, 0.0, 1.0, true) == 4);
}

TEST_CASE("transition bound")
{
    const double expect = (8 / (std::numbers::pi * std::numbers::pi) * std::log(8192.0) + 12) * std::log(1500.0);
    CHECK(transition_bound_dpss(1024, 0.01) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(transition_bound_dpss(1024, 0.01) == doctest::Approx(141.18).epsilon(1e-4));
    const double small = transition_bound_dpss(2, 0.49);
    CHECK(std::isfinite(small));
    CHECK(small > 0);
    double prev = 0;
    for (Index n : {2, 8, 64, 1024, 65536})
    {
        const double b = transition_bound_dpss(n, 0.1);
        CHECK(b > prev);
        prev = b;
    }
    CHECK(transition_bound_dpss(64, 0.01) > transition_bound_dpss(64, 0.1));
    CHECK_THROWS_AS(transition_bound_dpss(64, 0.5), ParameterError);
    CHECK_THROWS_AS(transition_bound_dpss(64, 0.0), ParameterError);
}

TEST_CASE("trace and Frobenius identities")
{
    for (auto [n, w] : {std::pair<Index, double>{64, 0.1}, {100, 0.33}, {37, 0.5}})
    {
        const auto op  = prolate_operator(n, w);
        const auto lam = eig_hermitian(op, EigenOptions{false}).eigenvalues;
        CHECK(std::abs(lam.sum() - 2.0 * static_cast<double>(n) * w) <= 1e-8 * static_cast<double>(n));
        double frob = 0;
        for (Index k = -(n - 1); k < n; ++k)
        {
            frob += static_cast<double>(n - std::abs(k)) * std::norm(op.lag(k));
        }
        CHECK(std::abs(lam.squaredNorm() - frob) <= 1e-8 * frob);
        CHECK(lam.minCoeff() >= -1e-10);
        CHECK(lam.maxCoeff() <= 1 + 1e-10);
    }
    const auto pd = eig_hermitian(periodic_prolate_operator(64, 32, 16), EigenOptions{false});
    CHECK(std::abs(pd.eigenvalues.sum() - 32.0 * 16.0 / 64.0) <= 1e-8 * 32);
}

TEST_CASE("sum-of-squares deficit is positive and sublinear")
{
    double prev = 0;
    for (Index n : {64, 128, 256})
    {
        const auto lam   = eig_hermitian(prolate_operator(n, 0.2), EigenOptions{false}).eigenvalues;
        const double def = 0.4 * static_cast<double>(n) - lam.squaredNorm();
        CHECK(def > 0);
        if (prev > 0)
        {
            CHECK(def / prev < 1.5);
        }
        prev = def;
    }
}

TEST_CASE("Szego report for 2 + cos")
{
    const auto sym  = Symbol<double>::cosine(2.0, 1.0);
    const auto grid = SymbolGrid<double>::sample(sym, 4096);
    const std::vector<TestFunction<double>> th = {test_function<double>("x"), test_function<double>("x^2")};
    for (Index n : {8, 64})
    {
        const auto op  = toeplitz_from_symbol(sym, n);
        const auto rep = szego_report(eig_hermitian(op, EigenOptions{false}), grid, th);
        REQUIRE(rep.szego_rows.size() == 2);
        CHECK(rep.szego_rows[0].matrix_mean == doctest::Approx(2.0).epsilon(1e-13));
        CHECK(rep.szego_rows[0].symbol_integral == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(rep.szego_rows[0].abs_gap < 1e-12);
        const double nn = static_cast<double>(n);
        CHECK(rep.szego_rows[1].matrix_mean == doctest::Approx(4 + 0.5 * (nn - 1) / nn).epsilon(1e-13));
        CHECK(rep.szego_rows[1].symbol_integral == doctest::Approx(4.5).epsilon(1e-14));
        Index total = 0;
        for (const auto& c : rep.counts)
        {
            total += c.count;
        }
        CHECK(total == n);
    }
}

TEST_CASE("Szego log row approaches the limit")
{
    const auto sym   = Symbol<double>::cosine(2.0, 1.0);
    const auto grid  = SymbolGrid<double>::sample(sym, 1 << 14);
    const double lim = std::log((2 + std::sqrt(3.0)) / 2);
    // the grid integral of log(2 + cos) is the limit to spectral accuracy
    const auto fine = oracle::simpson([](double f) { return cplx(std::log(2 + std::cos(2 * std::numbers::pi * f))); },
                                      0.0, 1.0, 20000);
    CHECK(fine.real() == doctest::Approx(lim).epsilon(1e-12));
    double prev = 1e9;
    for (Index n : {16, 64, 256})
    {
        const auto rep = szego_report(eig_hermitian(toeplitz_from_symbol(sym, n), EigenOptions{false}), grid,
                                      {test_function<double>("log")});
        CHECK(rep.szego_rows[0].symbol_integral == doctest::Approx(lim).epsilon(1e-12));
        CHECK(rep.szego_rows[0].abs_gap < prev);
        prev = rep.szego_rows[0].abs_gap;
    }
}

TEST_CASE("Szego test function outside its domain")
{
    const auto op   = prolate_operator(32, 0.2);
    const auto grid = SymbolGrid<double>::sample(Symbol<double>::band_indicator(0.2), 1024);
    CHECK_THROWS_AS(szego_report(eig_hermitian(op), grid, {test_function<double>("log")}), DomainError);
    CHECK_THROWS_AS(test_function<double>("sqrt"), ParameterError);
}

TEST_CASE("CDF distance decreases with N")
{
    const auto sym  = Symbol<double>::cosine(2.0, 1.0);
    const auto grid = SymbolGrid<double>::sample(sym, 1 << 16);
    double prev     = 1;
    double first    = -1;
    for (Index n : {64, 128, 256, 512})
    {
        const auto lam = eig_hermitian(toeplitz_from_symbol(sym, n), EigenOptions{false}).eigenvalues;
        const double d = cdf_distance(lam, grid);
        CHECK(d <= prev + 0.02);
        prev  = d;
        first = first < 0 ? d : first;
    }
    CHECK(prev < first);
}

TEST_CASE("CDF distance skips flat levels of an indicator symbol")
{
    const auto grid = SymbolGrid<double>::sample(Symbol<double>::band_indicator(0.25), 4096);
    // at the atoms 0 and 1 the distance would be ~1/2 for every N; elsewhere it
    // is driven by the transition eigenvalues, a vanishing fraction of N
    double prev = 1;
    for (Index n : {64, 256, 1024})
    {
        const auto lam = eig_hermitian(prolate_operator(n, 0.25), EigenOptions{false}).eigenvalues;
        const double d = cdf_distance(lam, grid);
        CHECK(d < 0.25);
        CHECK(d < prev);
        prev = d;
    }
}

TEST_CASE("symbol-sampling estimator")
{
    const auto est = estimate_eigs_symbol_sampling(Symbol<double>::cosine(2.0, 1.0), 4);
    REQUIRE(est.size() == 4);
    CHECK(est[0] == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(est[1] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(est[2] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(est[3] == doctest::Approx(1.0).epsilon(1e-15));

    const auto c = estimate_eigs_symbol_sampling(Symbol<double>::constant(1.5), 7);
    CHECK((c.array() - 1.5).abs().maxCoeff() < 1e-15);

    // grid route: samples at l/n taken straight from the grid
    const auto g = estimate_eigs_symbol_sampling(SymbolGrid<double>::sample(Symbol<double>::cosine(2.0, 1.0), 64), 4);
    CHECK((g - est).cwiseAbs().maxCoeff() < 1e-15);
    CHECK_THROWS(estimate_eigs_symbol_sampling(SymbolGrid<double>::sample(Symbol<double>::constant(1.0), 60), 8));

    const auto sym = Symbol<double>::cosine(2.0, 1.0);
    double err64   = 0;
    double err256  = 0;
    for (Index n : {64, 256})
    {
        const auto lam = eig_hermitian(toeplitz_from_symbol(sym, n), EigenOptions{false}).eigenvalues;
        (n == 64 ? err64 : err256) = max_abs_difference(lam, estimate_eigs_symbol_sampling(sym, n));
    }
    CHECK(err256 < err64);
}

TEST_CASE("circulant estimator")
{
    const auto id = estimate_eigs_circulant(toeplitz_from_symbol(Symbol<double>::constant(1.0), 5));
    CHECK((id.values.array() - 1.0).abs().maxCoeff() < 1e-15);
    CHECK(!id.wrap_warning);

    const auto tri = estimate_eigs_circulant(toeplitz_from_symbol(Symbol<double>::cosine(2.0, 1.0), 4));
    CHECK(tri.values[0] == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(tri.values[1] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(tri.values[2] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(tri.values[3] == doctest::Approx(1.0).epsilon(1e-15));

    // banded symbol: both estimators are the same DFT
    const auto sym = Symbol<double>::trigonometric({{-2, 0.25}, {-1, cplx(0.3, 0.2)}, {0, 3.0}, {1, cplx(0.3, -0.2)}, {2, 0.25}});
    for (Index n : {8, 33, 128})
    {
        const auto circ = estimate_eigs_circulant(toeplitz_from_symbol(sym, n));
        CHECK(!circ.wrap_warning);
        CHECK((circ.values - estimate_eigs_symbol_sampling(sym, n)).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK(estimate_eigs_circulant(toeplitz_from_symbol(sym, 4)).wrap_warning);

    // prolate: the indicator symbol has a disconnected range {0, 1}, so only
    // the collective (rms) error converges; the max error stalls near 0.4
    double prev = 1e9;
    for (Index n : {128, 512})
    {
        const auto op  = prolate_operator(n, 0.2);
        const auto lam = eig_hermitian(op, EigenOptions{false}).eigenvalues;
        const double e = (lam - estimate_eigs_circulant(op).values).norm() / std::sqrt(static_cast<double>(n));
        CHECK(e < prev);
        prev = e;
    }
}
