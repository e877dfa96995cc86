// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when all pass).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include <dhprony/classical.hpp>
#include <dhprony/conditioning.hpp>
#include <dhprony/esprit.hpp>
#include <dhprony/hankelize.hpp>
#include <dhprony/pipeline.hpp>
#include <dhprony/polysolve.hpp>
#include <dhprony/pruning.hpp>

using namespace dhprony;

namespace
{

using Clock = std::chrono::steady_clock;

struct Outcome
{
    bool pass = false;
    std::string detail;
};

std::string format(const char* fmt, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Uniform draw in [lo, hi] from a per-trial seed.
double uniform_in(std::uint64_t seed, double lo, double hi)
{
    std::mt19937_64 gen(seed);
    return std::uniform_real_distribution<double>(lo, hi)(gen);
}

/// Random torus nodes with pairwise wrapped separation at least `min_sep`.
std::vector<Complex> random_torus_nodes(int s, double min_sep, std::mt19937_64& gen)
{
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (;;)
    {
        std::vector<double> th;
        for (int j = 0; j < s; ++j)
        {
            th.push_back(angle(gen));
        }
        bool ok = true;
        for (int i = 0; i < s && ok; ++i)
        {
            for (int j = i + 1; j < s && ok; ++j)
            {
                double d = std::fmod(std::abs(th[i] - th[j]), 2.0 * std::numbers::pi);
                d = std::min(d, 2.0 * std::numbers::pi - d);
                ok = d >= min_sep;
            }
        }
        if (ok)
        {
            std::vector<Complex> out;
            for (double t : th)
            {
                out.push_back(std::polar(1.0, t));
            }
            return out;
        }
    }
}

PronyParameters random_params(const std::vector<int>& parts, double min_sep, std::mt19937_64& gen)
{
    std::uniform_real_distribution<double> mag(0.5, 1.5);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    auto nodes = random_torus_nodes(static_cast<int>(parts.size()), min_sep, gen);
    std::vector<std::vector<Complex>> coefs;
    for (int d : parts)
    {
        std::vector<Complex> a;
        for (int l = 0; l < d; ++l)
        {
            a.push_back(std::polar(mag(gen), angle(gen)));
        }
        coefs.push_back(std::move(a));
    }
    return PronyParameters(std::move(nodes), std::move(coefs));
}

Outcome criterion1()
{
    const MultiplicityVector mult({2, 2});
    const auto t0 = Clock::now();
    double worst = 0.0;
    int failures = 0;
    for (int t = 0; t < 20; ++t)
    {
        const auto seed = trial_seed(101, t);
        const double delta = uniform_in(seed, 0.01, 0.1);
        const auto truth = generate_instance(mult, delta, 0.5, 1.5, seed + 1);
        SolveOptions opts;
        opts.strategy = PruningStrategy::PrefilterInit;
        opts.z_init = truth.nodes();
        try
        {
            const auto res = decimated_homotopy(forward_map(truth, 1000), mult, opts);
            worst = std::max(worst, node_error(truth.nodes(), res.params.nodes()));
        }
        catch (const Error&)
        {
            ++failures;
        }
    }
    const double elapsed = seconds_since(t0);
    return {failures == 0 && worst <= 1e-8 && elapsed <= 60.0,
            format("max node error %.2e over 20 instances, %d failures, %.1f s", worst, failures, elapsed)};
}

Outcome criterion2()
{
    const MultiplicityVector mult({2, 2});
    int exact = 0;
    std::string counts;
    for (int t = 0; t < 20; ++t)
    {
        const auto seed = trial_seed(202, t);
        const double delta = uniform_in(seed, 0.01, 0.1);
        const auto truth = generate_instance(mult, delta, 0.5, 1.5, seed + 1);
        const auto meas = forward_map(truth, 1000);
        const int p = choose_decimation(1000, mult.parameter_count());
        const auto system = build_hankel_system(decimate(meas, p, mult.parameter_count()), mult);
        const auto sols = solve_system(system.equations);
        exact += sols.size() == 8 ? 1 : 0;
        counts += std::to_string(sols.size()) + (t < 19 ? "," : "");
    }
    return {exact >= 18, format("%d of 20 systems with exactly 8 solutions (counts %s)", exact, counts.c_str())};
}

struct JacobianCheck
{
    double fd_worst = 0.0;
    double factor_worst = 0.0;
};

JacobianCheck jacobian_checks()
{
    std::mt19937_64 gen(303);
    std::uniform_int_distribution<int> pick_s(1, 3);
    std::uniform_int_distribution<int> pick_d(1, 3);
    JacobianCheck out;
    for (int t = 0; t < 50; ++t)
    {
        std::vector<int> parts(static_cast<std::size_t>(pick_s(gen)));
        for (auto& d : parts)
        {
            d = pick_d(gen);
        }
        const auto scaled = random_params(parts, 0.3, gen);
        const MultiplicityVector& mult = scaled.multiplicities();
        const auto system = build_hankel_system(forward_map(scaled, mult.parameter_count()), mult);
        const auto closed = closed_form_jacobian(scaled);

        // Central differences of the constructed system at u = w.
        const CVector w = to_cvector(scaled.nodes());
        const int s = mult.count();
        CMatrix fd(s, s);
        const double h = 1e-5;
        for (int j = 0; j < s; ++j)
        {
            CVector up = w;
            CVector dn = w;
            up(j) += h;
            dn(j) -= h;
            fd.col(j) = (system.equations.evaluate(up) - system.equations.evaluate(dn)) / (2.0 * h);
        }
        out.fd_worst = std::max(out.fd_worst, (fd - closed.product).norm() / closed.product.norm());
        const CMatrix vb = closed.vandermonde * closed.scaling;
        out.factor_worst = std::max(out.factor_worst, (closed.product - vb).norm() / closed.product.norm());
    }
    return out;
}

Outcome criterion3(const JacobianCheck& c)
{
    return {c.fd_worst <= 1e-6, format("worst relative deviation from central differences %.2e (50 instances)",
                                       c.fd_worst)};
}

Outcome criterion4(const JacobianCheck& c)
{
    return {c.factor_worst <= 1e-12,
            format("worst ||D - V*B|| / ||D|| = %.2e (50 instances)", c.factor_worst)};
}

Outcome criterion5()
{
    std::mt19937_64 gen(505);
    const auto params = random_params({2}, 0.0, gen);
    std::vector<double> cn;
    for (int N : {200, 400, 800})
    {
        cn.push_back(node_entries(params, cn_full(params, N).full)[0]);
    }
    const double r1 = cn[1] / cn[0];
    const double r2 = cn[2] / cn[1];
    const bool ok = std::abs(r1 / 0.25 - 1.0) <= 0.25 && std::abs(r2 / 0.25 - 1.0) <= 0.25;
    return {ok, format("CN_z ratios %.4f, %.4f (target 0.25 +/- 25%%)", r1, r2)};
}

Outcome criterion6()
{
    const MultiplicityVector mult({2, 2});
    const auto params = generate_instance(mult, 0.01, 0.5, 1.5, 606);
    const int R = mult.parameter_count();
    std::vector<double> scaled;
    double cn_pstar_2000 = 0.0;
    for (int N : {500, 1000, 2000})
    {
        const int p = choose_decimation(N, R);
        const auto dec = node_entries(params, cn_decimated(params, p).decimated);
        const double cn = *std::max_element(dec.begin(), dec.end());
        scaled.push_back(cn * std::pow(static_cast<double>(N), R));
        if (N == 2000)
        {
            cn_pstar_2000 = cn;
        }
    }
    const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
    const double spread = *hi / *lo;
    const auto one = node_entries(params, cn_decimated(params, 1).decimated);
    const double cn_one = *std::max_element(one.begin(), one.end());
    const bool part1 = spread <= 2.0;
    const bool part2 = cn_pstar_2000 <= 1e-2 * cn_one;
    return {part1 && part2,
            format("CN^(p*)*N^R = %.3e, %.3e, %.3e, spread %.2f (limit 2) [%s]; "
                   "CN^(p*)/CN^(1) at N=2000 = %.2e (limit 1e-2) [%s]",
                   scaled[0], scaled[1], scaled[2], spread, part1 ? "ok" : "violated",
                   cn_pstar_2000 / cn_one, part2 ? "ok" : "violated")};
}

Outcome criterion7()
{
    std::vector<double> med;
    for (int N : {250, 500, 1000})
    {
        std::vector<double> errs;
        for (int t = 0; t < 50; ++t)
        {
            const auto seed = trial_seed(707, t);
            std::mt19937_64 gen(seed);
            const auto truth = random_params({2}, 0.0, gen);
            const auto meas = add_noise(forward_map(truth, N), {NoiseKind::BoundedUniform, 1e-8, seed + N});
            const auto res = algorithm1_single_node(meas, 2, truth.nodes()[0], 1.0 / N);
            errs.push_back(std::abs(*res.node - truth.nodes()[0]));
        }
        med.push_back(median(errs));
    }
    const double f1 = med[0] / med[1];
    const double f2 = med[1] / med[2];
    const bool ok = f1 >= 2.0 && f1 <= 6.0 && f2 >= 2.0 && f2 <= 6.0;
    return {ok, format("median errors %.2e, %.2e, %.2e; factors per doubling %.2f, %.2f (target 4 +/- 50%%)",
                       med[0], med[1], med[2], f1, f2)};
}

Outcome criterion8()
{
    std::mt19937_64 gen(808);
    const auto params = random_params({2}, 0.0, gen);
    const int p = 1000;
    const auto meas = forward_map(params, p * 3 + 1);
    auto q = single_node_polynomial(decimate(meas, p, 4), 2);
    const Complex lead = q.back();
    for (auto& c : q)
    {
        c /= lead;
    }
    q.back() = Complex(1.0);
    const auto roots = polynomial_roots(q);
    const double a = std::abs(roots[0]);
    const double b = std::abs(roots[1]);
    const double ratio = std::max(a, b) / std::min(a, b);
    return {std::abs(ratio - 3.0) <= 0.01, format("|root_max/root_min| = %.6f at p = %d", ratio, p)};
}

Outcome criterion9()
{
    ExperimentConfig c;
    c.multiplicities = {2, 2};
    c.delta_min = c.delta_max = 0.01;
    c.N = 2000;
    c.noise_kind = NoiseKind::Gaussian;
    c.noise_level = 1e-10;
    c.trials = 20;
    c.seed = 909;
    c.methods = {Method::DH, Method::ESPRIT};
    c.strategy = PruningStrategy::PrefilterInit;
    const auto report = run_experiment(c);
    std::vector<double> dh;
    std::vector<double> es;
    int failures = 0;
    for (const auto& r : report.records)
    {
        failures += r.ok ? 0 : 1;
        (r.method == Method::DH ? dh : es).push_back(r.ok ? r.node_err : INFINITY);
    }
    const double mdh = median(dh);
    const double mes = median(es);
    return {mdh <= 1e-2 * mes, format("median node error DH %.2e, ESPRIT %.2e, ratio %.2e (limit 1e-2), %d failures",
                                      mdh, mes, mdh / mes, failures)};
}

/// Quadratic in one variable with coefficients that are polynomials in x
/// (ascending): value = sum_k coef[k](x) y^k.
using XPoly = std::vector<Complex>;

XPoly padd(const XPoly& a, const XPoly& b)
{
    XPoly r(std::max(a.size(), b.size()), Complex(0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        r[i] += a[i];
    }
    for (std::size_t i = 0; i < b.size(); ++i)
    {
        r[i] += b[i];
    }
    return r;
}

XPoly pmul(const XPoly& a, const XPoly& b)
{
    XPoly r(a.size() + b.size() - 1, Complex(0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        for (std::size_t j = 0; j < b.size(); ++j)
        {
            r[i + j] += a[i] * b[j];
        }
    }
    return r;
}

XPoly pneg(const XPoly& a)
{
    XPoly r = a;
    for (auto& c : r)
    {
        c = -c;
    }
    return r;
}

std::vector<Complex> companion_roots(XPoly p)
{
    while (p.size() > 1 && std::abs(p.back()) < 1e-13)
    {
        p.pop_back();
    }
    const int n = static_cast<int>(p.size()) - 1;
    if (n < 1)
    {
        return {};
    }
    CMatrix c = CMatrix::Zero(n, n);
    for (int i = 1; i < n; ++i)
    {
        c(i, i - 1) = 1.0;
    }
    for (int i = 0; i < n; ++i)
    {
        c(i, n - 1) = -p[static_cast<std::size_t>(i)] / p.back();
    }
    Eigen::ComplexEigenSolver<CMatrix> es(c, false);
    return to_std(es.eigenvalues());
}

Outcome criterion10()
{
    std::mt19937_64 gen(1010);
    std::normal_distribution<double> g(0.0, 1.0);
    auto rnd = [&] { return Complex(g(gen), g(gen)); };
    int agree = 0;
    double worst = 0.0;
    for (int t = 0; t < 50; ++t)
    {
        // F = sum c[i][j] x^i y^j, i + j <= 2.
        Complex c[2][3][3] = {};
        std::vector<MultiPoly> eqs;
        for (int e = 0; e < 2; ++e)
        {
            MultiPoly f(2);
            for (int i = 0; i <= 2; ++i)
            {
                for (int j = 0; i + j <= 2; ++j)
                {
                    c[e][i][j] = rnd();
                    f.add_term({i, j}, c[e][i][j]);
                }
            }
            eqs.push_back(std::move(f));
        }
        const auto sols = solve_system(SquareSystem(eqs));

        // Oracle: Sylvester resultant in y, companion roots in x.
        auto ycoef = [&](int e, int j) {
            XPoly r;
            for (int i = 0; i + j <= 2; ++i)
            {
                r.push_back(c[e][i][j]);
            }
            return r;
        };
        const XPoly A = ycoef(0, 2), B = ycoef(0, 1), C = ycoef(0, 0);
        const XPoly D = ycoef(1, 2), E = ycoef(1, 1), F = ycoef(1, 0);
        const XPoly af_cd = padd(pmul(A, F), pneg(pmul(C, D)));
        const XPoly ae_bd = padd(pmul(A, E), pneg(pmul(B, D)));
        const XPoly bf_ce = padd(pmul(B, F), pneg(pmul(C, E)));
        const XPoly res = padd(pmul(af_cd, af_cd), pneg(pmul(ae_bd, bf_ce)));

        auto eval = [&](int e, Complex x, Complex y) {
            Complex v(0.0);
            for (int i = 0; i <= 2; ++i)
            {
                for (int j = 0; i + j <= 2; ++j)
                {
                    v += c[e][i][j] * std::pow(x, i) * std::pow(y, j);
                }
            }
            return v;
        };
        auto evalx = [](const XPoly& p, Complex x) {
            Complex v(0.0);
            for (std::size_t i = p.size(); i-- > 0;)
            {
                v = v * x + p[i];
            }
            return v;
        };
        std::vector<std::pair<Complex, Complex>> oracle;
        for (const Complex& x : companion_roots(res))
        {
            const Complex a = evalx(A, x), b = evalx(B, x), cc = evalx(C, x);
            const Complex disc = std::sqrt(b * b - 4.0 * a * cc);
            Complex best_y(0.0);
            double best = INFINITY;
            for (const Complex y : {(-b + disc) / (2.0 * a), (-b - disc) / (2.0 * a)})
            {
                const double r = std::abs(eval(0, x, y)) + std::abs(eval(1, x, y));
                if (r < best)
                {
                    best = r;
                    best_y = y;
                }
            }
            // Newton polish on the pair.
            Complex xx = x, yy = best_y;
            for (int it = 0; it < 8; ++it)
            {
                const double hh = 1e-7;
                Eigen::Matrix2cd J;
                Eigen::Vector2cd fv(eval(0, xx, yy), eval(1, xx, yy));
                for (int e = 0; e < 2; ++e)
                {
                    J(e, 0) = (eval(e, xx + hh, yy) - eval(e, xx - hh, yy)) / (2.0 * hh);
                    J(e, 1) = (eval(e, xx, yy + hh) - eval(e, xx, yy - hh)) / (2.0 * hh);
                }
                const Eigen::Vector2cd step = J.fullPivLu().solve(fv);
                xx -= step(0);
                yy -= step(1);
            }
            oracle.push_back({xx, yy});
        }

        bool match = oracle.size() == sols.size();
        for (const auto& [x, y] : oracle)
        {
            double nearest = INFINITY;
            for (const auto& s : sols.solutions)
            {
                const double scale = std::max({1.0, std::abs(x), std::abs(y)});
                nearest = std::min(nearest, std::max(std::abs(s(0) - x), std::abs(s(1) - y)) / scale);
            }
            worst = std::max(worst, nearest);
            match = match && nearest <= 1e-8;
        }
        agree += match ? 1 : 0;
    }
    return {agree == 50, format("%d of 50 systems agree with the resultant oracle, worst endpoint deviation %.2e",
                                agree, worst)};
}

Outcome criterion11()
{
    const MultiplicityVector mult({2, 2});
    const int R = mult.parameter_count();
    int same = 0;
    for (int t = 0; t < 100; ++t)
    {
        const auto seed = trial_seed(1111, t);
        const double delta = uniform_in(seed, 0.05, 0.3);
        const auto truth = generate_instance(mult, delta, 0.5, 1.5, seed + 1);
        const auto meas = forward_map(truth, 1000);
        const int p = 2 + t % 19;
        const auto system = build_hankel_system(decimate(meas, p, R), mult);
        const auto sols = solve_system(system.equations);
        const CVector ex = select_exhaustive(sols, p, meas, mult);
        const CVector pre = select_min_residual(select_prefilter(sols, p).candidates, meas, mult);
        same += node_error(to_std(ex), to_std(pre)) <= 1e-12 ? 1 : 0;
    }

    // Selection-stage wall time of the exhaustive strategy at p = 5 and p = 20.
    const auto truth = generate_instance(mult, 0.1, 0.5, 1.5, 1112);
    const auto meas = forward_map(truth, 1000);
    auto select_time = [&](int p) {
        const auto system = build_hankel_system(decimate(meas, p, R), mult);
        const auto sols = solve_system(system.equations);
        std::vector<double> times;
        for (int rep = 0; rep < 5; ++rep)
        {
            const auto t0 = Clock::now();
            (void)select_exhaustive(sols, p, meas, mult);
            times.push_back(seconds_since(t0));
        }
        return median(times);
    };
    const double t5 = select_time(5);
    const double t20 = select_time(20);
    const double growth = t20 / t5;
    return {same == 100 && growth >= 4.0,
            format("%d of 100 instances agree; exhaustive selection time p=20 / p=5 = %.1f (at least 4)", same,
                   growth)};
}

Outcome criterion12()
{
    std::mt19937_64 gen(1212);
    std::uniform_int_distribution<int> pick_s(1, 4);
    int violations = 0;
    double tightest = 0.0;
    for (int t = 0; t < 100; ++t)
    {
        const auto nodes = random_torus_nodes(pick_s(gen), 1e-3, gen);
        const auto sums = inverse_vandermonde_row_sums(nodes);
        // Independent evaluation of 2^{s-1} prod_{j != i} |w_j - w_i|^{-1}.
        for (std::size_t i = 0; i < nodes.size(); ++i)
        {
            double bound = std::pow(2.0, static_cast<double>(nodes.size()) - 1.0);
            for (std::size_t j = 0; j < nodes.size(); ++j)
            {
                if (j != i)
                {
                    bound /= std::abs(nodes[j] - nodes[i]);
                }
            }
            tightest = std::max(tightest, sums[i] / bound);
            violations += sums[i] > bound * (1.0 + 1e-12) ? 1 : 0;
        }
    }
    return {violations == 0, format("%d violations on 100 node sets, largest row-sum/bound %.4f", violations,
                                    tightest)};
}

} // namespace

int main()
{
    int failed = 0;
    auto report = [&](int id, const std::function<Outcome()>& run) {
        const auto t0 = Clock::now();
        Outcome o;
        try
        {
            o = run();
        }
        catch (const std::exception& e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("criterion %2d: %s  %s  (%.1f s)\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                    seconds_since(t0));
        std::fflush(stdout);
    };

    report(1, criterion1);
    report(2, criterion2);
    const auto jac = jacobian_checks();
    report(3, [&] { return criterion3(jac); });
    report(4, [&] { return criterion4(jac); });
    report(5, criterion5);
    report(6, criterion6);
    report(7, criterion7);
    report(8, criterion8);
    report(9, criterion9);
    report(10, criterion10);
    report(11, criterion11);
    report(12, criterion12);
    std::printf("%d of 12 criteria failed\n", failed);
    return failed;
}
