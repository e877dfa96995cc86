#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>

#include <dhprony/classical.hpp>
#include <dhprony/hankelize.hpp>
#include <dhprony/pipeline.hpp>

#include "support.hpp"

using namespace dhprony;

namespace
{

MeasurementSequence seq(std::vector<Complex> v)
{
    MeasurementSequence m;
    m.values = std::move(v);
    return m;
}

std::vector<Complex> expand_roots(const std::vector<Complex>& roots)
{
    std::vector<Complex> c{Complex(1.0)};
    for (const Complex& r : roots)
    {
        std::vector<Complex> next(c.size() + 1, Complex(0.0));
        for (std::size_t i = 0; i < c.size(); ++i)
        {
            next[i + 1] += c[i];
            next[i] -= r * c[i];
        }
        c = std::move(next);
    }
    return c;
}

} // namespace

TEST_CASE("Hankel matrix")
{
    const auto H = hankel_matrix(seq({1.0, 2.0, 3.0, 4.0}), 2);
    REQUIRE(H.rows() == 2);
    REQUIRE(H.cols() == 3);
    CHECK(H(0, 0) == Complex(1.0));
    CHECK(H(0, 2) == Complex(3.0));
    CHECK(H(1, 0) == Complex(2.0));
    CHECK(H(1, 2) == Complex(4.0));
    CHECK_THROWS(hankel_matrix(seq({1.0, 2.0, 3.0}), 2));

    std::mt19937_64 gen(41);
    const auto x = testing::random_params({2, 1}, 0.3, gen);
    const auto Hx = hankel_matrix(forward_map(x, 8), 3);
    for (Eigen::Index k = 0; k + 1 < Hx.rows(); ++k)
    {
        for (Eigen::Index l = 1; l < Hx.cols(); ++l)
        {
            CHECK(Hx(k + 1, l - 1) == Hx(k, l));
        }
    }
    Eigen::JacobiSVD<CMatrix> svd(hankel_matrix(forward_map(x, 20), 3));
    const auto sv = svd.singularValues();
    CHECK(sv(2) > 1e-8 * sv(0));
}

TEST_CASE("Hankel nullspace")
{
    const auto c = hankel_nullspace(hankel_matrix(seq({2.0, 0.0, 2.0, 0.0}), 2));
    CHECK(std::abs(c(0) + 1.0) < 1e-12);
    CHECK(std::abs(c(1)) < 1e-12);
    CHECK(c(2) == Complex(1.0));

    const Complex z = std::polar(1.0, 1.1);
    const auto c1 = hankel_nullspace(hankel_matrix(seq({3.0, 3.0 * z}), 1));
    CHECK(std::abs(c1(0) + z) < 1e-12);

    std::mt19937_64 gen(42);
    const auto x = testing::random_params({2, 2}, 0.5, gen);
    const auto H = hankel_matrix(forward_map(x, 8), 4);
    const auto cx = hankel_nullspace(H);
    const auto ref = prony_polynomial(x.nodes(), x.multiplicities());
    for (int i = 0; i <= 4; ++i)
    {
        CHECK(std::abs(cx(i) - ref[static_cast<std::size_t>(i)]) <= 1e-9);
    }
    Eigen::JacobiSVD<CMatrix> svd(H);
    CHECK((H * cx).norm() <= svd.singularValues()(3) * cx.norm() + 1e-12);
}

TEST_CASE("polynomial roots")
{
    auto r = polynomial_roots(std::vector<Complex>{-1.0, 0.0, 1.0});
    std::sort(r.begin(), r.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
    CHECK(std::abs(r[0] + 1.0) < 1e-14);
    CHECK(std::abs(r[1] - 1.0) < 1e-14);

    const auto dbl = polynomial_roots(std::vector<Complex>{1.0, -2.0, 1.0});
    CHECK(std::abs(dbl[0] - 1.0) < 1e-6);
    CHECK(std::abs(dbl[1] - 1.0) < 1e-6);

    std::mt19937_64 gen(43);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Complex> c{Complex(g(gen), g(gen)), Complex(g(gen), g(gen)), Complex(g(gen), g(gen)),
                           Complex(g(gen), g(gen)), Complex(g(gen), g(gen)), Complex(1.0)};
    const auto back = expand_roots(polynomial_roots(c));
    for (std::size_t i = 0; i < c.size(); ++i)
    {
        CHECK(std::abs(back[i] - c[i]) <= 1e-8 * std::max(1.0, std::abs(c[i])));
    }

    const auto nodes = testing::torus_nodes(4, 0.3, gen);
    auto found = polynomial_roots(prony_polynomial(nodes, MultiplicityVector({1, 1, 1, 1})));
    CHECK(node_error(nodes, found) <= 1e-8);
}

TEST_CASE("multiplicity assignment")
{
    const std::vector<Complex> roots{1.0001, -1.0, 0.9999, -1.0};
    const auto a = assign_multiplicities(roots, MultiplicityVector({2, 2}));
    CHECK(node_error(std::vector<Complex>{1.0, -1.0}, a.nodes) < 1e-12);

    const std::vector<Complex> three{Complex(0.0, 1.02), Complex(0.0, 0.98), Complex(0.01, 1.0)};
    const auto one = assign_multiplicities(three, MultiplicityVector({3}));
    const Complex centroid = (three[0] + three[1] + three[2]) / 3.0;
    CHECK(std::abs(one.nodes[0] - centroid / std::abs(centroid)) < 1e-12);

    std::mt19937_64 gen(44);
    const auto simple = testing::torus_nodes(3, 0.2, gen);
    const auto s = assign_multiplicities(simple, MultiplicityVector({1, 1, 1}));
    CHECK(node_error(simple, s.nodes) < 1e-14);
    for (std::size_t i = 1; i < s.nodes.size(); ++i)
    {
        CHECK(std::arg(s.nodes[i - 1]) <= std::arg(s.nodes[i]));
    }

    // Uneven structure: the pair goes to the tight cluster.
    const std::vector<Complex> mixed{Complex(0.0, 1.0), 1.0, 1.0 + Complex(0.0, 1e-4)};
    const auto m = assign_multiplicities(mixed, MultiplicityVector({1, 2}));
    for (int j = 0; j < 2; ++j)
    {
        if (std::abs(m.nodes[static_cast<std::size_t>(j)] - 1.0) < 1e-3)
        {
            CHECK(m.multiplicities[j] == 2);
        }
        else
        {
            CHECK(m.multiplicities[j] == 1);
        }
    }
}

TEST_CASE("confluent Vandermonde solve")
{
    const auto a = confluent_vandermonde_solve(std::vector<Complex>{1.0, -1.0}, MultiplicityVector({1, 1}),
                                               seq({2.0, 0.0, 2.0, 0.0}));
    CHECK(std::abs(a[0][0] - 1.0) < 1e-12);
    CHECK(std::abs(a[1][0] - 1.0) < 1e-12);

    const auto b = confluent_vandermonde_solve(std::vector<Complex>{1.0}, MultiplicityVector({2}),
                                               seq({0.0, 1.0, 2.0}));
    CHECK(std::abs(b[0][0]) < 1e-12);
    CHECK(std::abs(b[0][1] - 1.0) < 1e-12);

    std::mt19937_64 gen(45);
    for (int t = 0; t < 10; ++t)
    {
        const auto x = testing::random_params({2, 3, 1}, 0.2, gen);
        const auto rec = confluent_vandermonde_solve(x.nodes(), x.multiplicities(), forward_map(x, 50));
        for (std::size_t j = 0; j < rec.size(); ++j)
        {
            for (std::size_t l = 0; l < rec[j].size(); ++l)
            {
                CHECK(std::abs(rec[j][l] - x.coefficients()[j][l]) <= 1e-9 * std::abs(x.coefficients()[j][l]));
            }
        }
    }
    CHECK_THROWS_WITH(confluent_vandermonde_solve(std::vector<Complex>{1.0, std::polar(1.0, 1e-16)},
                                                  MultiplicityVector({1, 1}), seq({2.0, 2.0, 2.0, 2.0})),
                      "degenerate node configuration");
}

TEST_CASE("Prony's method")
{
    const auto x = prony_solve(seq({2.0, 0.0, 2.0, 0.0}), MultiplicityVector({1, 1}));
    CHECK(node_error(std::vector<Complex>{1.0, -1.0}, x.nodes()) < 1e-12);
    for (const auto& a : x.coefficients())
    {
        CHECK(std::abs(a[0] - 1.0) < 1e-12);
    }

    std::mt19937_64 gen(46);
    for (int t = 0; t < 20; ++t)
    {
        const auto truth = testing::random_params({1, 1, 1}, 0.5, gen);
        const auto est = prony_solve(forward_map(truth, 6), truth.multiplicities());
        CHECK(node_error(truth.nodes(), est.nodes()) <= 1e-8);
    }
}

TEST_CASE("Prony's method degrades near collision, decimated homotopy does not")
{
    const MultiplicityVector mult({2, 2});
    const auto truth = generate_instance(mult, 1e-3, 0.5, 1.5, 47);
    const auto meas = add_noise(forward_map(truth, 1000), {NoiseKind::BoundedUniform, 1e-10, 48});
    const double prony_err = node_error(truth.nodes(), prony_solve(meas, mult).nodes());
    SolveOptions opts;
    opts.strategy = PruningStrategy::PrefilterInit;
    opts.z_init = truth.nodes();
    const double dh_err = node_error(truth.nodes(), decimated_homotopy(meas, mult, opts).params.nodes());
    CHECK(prony_err > 100.0 * dh_err);
}

TEST_CASE("Algorithm 1")
{
    const Complex z = std::polar(1.0, 0.7);
    const PronyParameters x({z}, {{Complex(1.0), Complex(1.0)}});
    const auto meas = forward_map(x, 1000);
    const auto r = algorithm1_single_node(meas, 2, z, 1e-3);
    REQUIRE(r.node.has_value());
    CHECK(std::abs(*r.node - z) <= 1e-10);
    CHECK(r.stride == 333);
    CHECK(r.candidates.size() == 333u);
    // The selected root is the unit-modulus one of the pair {rho, 3 rho}.
    CHECK(std::abs(std::abs(r.rho) - 1.0) < 1e-2);

    const auto open = algorithm1_single_node(meas, 2, std::nullopt, 0.0);
    CHECK(!open.node.has_value());
    CHECK(open.candidates.size() == 333u);
    CHECK(node_error(std::vector<Complex>{z}, std::vector<Complex>{open.candidates[0]}) >= 0.0);
    double nearest = 10.0;
    for (const Complex& c : open.candidates)
    {
        nearest = std::min(nearest, std::abs(c - z));
    }
    CHECK(nearest <= 1e-10);

    // d = 1: rho = n_2 / n_1.
    const PronyParameters y({std::polar(1.0, -0.4)}, {{Complex(0.7, 0.2)}});
    const auto my = forward_map(y, 100);
    const auto r1 = algorithm1_single_node(my, 1, std::nullopt, 0.0);
    const auto dec = decimate(my, r1.stride, 3);
    CHECK(std::abs(r1.rho - dec.values[2] / dec.values[1]) < 1e-14);

    CHECK_THROWS_WITH(algorithm1_single_node(meas, 2, z * std::polar(1.0, 0.5 * 2.0 * 3.14159265 / 333), 1e-6),
                      "initial approximation inconsistent with candidates (eta too small?)");
}

TEST_CASE("Algorithm 1 error decays like N^-d")
{
    std::vector<double> med;
    for (int N : {300, 600, 1200})
    {
        std::vector<double> errs;
        for (int t = 0; t < 30; ++t)
        {
            std::mt19937_64 gen(490 + t);
            const auto x = testing::random_params({2}, 0.0, gen);
            const auto meas = add_noise(forward_map(x, N), {NoiseKind::BoundedUniform, 1e-8, 500u + t});
            const auto r = algorithm1_single_node(meas, 2, x.nodes()[0], 1.0 / N);
            errs.push_back(std::abs(*r.node - x.nodes()[0]));
        }
        med.push_back(testing::median(errs));
    }
    CHECK(med[0] / med[1] == doctest::Approx(4.0).epsilon(0.5));
    CHECK(med[1] / med[2] == doctest::Approx(4.0).epsilon(0.5));
}
