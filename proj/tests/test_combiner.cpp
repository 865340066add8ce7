#include "doctest.h"

#include "rectenna/combiner.hpp"
#include "rectenna/errors.hpp"
#include "rectenna/units.hpp"

#include "oracles.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <random>
#include <sstream>

using namespace rectenna;
using namespace rectenna::combiner;

namespace {

double db(Complex s) { return 20.0 * std::log10(std::abs(s)); }

Eigen::MatrixXcd abcd_oracle(const WilkinsonDesign& d, double f) { return oracle::wilkinson_sparams(d, f); }

}  // namespace

TEST_CASE("design equations") {
    const auto d = design_wilkinson(2, 50.0, 50.0, 9e9);
    CHECK(d.quarter_wave_impedance == doctest::Approx(70.710678118654755).epsilon(1e-12));
    CHECK(d.isolation_resistor == 50.0);
    CHECK(design_wilkinson(4, 50.0, 50.0, 1e9).quarter_wave_impedance == doctest::Approx(100.0));
    const auto d2 = design_wilkinson(2, 50.0, 100.0, 1e9);
    CHECK(d2.quarter_wave_impedance == doctest::Approx(100.0));
    CHECK(d2.isolation_resistor == 100.0);

    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> n(2, 16);
    std::uniform_real_distribution<double> r(0.1, 1e5), f(1e6, 1e11);
    for (int i = 0; i < 1000; ++i) {
        const int ways = n(rng);
        const double rs = r(rng), rl = r(rng);
        const auto x = design_wilkinson(ways, rs, rl, f(rng));
        CHECK(x.quarter_wave_impedance == std::sqrt(ways * rl * rs));
        CHECK(x.isolation_resistor == rl);
    }

    CHECK_THROWS_AS(design_wilkinson(1, 50.0, 50.0, 1e9), ArgumentError);
    CHECK_THROWS_AS(design_wilkinson(2, 0.0, 50.0, 1e9), ArgumentError);
    CHECK_THROWS_AS(design_wilkinson(2, 50.0, -1.0, 1e9), ArgumentError);
    CHECK_THROWS_AS(design_wilkinson(2, 50.0, 50.0, 0.0), ArgumentError);
}

TEST_CASE("S-parameters at the center frequency") {
    const auto d = design_wilkinson(2, 50.0, 50.0, 9e9);
    const auto s = sparams(d, 9e9).entries;
    const auto o = abcd_oracle(d, 9e9);
    CHECK(std::abs(s(1, 0)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
    CHECK(std::abs(s(2, 0)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
    CHECK(db(s(1, 0)) == doctest::Approx(-3.0103).epsilon(1e-4));
    CHECK(std::abs(s(0, 0)) <= 1e-6);
    CHECK(std::abs(s(1, 2)) <= 1e-6);
    CHECK((s - o).cwiseAbs().maxCoeff() <= 1e-9);

    CHECK_THROWS_AS(sparams(design_wilkinson(4, 50.0, 50.0, 9e9), 9e9), UnsupportedError);
    CHECK_THROWS_AS(sparams(d, 0.0), ArgumentError);
}

TEST_CASE("S-parameters agree with the nodal oracle off center") {
    const auto d = design_wilkinson(2, 50.0, 50.0, 1e9);
    const auto s2 = sparams(d, 2e9).entries;
    CHECK(std::abs(std::abs(s2(0, 0)) - std::abs(abcd_oracle(d, 2e9)(0, 0))) <= 1e-6);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> r(5.0, 500.0), frac(0.1, 3.0);
    for (int i = 0; i < 100; ++i) {
        const auto x = design_wilkinson(2, r(rng), r(rng), 1e9);
        double f = frac(rng) * 1e9;
        if (std::abs(std::remainder(f / 1e9, 2.0)) < 1e-3) f *= 1.01;  // line admittance singular at 180 deg
        const auto m = sparams(x, f).entries;
        CHECK((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((m - abcd_oracle(x, f)).cwiseAbs().maxCoeff() <= 1e-9);
        const Eigen::MatrixXcd loss = Eigen::MatrixXcd::Identity(3, 3) - m.adjoint() * m;
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(loss);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-9);
    }
}

TEST_CASE("combine bookkeeping") {
    const auto d = design_wilkinson(2, 50.0, 50.0, 9e9);
    const std::array<Complex, 2> zero{0.0, 0.0};
    const auto z = combine(zero, d, 9e9);
    CHECK(std::abs(z.output) == 0.0);
    CHECK(z.dissipated_in_isolation == 0.0);

    const Complex a{1.3, -0.4};
    const std::array<Complex, 2> equal{a, a};
    const auto e = combine(equal, d, 9e9);
    const double port_power = std::norm(a) / (2.0 * 50.0);
    CHECK(e.input_power == doctest::Approx(2.0 * port_power).epsilon(1e-14));
    CHECK(e.output_power == doctest::Approx(2.0 * port_power).epsilon(1e-6));
    CHECK(std::norm(e.output) / (2.0 * 50.0) == doctest::Approx(e.output_power).epsilon(1e-12));
    CHECK(e.dissipated_in_isolation <= 1e-12 * e.input_power);

    const std::array<Complex, 2> single{a, 0.0};
    const auto h = combine(single, d, 9e9);
    CHECK(h.output_power == doctest::Approx(0.5 * port_power).epsilon(1e-9));
    CHECK(h.dissipated_in_isolation == doctest::Approx(0.5 * port_power).epsilon(1e-9));
    CHECK(h.reflected_power <= 1e-12 * port_power);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0), r(5.0, 500.0), frac(0.1, 3.0);
    for (int i = 0; i < 200; ++i) {
        const auto x = design_wilkinson(2, r(rng), r(rng), 1e9);
        const std::array<Complex, 2> in{Complex{u(rng), u(rng)}, Complex{u(rng), u(rng)}};
        const auto c = combine(in, x, frac(rng) * 1e9);
        const double total = c.output_power + c.reflected_power + c.dissipated_in_isolation;
        CHECK(std::abs(total - c.input_power) <= 1e-9 * c.input_power);
    }

    const std::array<Complex, 1> wrong{a};
    CHECK_THROWS_AS(combine(wrong, d, 9e9), ArgumentError);
}

TEST_CASE("microstrip synthesis") {
    const auto l50 = microstrip_synthesis(50.0, 4.4, 1.6e-3, 9e9);
    CHECK(l50.width == doctest::Approx(3.06e-3).epsilon(0.05));
    CHECK(l50.quarter_wave_length ==
          doctest::Approx(kSpeedOfLight / (4.0 * 9e9 * std::sqrt(l50.effective_eps))));
    CHECK(microstrip_synthesis(70.71, 4.4, 1.6e-3, 9e9).width < l50.width);

    const auto air = microstrip_synthesis(50.0, 1.0, 1e-3, 1e9);
    CHECK(air.effective_eps == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(air.quarter_wave_length == doctest::Approx(kSpeedOfLight / 4e9).epsilon(1e-12));

    for (double z0 = 30.0; z0 <= 120.0; z0 += 2.5)
        for (double er : {2.2, 4.4, 10.2}) {
            const auto line = microstrip_synthesis(z0, er, 1.6e-3, 2e9);
            CHECK(std::abs(microstrip_analysis(line.width, er, 1.6e-3).z0 / z0 - 1.0) <= 0.01);
        }

    CHECK_THROWS_AS(microstrip_synthesis(5.0, 4.4, 1.6e-3, 9e9), ArgumentError);
    CHECK_THROWS_AS(microstrip_synthesis(250.0, 4.4, 1.6e-3, 9e9), ArgumentError);
    CHECK_THROWS_AS(microstrip_synthesis(50.0, 0.5, 1.6e-3, 9e9), ArgumentError);
}

TEST_CASE("touchstone export") {
    const auto d = design_wilkinson(2, 50.0, 50.0, 1e9);
    const std::vector<SMatrix> data{sparams(d, 1e9), sparams(d, 1.5e9)};
    const std::array<double, 3> refs{50.0, 50.0, 50.0};
    std::ostringstream out;
    write_touchstone(out, data, refs);
    const std::string text = out.str();
    CHECK(text.find("# Hz S RI R 50\n") != std::string::npos);
    CHECK(text.find("\n1e+09 ") != std::string::npos);
    int lines = 0;
    for (char c : text) lines += c == '\n';
    CHECK(lines == 2 + 1 + 6);
}
