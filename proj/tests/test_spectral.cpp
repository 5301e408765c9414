#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <latreg/corpus.hpp>
#include <latreg/spectral.hpp>

using namespace latreg;
using Complex = std::complex<double>;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Direct evaluation of Σ f̂ e^{2πi m·t/n} on the grid; deliberately avoids the
// FFT path so round trips have an independent reference.
GridSample naive_grid(const SpectralFunction& spec, const std::vector<int>& resolution) {
    GridSample g;
    g.lattice = spec.lattice;
    g.resolution = resolution;
    std::size_t total = 1;
    for (int n : resolution) total *= static_cast<std::size_t>(n);
    g.values.assign(total, 0.0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rest = flat;
        std::vector<double> t(resolution.size());
        for (int j = static_cast<int>(resolution.size()) - 1; j >= 0; --j) {
            t[j] = static_cast<double>(rest % resolution[j]) / resolution[j];
            rest /= resolution[j];
        }
        Complex acc = 0.0;
        for (const auto& c : spec.coeffs) {
            double phase = 0.0;
            for (std::size_t j = 0; j < t.size(); ++j) phase += c.point.m[j] * t[j];
            acc += c.value * std::polar(1.0, kTwoPi * phase);
        }
        g.values[flat] = acc;
    }
    return g;
}

SpectralFunction make_spec(const Lattice& lat, double band,
                           std::vector<std::pair<std::vector<int>, Complex>> entries) {
    SpectralFunction spec;
    spec.lattice = lat;
    spec.band = band;
    for (auto& [m, v] : entries) spec.coeffs.push_back({make_dual_point(lat, m), v});
    std::sort(spec.coeffs.begin(), spec.coeffs.end(),
              [](const Coefficient& a, const Coefficient& b) { return a.point.m < b.point.m; });
    return spec;
}

SpectralFunction random_spec(const Lattice& lat, double band, std::uint64_t seed) {
    FamilyDescriptor desc;
    desc.family = Family::RandomBandLimited;
    desc.dim = lat.dim;
    desc.band = band;
    desc.seed = seed;
    return generate(desc, lat);
}

} // namespace

TEST_CASE("forward transform of a single character is a delta") {
    auto lat = make_lattice({{1, 1}, {0, 1}});
    auto spec = make_spec(lat, 4.0, {{{2, -1}, 1.0}});
    auto grid = naive_grid(spec, {16, 16});
    auto recovered = forward_transform(grid);
    for (const auto& c : recovered.coeffs) {
        const double expected = (c.point.m == std::vector<int>{2, -1}) ? 1.0 : 0.0;
        CHECK(std::abs(c.value - expected) <= 1e-12);
    }
}

TEST_CASE("cosine splits into two half coefficients") {
    auto lat = make_lattice({{1.0}});
    GridSample g;
    g.lattice = lat;
    g.resolution = {16};
    for (int t = 0; t < 16; ++t) g.values.push_back(std::cos(kTwoPi * t / 16.0));
    auto spec = forward_transform(g);
    for (const auto& c : spec.coeffs) {
        const int m = c.point.m[0];
        const double expected = (m == 1 || m == -1) ? 0.5 : 0.0;
        CHECK(std::abs(c.value - expected) <= 1e-12);
    }
}

TEST_CASE("forward transform recovers random band-limited coefficients") {
    auto lat = make_lattice({{1, 0}, {0, 1}});
    auto spec = random_spec(lat, 6.0, 2024);
    auto grid = naive_grid(spec, {17, 17});
    auto recovered = forward_transform(grid);

    double max_err = 0.0;
    for (const auto& c : recovered.coeffs) {
        Complex expected = 0.0;
        for (const auto& s : spec.coeffs)
            if (s.point.m == c.point.m) expected = s.value;
        max_err = std::max(max_err, std::abs(c.value - expected));
    }
    CHECK(max_err <= 1e-10);
}

TEST_CASE("synthesize basics") {
    auto lat = make_lattice({{1.0}});
    auto constant = make_spec(lat, 1.0, {{{0}, 1.0}});
    auto grid = synthesize(constant, {8});
    for (const auto& v : grid.values) CHECK(std::abs(v - 1.0) <= 1e-13);

    auto cosine = make_spec(lat, 2.0, {{{1}, 0.5}, {{-1}, 0.5}});
    auto cos_grid = synthesize(cosine, {32});
    for (int t = 0; t < 32; ++t)
        CHECK(std::abs(cos_grid.values[t] - std::cos(kTwoPi * t / 32.0)) <= 1e-12);
}

TEST_CASE("synthesize refuses under-resolved grids") {
    auto lat = make_lattice({{1.0}});
    auto spec = make_spec(lat, 8.0, {{{5}, 1.0}});
    CHECK_THROWS_AS(synthesize(spec, {10}), Error);
    try {
        synthesize(spec, {10});
    } catch (const Error& e) {
        CHECK(e.code() == "AliasingRisk");
    }
    CHECK_NOTHROW(synthesize(spec, {11}));
}

TEST_CASE("synthesize then forward_transform is the identity") {
    auto lat = make_lattice({{1, 1}, {0, 1}});
    auto spec = random_spec(lat, 5.0, 7);
    auto grid = synthesize(spec, {24, 24});
    auto back = forward_transform(grid);
    double max_err = 0.0;
    for (const auto& c : back.coeffs) {
        Complex expected = 0.0;
        for (const auto& s : spec.coeffs)
            if (s.point.m == c.point.m) expected = s.value;
        max_err = std::max(max_err, std::abs(c.value - expected));
    }
    CHECK(max_err <= 1e-10);
}

TEST_CASE("grid norms under the normalized measure") {
    auto lat = make_lattice({{1.0}});
    GridSample ones;
    ones.lattice = lat;
    ones.resolution = {64};
    ones.values.assign(64, 1.0);
    for (double p : {1.0, 1.5, 2.0, 4.0}) CHECK(lp_norm(ones, p).value == Catch::Approx(1.0));
    CHECK(lp_norm(ones, std::numeric_limits<double>::infinity()).value == Catch::Approx(1.0));

    GridSample character;
    character.lattice = lat;
    character.resolution = {64};
    for (int t = 0; t < 64; ++t) character.values.push_back(std::polar(1.0, kTwoPi * 3 * t / 64.0));
    CHECK(lp_norm(character, 2.0).value == Catch::Approx(1.0));

    GridSample cosine;
    cosine.lattice = lat;
    cosine.resolution = {64};
    for (int t = 0; t < 64; ++t) cosine.values.push_back(std::cos(kTwoPi * t / 64.0));
    CHECK(std::abs(lp_norm(cosine, 2.0).value - 1.0 / std::sqrt(2.0)) <= 1e-10);
}

TEST_CASE("sequence norms") {
    auto lat = make_lattice({{1.0}});
    auto single = make_spec(lat, 4.0, {{{2}, 1.0}});
    for (double g : {1.0, 2.0, 3.0}) CHECK(ellp_norm(single, g).value == Catch::Approx(1.0));
    CHECK(ellp_norm(single, std::numeric_limits<double>::infinity()).value == Catch::Approx(1.0));

    auto pythagorean = make_spec(lat, 4.0, {{{1}, 3.0}, {{2}, 4.0}});
    CHECK(ellp_norm(pythagorean, 2.0).value == Catch::Approx(5.0));
}

TEST_CASE("Hausdorff-Young on the cosine at p = 4/3") {
    auto lat = make_lattice({{1.0}});
    auto cosine = make_spec(lat, 2.0, {{{1}, 0.5}, {{-1}, 0.5}});
    const double seq_norm = ellp_norm(cosine, 4.0).value;
    CHECK(seq_norm == Catch::Approx(std::pow(2.0, -0.75)));
    const double grid_norm = lp_norm(synthesize(cosine, {256}), 4.0 / 3.0).value;
    CHECK(seq_norm <= grid_norm + 1e-6);
}

TEST_CASE("translation acts by unit phases") {
    auto lat = make_lattice({{1.0}});
    auto spec = make_spec(lat, 2.0, {{{1}, 1.0}});

    auto same = translate(spec, {0.0});
    CHECK(same.coeffs[0].value == Complex{1.0, 0.0});

    auto quarter = translate(spec, {0.25});
    CHECK(std::abs(quarter.coeffs[0].value - Complex{0.0, 1.0}) <= 1e-15);

    auto spec2 = random_spec(lat, 16.0, 5);
    auto round = translate(translate(spec2, {0.3125}), {-0.3125});
    for (std::size_t i = 0; i < spec2.coeffs.size(); ++i)
        CHECK(std::abs(round.coeffs[i].value - spec2.coeffs[i].value) <= 1e-12);
}

TEST_CASE("additive difference factor") {
    auto lat = make_lattice({{1.0}});
    auto spec = make_spec(lat, 6.0, {{{4}, 1.0}});

    // κ·h integral: the factor vanishes identically
    auto zero = additive_difference(spec, {0.5});
    CHECK(std::abs(zero.coeffs[0].value) == 0.0);

    // κ·h = 1/2: |e^{iπ} − 1| = 2
    auto two = additive_difference(spec, {0.125});
    CHECK(std::abs(two.coeffs[0].value) == Catch::Approx(2.0));
}

TEST_CASE("additive difference matches grid quadrature through Plancherel") {
    auto lat = make_lattice({{1.0}});
    auto spec = random_spec(lat, 9.0, 11);
    const std::vector<double> h = {0.3};

    const auto diffed = additive_difference(spec, h);
    const double spectral_norm = ellp_norm(diffed, 2.0).value;

    const int n = 64;
    double sum = 0.0;
    for (int t = 0; t < n; ++t) {
        const double x = static_cast<double>(t) / n;
        Complex fx = 0.0, fxh = 0.0;
        for (const auto& c : spec.coeffs) {
            fx += c.value * std::polar(1.0, kTwoPi * c.point.kappa[0] * x);
            fxh += c.value * std::polar(1.0, kTwoPi * c.point.kappa[0] * (x + h[0]));
        }
        sum += std::norm(fxh - fx);
    }
    CHECK(std::abs(spectral_norm - std::sqrt(sum / n)) <= 1e-8);
}

TEST_CASE("additive difference equals translate minus identity") {
    auto lat = make_lattice({{1, 1}, {0, 1}});
    auto spec = random_spec(lat, 7.0, 17);
    const std::vector<double> h = {0.21, -0.57};
    auto diffed = additive_difference(spec, h);
    auto shifted = translate(spec, h);
    for (std::size_t i = 0; i < spec.coeffs.size(); ++i) {
        const auto expected = shifted.coeffs[i].value - spec.coeffs[i].value;
        CHECK(std::abs(diffed.coeffs[i].value - expected) <=
              1e-14 * std::max(1.0, std::abs(expected)));
    }
}

TEST_CASE("multiplicative difference") {
    auto lat1 = make_lattice({{1.0}});
    auto spec1 = random_spec(lat1, 5.0, 3);
    auto add = additive_difference(spec1, {0.2});
    auto mult = multiplicative_difference(spec1, {0.2});
    for (std::size_t i = 0; i < add.coeffs.size(); ++i)
        CHECK(std::abs(add.coeffs[i].value - mult.coeffs[i].value) == 0.0);

    auto lat2 = make_lattice({{1, 0}, {0, 1}});
    auto atom = make_spec(lat2, 4.0, {{{2, 3}, 1.0}});
    auto killed = multiplicative_difference(atom, {0.5, 0.1});  // κ₁h₁ = 1
    CHECK(std::abs(killed.coeffs[0].value) == 0.0);

    // Separable function: the operator factorizes over coordinates.
    std::vector<std::pair<int, Complex>> g1 = {{-1, {0.3, 0.1}}, {2, {0.5, -0.2}}};
    std::vector<std::pair<int, Complex>> g2 = {{1, {-0.4, 0.7}}, {3, {0.2, 0.2}}};
    std::vector<std::pair<std::vector<int>, Complex>> prod;
    for (const auto& [m1, v1] : g1)
        for (const auto& [m2, v2] : g2) prod.push_back({{m1, m2}, v1 * v2});
    auto tensor = make_spec(lat2, 8.0, prod);
    const std::vector<double> h = {0.17, 0.29};
    auto diffed = multiplicative_difference(tensor, h);
    for (const auto& c : diffed.coeffs) {
        Complex expected = 0.0;
        for (const auto& [m1, v1] : g1)
            for (const auto& [m2, v2] : g2)
                if (std::vector<int>{m1, m2} == c.point.m) {
                    auto factor = [](double s) { return std::polar(1.0, kTwoPi * s) - 1.0; };
                    expected = v1 * factor(m1 * h[0]) * v2 * factor(m2 * h[1]);
                }
        CHECK(std::abs(c.value - expected) <= 1e-10);
    }
}

TEST_CASE("plancherel check") {
    auto lat = make_lattice({{1, 0}, {0, 1}});
    auto two_tone = make_spec(lat, 4.0, {{{1, 0}, 3.0}, {{0, 2}, 4.0}});
    auto grid = synthesize(two_tone, {12, 12});
    auto pc = plancherel_check(grid);
    CHECK(pc.l2_grid == Catch::Approx(25.0));
    CHECK(pc.l2_spec == Catch::Approx(25.0));
    CHECK(pc.rel_err <= 1e-12);

    GridSample zero;
    zero.lattice = lat;
    zero.resolution = {4, 4};
    zero.values.assign(16, 0.0);
    auto pz = plancherel_check(zero);
    CHECK(pz.l2_grid == 0.0);
    CHECK(pz.l2_spec == 0.0);
    CHECK(pz.rel_err == 0.0);

    auto shear = make_lattice({{1, 1}, {0, 1}});
    auto f = random_spec(shear, 6.0, 99);
    CHECK(plancherel_check(synthesize(f, {32, 32})).rel_err <= 1e-10);
}

TEST_CASE("sequence-space embedding inequality") {
    std::mt19937_64 eng(55);
    auto u = [&] { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };
    auto lat = make_lattice({{1.0}});
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::pair<std::vector<int>, Complex>> entries;
        const int count = 1 + static_cast<int>(eng() % 12);
        for (int i = 0; i < count; ++i)
            entries.push_back({{static_cast<int>(i) + 1}, std::polar(u() + 1e-3, kTwoPi * u())});
        auto spec = make_spec(lat, 64.0, entries);
        const double p = 1.0 + 3.0 * u();
        const double q = p + 0.5 + 3.0 * u();
        const double np = ellp_norm(spec, p).value;
        const double nq = ellp_norm(spec, q).value;
        const double ninf = ellp_norm(spec, std::numeric_limits<double>::infinity()).value;
        CHECK(nq <= std::pow(ninf, 1.0 - p / q) * std::pow(np, p / q) + 1e-12);
    }
}

TEST_CASE("sine bounds on the half-period interval") {
    for (int i = 0; i <= 10000; ++i) {
        const double t = -0.5 + static_cast<double>(i) / 10000.0;
        const double s = std::abs(std::sin(std::numbers::pi * t));
        CHECK(2.0 * std::abs(t) <= s + 1e-15);
        CHECK(s <= std::numbers::pi * std::abs(t) + 1e-15);
    }
}

TEST_CASE("difference symbol magnitude identity") {
    std::mt19937_64 eng(123);
    auto u = [&] { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };
    for (int i = 0; i < 10000; ++i) {
        const double s = (u() - 0.5) * 20.0;
        const double lhs = std::abs(std::polar(1.0, kTwoPi * (s - std::round(s))) - 1.0);
        const double rhs = 2.0 * std::abs(std::sin(std::numbers::pi * s));
        CHECK(std::abs(lhs - rhs) <= 1e-13);
    }
}

TEST_CASE("reductions are bit-stable across worker counts") {
    auto lat = make_lattice({{1, 0}, {0, 1}});
    auto spec = random_spec(lat, 24.0, 77);
    auto grid = synthesize(spec, {64, 64});

    set_thread_limit(1);
    const double n1 = lp_norm(grid, 3.0).value;
    const double e1 = ellp_norm(spec, 1.5).value;
    set_thread_limit(4);
    const double n4 = lp_norm(grid, 3.0).value;
    const double e4 = ellp_norm(spec, 1.5).value;
    set_thread_limit(1);

    CHECK(n1 == n4);
    CHECK(e1 == e4);
}
