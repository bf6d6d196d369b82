#include <doctest.h>

#include <cmath>

#include "gbtpp/numerics/kernels.hpp"
#include "gbtpp/numerics/rng.hpp"

using namespace gbtpp;
using kernels::Isa;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    // sprinkle exact zeros, which the accumulate kernels skip
    for (std::size_t i = 0; i < n; i += 7) v[i] = 0.0;
    return v;
}

void check_close(const std::vector<double>& a, const std::vector<double>& b) {
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12).scale(1.0));
}

}  // namespace

TEST_CASE("scalar and avx2 kernels agree") {
    if (!kernels::isa_available(Isa::avx2)) {
        MESSAGE("AVX2 not available on this machine; equivalence test skipped");
        return;
    }
    const auto& s = kernels::table(Isa::scalar);
    const auto& v = kernels::table(Isa::avx2);
    REQUIRE(&s != &v);
    Rng rng(5);
    // sizes straddling the 4-wide and 8-wide unrolls
    for (std::size_t n : {0UL, 1UL, 3UL, 4UL, 5UL, 7UL, 8UL, 9UL, 15UL, 16UL, 17UL, 31UL, 64UL, 103UL}) {
        const auto a = random_vec(rng, n);
        const auto b = random_vec(rng, n);
        CHECK(s.dot(a.data(), b.data(), n) == doctest::Approx(v.dot(a.data(), b.data(), n)).epsilon(1e-12));
        CHECK(s.sumsq(a.data(), n) == doctest::Approx(v.sumsq(a.data(), n)).epsilon(1e-12));

        auto y1 = b, y2 = b;
        s.axpy(0.37, a.data(), y1.data(), n);
        v.axpy(0.37, a.data(), y2.data(), n);
        check_close(y1, y2);

        for (std::size_t rows : {1UL, 3UL, 8UL, 13UL}) {
            const auto m = random_vec(rng, rows * n);
            const auto xr = random_vec(rng, rows);
            std::vector<double> g1(rows), g2(rows);
            s.gemv(m.data(), rows, n, a.data(), g1.data());
            v.gemv(m.data(), rows, n, a.data(), g2.data());
            check_close(g1, g2);

            auto t1 = b, t2 = b;
            s.gemv_t_acc(m.data(), rows, n, xr.data(), t1.data());
            v.gemv_t_acc(m.data(), rows, n, xr.data(), t2.data());
            check_close(t1, t2);

            auto m1 = m, m2 = m;
            s.ger(m1.data(), rows, n, -1.5, xr.data(), a.data());
            v.ger(m2.data(), rows, n, -1.5, xr.data(), a.data());
            check_close(m1, m2);
        }
    }
}

TEST_CASE("scalar kernels match definitions") {
    const auto& s = kernels::table(Isa::scalar);
    const std::vector<double> m{1, 2, 3, 4, 5, 6};  // 2x3
    const std::vector<double> x{1, -1, 2};
    std::vector<double> y(2);
    s.gemv(m.data(), 2, 3, x.data(), y.data());
    CHECK(y == std::vector<double>{5, 11});
    std::vector<double> t{1, 1, 1};
    const std::vector<double> r{2, -1};
    s.gemv_t_acc(m.data(), 2, 3, r.data(), t.data());
    CHECK(t == std::vector<double>{-1, 0, 1});
    auto mm = m;
    s.ger(mm.data(), 2, 3, 2.0, r.data(), x.data());
    CHECK(mm == std::vector<double>{5, -2, 11, 2, 7, 2});
    CHECK(s.dot(x.data(), x.data(), 3) == 6);
    CHECK(s.sumsq(x.data(), 3) == 6);
}

TEST_CASE("isa selection") {
    const Isa before = kernels::active_isa();
    CHECK(kernels::set_isa(Isa::scalar));
    CHECK(kernels::active_isa() == Isa::scalar);
    CHECK(kernels::isa_name(Isa::scalar) == "scalar");
    if (kernels::isa_available(Isa::avx2)) {
        CHECK(kernels::set_isa(Isa::avx2));
        CHECK(kernels::active_isa() == Isa::avx2);
    } else {
        CHECK_FALSE(kernels::set_isa(Isa::avx2));
    }
    kernels::set_isa(before);
}
