#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "cellbench/core/errors.hpp"
#include "cellbench/core/io.hpp"
#include "cellbench/core/rng.hpp"
#include "cellbench/core/table.hpp"

using namespace cellbench;

TEST_SUITE("core") {

TEST_CASE("rng streams are reproducible and seed-sensitive") {
    Rng a(1), b(1), c(2);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next();
        CHECK(x == b.next());
        CHECK(x != c.next());
    }
    CHECK(derive_seed(5, {1, 2}) == derive_seed(5, {1, 2}));
    CHECK(derive_seed(5, {1, 2}) != derive_seed(5, {2, 1}));
    CHECK(derive_seed(5, {1}) != derive_seed(6, {1}));
}

TEST_CASE("rng distributions have the right moments") {
    Rng rng(42);
    const int n = 200000;
    double su = 0, sn = 0, sn2 = 0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        CHECK_UNARY(u >= 0.0 && u < 1.0);
        su += u;
        const double z = rng.normal();
        sn += z;
        sn2 += z * z;
    }
    CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(std::abs(sn / n) < 0.01);
    CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
    for (double mean : {0.5, 4.0, 9.5, 30.0, 900.0}) {
        double s = 0, s2 = 0;
        const int m = 20000;
        for (int i = 0; i < m; ++i) {
            const double k = static_cast<double>(rng.poisson(mean));
            s += k;
            s2 += k * k;
        }
        const double mu = s / m, var = s2 / m - mu * mu;
        CHECK(std::abs(mu - mean) <= 5.0 * std::sqrt(mean / m));
        CHECK(var == doctest::Approx(mean).epsilon(0.06));
    }
    std::map<std::uint64_t, int> hist;
    for (int i = 0; i < 7000; ++i) ++hist[rng.below(7)];
    CHECK(hist.size() == 7);
    for (const auto &[k, c] : hist) CHECK(std::abs(c - 1000) < 150);
    CHECK(log_factorial(0) == 0.0);
    CHECK(log_factorial(10) == doctest::Approx(std::log(3628800.0)));
    CHECK(log_factorial(300) == doctest::Approx(std::lgamma(301.0)).epsilon(1e-12));
}

TEST_CASE("csv parsing") {
    const auto t = io::parse_csv("a,b\n1,\"x,y\"\n2,\"he said \"\"hi\"\"\"\n");
    CHECK(t.header == std::vector<std::string>{"a", "b"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][1] == "x,y");
    CHECK(t.rows[1][1] == "he said \"hi\"");
    CHECK(t.column("b") == 1);
    CHECK_THROWS_AS(t.column("c"), DataError);
    CHECK_THROWS_AS(io::parse_csv("a,b\n1\n"), DataError);
    CHECK(io::csv_row({"p", "q,r", "s\"t"}) == "p,\"q,r\",\"s\"\"t\"\n");
    CHECK(io::parse_csv(io::csv_row({"h1", "h2"}) + io::csv_row({"x\ny", ""})).rows[0][0] == "x\ny");
}

TEST_CASE("number parsing and formatting") {
    CHECK(io::parse_double("0.25", "t") == 0.25);
    CHECK_THROWS_AS(io::parse_double("abc", "t"), DataError);
    CHECK_THROWS_AS(io::parse_double("1.5x", "t"), DataError);
    CHECK(io::parse_int("-12", "t") == -12);
    CHECK_THROWS_AS(io::parse_int("1.5", "t"), DataError);
    const double v = 0.1 + 0.2;
    CHECK(io::parse_double(io::format_double(v), "t") == v);
}

TEST_CASE("embedding table basics") {
    EmbeddingTable t;
    const std::vector<double> r1{1, 2}, r2{3, 4}, bad{1, 2, 3};
    t.add_row("a", std::span<const double>(r1), {{"plate", "p"}});
    t.add_row("b", std::span<const double>(r2));
    CHECK(t.dim == 2);
    CHECK(t.meta_keys == std::vector<std::string>{"plate"});
    CHECK_THROWS_AS(t.add_row("c", std::span<const double>(bad)), DataError);
    CHECK(t.index_of("b") == 1);
    CHECK_THROWS(t.index_of("zz"));
    CHECK(t.matrix()(1, 0) == 3.0);
    CHECK(t.meta_value(1, "plate") == nullptr);
    CHECK_THROWS_AS(t.require_meta(1, "plate"), DataError);
    CHECK(t.subset({1}).ids == std::vector<std::string>{"b"});
    t.validate();
    t.data[0] = std::nanf("");
    CHECK_THROWS_AS(t.validate(), DataError);
}

} // TEST_SUITE
