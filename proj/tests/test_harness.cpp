#include "catch_amalgamated.hpp"

#include "symext/acceptance.hpp"

#include <sstream>

using namespace symext;
using namespace symext::acceptance;

namespace {

std::vector<CheckRow> rows_where(const std::vector<CheckRow>& rows, const std::string& prefix) {
    std::vector<CheckRow> out;
    for (const auto& r : rows)
        if (r.check.rfind(prefix, 0) == 0) out.push_back(r);
    return out;
}

} // namespace

TEST_CASE("criterion lookup", "[harness]") {
    REQUIRE(criteria().size() == 8);
    CHECK(find_criterion("boundary")->id == 1);
    CHECK(find_criterion("2")->key == std::string("qutrit-extension"));
    CHECK(find_criterion("nonsense") == nullptr);
}

TEST_CASE("a tampered threshold formula fails the boundary checks", "[harness][mutation]") {
    Options tampered;
    tampered.f_max = [](Index d) { return static_cast<double>(d) / (2.0 * static_cast<double>(d)); };

    const auto boundary = run_criterion(*find_criterion("boundary"), tampered);
    const auto b = rows_where(boundary, "isotropic boundary");
    REQUIRE(b.size() == 2);
    for (const auto& r : b) CHECK_FALSE(r.pass);
    CHECK_FALSE(all_pass(boundary));

    const auto omega = run_criterion(*find_criterion("isotropic-extension"), tampered);
    for (const auto& r : rows_where(omega, "reduction fidelity")) CHECK_FALSE(r.pass);

    const auto honest = run_criterion(*find_criterion("isotropic-extension"), Options{});
    CHECK(all_pass(honest));
}

TEST_CASE("identical seeds give identical reports", "[harness]") {
    Options a, b;
    a.seed = b.seed = 7;
    const auto ra = run_criterion(*find_criterion("qutrit-extension"), a);
    const auto rb = run_criterion(*find_criterion("qutrit-extension"), b);
    REQUIRE(ra.size() == rb.size());
    for (std::size_t i = 0; i + 1 < ra.size(); ++i) CHECK(ra[i].measured == rb[i].measured);
}

TEST_CASE("table lists check, target, measured value and tolerance", "[harness]") {
    std::ostringstream os;
    print_table(os, run_criterion(*find_criterion("headline"), Options{}));
    const std::string t = os.str();
    CHECK(t.find("target") != std::string::npos);
    CHECK(t.find("measured") != std::string::npos);
    CHECK(t.find("tolerance") != std::string::npos);
    CHECK(t.find("PASS") != std::string::npos);
}
