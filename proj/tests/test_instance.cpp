#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "bsr/instance.hpp"
#include "bsr/instance_io.hpp"

using namespace bsr;

namespace {

BlockStructure structure(std::size_t n, std::size_t d, std::size_t m, std::size_t k) {
    BlockStructure st;
    st.n = n;
    st.d = d;
    st.m = m;
    st.k = k;
    return st;
}

bool throws_mentioning(const std::function<void()>& fn, const std::string& needle) {
    try {
        fn();
    } catch (const std::invalid_argument& ex) {
        return std::string(ex.what()).find(needle) != std::string::npos;
    }
    return false;
}

}  // namespace

TEST_CASE("structure arithmetic and validation") {
    const BlockStructure st = structure(10, 3, 7, 2);
    CHECK(st.unknowns() == 30);
    CHECK(st.equations() == 21);
    CHECK(st.alpha() == doctest::Approx(0.7));
    CHECK(st.beta() == doctest::Approx(0.2));
    CHECK_NOTHROW(st.validate());
    CHECK_NOTHROW(structure(5, 1, 5, 0).validate());

    CHECK(throws_mentioning([] { structure(0, 1, 1, 0).validate(); }, "n"));
    CHECK(throws_mentioning([] { structure(5, 0, 3, 1).validate(); }, "d"));
    CHECK(throws_mentioning([] { structure(5, 1, 0, 1).validate(); }, "m"));
    CHECK(throws_mentioning([] { structure(5, 1, 6, 1).validate(); }, "m"));
    CHECK(throws_mentioning([] { structure(5, 1, 3, 6).validate(); }, "k"));
}

TEST_CASE("generated instances satisfy every documented property") {
    const BlockStructure st = structure(12, 3, 8, 4);
    const ProblemInstance inst = generate_instance(st, 1.0, 2.0, RngSpec{77, 0});

    CHECK(inst.A.rows() == 24);
    CHECK(inst.A.cols() == 36);
    CHECK(inst.y.size() == 24);
    CHECK(inst.x_true.size() == 36);
    REQUIRE(inst.support.size() == 4);
    REQUIRE(inst.directions.size() == 4);
    CHECK_NOTHROW(inst.validate());

    for (std::size_t s = 0; s < 4; ++s) {
        CHECK(inst.directions[s].norm() == doctest::Approx(1.0).epsilon(1e-12));
        const double mag = inst.block_of(inst.x_true, inst.support[s]).norm();
        CHECK(mag >= 1.0);
        CHECK(mag <= 2.0);
        // the block points along its direction
        const Eigen::VectorXd diff =
            inst.block_of(inst.x_true, inst.support[s]) - mag * inst.directions[s];
        CHECK(diff.norm() < 1e-12);
    }
    // off-support blocks are identically zero
    std::size_t si = 0;
    for (std::size_t b = 0; b < 12; ++b) {
        if (si < 4 && inst.support[si] == b) {
            ++si;
            continue;
        }
        CHECK(inst.block_of(inst.x_true, b).norm() == 0.0);
    }
    CHECK((inst.y - inst.A * inst.x_true).norm() < 1e-12 * inst.y.norm());

    // entries look standard normal in bulk
    const double mean = inst.A.mean();
    const double var = (inst.A.array() - mean).square().sum() / (24.0 * 36.0 - 1.0);
    CHECK(std::abs(mean) < 0.12);       // sd of mean ~ 0.034
    CHECK(std::abs(var - 1.0) < 0.15);  // sd of var ~ 0.048
}

TEST_CASE("generation is deterministic for a fixed seed and varies across seeds") {
    const BlockStructure st = structure(9, 2, 5, 3);
    const ProblemInstance a = generate_instance(st, 1.0, 2.0, RngSpec{5, 1});
    const ProblemInstance b = generate_instance(st, 1.0, 2.0, RngSpec{5, 1});
    CHECK(a.A == b.A);
    CHECK(a.y == b.y);
    CHECK(a.x_true == b.x_true);
    CHECK(a.support == b.support);

    const ProblemInstance c = generate_instance(st, 1.0, 2.0, RngSpec{6, 1});
    CHECK(a.A != c.A);
}

TEST_CASE("an empty support produces the zero signal") {
    const ProblemInstance inst = generate_instance(structure(6, 2, 4, 0), 1.0, 2.0, RngSpec{1, 0});
    CHECK(inst.x_true.norm() == 0.0);
    CHECK(inst.y.norm() == 0.0);
    CHECK(inst.support.empty());
    CHECK_NOTHROW(inst.validate());
}

TEST_CASE("magnitude bounds are validated") {
    const BlockStructure st = structure(4, 1, 2, 1);
    CHECK_THROWS_AS(generate_instance(st, 0.0, 1.0, RngSpec{0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(generate_instance(st, 2.0, 1.0, RngSpec{0, 0}), std::invalid_argument);
}

TEST_CASE("instance validation pinpoints corrupted fields") {
    const BlockStructure st = structure(8, 2, 5, 3);
    const ProblemInstance good = generate_instance(st, 1.0, 2.0, RngSpec{13, 0});

    ProblemInstance bad = good;
    bad.y(2) += 0.5;
    CHECK(throws_mentioning([&] { bad.validate(); }, "y"));

    bad = good;
    bad.directions[1] *= 2.0;
    CHECK(throws_mentioning([&] { bad.validate(); }, "directions"));

    bad = good;
    std::swap(bad.support[0], bad.support[2]);
    CHECK(throws_mentioning([&] { bad.validate(); }, "support"));

    bad = good;
    bad.A.conservativeResize(10, 14);  // drops one block column
    CHECK(throws_mentioning([&] { bad.validate(); }, "A"));
}

TEST_CASE("block_norm_sum adds the block magnitudes") {
    Eigen::VectorXd v(6);
    v << 3.0, 4.0, 0.0, 0.0, 1.0, 0.0;
    CHECK(block_norm_sum(v, 2) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(block_norm_sum(v, 3) == doctest::Approx(5.0 + std::sqrt(1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(block_norm_sum(v, 4), std::invalid_argument);
}

TEST_CASE("serialization round-trips bit for bit") {
    const ProblemInstance inst =
        generate_instance(structure(7, 3, 5, 2), 1.0, 2.0, RngSpec{99, 3});
    const std::string doc = serialize_instance(inst);
    const ProblemInstance back = deserialize_instance(doc);

    CHECK(back.structure.n == inst.structure.n);
    CHECK(back.structure.d == inst.structure.d);
    CHECK(back.structure.m == inst.structure.m);
    CHECK(back.structure.k == inst.structure.k);
    CHECK(back.A == inst.A);  // exact equality: shortest round-trip decimals
    CHECK(back.y == inst.y);
    CHECK(back.x_true == inst.x_true);
    CHECK(back.support == inst.support);
    for (std::size_t s = 0; s < inst.directions.size(); ++s)
        CHECK(back.directions[s] == inst.directions[s]);
    REQUIRE(back.seed.has_value());
    CHECK(back.seed->master_seed == 99);
    CHECK(back.seed->stream_id == 3);

    // serialize again: identical text
    CHECK(serialize_instance(back) == doc);
}

TEST_CASE("malformed documents name the offending field") {
    const ProblemInstance inst =
        generate_instance(structure(5, 2, 3, 1), 1.0, 2.0, RngSpec{41, 0});
    const std::string doc = serialize_instance(inst);

    auto mutate = [&](const std::function<void(nlohmann::json&)>& fn) {
        nlohmann::json j = nlohmann::json::parse(doc);
        fn(j);
        return j.dump();
    };

    CHECK(throws_mentioning(
        [&] { deserialize_instance(mutate([](nlohmann::json& j) { j.erase("y"); })); }, "y"));
    CHECK(throws_mentioning(
        [&] { deserialize_instance(mutate([](nlohmann::json& j) { j["d"] = -2; })); }, "d"));
    CHECK(throws_mentioning(
        [&] {
            deserialize_instance(mutate([](nlohmann::json& j) { j["y"][0] = "oops"; }));
        },
        "y"));
    CHECK(throws_mentioning(
        [&] {
            deserialize_instance(mutate([](nlohmann::json& j) { j["support"][0] = 99; }));
        },
        "support"));
    CHECK(throws_mentioning(
        [&] {
            deserialize_instance(mutate([](nlohmann::json& j) { j["A"].erase(0); }));
        },
        "A"));
    CHECK(throws_mentioning(
        [&] {
            deserialize_instance(
                mutate([](nlohmann::json& j) { j["directions"][0][0] = 5.0; }));
        },
        "directions"));
    CHECK(throws_mentioning(
        [&] {
            // violate y = A x by editing one measurement
            deserialize_instance(mutate([](nlohmann::json& j) {
                j["y"][0] = static_cast<double>(j["y"][0]) + 1.0;
            }));
        },
        "y"));
    CHECK_THROWS_AS(deserialize_instance("not json at all"), std::invalid_argument);
    CHECK(throws_mentioning(
        [&] {
            deserialize_instance(mutate([](nlohmann::json& j) { j["format"] = "bogus/9"; }));
        },
        "format"));
}
