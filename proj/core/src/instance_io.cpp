#include "bsr/instance_io.hpp"

#include <json.hpp>
#include <stdexcept>
#include <string>

namespace bsr {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "bsr-instance/1";

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw std::invalid_argument("instance document: field '" + field + "' " + what);
}

json require(const json& doc, const char* field) {
    if (!doc.contains(field)) fail(field, "is missing");
    return doc.at(field);
}

std::size_t require_count(const json& doc, const char* field) {
    const json v = require(doc, field);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        fail(field, "must be a nonnegative integer");
    return v.get<std::size_t>();
}

Eigen::VectorXd read_vector(const json& v, const char* field, Eigen::Index expected) {
    if (!v.is_array()) fail(field, "must be an array");
    if (static_cast<Eigen::Index>(v.size()) != expected)
        fail(field, "has length " + std::to_string(v.size()) + ", expected " +
                        std::to_string(expected));
    Eigen::VectorXd out(expected);
    Eigen::Index i = 0;
    for (const auto& e : v) {
        if (!e.is_number()) fail(field, "must contain numbers only");
        out[i++] = e.get<double>();
    }
    return out;
}

json write_vector(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

}  // namespace

std::string serialize_instance(const ProblemInstance& inst) {
    inst.validate();
    json doc;
    doc["format"] = kFormat;
    doc["n"] = inst.structure.n;
    doc["d"] = inst.structure.d;
    doc["m"] = inst.structure.m;
    doc["k"] = inst.structure.k;
    if (inst.seed) {
        doc["seed"] = {{"master_seed", inst.seed->master_seed},
                       {"stream_id", inst.seed->stream_id}};
    }
    doc["rng_algorithm"] = rng_algorithm_name();

    json rows = json::array();
    for (Eigen::Index r = 0; r < inst.A.rows(); ++r)
        rows.push_back(write_vector(inst.A.row(r).transpose()));
    doc["A"] = std::move(rows);
    doc["y"] = write_vector(inst.y);
    doc["x_true"] = write_vector(inst.x_true);
    doc["support"] = inst.support;
    json dirs = json::array();
    for (const auto& dir : inst.directions) dirs.push_back(write_vector(dir));
    doc["directions"] = std::move(dirs);
    return doc.dump(2);
}

ProblemInstance deserialize_instance(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("instance document: not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("instance document: top level must be an object");
    if (!doc.contains("format") || !doc["format"].is_string() ||
        doc["format"].get<std::string>() != kFormat)
        fail("format", std::string("must be '") + kFormat + "'");

    ProblemInstance inst;
    inst.structure.n = require_count(doc, "n");
    inst.structure.d = require_count(doc, "d");
    inst.structure.m = require_count(doc, "m");
    inst.structure.k = require_count(doc, "k");
    try {
        inst.structure.validate();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("instance document: ") + e.what());
    }

    const auto d = static_cast<Eigen::Index>(inst.structure.d);
    const auto rows = static_cast<Eigen::Index>(inst.structure.equations());
    const auto cols = static_cast<Eigen::Index>(inst.structure.unknowns());

    if (doc.contains("seed")) {
        const json& s = doc["seed"];
        if (!s.is_object() || !s.contains("master_seed") || !s.contains("stream_id"))
            fail("seed", "must be an object with master_seed and stream_id");
        inst.seed = RngSpec{s["master_seed"].get<std::uint64_t>(),
                            s["stream_id"].get<std::uint64_t>()};
    }

    const json a = require(doc, "A");
    if (!a.is_array() || static_cast<Eigen::Index>(a.size()) != rows)
        fail("A", "must be an array of d*m rows");
    inst.A.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        inst.A.row(r) = read_vector(a.at(static_cast<std::size_t>(r)), "A", cols).transpose();

    inst.y = read_vector(require(doc, "y"), "y", rows);
    inst.x_true = read_vector(require(doc, "x_true"), "x_true", cols);

    const json sup = require(doc, "support");
    if (!sup.is_array() || sup.size() != inst.structure.k)
        fail("support", "must list k block indices");
    for (const auto& e : sup) {
        if (!e.is_number_integer() && !e.is_number_unsigned())
            fail("support", "must contain integers");
        const auto idx = e.get<long long>();
        if (idx < 0 || static_cast<std::size_t>(idx) >= inst.structure.n)
            fail("support", "contains index " + std::to_string(idx) + " outside [0, n)");
        inst.support.push_back(static_cast<std::size_t>(idx));
    }

    const json dirs = require(doc, "directions");
    if (!dirs.is_array() || dirs.size() != inst.structure.k)
        fail("directions", "must hold k arrays of length d");
    for (const auto& e : dirs) inst.directions.push_back(read_vector(e, "directions", d));

    try {
        inst.validate();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("instance document: ") + e.what());
    }
    return inst;
}

}  // namespace bsr
