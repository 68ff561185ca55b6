#include "covest/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace covest {

using nlohmann::json;

namespace {

Complex complex_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw SchemaError(where + ": expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

const json& require(const json& j, const char* key, const std::string& where) {
    if (!j.is_object())
        throw SchemaError(where + ": expected an object");
    auto it = j.find(key);
    if (it == j.end())
        throw SchemaError(where + ": missing field \"" + key + "\"");
    return *it;
}

double require_number(const json& j, const char* key, const std::string& where) {
    const json& v = require(j, key, where);
    if (!v.is_number())
        throw SchemaError(where + ": field \"" + key + "\" must be a number");
    return v.get<double>();
}

long long require_integer(const json& j, const char* key, const std::string& where) {
    const json& v = require(j, key, where);
    if (!v.is_number_integer())
        throw SchemaError(where + ": field \"" + key + "\" must be an integer");
    return v.get<long long>();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

json to_json(const ComplexVector& v) {
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i)
        out.push_back({v(i).real(), v(i).imag()});
    return out;
}

json to_json(const HermitianMatrix& q) {
    json rows = json::array();
    for (Index i = 0; i < q.dim(); ++i) {
        json row = json::array();
        for (Index j = 0; j < q.dim(); ++j)
            row.push_back({q(i, j).real(), q(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

json to_json(const ChannelScene& s) {
    json j;
    j["geometry"] = {{"rows", s.geometry.rows}, {"cols", s.geometry.cols}, {"spacing", s.geometry.spacing}};
    if (const auto* sp = std::get_if<SinglePath>(&s.kind)) {
        j["kind"] = "single-path";
        j["azimuth"] = sp->azimuth;
        j["elevation"] = sp->elevation;
    } else {
        j["kind"] = "multi-cluster";
        json clusters = json::array();
        for (const auto& c : std::get<MultiCluster>(s.kind).clusters) {
            clusters.push_back({{"azimuth", c.azimuth},
                                {"elevation", c.elevation},
                                {"azimuth_spread", c.azimuth_spread},
                                {"elevation_spread", c.elevation_spread},
                                {"power_fraction", c.power_fraction},
                                {"subpath_count", c.subpath_count}});
        }
        j["clusters"] = std::move(clusters);
    }
    j["seed"] = s.seed;
    return j;
}

ChannelScene scene_from_json(const json& j) {
    const std::string where = "scene";
    ChannelScene s;
    const json& g = require(j, "geometry", where);
    s.geometry.rows = static_cast<int>(require_integer(g, "rows", where + ".geometry"));
    s.geometry.cols = static_cast<int>(require_integer(g, "cols", where + ".geometry"));
    s.geometry.spacing = require_number(g, "spacing", where + ".geometry");

    const json& kind = require(j, "kind", where);
    if (kind == "single-path") {
        s.kind = SinglePath{require_number(j, "azimuth", where), require_number(j, "elevation", where)};
    } else if (kind == "multi-cluster") {
        const json& list = require(j, "clusters", where);
        if (!list.is_array())
            throw SchemaError(where + ": \"clusters\" must be an array");
        MultiCluster mc;
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string cw = where + ".clusters[" + std::to_string(i) + "]";
            PathCluster c;
            c.azimuth = require_number(list[i], "azimuth", cw);
            c.elevation = require_number(list[i], "elevation", cw);
            c.azimuth_spread = require_number(list[i], "azimuth_spread", cw);
            c.elevation_spread = require_number(list[i], "elevation_spread", cw);
            c.power_fraction = require_number(list[i], "power_fraction", cw);
            c.subpath_count = static_cast<int>(require_integer(list[i], "subpath_count", cw));
            mc.clusters.push_back(c);
        }
        s.kind = std::move(mc);
    } else {
        throw SchemaError(where + ": \"kind\" must be \"single-path\" or \"multi-cluster\"");
    }
    const json& seed = require(j, "seed", where);
    if (!seed.is_number_unsigned() && !seed.is_number_integer())
        throw SchemaError(where + ": \"seed\" must be an integer");
    s.seed = seed.get<std::uint64_t>();
    try {
        s.validate();
    } catch (const InvalidScene& e) {
        throw SchemaError(e.what());
    }
    return s;
}

json to_json(const MeasurementSet& m) {
    json j;
    j["n"] = m.dim();
    j["gamma"] = m.gamma;
    j["d"] = m.diversity;
    json list = json::array();
    for (Index l = 0; l < m.count(); ++l)
        list.push_back({{"u", to_json(ComplexVector(m.directions.col(l)))}, {"y", m.powers(l)}});
    j["measurements"] = std::move(list);
    return j;
}

MeasurementSet measurements_from_json(const json& j) {
    const std::string where = "measurement set";
    const long long n = require_integer(j, "n", where);
    if (n < 1)
        throw SchemaError(where + ": \"n\" must be positive");
    MeasurementSet m;
    m.gamma = require_number(j, "gamma", where);
    const long long d = require_integer(j, "d", where);
    if (d < 1)
        throw SchemaError(where + ": \"d\" must be at least 1");
    m.diversity = static_cast<int>(d);

    const json& list = require(j, "measurements", where);
    if (!list.is_array() || list.empty())
        throw SchemaError(where + ": \"measurements\" must be a non-empty array");
    const auto count = static_cast<Index>(list.size());
    m.directions.resize(n, count);
    m.powers.resize(count);
    for (Index l = 0; l < count; ++l) {
        const std::string mw = where + ".measurements[" + std::to_string(l) + "]";
        const json& entry = list[static_cast<std::size_t>(l)];
        const json& u = require(entry, "u", mw);
        if (!u.is_array() || static_cast<long long>(u.size()) != n)
            throw SchemaError(mw + ": \"u\" must have n = " + std::to_string(n) + " entries");
        for (Index i = 0; i < n; ++i)
            m.directions(i, l) = complex_from_json(u[static_cast<std::size_t>(i)],
                                                   mw + ".u[" + std::to_string(i) + "]");
        m.powers(l) = require_number(entry, "y", mw);
    }
    try {
        m.validate();
    } catch (const std::invalid_argument& e) {
        throw SchemaError(e.what());
    }
    return m;
}

MeasurementSet read_measurements(std::istream& is) {
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("measurement set: invalid JSON: ") + e.what());
    }
    return measurements_from_json(j);
}

MeasurementSet read_measurements_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw SchemaError("cannot open measurement file '" + path + "'");
    return read_measurements(in);
}

json to_json(const SolveTrace& t) {
    json j;
    j["iterations"] = t.iterations;
    j["terminated_by"] = to_string(t.terminated_by);
    j["initial_objective"] = t.initial_objective;
    j["objective_values"] = t.objective_values;
    j["step_sizes"] = t.step_sizes;
    j["accepted"] = t.accepted;
    return j;
}

json to_json(const CoefficientVector& q) {
    std::vector<double> rest(q.values.data() + 1, q.values.data() + q.values.size());
    return {{"q0", q.identity_weight()}, {"q", rest}};
}

void write_trace_csv(std::ostream& os, const SolveTrace& t) {
    os << "iter,objective,alpha,accepted\n";
    for (std::size_t k = 0; k < t.objective_values.size(); ++k) {
        os << k + 1 << ',' << fmt(t.objective_values[k]) << ',' << fmt(t.step_sizes[k]) << ','
           << (t.accepted[k] ? 1 : 0) << '\n';
    }
}

}  // namespace covest
