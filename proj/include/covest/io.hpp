#pragma once

// JSON and CSV interchange formats.
//
// MeasurementSet:
//   { "n": int, "gamma": float, "d": int,
//     "measurements": [ { "u": [[re, im], ...], "y": float }, ... ] }
// Estimate:
//   { "estimator": str, "mu": float, "n": int, "q": [[[re, im], ...], ...],
//     "beam": [[re, im], ...], "trace": {...}, "warning": str|null, ... }
// Trace CSV: iter,objective,alpha,accepted

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "covest/channel.hpp"
#include "covest/estimator_glm.hpp"
#include "covest/hermitian.hpp"
#include "covest/ista.hpp"
#include "covest/measurement.hpp"

namespace covest {

/// A document that does not match its declared schema.
class SchemaError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

nlohmann::json to_json(const ComplexVector& v);
nlohmann::json to_json(const HermitianMatrix& q);
nlohmann::json to_json(const ChannelScene& s);
nlohmann::json to_json(const MeasurementSet& m);
nlohmann::json to_json(const SolveTrace& t);
nlohmann::json to_json(const CoefficientVector& q);

ChannelScene scene_from_json(const nlohmann::json& j);
MeasurementSet measurements_from_json(const nlohmann::json& j);

/// Parses and validates a MeasurementSet document; throws SchemaError.
MeasurementSet read_measurements(std::istream& is);
MeasurementSet read_measurements_file(const std::string& path);

void write_trace_csv(std::ostream& os, const SolveTrace& t);

}  // namespace covest
