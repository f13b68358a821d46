#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "landau/atlas.hpp"
#include "landau/density.hpp"
#include "landau/frame.hpp"
#include "landau/harness.hpp"

namespace landau {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

// Sorted keys, integers verbatim, doubles as %.17g, non-finite values as strings.
std::string canonical_json(const Json& j);

// Descriptors. Decoders reject unknown keys with Error(Schema).
Json to_json(const LcaGroup& g);
LcaGroup group_from_json(const Json& j);
Json to_json(const BoxComponent& c);
BoxComponent component_from_json(const Json& j);
Json to_json(const Spectrum& s);
Spectrum spectrum_from_json(const Json& j);
Json to_json(const DiscreteSet& s);
DiscreteSet set_from_json(const Json& j);
Json to_json(const Box& b);
Box box_from_json(const Json& j, const LcaGroup& g);
Json to_json(const Scenario& s);
Scenario scenario_from_json(const Json& j);
// {"schema_version":1,"scenarios":[...]}; a bare scenario object is a batch of one.
std::vector<Scenario> batch_from_json(const Json& j);

// Results.
Json to_json(const DensityEstimate& d);
Json to_json(const ComparisonVerdict& v);
Json to_json(const UniformDensity& u);
Json to_json(const FrameReport& f);
Json to_json(const ConcentrationReport& c);
Json to_json(const RsRecord& r);
Json to_json(const CubeSpec& c);
Json to_json(const CubeAtlas& a, const Box& window);
Json to_json(const NecessityReport& r);
Json to_json(const ReplayReport& r);
Json to_json(const EigenCountReport& r);
Json to_json(const BatchReport& b);

struct RunRecord {
    std::string command;
    Json config;
    std::uint64_t seed = 0;
    Json result;
    double wall_time = 0;  // seconds; kept out of the canonical payload
};

Json to_json(const RunRecord& r);

std::string density_csv(const DensityEstimate& d);
std::string eigenvalue_csv(const std::vector<double>& ev);
std::string grid_csv(const QuadratureGrid& g);

// Throws Error(Schema) when the JSON has keys outside `allowed`.
void require_keys(const Json& j, std::initializer_list<const char*> allowed, const char* what);

}  // namespace landau
