#pragma once

#include <json.hpp>

#include "bayestab/power.hpp"
#include "bayestab/test_engine.hpp"

namespace bayestab {

using Json = nlohmann::ordered_json;

// Keys are emitted in a fixed order so identical runs produce byte-identical
// reports modulo the wall-clock field.
Json to_json(const TestReport& r);
Json to_json(const EventEstimate& e);
Json to_json(const ArmSummary& a);
Json to_json(const PowerSummary& p);
Json to_json(const GaussianDemoResult& g);

}  // namespace bayestab
