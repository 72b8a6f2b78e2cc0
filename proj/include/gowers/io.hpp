#pragma once

#include <string>

#include <json.hpp>

#include "gowers/config.hpp"
#include "gowers/coset.hpp"
#include "gowers/decoder.hpp"
#include "gowers/domain.hpp"
#include "gowers/engine.hpp"
#include "gowers/euclid.hpp"
#include "gowers/nil.hpp"

namespace gowers::io {

using json = nlohmann::ordered_json;

// "cyclic:9", "group:4x6", "interval:256", "grid:<dim>:<extent>:<points>"
DomainSpec parse_domain(const std::string& text);

json to_json(const DomainSpec& d);
DomainSpec domain_from_json(const json& j);

json to_json(const Signal& f);
Signal signal_from_json(const json& j);

json to_json(const PolyPhase& p);
PolyPhase phase_from_json(const json& j, const DomainSpec& d);

json to_json(const Tolerances& t);

// Reports carry no wall-clock fields so identical inputs give identical bytes.
json to_json(const NormResult& r);
json to_json(const DecodeReport& r);
json to_json(const CosetReport& r);
json to_json(const SharpnessReport& r);
json to_json(const FourierInvariance& r);
json to_json(const ScanResult& r);
json to_json(const SeparationResult& r);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
Signal read_signal(const std::string& path);

}  // namespace gowers::io
